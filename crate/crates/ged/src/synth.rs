//! Synthetic interaction logs with planted, scripted group histories.
//!
//! A scenario script plants member sets per frame and carries the expected
//! event list as ground truth. Generation realizes every planted group as a
//! full clique of interactions inside its frame window (which guarantees
//! the community detector recovers the member set exactly at noise 0),
//! plus density-controlled extra records and uniformly sampled noise
//! records between non-group pairs.
//!
//! Planted records (including their day placement) are independent of the
//! seed; the RNG only drives noise and extra-density records, so different
//! seeds vary noise placement but never the planted cliques.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::events::EventType;
use crate::temporal::{InteractionRecord, NodeId, TemporalEventLog};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("frame {frame}: planted group of size {size} is smaller than k = {k}")]
    InfeasibleScript { frame: usize, size: usize, k: usize },
    #[error("script error: {0}")]
    InvalidScript(String),
}

/// A planted group within one frame directive.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedGroup {
    pub members: BTreeSet<NodeId>,
    /// Extra intra-group records beyond the base clique, as a fraction of
    /// the clique's record count.
    pub density: f64,
}

impl PlantedGroup {
    pub fn new(members: impl IntoIterator<Item = NodeId>) -> Self {
        PlantedGroup {
            members: members.into_iter().collect(),
            density: 0.0,
        }
    }
}

/// Ground-truth event expressed against planted member sets.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthEvent {
    pub event: EventType,
    pub from_frame: usize,
    pub to_frame: usize,
    pub from_members: Option<BTreeSet<NodeId>>,
    pub to_members: Option<BTreeSet<NodeId>>,
}

/// Per-frame planted groups plus noise rate.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrameDirective {
    pub groups: Vec<PlantedGroup>,
    /// Noise records between non-same-group pairs, as a fraction of the
    /// frame's planted record count.
    pub noise_rate: f64,
}

/// A scripted evolution scenario with its expected event list.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioScript {
    pub frame_count: usize,
    pub frame_length_days: u32,
    /// Directives indexed 0..frame_count (frame 1 first).
    pub directives: Vec<FrameDirective>,
    pub ground_truth: Vec<TruthEvent>,
}

impl ScenarioScript {
    pub fn validate(&self, k: usize) -> Result<(), SynthError> {
        if self.directives.len() != self.frame_count {
            return Err(SynthError::InvalidScript(format!(
                "{} directives for {} frames",
                self.directives.len(),
                self.frame_count
            )));
        }
        for (i, d) in self.directives.iter().enumerate() {
            for g in &d.groups {
                if g.members.len() < k {
                    return Err(SynthError::InfeasibleScript {
                        frame: i + 1,
                        size: g.members.len(),
                        k,
                    });
                }
            }
        }
        for t in &self.ground_truth {
            if t.to_frame > self.frame_count || t.from_frame >= self.frame_count {
                return Err(SynthError::InvalidScript(format!(
                    "ground truth references frame beyond script ({} -> {})",
                    t.from_frame, t.to_frame
                )));
            }
        }
        Ok(())
    }

    fn max_node(&self) -> NodeId {
        self.directives
            .iter()
            .flat_map(|d| d.groups.iter())
            .flat_map(|g| g.members.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

/// Generate a log realizing the script. Identical seeds yield bit-identical
/// logs; anchor records pin the span to exactly `frame_count` full frames.
pub fn generate(
    script: &ScenarioScript,
    k: usize,
    seed: u64,
) -> Result<(TemporalEventLog, Vec<TruthEvent>), SynthError> {
    script.validate(k)?;
    let len = script.frame_length_days as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records: Vec<InteractionRecord> = Vec::new();
    let anchor_a = script.max_node() + 1_000_000;

    // span anchors: single isolated interactions on the first and last day
    let last_day = script.frame_count as i64 * len - 1;
    records.push(anchored(anchor_a, anchor_a + 1, 0));
    records.push(anchored(anchor_a + 2, anchor_a + 3, last_day));

    for (fi, directive) in script.directives.iter().enumerate() {
        let window_start = fi as i64 * len;
        let mut planted_in_frame = 0usize;
        for group in &directive.groups {
            let members: Vec<NodeId> = group.members.iter().copied().collect();
            let mut pair_idx = 0usize;
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    // deterministic day placement, independent of the seed
                    let day = window_start + (pair_idx as i64 % len);
                    records.push(anchored(a, b, day));
                    records.push(anchored(b, a, day));
                    pair_idx += 1;
                    planted_in_frame += 2;
                }
            }
            let extra = (group.density * (pair_idx * 2) as f64).floor() as usize;
            for _ in 0..extra {
                let a = *members.choose(&mut rng).unwrap();
                let b = *members.choose(&mut rng).unwrap();
                if a == b {
                    continue;
                }
                let day = window_start + rng.gen_range(0..len);
                records.push(anchored(a, b, day));
            }
        }
        let frame_nodes: Vec<NodeId> = directive
            .groups
            .iter()
            .flat_map(|g| g.members.iter().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let noise_records = (directive.noise_rate * planted_in_frame as f64).floor() as usize;
        let mut emitted = 0usize;
        let mut attempts = 0usize;
        while emitted < noise_records && attempts < noise_records * 20 {
            attempts += 1;
            if frame_nodes.len() < 2 {
                break;
            }
            let a = *frame_nodes.choose(&mut rng).unwrap();
            let b = *frame_nodes.choose(&mut rng).unwrap();
            if a == b || share_group(directive, a, b) {
                continue;
            }
            let day = window_start + rng.gen_range(0..len);
            records.push(anchored(a, b, day));
            emitted += 1;
        }
    }
    let log = TemporalEventLog::from_records(records)
        .map_err(|e| SynthError::InvalidScript(format!("generated log invalid: {e}")))?;
    Ok((log, script.ground_truth.clone()))
}

fn anchored(source: NodeId, target: NodeId, day: i64) -> InteractionRecord {
    InteractionRecord {
        source,
        target,
        day,
        kind: None,
    }
}

fn share_group(directive: &FrameDirective, a: NodeId, b: NodeId) -> bool {
    directive
        .groups
        .iter()
        .any(|g| g.members.contains(&a) && g.members.contains(&b))
}

/// The canned single-group evolution scenario: a group forms, grows, splits
/// in two, the bigger part shrinks, both parts continue, both merge with a
/// freshly formed third group, and the merged group dissolves in the final
/// frame.
pub fn figure1_scenario(k: usize) -> ScenarioScript {
    assert!(k >= 3, "scenario requires k >= 3");
    let kk = k as NodeId;
    let range = |from: NodeId, to: NodeId| -> BTreeSet<NodeId> { (from..=to).collect() };

    let a = range(1, kk + 1); // initial group, k+1 nodes
    let a_grown = range(1, 2 * kk + 1); // grown to 2k+1 nodes
    let part_big = range(1, kk + 1); // split: bigger part
    let part_small = range(kk + 2, 2 * kk + 1); // split: smaller part, k nodes
    let part_big_shrunk = range(1, kk); // bigger part after shrinking
    let third = range(2 * kk + 2, 3 * kk + 1); // third group, forms late
    let merged: BTreeSet<NodeId> = part_big_shrunk
        .iter()
        .chain(part_small.iter())
        .chain(third.iter())
        .copied()
        .collect();

    let frame = |groups: Vec<&BTreeSet<NodeId>>| FrameDirective {
        groups: groups
            .into_iter()
            .map(|m| PlantedGroup::new(m.iter().copied()))
            .collect(),
        noise_rate: 0.0,
    };
    let directives = vec![
        frame(vec![]),                                    // T1: nothing yet
        frame(vec![&a]),                                  // T2: forming
        frame(vec![&a_grown]),                            // T3: growing
        frame(vec![&part_big, &part_small]),              // T4: splitting
        frame(vec![&part_big_shrunk, &part_small]),       // T5: shrinking
        frame(vec![&part_big_shrunk, &part_small, &third]), // T6: continuing, third forms
        frame(vec![&merged]),                             // T7: merging
        frame(vec![]),                                    // T8: dissolved
    ];

    let truth = |event, from_frame: usize, from: Option<&BTreeSet<NodeId>>, to: Option<&BTreeSet<NodeId>>| TruthEvent {
        event,
        from_frame,
        to_frame: from_frame + 1,
        from_members: from.cloned(),
        to_members: to.cloned(),
    };
    use EventType::*;
    let ground_truth = vec![
        truth(Forming, 1, None, Some(&a)),
        truth(Growing, 2, Some(&a), Some(&a_grown)),
        truth(Splitting, 3, Some(&a_grown), Some(&part_big)),
        truth(Splitting, 3, Some(&a_grown), Some(&part_small)),
        truth(Shrinking, 4, Some(&part_big), Some(&part_big_shrunk)),
        truth(Continuing, 4, Some(&part_small), Some(&part_small)),
        truth(Continuing, 5, Some(&part_big_shrunk), Some(&part_big_shrunk)),
        truth(Continuing, 5, Some(&part_small), Some(&part_small)),
        truth(Forming, 5, None, Some(&third)),
        truth(Merging, 6, Some(&part_big_shrunk), Some(&merged)),
        truth(Merging, 6, Some(&part_small), Some(&merged)),
        truth(Merging, 6, Some(&third), Some(&merged)),
        truth(Dissolving, 7, Some(&merged), None),
    ];

    ScenarioScript {
        frame_count: 8,
        frame_length_days: 30,
        directives,
        ground_truth,
    }
}

/// A scenario where every frame's groups are built from a fresh node range:
/// total membership turnover per window, so disjoint slicing yields only
/// forming and dissolving events.
pub fn churn_scenario(frame_count: usize, groups_per_frame: usize, group_size: usize) -> ScenarioScript {
    let mut directives = Vec::with_capacity(frame_count);
    let mut truth = Vec::new();
    let mut next_node: NodeId = 1;
    let mut prev_groups: Vec<BTreeSet<NodeId>> = Vec::new();
    for f in 0..frame_count {
        let mut dir = FrameDirective::default();
        let mut frame_groups = Vec::new();
        for _ in 0..groups_per_frame {
            let members: BTreeSet<NodeId> = (next_node..next_node + group_size as NodeId).collect();
            next_node += group_size as NodeId;
            dir.groups.push(PlantedGroup::new(members.iter().copied()));
            frame_groups.push(members);
        }
        if f > 0 {
            for g in &prev_groups {
                truth.push(TruthEvent {
                    event: EventType::Dissolving,
                    from_frame: f,
                    to_frame: f + 1,
                    from_members: Some(g.clone()),
                    to_members: None,
                });
            }
            for g in &frame_groups {
                truth.push(TruthEvent {
                    event: EventType::Forming,
                    from_frame: f,
                    to_frame: f + 1,
                    from_members: None,
                    to_members: Some(g.clone()),
                });
            }
        }
        prev_groups = frame_groups;
        directives.push(dir);
    }
    ScenarioScript {
        frame_count,
        frame_length_days: 30,
        directives,
        ground_truth: truth,
    }
}

/// A random log with planted per-period cliques plus random background
/// edges; there is no scripted ground truth. Used for stress and property
/// testing at scale.
pub fn random_log(
    seed: u64,
    node_count: u64,
    periods: usize,
    period_days: u32,
    cliques_per_period: usize,
    clique_size_range: (usize, usize),
    background_edges_per_period: usize,
) -> TemporalEventLog {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = period_days as i64;
    let mut records = Vec::new();
    let last_day = periods as i64 * len - 1;
    records.push(anchored(node_count + 1, node_count + 2, 0));
    records.push(anchored(node_count + 3, node_count + 4, last_day));
    let nodes: Vec<NodeId> = (1..=node_count).collect();
    for p in 0..periods {
        let start = p as i64 * len;
        for _ in 0..cliques_per_period {
            let size = rng.gen_range(clique_size_range.0..=clique_size_range.1);
            let mut members = nodes.clone();
            members.shuffle(&mut rng);
            members.truncate(size);
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    let day = start + rng.gen_range(0..len);
                    records.push(anchored(a, b, day));
                    records.push(anchored(b, a, day));
                }
            }
        }
        for _ in 0..background_edges_per_period {
            let a = *nodes.choose(&mut rng).unwrap();
            let b = *nodes.choose(&mut rng).unwrap();
            if a == b {
                continue;
            }
            let day = start + rng.gen_range(0..len);
            records.push(anchored(a, b, day));
        }
    }
    TemporalEventLog::from_records(records).expect("random log is never empty")
}
