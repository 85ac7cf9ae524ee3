//! Assemble per-group evolution chains from a sorted event list.
//!
//! A chain is one group lineage: the ordered (frame, group) positions it
//! occupied, each annotated with the event that carried it into that frame.
//! Splitting forks a chain into several chains sharing a prefix. At a
//! merge, the merged group extends the lineage of the contributor with the
//! largest forward inclusion (ties broken by smaller group id); the other
//! contributors' chains terminate with a merged-into marker.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::events::{EventType, EvolutionEvent};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub frame: usize,
    pub group: usize,
    /// Event that carried the lineage into this frame; none for the first
    /// observed position of a lineage that did not form in view.
    pub event: Option<EventType>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionChain {
    pub lineage_id: usize,
    pub steps: Vec<ChainStep>,
    /// Set when the lineage ended by merging into another group.
    pub merged_into: Option<(usize, usize)>,
    /// True when the lineage ended with a dissolving event.
    pub dissolved: bool,
}

impl EvolutionChain {
    pub fn tip(&self) -> Option<(usize, usize)> {
        self.steps.last().map(|s| (s.frame, s.group))
    }
}

/// Build lineage chains from the events of a single run.
pub fn build_chains(events: &[EvolutionEvent]) -> Vec<EvolutionChain> {
    let mut sorted: Vec<&EvolutionEvent> = events.iter().collect();
    sorted.sort_by_key(|e| (e.from_frame, e.from_group, e.to_group));

    let mut chains: Vec<EvolutionChain> = Vec::new();
    let mut next_id = 0usize;
    let mut new_chain = |steps: Vec<ChainStep>| -> EvolutionChain {
        let c = EvolutionChain {
            lineage_id: next_id,
            steps,
            merged_into: None,
            dissolved: false,
        };
        next_id += 1;
        c
    };

    // events grouped by transition (from_frame)
    let mut by_transition: BTreeMap<usize, Vec<&EvolutionEvent>> = BTreeMap::new();
    for e in sorted {
        by_transition.entry(e.from_frame).or_default().push(e);
    }

    for (&t, transition_events) in &by_transition {
        // pick merge winners per target group
        let mut merge_winner: BTreeMap<usize, usize> = BTreeMap::new();
        for e in transition_events {
            if e.event != EventType::Merging {
                continue;
            }
            let (to, from) = (e.to_group.unwrap(), e.from_group.unwrap());
            let better = match merge_winner.get(&to) {
                None => true,
                Some(&cur) => {
                    let cur_inc = transition_events
                        .iter()
                        .find(|x| {
                            x.event == EventType::Merging
                                && x.to_group == Some(to)
                                && x.from_group == Some(cur)
                        })
                        .map(|x| x.inclusion_fwd)
                        .unwrap_or(0.0);
                    e.inclusion_fwd > cur_inc || (e.inclusion_fwd == cur_inc && from < cur)
                }
            };
            if better {
                merge_winner.insert(to, from);
            }
        }

        // sort the transition's events into forming, dissolving, losing
        // merge contributors, and advances (everything that moves a
        // lineage forward, including the winning merge contributor)
        let mut advances: BTreeMap<usize, Vec<&EvolutionEvent>> = BTreeMap::new();
        let mut losers: Vec<&EvolutionEvent> = Vec::new();
        let mut dissolves: Vec<usize> = Vec::new();
        for e in transition_events {
            match e.event {
                EventType::Forming => {
                    chains.push(new_chain(vec![ChainStep {
                        frame: e.to_frame,
                        group: e.to_group.unwrap(),
                        event: Some(EventType::Forming),
                    }]));
                }
                EventType::Dissolving => dissolves.push(e.from_group.unwrap()),
                EventType::Merging
                    if merge_winner.get(&e.to_group.unwrap()) != e.from_group.as_ref() =>
                {
                    losers.push(e);
                }
                _ => advances
                    .entry(e.from_group.unwrap())
                    .or_default()
                    .push(e),
            }
        }

        for (&g, events) in &advances {
            let open: Vec<usize> = chains
                .iter()
                .enumerate()
                .filter(|(_, c)| {
                    c.merged_into.is_none() && !c.dissolved && c.tip() == Some((t, g))
                })
                .map(|(i, _)| i)
                .collect();
            let open = if open.is_empty() {
                // lineage first observed here
                chains.push(new_chain(vec![ChainStep {
                    frame: t,
                    group: g,
                    event: None,
                }]));
                vec![chains.len() - 1]
            } else {
                open
            };
            // several outgoing events fork the lineage: each extra event
            // extends a clone of the pre-transition prefix
            let prefixes: Vec<Vec<ChainStep>> =
                open.iter().map(|&i| chains[i].steps.clone()).collect();
            for (ei, e) in events.iter().enumerate() {
                let step = ChainStep {
                    frame: e.to_frame,
                    group: e.to_group.unwrap(),
                    event: Some(e.event),
                };
                if ei == 0 {
                    for &i in &open {
                        chains[i].steps.push(step.clone());
                    }
                } else {
                    for prefix in &prefixes {
                        let mut forked = new_chain(prefix.clone());
                        forked.steps.push(step.clone());
                        chains.push(forked);
                    }
                }
            }
        }

        for e in &losers {
            let g = e.from_group.unwrap();
            let target = (e.to_frame, e.to_group.unwrap());
            let mut found = false;
            for c in chains.iter_mut() {
                if c.merged_into.is_none() && !c.dissolved && c.tip() == Some((t, g)) {
                    c.merged_into = Some(target);
                    found = true;
                }
            }
            if !found && !advances.contains_key(&g) {
                let mut c = new_chain(vec![ChainStep {
                    frame: t,
                    group: g,
                    event: None,
                }]);
                c.merged_into = Some(target);
                chains.push(c);
            }
        }

        for &g in &dissolves {
            let mut found = false;
            for c in chains.iter_mut() {
                if c.merged_into.is_none() && !c.dissolved && c.tip() == Some((t, g)) {
                    c.dissolved = true;
                    found = true;
                }
            }
            if !found {
                let mut c = new_chain(vec![ChainStep {
                    frame: t,
                    group: g,
                    event: None,
                }]);
                c.dissolved = true;
                chains.push(c);
            }
        }
    }
    chains.sort_by_key(|c| c.lineage_id);
    chains
}

#[cfg(test)]
mod tests {
    use super::*;

    fn event(
        from_frame: usize,
        from: Option<usize>,
        to: Option<usize>,
        ty: EventType,
        inc_fwd: f64,
    ) -> EvolutionEvent {
        EvolutionEvent {
            from_frame,
            to_frame: from_frame + 1,
            from_group: from,
            to_group: to,
            event: ty,
            inclusion_fwd: inc_fwd,
            inclusion_bwd: 0.0,
        }
    }

    #[test]
    fn empty_events_give_empty_chains() {
        assert!(build_chains(&[]).is_empty());
    }

    #[test]
    fn single_continuing_event_is_a_two_step_chain() {
        let events = vec![event(1, Some(1), Some(1), EventType::Continuing, 1.0)];
        let chains = build_chains(&events);
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].steps.len(), 2);
        assert_eq!(chains[0].steps[0], ChainStep { frame: 1, group: 1, event: None });
        assert_eq!(
            chains[0].steps[1],
            ChainStep { frame: 2, group: 1, event: Some(EventType::Continuing) }
        );
    }

    #[test]
    fn split_forks_chain_with_shared_prefix() {
        let events = vec![
            event(1, None, Some(1), EventType::Forming, 0.0),
            event(2, Some(1), Some(1), EventType::Splitting, 0.3),
            event(2, Some(1), Some(2), EventType::Splitting, 0.2),
        ];
        let chains = build_chains(&events);
        assert_eq!(chains.len(), 2);
        assert_eq!(chains[0].steps[0], chains[1].steps[0]);
        let tips: Vec<_> = chains.iter().map(|c| c.tip().unwrap()).collect();
        assert!(tips.contains(&(3, 1)));
        assert!(tips.contains(&(3, 2)));
    }

    #[test]
    fn merge_extends_strongest_contributor_and_terminates_rest() {
        let events = vec![
            event(1, None, Some(1), EventType::Forming, 0.0),
            event(1, None, Some(2), EventType::Forming, 0.0),
            event(2, Some(1), Some(1), EventType::Merging, 0.9),
            event(2, Some(2), Some(1), EventType::Merging, 0.4),
        ];
        let chains = build_chains(&events);
        assert_eq!(chains.len(), 2);
        let winner = chains.iter().find(|c| c.tip() == Some((3, 1))).unwrap();
        assert_eq!(winner.steps[1].event, Some(EventType::Merging));
        assert_eq!(winner.steps[0].group, 1);
        let loser = chains.iter().find(|c| c.merged_into.is_some()).unwrap();
        assert_eq!(loser.merged_into, Some((3, 1)));
        assert_eq!(loser.steps[0].group, 2);
    }

    #[test]
    fn merge_tie_breaks_on_smaller_group_id() {
        let events = vec![
            event(2, Some(3), Some(1), EventType::Merging, 1.0),
            event(2, Some(1), Some(1), EventType::Merging, 1.0),
        ];
        let chains = build_chains(&events);
        let winner = chains.iter().find(|c| c.tip() == Some((3, 1))).unwrap();
        assert_eq!(winner.steps[0].group, 1);
    }

    #[test]
    fn dissolving_terminates_chain() {
        let events = vec![
            event(1, Some(1), Some(1), EventType::Continuing, 1.0),
            event(2, Some(1), None, EventType::Dissolving, 0.0),
        ];
        let chains = build_chains(&events);
        assert_eq!(chains.len(), 1);
        assert!(chains[0].dissolved);
        assert_eq!(chains[0].steps.len(), 2);
    }

    #[test]
    fn frames_strictly_increase_along_chains() {
        let events = vec![
            event(1, None, Some(1), EventType::Forming, 0.0),
            event(2, Some(1), Some(2), EventType::Growing, 0.8),
            event(3, Some(2), Some(1), EventType::Shrinking, 0.7),
        ];
        let chains = build_chains(&events);
        for c in &chains {
            for w in c.steps.windows(2) {
                assert_eq!(w[1].frame, w[0].frame + 1);
            }
        }
    }
}
