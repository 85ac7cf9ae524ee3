//! Pipeline orchestration: full (window, alpha, beta) sweeps with
//! tabular reports and plot-ready count series, plus scenario verification
//! against planted ground truth.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::build_chains;
use crate::cpm::{detect_groups, Group};
use crate::events::{
    compute_inclusions, classify_frame_pair, EventType, EvolutionEvent, GedError, GedOutcome,
    GedParams, PairInclusions,
};
use crate::formats::{self, FormatError};
use crate::importance::{ImportanceError, ImportanceKind, ImportanceMap};
use crate::synth::{self, ScenarioScript, SynthError, TruthEvent};
use crate::temporal::{slice, SliceError, TemporalEventLog, TemporalSocialNetwork, WindowSpec};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error(transparent)]
    Importance(#[from] ImportanceError),
    #[error(transparent)]
    Ged(#[from] GedError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("configuration error: {0}")]
    Config(String),
}

/// Full sweep configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub windows: Vec<WindowSpec>,
    pub keep_partial: bool,
    pub k: usize,
    pub importance: ImportanceKind,
    pub tol: f64,
    pub max_iter: usize,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub form_dissolve_threshold: f64,
    pub match_threshold: f64,
    /// The (alpha, beta) pair whose counts appear in the report row;
    /// defaults to the grid point closest to (0.7, 0.7).
    pub report_pair: Option<(f64, f64)>,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.windows.is_empty() {
            return Err(HarnessError::Config("no window specs".into()));
        }
        if self.alphas.is_empty() || self.betas.is_empty() {
            return Err(HarnessError::Config("alpha and beta lists must be non-empty".into()));
        }
        for v in self.alphas.iter().chain(self.betas.iter()) {
            if !(0.0..=1.0).contains(v) {
                return Err(HarnessError::Config(format!(
                    "alpha/beta value {v} outside [0, 1]"
                )));
            }
        }
        if self.k < 3 {
            return Err(HarnessError::Config("k must be at least 3".into()));
        }
        Ok(())
    }

    fn params_for(&self, alpha: f64, beta: f64) -> GedParams {
        GedParams {
            alpha,
            beta,
            form_dissolve_threshold: self.form_dissolve_threshold,
            match_threshold: self.match_threshold,
        }
    }

    fn report_pair(&self) -> (f64, f64) {
        if let Some(p) = self.report_pair {
            return p;
        }
        let closest = |values: &[f64]| {
            values
                .iter()
                .copied()
                .min_by(|a, b| {
                    (a - 0.7).abs().partial_cmp(&(b - 0.7).abs()).unwrap()
                })
                .unwrap()
        };
        (closest(&self.alphas), closest(&self.betas))
    }
}

/// Tallies for the seven event types.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventCounts {
    pub forming: usize,
    pub dissolving: usize,
    pub shrinking: usize,
    pub growing: usize,
    pub continuing: usize,
    pub splitting: usize,
    pub merging: usize,
}

impl EventCounts {
    pub fn tally(events: &[EvolutionEvent]) -> Self {
        let mut c = EventCounts::default();
        for e in events {
            match e.event {
                EventType::Forming => c.forming += 1,
                EventType::Dissolving => c.dissolving += 1,
                EventType::Continuing => c.continuing += 1,
                EventType::Shrinking => c.shrinking += 1,
                EventType::Growing => c.growing += 1,
                EventType::Splitting => c.splitting += 1,
                EventType::Merging => c.merging += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.forming
            + self.dissolving
            + self.shrinking
            + self.growing
            + self.continuing
            + self.splitting
            + self.merging
    }

    pub fn get(&self, ty: EventType) -> usize {
        match ty {
            EventType::Forming => self.forming,
            EventType::Dissolving => self.dissolving,
            EventType::Continuing => self.continuing,
            EventType::Shrinking => self.shrinking,
            EventType::Growing => self.growing,
            EventType::Splitting => self.splitting,
            EventType::Merging => self.merging,
        }
    }
}

/// One report row per window configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub scheme: String,
    /// Display form of the window size; a range like `30-480` for
    /// increasing windows.
    pub size: String,
    pub offset: u32,
    pub timeframes: usize,
    pub groups: usize,
    pub avg_group_size: f64,
    pub report_alpha: f64,
    pub report_beta: f64,
    pub counts: EventCounts,
    pub total: usize,
    /// Sum of event totals over every (alpha, beta) grid point.
    pub sweep_total: usize,
}

/// The per-configuration tally table produced by [`run_experiment`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EventCountReport {
    pub rows: Vec<ReportRow>,
}

impl EventCountReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "timeframe_type,size,offset,timeframes,groups,avg_group_size,\
             forming,dissolving,shrinking,growing,continuing,splitting,merging,total,sweep_total\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{:.6},{},{},{},{},{},{},{},{},{}\n",
                r.scheme,
                r.size,
                r.offset,
                r.timeframes,
                r.groups,
                r.avg_group_size,
                r.counts.forming,
                r.counts.dissolving,
                r.counts.shrinking,
                r.counts.growing,
                r.counts.continuing,
                r.counts.splitting,
                r.counts.merging,
                r.total,
                r.sweep_total
            ));
        }
        out
    }
}

/// Everything computed for one window spec, before alpha/beta sweeping.
pub struct PreparedFrames {
    pub tsn: TemporalSocialNetwork,
    pub groups: BTreeMap<usize, Vec<Group>>,
    pub importance: BTreeMap<usize, ImportanceMap>,
    inclusions: BTreeMap<usize, PairInclusions>,
}

/// Slice, detect groups and compute importance for one window spec. The
/// detector and measure can be bypassed with preloaded maps.
pub fn prepare_frames(
    log: &TemporalEventLog,
    spec: WindowSpec,
    keep_partial: bool,
    k: usize,
    importance: ImportanceKind,
    tol: f64,
    max_iter: usize,
    external_groups: Option<&BTreeMap<usize, Vec<Group>>>,
    external_importance: Option<&BTreeMap<usize, ImportanceMap>>,
) -> Result<PreparedFrames, HarnessError> {
    let tsn = slice(log, spec, keep_partial)?;
    let groups: BTreeMap<usize, Vec<Group>> = match external_groups {
        Some(g) => g.clone(),
        None => tsn
            .frames
            .par_iter()
            .map(|f| (f.index, detect_groups(&f.snapshot, f.index, k)))
            .collect(),
    };
    let importance_maps: BTreeMap<usize, ImportanceMap> = match external_importance {
        Some(m) => m.clone(),
        None => tsn
            .frames
            .par_iter()
            .map(|f| {
                importance
                    .compute(&f.snapshot, f.index, tol, max_iter)
                    .map(|m| (f.index, m))
            })
            .collect::<Result<_, _>>()?,
    };
    // inclusions are alpha/beta independent: compute once per frame pair
    let empty: Vec<Group> = Vec::new();
    let inclusions: BTreeMap<usize, PairInclusions> = (1..tsn.frame_count())
        .into_par_iter()
        .map(|i| {
            let gi = groups.get(&i).unwrap_or(&empty);
            let gi1 = groups.get(&(i + 1)).unwrap_or(&empty);
            let fallback = ImportanceMap::new(i, BTreeMap::new());
            let ni_i = importance_maps.get(&i).unwrap_or(&fallback);
            let ni_i1 = importance_maps.get(&(i + 1)).unwrap_or(&fallback);
            compute_inclusions(gi, gi1, ni_i, ni_i1).map(|inc| (i, inc))
        })
        .collect::<Result<_, _>>()?;
    Ok(PreparedFrames {
        tsn,
        groups,
        importance: importance_maps,
        inclusions,
    })
}

impl PreparedFrames {
    /// Classify all transitions for one (alpha, beta) point, reusing the
    /// precomputed inclusion tables.
    pub fn classify(&self, params: &GedParams) -> GedOutcome {
        let empty: Vec<Group> = Vec::new();
        let mut outcome = GedOutcome::default();
        for (&i, inc) in &self.inclusions {
            let gi = self.groups.get(&i).unwrap_or(&empty);
            let gi1 = self.groups.get(&(i + 1)).unwrap_or(&empty);
            if gi.is_empty() && gi1.is_empty() {
                continue;
            }
            let pair = classify_frame_pair(gi, gi1, inc, i, params);
            outcome.events.extend(pair.events);
            outcome.unclassified.extend(pair.unclassified);
        }
        outcome
    }

    pub fn group_count(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    pub fn avg_group_size(&self) -> f64 {
        let n = self.group_count();
        if n == 0 {
            return 0.0;
        }
        let members: usize = self
            .groups
            .values()
            .flat_map(|gs| gs.iter().map(Group::size))
            .sum();
        members as f64 / n as f64
    }
}

fn pct(value: f64) -> u32 {
    (value * 100.0).round() as u32
}

/// Run the full sweep. When `out_dir` is set, per-frame edge lists, group,
/// importance, event, chain, diagnostic, series, and report files are
/// written under it; rerunning with the same inputs is byte-identical.
pub fn run_experiment(
    log: &TemporalEventLog,
    config: &RunConfig,
    external_groups: Option<&BTreeMap<usize, Vec<Group>>>,
    external_importance: Option<&BTreeMap<usize, ImportanceMap>>,
) -> Result<EventCountReport, HarnessError> {
    config.validate()?;
    let (report_alpha, report_beta) = config.report_pair();
    let mut rows = Vec::new();
    for &spec in &config.windows {
        let prepared = prepare_frames(
            log,
            spec,
            config.keep_partial,
            config.k,
            config.importance,
            config.tol,
            config.max_iter,
            external_groups,
            external_importance,
        )?;
        let spec_dir = config.out_dir.as_ref().map(|d| d.join(spec.label()));
        if let Some(dir) = &spec_dir {
            write_frame_artifacts(dir, &prepared)?;
        }
        let grid: Vec<(f64, f64)> = config
            .alphas
            .iter()
            .flat_map(|&a| config.betas.iter().map(move |&b| (a, b)))
            .collect();
        let results: Vec<((f64, f64), GedOutcome)> = grid
            .par_iter()
            .map(|&(a, b)| ((a, b), prepared.classify(&config.params_for(a, b))))
            .collect();

        let mut sweep_total = 0usize;
        let mut report_counts = EventCounts::default();
        let mut series = String::from(
            "alpha,beta,forming,dissolving,shrinking,growing,continuing,splitting,merging,total\n",
        );
        for ((a, b), outcome) in &results {
            let counts = EventCounts::tally(&outcome.events);
            sweep_total += counts.total();
            if (*a, *b) == (report_alpha, report_beta) {
                report_counts = counts;
            }
            series.push_str(&format!(
                "{a},{b},{},{},{},{},{},{},{},{}\n",
                counts.forming,
                counts.dissolving,
                counts.shrinking,
                counts.growing,
                counts.continuing,
                counts.splitting,
                counts.merging,
                counts.total()
            ));
            if let Some(dir) = &spec_dir {
                let tag = format!("a{}_b{}", pct(*a), pct(*b));
                let mut f = fs::File::create(dir.join(format!("events_{tag}.csv")))?;
                formats::write_events(&mut f, &outcome.events)?;
                let chains = build_chains(&outcome.events);
                let mut f = fs::File::create(dir.join(format!("chains_{tag}.txt")))?;
                formats::write_chains(&mut f, &chains)?;
                if !outcome.unclassified.is_empty() {
                    let mut f = fs::File::create(dir.join(format!("diagnostics_{tag}.csv")))?;
                    formats::write_unclassified(&mut f, &outcome.unclassified)?;
                }
            }
        }
        if let Some(dir) = &spec_dir {
            fs::write(dir.join("series.csv"), &series)?;
        }

        let size_display = match spec.scheme {
            crate::temporal::WindowScheme::Increasing => format!(
                "{}-{}",
                spec.offset_days,
                spec.offset_days as usize * prepared.tsn.frame_count()
            ),
            _ => spec.size_days.to_string(),
        };
        rows.push(ReportRow {
            scheme: spec.scheme.to_string(),
            size: size_display,
            offset: spec.offset_days,
            timeframes: prepared.tsn.frame_count(),
            groups: prepared.group_count(),
            avg_group_size: prepared.avg_group_size(),
            report_alpha,
            report_beta,
            counts: report_counts,
            total: report_counts.total(),
            sweep_total,
        });
    }
    let report = EventCountReport { rows };
    if let Some(dir) = &config.out_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.csv"), report.to_csv())?;
        fs::write(
            dir.join("report.json"),
            serde_json::to_string_pretty(&report).expect("report serializes"),
        )?;
    }
    Ok(report)
}

fn write_frame_artifacts(dir: &Path, prepared: &PreparedFrames) -> Result<(), HarnessError> {
    let frames_dir = dir.join("frames");
    fs::create_dir_all(&frames_dir)?;
    let mut manifest = fs::File::create(dir.join("manifest.csv"))?;
    formats::write_frame_manifest(&mut manifest, &prepared.tsn.frames)?;
    for frame in &prepared.tsn.frames {
        let mut f = fs::File::create(frames_dir.join(format!("frame_{:03}.csv", frame.index)))?;
        formats::write_frame_edges(&mut f, frame)?;
    }
    let mut f = fs::File::create(dir.join("groups.csv"))?;
    let all_groups: Vec<Group> = prepared
        .groups
        .values()
        .flat_map(|g| g.iter().cloned())
        .collect();
    formats::write_groups(&mut f, &all_groups)?;
    let mut f = fs::File::create(dir.join("importance.csv"))?;
    let maps: Vec<&ImportanceMap> = prepared.importance.values().collect();
    formats::write_importance(&mut f, &maps)?;
    Ok(())
}

/// A detected event translated into planted-member-set space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct MappedEvent {
    from_frame: usize,
    event: EventType,
    from_members: Option<Vec<u64>>,
    to_members: Option<Vec<u64>>,
}

/// Per-event-type precision/recall plus the exact-match verdict.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub expected_total: usize,
    pub detected_total: usize,
    pub per_type: BTreeMap<String, TypeScore>,
    pub missing: Vec<String>,
    pub unexpected: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct TypeScore {
    pub expected: usize,
    pub detected: usize,
    pub matched: usize,
}

impl TypeScore {
    pub fn precision(&self) -> f64 {
        if self.detected == 0 {
            1.0
        } else {
            self.matched as f64 / self.detected as f64
        }
    }

    pub fn recall(&self) -> f64 {
        if self.expected == 0 {
            1.0
        } else {
            self.matched as f64 / self.expected as f64
        }
    }
}

/// Generate the script's log, run the full pipeline, and compare detected
/// events against the planted ground truth after mapping each detected
/// group to the planted group with maximum member overlap.
pub fn verify_scenario(
    script: &ScenarioScript,
    k: usize,
    alpha: f64,
    beta: f64,
    importance: ImportanceKind,
    seed: u64,
) -> Result<VerifyReport, HarnessError> {
    let (log, truth) = synth::generate(script, k, seed)?;
    let spec = WindowSpec::disjoint(script.frame_length_days)
        .map_err(HarnessError::Slice)?;
    let prepared = prepare_frames(
        &log,
        spec,
        false,
        k,
        importance,
        crate::importance::DEFAULT_TOL,
        crate::importance::DEFAULT_MAX_ITER,
        None,
        None,
    )?;
    let params = GedParams::new(alpha, beta);
    let outcome = prepared.classify(&params);

    // map detected groups onto planted member sets by maximum overlap
    let mapped_members = |frame: usize, group_id: usize| -> Option<Vec<u64>> {
        let group = prepared
            .groups
            .get(&frame)?
            .iter()
            .find(|g| g.group_id == group_id)?;
        let planted = script
            .directives
            .get(frame - 1)?
            .groups
            .iter()
            .max_by_key(|p| p.members.intersection(&group.members).count());
        match planted {
            Some(p) if p.members.intersection(&group.members).count() > 0 => {
                Some(p.members.iter().copied().collect())
            }
            _ => Some(group.members.iter().copied().collect()),
        }
    };
    let detected: Vec<MappedEvent> = outcome
        .events
        .iter()
        .map(|e| MappedEvent {
            from_frame: e.from_frame,
            event: e.event,
            from_members: e.from_group.and_then(|g| mapped_members(e.from_frame, g)),
            to_members: e.to_group.and_then(|g| mapped_members(e.to_frame, g)),
        })
        .collect();
    let expected: Vec<MappedEvent> = truth
        .iter()
        .map(|t: &TruthEvent| MappedEvent {
            from_frame: t.from_frame,
            event: t.event,
            from_members: t.from_members.as_ref().map(|m| m.iter().copied().collect()),
            to_members: t.to_members.as_ref().map(|m| m.iter().copied().collect()),
        })
        .collect();

    let mut per_type: BTreeMap<String, TypeScore> = BTreeMap::new();
    for ty in EventType::ALL {
        per_type.insert(ty.to_string(), TypeScore::default());
    }
    let mut remaining = expected.clone();
    let mut missing = Vec::new();
    let mut unexpected = Vec::new();
    for e in &expected {
        per_type.get_mut(&e.event.to_string()).unwrap().expected += 1;
    }
    for d in &detected {
        let slot = per_type.get_mut(&d.event.to_string()).unwrap();
        slot.detected += 1;
        if let Some(pos) = remaining.iter().position(|e| e == d) {
            remaining.remove(pos);
            slot.matched += 1;
        } else {
            unexpected.push(describe(d));
        }
    }
    for e in &remaining {
        missing.push(describe(e));
    }
    Ok(VerifyReport {
        pass: missing.is_empty() && unexpected.is_empty(),
        expected_total: expected.len(),
        detected_total: detected.len(),
        per_type,
        missing,
        unexpected,
    })
}

fn describe(e: &MappedEvent) -> String {
    let side = |m: &Option<Vec<u64>>| {
        m.as_ref()
            .map(|v| {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            })
            .unwrap_or_else(|| "-".into())
    };
    format!(
        "{} T{}->T{} {} => {}",
        e.event,
        e.from_frame,
        e.from_frame + 1,
        side(&e.from_members),
        side(&e.to_members)
    )
}

/// Convenience: verify the canned single-group evolution scenario.
pub fn verify_figure1(k: usize, alpha: f64, beta: f64, seed: u64) -> Result<VerifyReport, HarnessError> {
    verify_scenario(
        &synth::figure1_scenario(k),
        k,
        alpha,
        beta,
        ImportanceKind::SocialPosition {
            epsilon: crate::importance::DEFAULT_EPSILON,
        },
        seed,
    )
}

/// Pretty per-type summary used by the CLI.
pub fn format_verify_report(report: &VerifyReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "expected {} events, detected {}\n",
        report.expected_total, report.detected_total
    ));
    for (ty, score) in &report.per_type {
        if score.expected == 0 && score.detected == 0 {
            continue;
        }
        out.push_str(&format!(
            "  {:<11} expected {:>3}  detected {:>3}  precision {:.2}  recall {:.2}\n",
            ty,
            score.expected,
            score.detected,
            score.precision(),
            score.recall()
        ));
    }
    for m in &report.missing {
        out.push_str(&format!("  missing:    {m}\n"));
    }
    for u in &report.unexpected {
        out.push_str(&format!("  unexpected: {u}\n"));
    }
    out.push_str(if report.pass { "verdict: PASS\n" } else { "verdict: FAIL\n" });
    out
}

/// Write a verify report as JSON next to the other artifacts.
pub fn write_verify_report(dir: &Path, report: &VerifyReport) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)?;
    let mut f = fs::File::create(dir.join("verify.json"))?;
    writeln!(
        f,
        "{}",
        serde_json::to_string_pretty(report).expect("report serializes")
    )?;
    Ok(())
}
