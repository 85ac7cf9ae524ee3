//! Interaction logs, time windows and per-window snapshot networks.
//!
//! A temporal social network is an ordered list of timeframes, each holding
//! the directed snapshot graph of all interactions that fall inside the
//! frame's window. Three windowing schemes are supported: disjoint
//! (abutting windows), overlapping (offset shorter than size) and
//! increasing (cumulative windows growing from the span origin).

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use chrono::{Duration, NaiveDate};
use rayon::prelude::*;
use thiserror::Error;

/// Node identifier in the interaction log.
pub type NodeId = u64;

const SECONDS_PER_DAY: i64 = 86_400;

fn unix_epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).unwrap()
}

/// Convert a day index (days since 1970-01-01) to a calendar date.
pub fn day_to_date(day: i64) -> NaiveDate {
    unix_epoch() + Duration::days(day)
}

/// Convert a calendar date to a day index.
pub fn date_to_day(date: NaiveDate) -> i64 {
    (date - unix_epoch()).num_days()
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("no valid interaction records in input")]
    EmptyLog,
    #[error("line {line}: unparseable timestamp {value:?}")]
    UnparseableTimestamp { line: usize, value: String },
    #[error("record on day {day} outside declared span [{start}, {end}]")]
    RecordOutsideSpan { day: i64, start: i64, end: i64 },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum SliceError {
    #[error("window size {size} days exceeds log span of {span} days")]
    WindowLargerThanSpan { size: u32, span: i64 },
    #[error("invalid window spec: {0}")]
    InvalidSpec(String),
}

/// How timestamps are written in the input file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimestampFormat {
    /// Per-token detection: tokens containing `-` parse as ISO dates,
    /// everything else as integer epoch seconds.
    #[default]
    Auto,
    /// ISO-8601 date, `YYYY-MM-DD`.
    IsoDate,
    /// Integer seconds since the Unix epoch; truncated to day.
    EpochSeconds,
}

impl TimestampFormat {
    fn parse_day(self, token: &str) -> Option<i64> {
        match self {
            TimestampFormat::Auto => {
                if token.contains('-') {
                    TimestampFormat::IsoDate.parse_day(token)
                } else {
                    TimestampFormat::EpochSeconds.parse_day(token)
                }
            }
            TimestampFormat::IsoDate => NaiveDate::parse_from_str(token, "%Y-%m-%d")
                .ok()
                .map(date_to_day),
            TimestampFormat::EpochSeconds => token
                .parse::<i64>()
                .ok()
                .map(|secs| secs.div_euclid(SECONDS_PER_DAY)),
        }
    }
}

/// Options for [`parse_event_log`].
#[derive(Debug, Clone)]
pub struct ParseOptions {
    pub delimiter: char,
    pub timestamp: TimestampFormat,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            delimiter: ',',
            timestamp: TimestampFormat::Auto,
        }
    }
}

/// One timestamped directed interaction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionRecord {
    pub source: NodeId,
    pub target: NodeId,
    /// Day index (days since 1970-01-01). Finer timestamps are truncated.
    pub day: i64,
    pub kind: Option<String>,
}

/// A validated, time-ordered interaction log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalEventLog {
    records: Vec<InteractionRecord>,
    span_start: i64,
    span_end: i64,
    rejected_count: usize,
}

impl TemporalEventLog {
    /// Build a log from records; the span is derived from the data.
    /// Self-loop records are rejected and counted, never kept.
    pub fn from_records(records: Vec<InteractionRecord>) -> Result<Self, ParseError> {
        let mut rejected = 0;
        let mut kept: Vec<InteractionRecord> = Vec::with_capacity(records.len());
        for r in records {
            if r.source == r.target {
                rejected += 1;
            } else {
                kept.push(r);
            }
        }
        if kept.is_empty() {
            return Err(ParseError::EmptyLog);
        }
        kept.sort_by_key(|r| r.day);
        let span_start = kept.first().unwrap().day;
        let span_end = kept.last().unwrap().day;
        Ok(TemporalEventLog {
            records: kept,
            span_start,
            span_end,
            rejected_count: rejected,
        })
    }

    /// Override the derived span with an explicit one. Fails if any record
    /// falls outside the declared bounds.
    pub fn with_span(mut self, span_start: i64, span_end: i64) -> Result<Self, ParseError> {
        for r in &self.records {
            if r.day < span_start || r.day > span_end {
                return Err(ParseError::RecordOutsideSpan {
                    day: r.day,
                    start: span_start,
                    end: span_end,
                });
            }
        }
        self.span_start = span_start;
        self.span_end = span_end;
        Ok(self)
    }

    pub fn records(&self) -> &[InteractionRecord] {
        &self.records
    }

    pub fn span_start(&self) -> i64 {
        self.span_start
    }

    pub fn span_end(&self) -> i64 {
        self.span_end
    }

    /// Span length in whole days, both endpoints inclusive.
    pub fn span_days(&self) -> i64 {
        self.span_end - self.span_start + 1
    }

    pub fn rejected_count(&self) -> usize {
        self.rejected_count
    }

    fn add_rejected(&mut self, n: usize) {
        self.rejected_count += n;
    }

    /// Records with day in the half-open window `[start, end)`.
    pub fn records_in(&self, start: i64, end: i64) -> &[InteractionRecord] {
        let lo = self.records.partition_point(|r| r.day < start);
        let hi = self.records.partition_point(|r| r.day < end);
        &self.records[lo..hi]
    }
}

/// Parse a delimiter-separated log: `source,target,timestamp[,kind]`.
///
/// Malformed lines (wrong field count, non-numeric node ids) and self-loops
/// are counted in `rejected_count`. A timestamp that does not parse under
/// the requested convention is a hard error carrying the line number.
pub fn parse_event_log<R: BufRead>(
    input: R,
    options: &ParseOptions,
) -> Result<TemporalEventLog, ParseError> {
    let mut records = Vec::new();
    let mut rejected = 0usize;
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(options.delimiter).map(str::trim).collect();
        if fields.len() < 3 || fields.len() > 4 {
            rejected += 1;
            continue;
        }
        let (source, target) = match (fields[0].parse::<NodeId>(), fields[1].parse::<NodeId>()) {
            (Ok(s), Ok(t)) => (s, t),
            _ => {
                rejected += 1;
                continue;
            }
        };
        let day = options.timestamp.parse_day(fields[2]).ok_or_else(|| {
            ParseError::UnparseableTimestamp {
                line: line_no,
                value: fields[2].to_string(),
            }
        })?;
        if source == target {
            rejected += 1;
            continue;
        }
        let kind = fields
            .get(3)
            .filter(|s| !s.is_empty())
            .map(|s| s.to_string());
        records.push(InteractionRecord {
            source,
            target,
            day,
            kind,
        });
    }
    let mut log = TemporalEventLog::from_records(records)?;
    log.add_rejected(rejected);
    Ok(log)
}

/// Windowing scheme for slicing a log into timeframes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowScheme {
    Disjoint,
    Overlapping,
    Increasing,
}

impl std::fmt::Display for WindowScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            WindowScheme::Disjoint => "disjoint",
            WindowScheme::Overlapping => "overlapping",
            WindowScheme::Increasing => "increasing",
        };
        f.write_str(s)
    }
}

/// A validated window configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WindowSpec {
    pub scheme: WindowScheme,
    /// Window length in days; unused for the increasing scheme.
    pub size_days: u32,
    pub offset_days: u32,
}

impl WindowSpec {
    pub fn disjoint(size_days: u32) -> Result<Self, SliceError> {
        WindowSpec::new(WindowScheme::Disjoint, size_days, size_days)
    }

    pub fn overlapping(size_days: u32, offset_days: u32) -> Result<Self, SliceError> {
        WindowSpec::new(WindowScheme::Overlapping, size_days, offset_days)
    }

    pub fn increasing(offset_days: u32) -> Result<Self, SliceError> {
        WindowSpec::new(WindowScheme::Increasing, 0, offset_days)
    }

    pub fn new(scheme: WindowScheme, size_days: u32, offset_days: u32) -> Result<Self, SliceError> {
        if offset_days == 0 {
            return Err(SliceError::InvalidSpec("offset must be positive".into()));
        }
        match scheme {
            WindowScheme::Disjoint => {
                if size_days == 0 {
                    return Err(SliceError::InvalidSpec("size must be positive".into()));
                }
                if offset_days != size_days {
                    return Err(SliceError::InvalidSpec(format!(
                        "disjoint windows require offset = size ({} != {})",
                        offset_days, size_days
                    )));
                }
            }
            WindowScheme::Overlapping => {
                if size_days == 0 {
                    return Err(SliceError::InvalidSpec("size must be positive".into()));
                }
                if offset_days >= size_days {
                    return Err(SliceError::InvalidSpec(format!(
                        "overlapping windows require offset < size ({} >= {})",
                        offset_days, size_days
                    )));
                }
            }
            WindowScheme::Increasing => {}
        }
        Ok(WindowSpec {
            scheme,
            size_days,
            offset_days,
        })
    }

    /// Stable label used in file names, e.g. `disjoint_s90_o90`.
    pub fn label(&self) -> String {
        match self.scheme {
            WindowScheme::Increasing => format!("increasing_o{}", self.offset_days),
            _ => format!(
                "{}_s{}_o{}",
                self.scheme, self.size_days, self.offset_days
            ),
        }
    }
}

/// Directed snapshot graph of one timeframe. Edge weights count records;
/// the community detector consumes the unweighted projection.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SocialNetwork {
    nodes: BTreeSet<NodeId>,
    edges: BTreeMap<(NodeId, NodeId), u32>,
}

impl SocialNetwork {
    pub fn new() -> Self {
        SocialNetwork::default()
    }

    /// Record one interaction; self-loops are ignored.
    pub fn add_interaction(&mut self, source: NodeId, target: NodeId) {
        if source == target {
            return;
        }
        self.nodes.insert(source);
        self.nodes.insert(target);
        *self.edges.entry((source, target)).or_insert(0) += 1;
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().copied()
    }

    pub fn contains_node(&self, node: NodeId) -> bool {
        self.nodes.contains(&node)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, source: NodeId, target: NodeId) -> u32 {
        self.edges.get(&(source, target)).copied().unwrap_or(0)
    }

    /// Directed edges with weights, in canonical (sorted) order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, u32)> + '_ {
        self.edges.iter().map(|(&(s, t), &w)| (s, t, w))
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Build a snapshot from records with day in `[window_start, window_end)`.
pub fn build_snapshot(
    records: &[InteractionRecord],
    window_start: i64,
    window_end: i64,
) -> SocialNetwork {
    let mut net = SocialNetwork::new();
    for r in records {
        if r.day >= window_start && r.day < window_end {
            net.add_interaction(r.source, r.target);
        }
    }
    net
}

/// One window of the temporal network. `window_end` is exclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Timeframe {
    /// 1-based position in the sequence.
    pub index: usize,
    pub window_start: i64,
    pub window_end: i64,
    pub snapshot: SocialNetwork,
}

/// Ordered sequence of timeframes produced by [`slice`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalSocialNetwork {
    pub frames: Vec<Timeframe>,
    pub spec: WindowSpec,
}

impl TemporalSocialNetwork {
    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }
}

/// Slice a log into timeframes under the given window spec.
///
/// Windows are half-open `[start, end)` in day units; a record on a shared
/// boundary day belongs to the later frame only. Trailing partial windows
/// are dropped unless `keep_partial` is set.
pub fn slice(
    log: &TemporalEventLog,
    spec: WindowSpec,
    keep_partial: bool,
) -> Result<TemporalSocialNetwork, SliceError> {
    let span_days = log.span_days();
    let origin = log.span_start();
    let mut windows: Vec<(i64, i64)> = Vec::new();
    match spec.scheme {
        WindowScheme::Disjoint | WindowScheme::Overlapping => {
            let size = spec.size_days as i64;
            let offset = spec.offset_days as i64;
            if size > span_days {
                return Err(SliceError::WindowLargerThanSpan {
                    size: spec.size_days,
                    span: span_days,
                });
            }
            let full = (span_days - size) / offset + 1;
            for j in 0..full {
                let start = origin + j * offset;
                windows.push((start, start + size));
            }
            if keep_partial {
                let start = origin + full * offset;
                if start <= log.span_end() {
                    windows.push((start, log.span_end() + 1));
                }
            }
        }
        WindowScheme::Increasing => {
            let offset = spec.offset_days as i64;
            if offset > span_days {
                return Err(SliceError::WindowLargerThanSpan {
                    size: spec.offset_days,
                    span: span_days,
                });
            }
            let full = span_days / offset;
            for j in 1..=full {
                windows.push((origin, origin + j * offset));
            }
            if keep_partial && span_days % offset != 0 {
                windows.push((origin, log.span_end() + 1));
            }
        }
    }
    let frames: Vec<Timeframe> = windows
        .into_par_iter()
        .enumerate()
        .map(|(i, (start, end))| Timeframe {
            index: i + 1,
            window_start: start,
            window_end: end,
            snapshot: build_snapshot(log.records_in(start, end), start, end),
        })
        .collect();
    Ok(TemporalSocialNetwork { frames, spec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str) -> Result<TemporalEventLog, ParseError> {
        parse_event_log(Cursor::new(text), &ParseOptions::default())
    }

    fn synthetic_log(span_days: i64) -> TemporalEventLog {
        // one record per day so the span is exactly span_days
        let records = (0..span_days)
            .map(|d| InteractionRecord {
                source: 1,
                target: 2,
                day: d,
                kind: None,
            })
            .collect();
        TemporalEventLog::from_records(records).unwrap()
    }

    #[test]
    fn parses_simple_line() {
        let log = parse("1,2,2010-01-05\n").unwrap();
        assert_eq!(log.records().len(), 1);
        let r = &log.records()[0];
        assert_eq!(r.source, 1);
        assert_eq!(r.target, 2);
        assert_eq!(day_to_date(r.day), NaiveDate::from_ymd_opt(2010, 1, 5).unwrap());
    }

    #[test]
    fn rejects_self_loop() {
        let log = parse("1,2,2010-01-05\n7,7,2010-01-05\n").unwrap();
        assert_eq!(log.records().len(), 1);
        assert_eq!(log.rejected_count(), 1);
    }

    #[test]
    fn empty_input_is_error() {
        assert!(matches!(parse(""), Err(ParseError::EmptyLog)));
    }

    #[test]
    fn bad_timestamp_reports_line() {
        let err = parse("1,2,2010-01-05\n3,4,notadate\n").unwrap_err();
        match err {
            ParseError::UnparseableTimestamp { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn epoch_seconds_autodetected() {
        let log = parse("1,2,86400\n").unwrap();
        assert_eq!(log.records()[0].day, 1);
    }

    #[test]
    fn kind_field_is_optional() {
        let log = parse("1,2,2010-01-05,message\n").unwrap();
        assert_eq!(log.records()[0].kind.as_deref(), Some("message"));
    }

    #[test]
    fn malformed_lines_rejected_not_dropped_silently() {
        let log = parse("1,2,2010-01-05\nx,y\na,b,2010-01-06\n").unwrap();
        assert_eq!(log.rejected_count(), 2);
    }

    #[test]
    fn disjoint_510_days_size_90_gives_5_frames() {
        let log = synthetic_log(510);
        let tsn = slice(&log, WindowSpec::disjoint(90).unwrap(), false).unwrap();
        assert_eq!(tsn.frame_count(), 5);
    }

    #[test]
    fn disjoint_510_days_size_60_gives_8_frames() {
        let log = synthetic_log(510);
        let tsn = slice(&log, WindowSpec::disjoint(60).unwrap(), false).unwrap();
        assert_eq!(tsn.frame_count(), 8);
    }

    #[test]
    fn increasing_90_days_offset_30() {
        let log = synthetic_log(90);
        let tsn = slice(&log, WindowSpec::increasing(30).unwrap(), false).unwrap();
        assert_eq!(tsn.frame_count(), 3);
        assert_eq!(
            tsn.frames.iter().map(|f| (f.window_start, f.window_end)).collect::<Vec<_>>(),
            vec![(0, 30), (0, 60), (0, 90)]
        );
    }

    #[test]
    fn trailing_partial_window_dropped() {
        let log = synthetic_log(100);
        let tsn = slice(&log, WindowSpec::disjoint(30).unwrap(), false).unwrap();
        assert_eq!(tsn.frame_count(), 3);
        assert_eq!(tsn.frames[2].window_end, 90);
    }

    #[test]
    fn keep_partial_retains_trailing_window() {
        let log = synthetic_log(100);
        let tsn = slice(&log, WindowSpec::disjoint(30).unwrap(), true).unwrap();
        assert_eq!(tsn.frame_count(), 4);
        assert_eq!(tsn.frames[3].window_start, 90);
        assert_eq!(tsn.frames[3].window_end, 100);
    }

    #[test]
    fn window_larger_than_span() {
        let log = synthetic_log(30);
        let err = slice(&log, WindowSpec::disjoint(90).unwrap(), false).unwrap_err();
        assert!(matches!(err, SliceError::WindowLargerThanSpan { .. }));
    }

    #[test]
    fn snapshot_counts_weights() {
        let records: Vec<_> = (0..3)
            .map(|_| InteractionRecord {
                source: 10,
                target: 20,
                day: 5,
                kind: None,
            })
            .collect();
        let net = build_snapshot(&records, 0, 10);
        assert_eq!(net.weight(10, 20), 3);
        assert_eq!(net.edge_count(), 1);
    }

    #[test]
    fn snapshot_excludes_out_of_window_records() {
        let records = vec![InteractionRecord {
            source: 1,
            target: 2,
            day: 10,
            kind: None,
        }];
        let net = build_snapshot(&records, 0, 10);
        assert!(net.is_empty());
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(WindowSpec::new(WindowScheme::Disjoint, 30, 15).is_err());
        assert!(WindowSpec::new(WindowScheme::Overlapping, 30, 30).is_err());
        assert!(WindowSpec::new(WindowScheme::Increasing, 0, 0).is_err());
    }

    #[test]
    fn disjoint_records_fall_in_exactly_one_frame() {
        let log = synthetic_log(120);
        let tsn = slice(&log, WindowSpec::disjoint(30).unwrap(), false).unwrap();
        for r in log.records() {
            let hits = tsn
                .frames
                .iter()
                .filter(|f| r.day >= f.window_start && r.day < f.window_end)
                .count();
            assert_eq!(hits, 1, "day {} hit {} frames", r.day, hits);
        }
    }

    #[test]
    fn explicit_span_override() {
        let log = parse("1,2,0\n3,4,172800\n").unwrap(); // days 0 and 2
        assert_eq!(log.span_days(), 3);
        let log = log.with_span(-5, 10).unwrap();
        assert_eq!(log.span_start(), -5);
        assert_eq!(log.span_days(), 16);
        assert!(log.clone().with_span(1, 10).is_err());
    }
}
