//! Line-oriented file formats shared by the pipeline stages.
//!
//! All formats are plain delimiter-separated text so the detector and the
//! importance measure are swappable: externally produced groups and
//! importance files in the same layout feed straight into the event engine.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::chains::EvolutionChain;
use crate::cpm::Group;
use crate::events::{EventType, EvolutionEvent, UnclassifiedPair};
use crate::importance::ImportanceMap;
use crate::synth::{FrameDirective, PlantedGroup, ScenarioScript, TruthEvent};
use crate::temporal::{day_to_date, NodeId, Timeframe};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn malformed(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        message: message.into(),
    }
}

/// Write one frame's snapshot as `x,y,weight` lines.
pub fn write_frame_edges<W: Write>(out: &mut W, frame: &Timeframe) -> Result<(), FormatError> {
    for (s, t, w) in frame.snapshot.edges() {
        writeln!(out, "{s},{t},{w}")?;
    }
    Ok(())
}

/// Write the frame manifest: `index,start,end,node_count,edge_count`.
/// Start and end are ISO dates; end is the exclusive window bound.
pub fn write_frame_manifest<W: Write>(out: &mut W, frames: &[Timeframe]) -> Result<(), FormatError> {
    writeln!(out, "index,start,end,nodes,edges")?;
    for f in frames {
        writeln!(
            out,
            "{},{},{},{},{}",
            f.index,
            day_to_date(f.window_start),
            day_to_date(f.window_end),
            f.snapshot.node_count(),
            f.snapshot.edge_count()
        )?;
    }
    Ok(())
}

/// Groups file: `frame_index,group_id,member1;member2;...`
pub fn write_groups<W: Write>(out: &mut W, groups: &[Group]) -> Result<(), FormatError> {
    for g in groups {
        let members: Vec<String> = g.members.iter().map(|m| m.to_string()).collect();
        writeln!(out, "{},{},{}", g.frame_index, g.group_id, members.join(";"))?;
    }
    Ok(())
}

pub fn read_groups<R: BufRead>(input: R) -> Result<BTreeMap<usize, Vec<Group>>, FormatError> {
    let mut by_frame: BTreeMap<usize, Vec<Group>> = BTreeMap::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.splitn(3, ',').collect();
        if parts.len() != 3 {
            return Err(malformed(line_no, "expected frame,group_id,members"));
        }
        let frame_index: usize = parts[0]
            .parse()
            .map_err(|_| malformed(line_no, "bad frame index"))?;
        let group_id: usize = parts[1]
            .parse()
            .map_err(|_| malformed(line_no, "bad group id"))?;
        let members = parse_members(parts[2], line_no)?;
        if members.is_empty() {
            return Err(malformed(line_no, "group has no members"));
        }
        by_frame.entry(frame_index).or_default().push(Group {
            frame_index,
            group_id,
            members,
        });
    }
    Ok(by_frame)
}

fn parse_members(text: &str, line_no: usize) -> Result<BTreeSet<NodeId>, FormatError> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<NodeId>()
                .map_err(|_| malformed(line_no, format!("bad member id {s:?}")))
        })
        .collect()
}

/// Importance file: `frame_index,node,value`
pub fn write_importance<W: Write>(out: &mut W, maps: &[&ImportanceMap]) -> Result<(), FormatError> {
    for map in maps {
        for (node, value) in map.values() {
            writeln!(out, "{},{},{:.12}", map.frame_index, node, value)?;
        }
    }
    Ok(())
}

pub fn read_importance<R: BufRead>(input: R) -> Result<BTreeMap<usize, ImportanceMap>, FormatError> {
    let mut by_frame: BTreeMap<usize, BTreeMap<NodeId, f64>> = BTreeMap::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(malformed(line_no, "expected frame,node,value"));
        }
        let frame: usize = parts[0]
            .parse()
            .map_err(|_| malformed(line_no, "bad frame index"))?;
        let node: NodeId = parts[1]
            .parse()
            .map_err(|_| malformed(line_no, "bad node id"))?;
        let value: f64 = parts[2]
            .parse()
            .map_err(|_| malformed(line_no, "bad importance value"))?;
        if value < 0.0 {
            return Err(malformed(line_no, "importance value must be non-negative"));
        }
        by_frame.entry(frame).or_default().insert(node, value);
    }
    Ok(by_frame
        .into_iter()
        .map(|(f, values)| (f, ImportanceMap::new(f, values)))
        .collect())
}

/// Events file: `from_frame,to_frame,from_group,to_group,event,inclusion_fwd,inclusion_bwd`
/// with absent group fields left empty.
pub fn write_events<W: Write>(out: &mut W, events: &[EvolutionEvent]) -> Result<(), FormatError> {
    writeln!(
        out,
        "from_frame,to_frame,from_group,to_group,event,inclusion_fwd,inclusion_bwd"
    )?;
    for e in events {
        writeln!(
            out,
            "{},{},{},{},{},{:.9},{:.9}",
            e.from_frame,
            e.to_frame,
            e.from_group.map(|g| g.to_string()).unwrap_or_default(),
            e.to_group.map(|g| g.to_string()).unwrap_or_default(),
            e.event,
            e.inclusion_fwd,
            e.inclusion_bwd
        )?;
    }
    Ok(())
}

/// Chains file: one header line per lineage followed by its
/// `frame,group,event` triples indented.
pub fn write_chains<W: Write>(out: &mut W, chains: &[EvolutionChain]) -> Result<(), FormatError> {
    for c in chains {
        let terminator = if c.dissolved {
            " dissolved".to_string()
        } else if let Some((f, g)) = c.merged_into {
            format!(" merged-into frame {f} group {g}")
        } else {
            String::new()
        };
        writeln!(out, "lineage {}{}", c.lineage_id, terminator)?;
        for s in &c.steps {
            let event = s.event.map(|e| e.to_string()).unwrap_or_else(|| "-".into());
            writeln!(out, "  {},{},{}", s.frame, s.group, event)?;
        }
    }
    Ok(())
}

/// Diagnostics file for related-but-unclassified pairs.
pub fn write_unclassified<W: Write>(
    out: &mut W,
    pairs: &[UnclassifiedPair],
) -> Result<(), FormatError> {
    writeln!(out, "from_frame,from_group,to_group,inclusion_fwd,inclusion_bwd")?;
    for p in pairs {
        writeln!(
            out,
            "{},{},{},{:.9},{:.9}",
            p.from_frame, p.from_group, p.to_group, p.inclusion_fwd, p.inclusion_bwd
        )?;
    }
    Ok(())
}

/// Parse a scenario script from its key-value text form:
///
/// ```text
/// frames = 8
/// frame_days = 30
///
/// [frame 2]
/// group = 1,2,3,4,5,6
/// noise = 0.0
///
/// [truth]
/// event = forming; 1; 2; ; 1,2,3,4,5,6
/// ```
pub fn parse_script<R: BufRead>(input: R) -> Result<ScenarioScript, FormatError> {
    enum Section {
        Head,
        Frame(usize),
        Truth,
    }
    let mut frame_count: Option<usize> = None;
    let mut frame_days: Option<u32> = None;
    let mut default_noise = 0.0f64;
    let mut default_density = 0.0f64;
    let mut directives: Vec<FrameDirective> = Vec::new();
    let mut truth: Vec<TruthEvent> = Vec::new();
    let mut section = Section::Head;

    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(header) = line.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| malformed(line_no, "unterminated section header"))?
                .trim();
            if header == "truth" {
                section = Section::Truth;
            } else if let Some(n) = header.strip_prefix("frame") {
                let frame: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| malformed(line_no, "bad frame number"))?;
                let count = frame_count
                    .ok_or_else(|| malformed(line_no, "frames = N must precede frame sections"))?;
                if frame == 0 || frame > count {
                    return Err(malformed(line_no, format!("frame {frame} out of range")));
                }
                if directives.is_empty() {
                    directives = vec![
                        FrameDirective {
                            groups: vec![],
                            noise_rate: default_noise,
                        };
                        count
                    ];
                }
                section = Section::Frame(frame);
            } else {
                return Err(malformed(line_no, format!("unknown section {header:?}")));
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| malformed(line_no, "expected key = value"))?;
        let (key, value) = (key.trim(), value.trim());
        match section {
            Section::Head => match key {
                "frames" => {
                    frame_count =
                        Some(value.parse().map_err(|_| malformed(line_no, "bad frames"))?)
                }
                "frame_days" => {
                    frame_days =
                        Some(value.parse().map_err(|_| malformed(line_no, "bad frame_days"))?)
                }
                "noise" => {
                    default_noise = value.parse().map_err(|_| malformed(line_no, "bad noise"))?
                }
                "density" => {
                    default_density =
                        value.parse().map_err(|_| malformed(line_no, "bad density"))?
                }
                _ => return Err(malformed(line_no, format!("unknown key {key:?}"))),
            },
            Section::Frame(frame) => match key {
                "group" => {
                    let members: BTreeSet<NodeId> = value
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| {
                            s.trim()
                                .parse::<NodeId>()
                                .map_err(|_| malformed(line_no, format!("bad member {s:?}")))
                        })
                        .collect::<Result<_, _>>()?;
                    directives[frame - 1].groups.push(PlantedGroup {
                        members,
                        density: default_density,
                    });
                }
                "noise" => {
                    directives[frame - 1].noise_rate =
                        value.parse().map_err(|_| malformed(line_no, "bad noise"))?
                }
                _ => return Err(malformed(line_no, format!("unknown key {key:?}"))),
            },
            Section::Truth => {
                if key != "event" {
                    return Err(malformed(line_no, format!("unknown key {key:?}")));
                }
                let fields: Vec<&str> = value.split(';').map(str::trim).collect();
                if fields.len() != 5 {
                    return Err(malformed(
                        line_no,
                        "expected event = type; from_frame; to_frame; from_members; to_members",
                    ));
                }
                let event: EventType = fields[0]
                    .parse()
                    .map_err(|e| malformed(line_no, e))?;
                let from_frame: usize = fields[1]
                    .parse()
                    .map_err(|_| malformed(line_no, "bad from_frame"))?;
                let to_frame: usize = fields[2]
                    .parse()
                    .map_err(|_| malformed(line_no, "bad to_frame"))?;
                let parse_side = |text: &str| -> Result<Option<BTreeSet<NodeId>>, FormatError> {
                    if text.is_empty() {
                        return Ok(None);
                    }
                    text.split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| {
                            s.trim()
                                .parse::<NodeId>()
                                .map_err(|_| malformed(line_no, format!("bad member {s:?}")))
                        })
                        .collect::<Result<BTreeSet<_>, _>>()
                        .map(Some)
                };
                truth.push(TruthEvent {
                    event,
                    from_frame,
                    to_frame,
                    from_members: parse_side(fields[3])?,
                    to_members: parse_side(fields[4])?,
                });
            }
        }
    }
    let frame_count = frame_count.ok_or_else(|| malformed(0, "missing frames = N"))?;
    let frame_days = frame_days.ok_or_else(|| malformed(0, "missing frame_days = N"))?;
    if directives.is_empty() {
        directives = vec![
            FrameDirective {
                groups: vec![],
                noise_rate: default_noise,
            };
            frame_count
        ];
    }
    Ok(ScenarioScript {
        frame_count,
        frame_length_days: frame_days,
        directives,
        ground_truth: truth,
    })
}

/// Render a script in the text form accepted by [`parse_script`].
pub fn write_script<W: Write>(out: &mut W, script: &ScenarioScript) -> Result<(), FormatError> {
    writeln!(out, "frames = {}", script.frame_count)?;
    writeln!(out, "frame_days = {}", script.frame_length_days)?;
    for (i, d) in script.directives.iter().enumerate() {
        if d.groups.is_empty() && d.noise_rate == 0.0 {
            continue;
        }
        writeln!(out)?;
        writeln!(out, "[frame {}]", i + 1)?;
        if d.noise_rate != 0.0 {
            writeln!(out, "noise = {}", d.noise_rate)?;
        }
        for g in &d.groups {
            let members: Vec<String> = g.members.iter().map(|m| m.to_string()).collect();
            writeln!(out, "group = {}", members.join(","))?;
        }
    }
    if !script.ground_truth.is_empty() {
        writeln!(out)?;
        writeln!(out, "[truth]")?;
        for t in &script.ground_truth {
            let side = |members: &Option<BTreeSet<NodeId>>| {
                members
                    .as_ref()
                    .map(|m| {
                        m.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .unwrap_or_default()
            };
            writeln!(
                out,
                "event = {}; {}; {}; {}; {}",
                t.event,
                t.from_frame,
                t.to_frame,
                side(&t.from_members),
                side(&t.to_members)
            )?;
        }
    }
    Ok(())
}

/// Render the event log in the input format (`source,target,YYYY-MM-DD`),
/// so generated logs round-trip through [`crate::temporal::parse_event_log`].
pub fn write_event_log<W: Write>(
    out: &mut W,
    log: &crate::temporal::TemporalEventLog,
) -> Result<(), FormatError> {
    for r in log.records() {
        match &r.kind {
            Some(kind) => writeln!(out, "{},{},{},{}", r.source, r.target, day_to_date(r.day), kind)?,
            None => writeln!(out, "{},{},{}", r.source, r.target, day_to_date(r.day))?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::figure1_scenario;
    use std::io::Cursor;

    #[test]
    fn groups_round_trip() {
        let groups = vec![
            Group {
                frame_index: 2,
                group_id: 1,
                members: BTreeSet::from([1, 2, 3]),
            },
            Group {
                frame_index: 3,
                group_id: 1,
                members: BTreeSet::from([4, 5]),
            },
        ];
        let mut buf = Vec::new();
        write_groups(&mut buf, &groups).unwrap();
        let parsed = read_groups(Cursor::new(buf)).unwrap();
        assert_eq!(parsed[&2][0].members, BTreeSet::from([1, 2, 3]));
        assert_eq!(parsed[&3][0].members, BTreeSet::from([4, 5]));
    }

    #[test]
    fn importance_round_trip() {
        let map = ImportanceMap::new(1, [(1, 0.5), (2, 1.25)].into_iter().collect());
        let mut buf = Vec::new();
        write_importance(&mut buf, &[&map]).unwrap();
        let parsed = read_importance(Cursor::new(buf)).unwrap();
        assert!((parsed[&1].get(2) - 1.25).abs() < 1e-9);
    }

    #[test]
    fn script_round_trip_preserves_figure1() {
        let script = figure1_scenario(5);
        let mut buf = Vec::new();
        write_script(&mut buf, &script).unwrap();
        let parsed = parse_script(Cursor::new(buf)).unwrap();
        assert_eq!(parsed, script);
    }

    #[test]
    fn malformed_group_line_reports_position() {
        let err = read_groups(Cursor::new("1,notanumber,1;2\n")).unwrap_err();
        match err {
            FormatError::Malformed { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected: {other}"),
        }
    }
}
