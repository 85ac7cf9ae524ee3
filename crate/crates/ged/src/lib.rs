//! Group evolution tracking in temporal social networks.
//!
//! The pipeline slices a timestamped interaction log into windowed
//! snapshot graphs, extracts overlapping communities per frame with the
//! clique percolation method, weights members with an importance measure,
//! and classifies every transition between groups in consecutive frames
//! into one of seven event types (forming, dissolving, continuing,
//! shrinking, growing, splitting, merging) using the inclusion measure.
//!
//! Modules:
//! - [`temporal`]: log parsing, windowing schemes, snapshot construction
//! - [`cpm`]: k-clique community detection
//! - [`importance`]: degree and social-position node importance
//! - [`events`]: inclusion measure and event classification
//! - [`chains`]: per-lineage evolution chains
//! - [`synth`]: scripted synthetic logs with planted ground truth
//! - [`formats`]: the line-oriented file formats between stages
//! - [`harness`]: sweep orchestration, reports, scenario verification

pub mod chains;
pub mod cpm;
pub mod events;
pub mod formats;
pub mod harness;
pub mod importance;
pub mod synth;
pub mod temporal;

pub use chains::{build_chains, EvolutionChain};
pub use cpm::{detect_groups, k_clique_communities, Group};
pub use events::{ged_run, inclusion, EventType, EvolutionEvent, GedParams};
pub use harness::{run_experiment, verify_scenario, EventCountReport, RunConfig};
pub use importance::{degree_importance, social_position, ImportanceKind, ImportanceMap};
pub use temporal::{
    parse_event_log, slice, SocialNetwork, TemporalEventLog, TemporalSocialNetwork, WindowScheme,
    WindowSpec,
};
