//! Recurring change patterns: graph canonical forms, largest common
//! subgraphs, frequency mining and detection of the recommendation patterns.

pub mod detect;
pub mod graph;
pub mod mcs;
pub mod mine;

pub use detect::{detect_patterns, PatternId, PatternMatch};
pub use graph::PatternGraph;
pub use mcs::largest_common_subgraph;
pub use mine::{mine_rcps, RecurringChangePattern};
