//! Co-change mining and recommendation for JavaScript repositories.

pub mod error;
pub mod js;
pub mod entity;
pub mod fixtures;
pub mod distill;
pub mod lcs;
pub mod binding;
pub mod cdg;
pub mod pattern;
pub mod features;
pub mod history;
pub mod ml;
pub mod baselines;
pub mod commit;
pub mod repo;
pub mod synth;
pub mod eval;
