//! Bagged trees with per-split feature sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::derive_seed;
use super::tree::{DecisionTree, Grow};

#[derive(Debug, Clone, PartialEq)]
pub struct RandomForest {
    pub trees: Vec<DecisionTree>,
}

/// Candidate features drawn per split: floor(sqrt(width)), at least one.
pub fn features_per_split(width: usize) -> usize {
    ((width as f64).sqrt().floor() as usize).max(1)
}

impl RandomForest {
    pub fn fit(x: &[Vec<f64>], y: &[bool], tree_count: usize, seed: u64) -> Self {
        let all: Vec<usize> = (0..x.len()).collect();
        Self::fit_rows(x, y, &all, tree_count, seed)
    }

    /// Trains on the sample `rows` (indices into `x`, repeats allowed).
    pub(crate) fn fit_rows(x: &[Vec<f64>], y: &[bool], rows: &[usize], tree_count: usize, seed: u64) -> Self {
        let width = x.first().map_or(0, Vec::len);
        let m = features_per_split(width);
        let trees = (0..tree_count)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t as u64));
                let bootstrap: Vec<usize> = (0..rows.len()).map(|_| rows[rng.gen_range(0..rows.len())]).collect();
                Grow {
                    x,
                    y,
                    weights: None,
                    max_depth: None,
                    sample_features: Some((m, &mut rng)),
                }
                .build(bootstrap)
            })
            .collect();
        RandomForest { trees }
    }

    /// Fraction of trees voting Relevant.
    pub fn score(&self, row: &[f64]) -> f64 {
        let votes = self.trees.iter().filter(|t| t.votes_relevant(row)).count();
        votes as f64 / self.trees.len() as f64
    }
}
