//! AdaBoost.M1 over stumps or forests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::derive_seed;
use super::forest::RandomForest;
use super::tree::DecisionTree;

/// Error assumed for a perfect learner when computing its vote weight.
const PERFECT_ERROR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum WeakLearner {
    Stump(DecisionTree),
    Forest(RandomForest),
}

impl WeakLearner {
    pub fn votes_relevant(&self, row: &[f64]) -> bool {
        match self {
            WeakLearner::Stump(t) => t.votes_relevant(row),
            WeakLearner::Forest(f) => f.score(row) >= 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaBoost {
    /// (vote weight, learner) in training order.
    pub members: Vec<(f64, WeakLearner)>,
}

impl AdaBoost {
    pub fn fit_stumps(x: &[Vec<f64>], y: &[bool], rounds: usize) -> Self {
        Self::boost(x, y, rounds, |_, w| WeakLearner::Stump(DecisionTree::fit_stump(x, y, w)))
    }

    /// Each round trains a forest on a resample drawn in proportion to the
    /// current weights.
    pub fn fit_forests(x: &[Vec<f64>], y: &[bool], rounds: usize, tree_count: usize, seed: u64) -> Self {
        Self::boost(x, y, rounds, |round, w| {
            let round_seed = derive_seed(seed, round as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(round_seed);
            let sample = weighted_resample(w, &mut rng);
            WeakLearner::Forest(RandomForest::fit_rows(x, y, &sample, tree_count, round_seed))
        })
    }

    fn boost(
        x: &[Vec<f64>],
        y: &[bool],
        rounds: usize,
        mut learn: impl FnMut(usize, &[f64]) -> WeakLearner,
    ) -> Self {
        let n = x.len();
        let mut w = vec![1.0 / n as f64; n];
        let mut members = Vec::new();
        for round in 0..rounds {
            let h = learn(round, &w);
            let hits: Vec<bool> = x.iter().zip(y).map(|(r, &l)| h.votes_relevant(r) == l).collect();
            let err: f64 = w.iter().zip(&hits).filter(|(_, &ok)| !ok).map(|(w, _)| w).sum();
            if err >= 0.5 {
                if members.is_empty() {
                    members.push((1.0, h));
                }
                break;
            }
            if err <= 0.0 {
                members.push((((1.0 - PERFECT_ERROR) / PERFECT_ERROR).ln(), h));
                break;
            }
            let beta = err / (1.0 - err);
            members.push(((1.0 / beta).ln(), h));
            for (wi, ok) in w.iter_mut().zip(&hits) {
                if *ok {
                    *wi *= beta;
                }
            }
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|wi| *wi /= total);
        }
        AdaBoost { members }
    }

    /// Weighted fraction of the vote going to Relevant.
    pub fn score(&self, row: &[f64]) -> f64 {
        let total: f64 = self.members.iter().map(|(a, _)| a).sum();
        let yes: f64 = self
            .members
            .iter()
            .filter(|(_, h)| h.votes_relevant(row))
            .map(|(a, _)| a)
            .sum();
        if total > 0.0 {
            yes / total
        } else {
            0.0
        }
    }
}

/// `weights.len()` indices drawn with replacement, each with probability
/// proportional to its weight.
fn weighted_resample(weights: &[f64], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in weights {
        acc += w;
        cumulative.push(acc);
    }
    (0..weights.len())
        .map(|_| {
            let r = rng.gen::<f64>() * acc;
            cumulative.partition_point(|&c| c <= r).min(weights.len() - 1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_stump_stops_after_one_round() {
        let x = vec![vec![0.0], vec![1.0], vec![5.0], vec![6.0]];
        let y = [false, false, true, true];
        let b = AdaBoost::fit_stumps(&x, &y, 10);
        assert_eq!(b.members.len(), 1);
        assert_eq!(b.score(&[5.5]), 1.0);
    }

    #[test]
    fn boosting_fixes_stump_mistakes() {
        // An interval needs two thresholds; one stump cannot fit it.
        let x: Vec<Vec<f64>> = (0..9).map(|i| vec![i as f64]).collect();
        let y: Vec<bool> = (0..9).map(|i| (3..6).contains(&i)).collect();
        let b = AdaBoost::fit_stumps(&x, &y, 10);
        assert!(b.members.len() > 1);
        let errors = x.iter().zip(&y).filter(|(r, &l)| (b.score(r) >= 0.5) != l).count();
        assert_eq!(errors, 0);
    }

    #[test]
    fn member_weight_follows_error() {
        let x: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64]).collect();
        let y = [false, true, false, true];
        let b = AdaBoost::fit_stumps(&x, &y, 1);
        // The best stump misclassifies one of four equally weighted rows.
        let (alpha, _) = &b.members[0];
        assert!((alpha - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn resample_follows_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = weighted_resample(&[0.0, 1.0, 0.0], &mut rng);
        assert_eq!(s, [1, 1, 1]);
    }
}
