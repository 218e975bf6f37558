//! Classifiers deciding whether a function pair should be co-changed.

pub mod bayes;
pub mod boost;
pub mod forest;
pub mod persist;
pub mod tree;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use bayes::GaussianNb;
pub use boost::{AdaBoost, WeakLearner};
pub use forest::RandomForest;
pub use persist::{load, save};
pub use tree::DecisionTree;

pub const DEFAULT_TREE_COUNT: usize = 100;
pub const DEFAULT_BOOST_ROUNDS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    NotRelevant,
    Relevant,
}

impl Label {
    pub fn from_bool(relevant: bool) -> Self {
        if relevant {
            Label::Relevant
        } else {
            Label::NotRelevant
        }
    }

    pub fn is_relevant(self) -> bool {
        self == Label::Relevant
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Relevant => "Relevant",
            Label::NotRelevant => "NotRelevant",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Labelled rows of equal width.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub feature_count: usize,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

impl Dataset {
    pub fn new(feature_count: usize) -> Self {
        Dataset {
            feature_count,
            rows: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>, label: Label) -> Result<()> {
        if row.len() != self.feature_count {
            return Err(Error::ContractViolation(format!(
                "row has {} values, expected {}",
                row.len(),
                self.feature_count
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::ContractViolation("row has a non-finite value".into()));
        }
        self.rows.push(row);
        self.labels.push(label);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|l| l.is_relevant()).count()
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            feature_count: self.feature_count,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    fn targets(&self) -> Vec<bool> {
        self.labels.iter().map(|l| l.is_relevant()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    DecisionTree,
    RandomForest,
    NaiveBayes,
    AdaBoostStumps,
    AdaBoostForest,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::DecisionTree,
        Algorithm::RandomForest,
        Algorithm::NaiveBayes,
        Algorithm::AdaBoostStumps,
        Algorithm::AdaBoostForest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::DecisionTree => "tree",
            Algorithm::RandomForest => "forest",
            Algorithm::NaiveBayes => "bayes",
            Algorithm::AdaBoostStumps => "adaboost",
            Algorithm::AdaBoostForest => "adaboost-forest",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.as_str()).collect();
                format!("unknown algorithm `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelSpec {
    pub algorithm: Algorithm,
    pub tree_count: usize,
    pub boost_rounds: usize,
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(algorithm: Algorithm, seed: u64) -> Self {
        ModelSpec {
            algorithm,
            tree_count: DEFAULT_TREE_COUNT,
            boost_rounds: DEFAULT_BOOST_ROUNDS,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tree_count == 0 || self.boost_rounds == 0 {
            return Err(Error::ContractViolation(
                "tree count and boosting rounds must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// Trained on single-class data.
    Constant(Label),
    Tree(DecisionTree),
    Forest(RandomForest),
    Bayes(GaussianNb),
    Boost(AdaBoost),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub spec: ModelSpec,
    pub feature_count: usize,
    pub model: Model,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Label,
    /// Estimated probability of `Relevant`.
    pub score: f64,
}

pub fn train(spec: ModelSpec, data: &Dataset) -> Result<TrainedModel> {
    spec.validate()?;
    if data.is_empty() {
        return Err(Error::UnusableTrainingData("the dataset is empty".into()));
    }
    let y = data.targets();
    let positives = data.positives();
    let model = if positives == 0 || positives == data.len() {
        Model::Constant(data.labels[0])
    } else {
        let x = &data.rows;
        match spec.algorithm {
            Algorithm::DecisionTree => Model::Tree(DecisionTree::fit(x, &y)),
            Algorithm::RandomForest => Model::Forest(RandomForest::fit(x, &y, spec.tree_count, spec.seed)),
            Algorithm::NaiveBayes => Model::Bayes(GaussianNb::fit(x, &y)),
            Algorithm::AdaBoostStumps => Model::Boost(AdaBoost::fit_stumps(x, &y, spec.boost_rounds)),
            Algorithm::AdaBoostForest => Model::Boost(AdaBoost::fit_forests(
                x,
                &y,
                spec.boost_rounds,
                spec.tree_count,
                spec.seed,
            )),
        }
    };
    Ok(TrainedModel {
        spec,
        feature_count: data.feature_count,
        model,
    })
}

impl TrainedModel {
    pub fn predict(&self, row: &[f64]) -> Result<Prediction> {
        if row.len() != self.feature_count {
            return Err(Error::ContractViolation(format!(
                "feature vector has {} values, model expects {}",
                row.len(),
                self.feature_count
            )));
        }
        let score = match &self.model {
            Model::Constant(l) => {
                if l.is_relevant() {
                    1.0
                } else {
                    0.0
                }
            }
            Model::Tree(t) => t.score(row),
            Model::Forest(f) => f.score(row),
            Model::Bayes(b) => b.score(row),
            Model::Boost(b) => b.score(row),
        };
        Ok(Prediction {
            label: Label::from_bool(score >= 0.5),
            score,
        })
    }
}

/// Seed of the `index`-th member of an ensemble seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mean accuracy over `k` row folds after a seeded shuffle.
pub fn cross_validate(spec: ModelSpec, data: &Dataset, k: usize, seed: u64) -> Result<f64> {
    if k < 2 || data.len() < k {
        return Err(Error::ContractViolation(format!(
            "cannot split {} rows into {k} folds",
            data.len()
        )));
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut correct = 0usize;
    for fold in 0..k {
        let (test, train_idx): (Vec<(usize, usize)>, Vec<(usize, usize)>) =
            order.iter().copied().enumerate().partition(|(pos, _)| pos % k == fold);
        let train_rows: Vec<usize> = train_idx.into_iter().map(|(_, i)| i).collect();
        let model = train(spec, &data.subset(&train_rows))?;
        for (_, i) in test {
            if model.predict(&data.rows[i])?.label == data.labels[i] {
                correct += 1;
            }
        }
    }
    Ok(correct as f64 / data.len() as f64)
}
