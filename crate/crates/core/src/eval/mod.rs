//! Prediction tasks, cross-validation folds and effectiveness metrics.

pub mod pipeline;
pub mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commit::CommitAnalysis;
use crate::distill::EntityEdit;
use crate::entity::Entity;
use crate::error::Result;
use crate::features::{extract_features, FeatureContext, FeatureRow, PeerContext};
use crate::history::HistoryIndex;
use crate::ml::TrainedModel;
use crate::pattern::{PatternId, PatternMatch};

pub use pipeline::{evaluate_project, EvalConfig, EvalRow};
pub use report::{report_csv, report_text};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tool {
    CoRec,
    CoRecUnified,
    Rose,
    Tar,
}

impl Tool {
    pub const ALL: [Tool; 4] = [Tool::CoRec, Tool::CoRecUnified, Tool::Rose, Tool::Tar];

    pub fn as_str(self) -> &'static str {
        match self {
            Tool::CoRec => "CoRec",
            Tool::CoRecUnified => "CoRec_u",
            Tool::Rose => "ROSE",
            Tool::Tar => "TAR",
        }
    }
}

impl fmt::Display for Tool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tool {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "corec" => Ok(Tool::CoRec),
            "corec_u" | "corec-u" | "unified" => Ok(Tool::CoRecUnified),
            "rose" => Ok(Tool::Rose),
            "tar" => Ok(Tool::Tar),
            _ => Err(format!("unknown tool `{s}` (expected corec, corec_u, rose or tar)")),
        }
    }
}

/// One changed function given to a recommender, the others hidden.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionTask {
    pub ordinal: usize,
    pub pattern: PatternId,
    pub em: EntityEdit,
    pub given: EntityEdit,
    pub ground_truth: BTreeSet<String>,
    /// Hidden changed functions in their old version, then the unchanged
    /// functions, by signature.
    pub candidates: Vec<Entity>,
}

impl PredictionTask {
    pub fn candidate_pool(&self) -> BTreeSet<String> {
        self.candidates.iter().map(|e| e.signature.clone()).collect()
    }
}

/// Matches with at least two changed functions, the only ones usable for
/// training and testing.
pub fn usable(m: &PatternMatch) -> bool {
    m.cf_set.len() >= 2
}

/// One task per changed function of the match.
pub fn build_tasks(m: &PatternMatch, ordinal: usize) -> Vec<PredictionTask> {
    if !usable(m) {
        return Vec::new();
    }
    (0..m.cf_set.len())
        .map(|i| {
            let hidden: Vec<&EntityEdit> = m.cf_set.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, e)| e).collect();
            let mut candidates: Vec<Entity> = hidden
                .iter()
                .map(|e| e.old.clone().unwrap_or_else(|| e.current().clone()))
                .chain(m.uf_set.iter().cloned())
                .collect();
            candidates.sort_by(|a, b| a.signature.cmp(&b.signature));
            candidates.dedup_by(|a, b| a.signature == b.signature);
            PredictionTask {
                ordinal,
                pattern: m.pattern,
                em: m.em.clone(),
                given: m.cf_set[i].clone(),
                ground_truth: hidden.iter().map(|e| e.signature().to_string()).collect(),
                candidates,
            }
        })
        .collect()
}

/// Test parts of a `k`-fold split of `commits` after a seeded shuffle; the
/// first `n mod k` parts hold one extra commit. Fewer commits than `k`
/// gives one part per commit.
pub fn kfold_split(commits: &[usize], k: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut order = commits.to_vec();
    order.sort_unstable();
    order.dedup();
    let n = order.len();
    if n == 0 || k == 0 {
        return Vec::new();
    }
    let k = if n < k {
        log::warn!("only {n} commits for {k} folds; using {n} folds");
        n
    } else {
        k
    };
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (n / k, n % k);
    let mut parts = Vec::with_capacity(k);
    let mut at = 0;
    for i in 0..k {
        let size = base + usize::from(i < extra);
        let mut part = order[at..at + size].to_vec();
        part.sort_unstable();
        parts.push(part);
        at += size;
    }
    parts
}

/// Feature vectors of function pairs around one match of a commit.
pub struct MatchFeatures<'a> {
    em: &'a EntityEdit,
    peers: PeerContext,
    analysis: &'a CommitAnalysis,
    history: &'a HistoryIndex,
}

impl<'a> MatchFeatures<'a> {
    pub fn new(em: &'a EntityEdit, analysis: &'a CommitAnalysis, history: &'a HistoryIndex) -> Self {
        MatchFeatures {
            em,
            peers: PeerContext::new(em.current(), &analysis.new_sets),
            analysis,
            history,
        }
    }

    pub fn pair(&self, f1: &Entity, f2: &Entity) -> FeatureRow {
        let ctx = FeatureContext {
            em: self.em.current(),
            em_kind: self.em.kind,
            peers: &self.peers,
            index: &self.analysis.index,
            history: self.history,
            ordinal: self.analysis.ordinal,
        };
        FeatureRow {
            ordinal: self.analysis.ordinal,
            f1: f1.signature.clone(),
            f2: f2.signature.clone(),
            features: extract_features(f1, f2, &ctx),
            relevant: false,
        }
    }
}

/// Training samples of a match: every ordered pair of changed functions is
/// relevant, every changed/unchanged pair in either order is not.
pub fn training_rows(m: &PatternMatch, analysis: &CommitAnalysis, history: &HistoryIndex) -> Vec<FeatureRow> {
    if !usable(m) {
        return Vec::new();
    }
    let fx = MatchFeatures::new(&m.em, analysis, history);
    let mut rows = Vec::new();
    for (i, a) in m.cf_set.iter().enumerate() {
        for (j, b) in m.cf_set.iter().enumerate() {
            if i != j {
                let mut r = fx.pair(a.current(), b.current());
                r.relevant = true;
                rows.push(r);
            }
        }
    }
    for cf in &m.cf_set {
        for uf in &m.uf_set {
            rows.push(fx.pair(cf.current(), uf));
            rows.push(fx.pair(uf, cf.current()));
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub signature: String,
    pub score: f64,
}

/// Highest score over both orders of every (known, candidate) pair;
/// a candidate is recommended when any order is classified relevant.
/// Sorted by descending score, then signature.
pub fn recommend_pairs(
    model: &TrainedModel,
    fx: &MatchFeatures<'_>,
    known: &[&Entity],
    candidates: &[Entity],
) -> Result<Vec<Recommendation>> {
    let mut out = Vec::new();
    for u in candidates {
        let mut best: Option<f64> = None;
        for k in known {
            for (a, b) in [(*k, u), (u, *k)] {
                let p = model.predict(&fx.pair(a, b).features.to_array())?;
                if p.label.is_relevant() {
                    best = Some(best.map_or(p.score, |s: f64| s.max(p.score)));
                }
            }
        }
        if let Some(score) = best {
            out.push(Recommendation {
                signature: u.signature.clone(),
                score,
            });
        }
    }
    out.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.signature.cmp(&b.signature)));
    Ok(out)
}

/// CoRec's recommendation for one task.
pub fn recommend_corec(
    model: &TrainedModel,
    task: &PredictionTask,
    analysis: &CommitAnalysis,
    history: &HistoryIndex,
) -> Result<Vec<Recommendation>> {
    let fx = MatchFeatures::new(&task.em, analysis, history);
    recommend_pairs(model, &fx, &[task.given.current()], &task.candidates)
}

/// Recommendation counts of one task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TaskOutcome {
    pub recommended: usize,
    pub correct: usize,
    pub expected: usize,
}

impl TaskOutcome {
    pub fn of(recommended: &BTreeSet<String>, ground_truth: &BTreeSet<String>) -> Self {
        TaskOutcome {
            recommended: recommended.len(),
            correct: recommended.intersection(ground_truth).count(),
            expected: ground_truth.len(),
        }
    }

    pub fn covered(&self) -> bool {
        self.recommended > 0
    }
}

/// Percentages; precision, recall and F1 are absent when nothing is covered.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Metrics {
    pub coverage: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub task_count: usize,
}

pub fn f1_of(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

pub fn score(outcomes: &[TaskOutcome]) -> Metrics {
    let total = outcomes.len();
    let covered: Vec<&TaskOutcome> = outcomes.iter().filter(|o| o.covered()).collect();
    if covered.is_empty() {
        return Metrics {
            task_count: total,
            ..Metrics::default()
        };
    }
    let recommended: usize = covered.iter().map(|o| o.recommended).sum();
    let correct: usize = covered.iter().map(|o| o.correct).sum();
    let expected: usize = covered.iter().map(|o| o.expected).sum();
    let precision = 100.0 * correct as f64 / recommended as f64;
    let recall = if expected == 0 {
        0.0
    } else {
        100.0 * correct as f64 / expected as f64
    };
    Metrics {
        coverage: 100.0 * covered.len() as f64 / total as f64,
        precision: Some(precision),
        recall: Some(recall),
        f1: Some(f1_of(precision, recall)),
        task_count: total,
    }
}

/// Task-weighted mean of each field. A field absent for some projects is
/// averaged over the projects having it. `None` when there are no tasks.
pub fn weighted_average(per_project: &[Metrics]) -> Option<Metrics> {
    let total: usize = per_project.iter().map(|m| m.task_count).sum();
    if total == 0 {
        return None;
    }
    let field = |get: &dyn Fn(&Metrics) -> Option<f64>| {
        let (sum, weight) = per_project
            .iter()
            .filter_map(|m| get(m).map(|v| (v * m.task_count as f64, m.task_count)))
            .fold((0.0, 0usize), |(s, w), (v, n)| (s + v, w + n));
        (weight > 0).then(|| sum / weight as f64)
    };
    Some(Metrics {
        coverage: field(&|m| Some(m.coverage)).unwrap_or(0.0),
        precision: field(&|m| m.precision),
        recall: field(&|m| m.recall),
        f1: field(&|m| m.f1),
        task_count: total,
    })
}

/// Nearest integer, halves rounded up.
pub fn round_half_up(x: f64) -> i64 {
    (x + 0.5 + 1e-9).floor() as i64
}

/// Tasks of the usable matches of `pattern`, per commit ordinal.
pub fn tasks_by_commit(
    analyses: &BTreeMap<usize, CommitAnalysis>,
    pattern: PatternId,
) -> BTreeMap<usize, Vec<PredictionTask>> {
    let mut out = BTreeMap::new();
    for (&ordinal, a) in analyses {
        let tasks: Vec<PredictionTask> = a
            .pattern_matches()
            .iter()
            .filter(|m| m.pattern == pattern)
            .flat_map(|m| build_tasks(m, ordinal))
            .collect();
        if !tasks.is_empty() {
            out.insert(ordinal, tasks);
        }
    }
    out
}
