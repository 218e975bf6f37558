//! Cross-validated comparison of the recommenders on one mined project.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::{recommend_corec, score, tasks_by_commit, training_rows, Metrics, PredictionTask, TaskOutcome, Tool};
use crate::baselines::{derive_tar, mine_rose_before, recommend_rules, AssociationRule};
use crate::error::{Error, Result};
use crate::features::FeatureRow;
use crate::ml::{derive_seed, train, Dataset, Label, ModelSpec, TrainedModel};
use crate::pattern::PatternId;
use crate::repo::MinedRepository;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub spec: ModelSpec,
    pub folds: usize,
    pub patterns: Vec<PatternId>,
    pub tools: Vec<Tool>,
    pub min_support: usize,
    pub min_confidence: f64,
}

impl EvalConfig {
    pub fn new(spec: ModelSpec) -> Self {
        EvalConfig {
            spec,
            folds: 5,
            patterns: PatternId::RECOMMENDABLE.to_vec(),
            tools: Tool::ALL.to_vec(),
            min_support: crate::baselines::DEFAULT_MIN_SUPPORT,
            min_confidence: crate::baselines::DEFAULT_MIN_CONFIDENCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub pattern: PatternId,
    pub project: String,
    pub tool: Tool,
    pub metrics: Metrics,
}

/// Training samples of every keyword commit, by ordinal and pattern.
pub fn feature_rows(mined: &MinedRepository, patterns: &[PatternId]) -> BTreeMap<usize, BTreeMap<PatternId, Vec<FeatureRow>>> {
    mined
        .analyses
        .par_iter()
        .map(|(&ordinal, a)| {
            let mut by_pattern: BTreeMap<PatternId, Vec<FeatureRow>> = BTreeMap::new();
            for m in a.pattern_matches().iter().filter(|m| patterns.contains(&m.pattern)) {
                let rows = training_rows(m, a, &mined.history);
                if !rows.is_empty() {
                    by_pattern.entry(m.pattern).or_default().extend(rows);
                }
            }
            (ordinal, by_pattern)
        })
        .filter(|(_, rows)| !rows.is_empty())
        .collect()
}

/// Rows of `patterns` from the commits accepted by `keep`.
pub fn dataset_of(
    rows: &BTreeMap<usize, BTreeMap<PatternId, Vec<FeatureRow>>>,
    patterns: &[PatternId],
    keep: impl Fn(usize) -> bool,
) -> Result<Dataset> {
    let mut d = Dataset::new(crate::features::FEATURE_COUNT);
    for (&ordinal, by_pattern) in rows {
        if !keep(ordinal) {
            continue;
        }
        for p in patterns {
            for r in by_pattern.get(p).into_iter().flatten() {
                d.push(r.features.to_array().to_vec(), Label::from_bool(r.relevant))?;
            }
        }
    }
    Ok(d)
}

fn train_or_skip(spec: ModelSpec, data: &Dataset, what: &str) -> Result<Option<TrainedModel>> {
    match train(spec, data) {
        Ok(m) => Ok(Some(m)),
        Err(Error::UnusableTrainingData(msg)) => {
            log::warn!("{what}: {msg}; its tasks stay uncovered");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn corec_outcomes(
    mined: &MinedRepository,
    model: Option<&TrainedModel>,
    tasks: &[&PredictionTask],
) -> Result<Vec<TaskOutcome>> {
    tasks
        .iter()
        .map(|t| {
            let recommended: BTreeSet<String> = match model {
                Some(m) => recommend_corec(m, t, &mined.analyses[&t.ordinal], &mined.history)?
                    .into_iter()
                    .map(|r| r.signature)
                    .collect(),
                None => BTreeSet::new(),
            };
            Ok(TaskOutcome::of(&recommended, &t.ground_truth))
        })
        .collect()
}

/// Per-pattern metrics of every configured tool on one project.
pub fn evaluate_project(mined: &MinedRepository, cfg: &EvalConfig) -> Result<Vec<EvalRow>> {
    let wants = |t: Tool| cfg.tools.contains(&t);
    let rows = if wants(Tool::CoRec) || wants(Tool::CoRecUnified) {
        feature_rows(mined, &cfg.patterns)
    } else {
        BTreeMap::new()
    };
    let mut rule_cache: BTreeMap<usize, (Vec<AssociationRule>, Vec<AssociationRule>)> = BTreeMap::new();
    if wants(Tool::Rose) || wants(Tool::Tar) {
        let ordinals: Vec<usize> = mined.analyses.keys().copied().collect();
        rule_cache = ordinals
            .par_iter()
            .map(|&o| {
                let rose = mine_rose_before(&mined.history, o, cfg.min_support, cfg.min_confidence);
                let tar = derive_tar(&rose, cfg.min_support, cfg.min_confidence);
                (o, (rose, tar))
            })
            .collect();
    }
    let mut out = Vec::new();
    for (pi, &pattern) in cfg.patterns.iter().enumerate() {
        let by_commit = tasks_by_commit(&mined.analyses, pattern);
        let commits: Vec<usize> = by_commit.keys().copied().collect();
        let mut outcomes: BTreeMap<Tool, Vec<TaskOutcome>> = BTreeMap::new();
        if wants(Tool::CoRec) || wants(Tool::CoRecUnified) {
            let folds = super::kfold_split(&commits, cfg.folds, derive_seed(cfg.spec.seed, pi as u64));
            let per_fold: Vec<Result<Vec<(Tool, Vec<TaskOutcome>)>>> = folds
                .par_iter()
                .enumerate()
                .map(|(fi, test)| {
                    let test_set: BTreeSet<usize> = test.iter().copied().collect();
                    let tasks: Vec<&PredictionTask> = test.iter().flat_map(|o| &by_commit[o]).collect();
                    let mut spec = cfg.spec;
                    spec.seed = derive_seed(cfg.spec.seed, 1000 * (pi as u64 + 1) + fi as u64);
                    let mut got = Vec::new();
                    if wants(Tool::CoRec) {
                        let data = dataset_of(&rows, &[pattern], |o| !test_set.contains(&o))?;
                        let model = train_or_skip(spec, &data, &format!("{} {pattern} fold {fi}", mined.name))?;
                        got.push((Tool::CoRec, corec_outcomes(mined, model.as_ref(), &tasks)?));
                    }
                    if wants(Tool::CoRecUnified) {
                        let data = dataset_of(&rows, &cfg.patterns, |o| !test_set.contains(&o))?;
                        let model = train_or_skip(spec, &data, &format!("{} unified fold {fi}", mined.name))?;
                        got.push((Tool::CoRecUnified, corec_outcomes(mined, model.as_ref(), &tasks)?));
                    }
                    Ok(got)
                })
                .collect();
            for fold in per_fold {
                for (tool, o) in fold? {
                    outcomes.entry(tool).or_default().extend(o);
                }
            }
        }
        for tool in [Tool::Rose, Tool::Tar].into_iter().filter(|t| wants(*t)) {
            let o = by_commit
                .values()
                .flatten()
                .map(|t| {
                    let (rose, tar) = &rule_cache[&t.ordinal];
                    let rules = if tool == Tool::Rose { rose } else { tar };
                    let known = BTreeSet::from([t.em.signature().to_string(), t.given.signature().to_string()]);
                    TaskOutcome::of(&recommend_rules(rules, &known, &t.candidate_pool()), &t.ground_truth)
                })
                .collect();
            outcomes.insert(tool, o);
        }
        for &tool in Tool::ALL.iter().filter(|t| wants(**t)) {
            out.push(EvalRow {
                pattern,
                project: mined.name.clone(),
                tool,
                metrics: score(outcomes.get(&tool).map(Vec::as_slice).unwrap_or(&[])),
            });
        }
    }
    Ok(out)
}
