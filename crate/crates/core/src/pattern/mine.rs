//! Frequency mining of patterns shared by graphs of different commits.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::graph::PatternGraph;
use super::mcs::largest_common_subgraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurringChangePattern {
    /// Canonically numbered.
    pub pattern: PatternGraph,
    pub key: String,
    /// Graphs in which the pattern is counted.
    pub frequency: usize,
    /// Distinct commits contributing to `frequency`.
    pub commit_count: usize,
}

/// Candidate patterns: largest common subgraphs of every pair of graphs from
/// different commits, keyed canonically.
pub fn candidate_patterns(graphs_by_commit: &[Vec<PatternGraph>]) -> BTreeMap<String, PatternGraph> {
    let flat: Vec<(usize, &PatternGraph)> = graphs_by_commit
        .iter()
        .enumerate()
        .flat_map(|(c, gs)| gs.iter().map(move |g| (c, g)))
        .collect();
    let found: Vec<PatternGraph> = (0..flat.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let (ci, gi) = flat[i];
            flat[i + 1..]
                .iter()
                .filter(move |(cj, _)| *cj != ci)
                .filter_map(move |(_, gj)| largest_common_subgraph(gi, gj))
                .collect::<Vec<_>>()
        })
        .collect();
    found.into_iter().map(|g| (g.key(), g)).collect()
}

/// Per candidate: (frequency, commit count). Within one graph, a matching
/// candidate is not counted when a larger matching candidate contains it.
pub fn count_matches(candidates: &[PatternGraph], graphs_by_commit: &[Vec<PatternGraph>]) -> Vec<(usize, usize)> {
    let per_graph: Vec<(usize, Vec<usize>)> = graphs_by_commit
        .par_iter()
        .enumerate()
        .flat_map_iter(|(c, gs)| {
            gs.iter().map(move |g| {
                let matching: Vec<usize> = (0..candidates.len()).filter(|&k| candidates[k].embeds_in(g)).collect();
                let kept = matching
                    .iter()
                    .copied()
                    .filter(|&k| {
                        !matching
                            .iter()
                            .any(|&o| o != k && candidates[k].is_proper_subpattern_of(&candidates[o]))
                    })
                    .collect();
                (c, kept)
            })
        })
        .collect();
    let mut freq = vec![0usize; candidates.len()];
    let mut commits: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); candidates.len()];
    for (c, kept) in per_graph {
        for k in kept {
            freq[k] += 1;
            commits[k].insert(c);
        }
    }
    freq.into_iter().zip(commits).map(|(f, c)| (f, c.len())).collect()
}

/// Patterns shared by at least two commits, most widespread first.
pub fn mine_rcps(graphs_by_commit: &[Vec<PatternGraph>]) -> Vec<RecurringChangePattern> {
    let candidates: Vec<PatternGraph> = candidate_patterns(graphs_by_commit).into_values().collect();
    let counts = count_matches(&candidates, graphs_by_commit);
    let mut out: Vec<RecurringChangePattern> = candidates
        .into_iter()
        .zip(counts)
        .filter(|(_, (_, commits))| *commits >= 2)
        .map(|(g, (frequency, commit_count))| RecurringChangePattern {
            key: g.key(),
            pattern: g,
            frequency,
            commit_count,
        })
        .collect();
    out.sort_by(|a, b| {
        b.commit_count
            .cmp(&a.commit_count)
            .then(b.frequency.cmp(&a.frequency))
            .then(a.key.cmp(&b.key))
    });
    out
}

/// `key<TAB>frequency<TAB>commit_count` per pattern.
pub fn pattern_report(rcps: &[RecurringChangePattern]) -> String {
    rcps.iter()
        .map(|r| format!("{}\t{}\t{}\n", r.key, r.frequency, r.commit_count))
        .collect()
}
