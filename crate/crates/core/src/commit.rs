//! Per-commit analysis: entities, edits, dependency graphs and pattern matches.

use std::collections::BTreeSet;
use std::fmt;

use crate::binding::ProjectIndex;
use crate::cdg::{build_cdgs, Cdg};
use crate::distill::{diff_entity_sets, EntityEdit};
use crate::entity::{extract_source, module_path_of, EntityKind, EntitySet};
use crate::pattern::{detect_patterns, PatternGraph, PatternMatch};

/// Old and new contents of one edited `.js` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilePair {
    pub path: String,
    /// `None` when the file was added.
    pub old_source: Option<String>,
    /// `None` when the file was deleted.
    pub new_source: Option<String>,
}

impl FilePair {
    pub fn modified(path: &str, old: &str, new: &str) -> Self {
        FilePair {
            path: path.to_string(),
            old_source: Some(old.to_string()),
            new_source: Some(new.to_string()),
        }
    }

    pub fn added(path: &str, new: &str) -> Self {
        FilePair {
            path: path.to_string(),
            old_source: None,
            new_source: Some(new.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseFailure {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct CommitAnalysis {
    pub ordinal: usize,
    /// One set per analysed file, in path order; empty for added files.
    pub old_sets: Vec<EntitySet>,
    /// One set per analysed file, in path order; empty for deleted files.
    pub new_sets: Vec<EntitySet>,
    pub edits: Vec<EntityEdit>,
    pub index: ProjectIndex,
    pub cdgs: Vec<Cdg>,
    /// Files skipped because either version failed to parse.
    pub parse_failures: Vec<ParseFailure>,
}

fn extract_side(source: Option<&str>, module: &str) -> Result<EntitySet, String> {
    match source {
        Some(src) => extract_source(src, module).map_err(|e| e.to_string()),
        None => Ok(EntitySet {
            module_path: module.to_string(),
            ..EntitySet::default()
        }),
    }
}

pub fn analyze_commit(ordinal: usize, pairs: &[FilePair]) -> CommitAnalysis {
    let mut sorted: Vec<&FilePair> = pairs.iter().collect();
    sorted.sort_by(|a, b| a.path.cmp(&b.path));
    let mut old_sets = Vec::new();
    let mut new_sets = Vec::new();
    let mut parse_failures = Vec::new();
    for pair in sorted {
        let module = module_path_of(&pair.path);
        let old = extract_side(pair.old_source.as_deref(), &module);
        let new = extract_side(pair.new_source.as_deref(), &module);
        match (old, new) {
            (Ok(o), Ok(n)) => {
                old_sets.push(o);
                new_sets.push(n);
            }
            (Err(message), _) | (_, Err(message)) => {
                log::warn!("commit {ordinal}: skipping {}: {message}", pair.path);
                parse_failures.push(ParseFailure {
                    path: pair.path.clone(),
                    message,
                });
            }
        }
    }
    let edits: Vec<EntityEdit> = old_sets
        .iter()
        .zip(&new_sets)
        .flat_map(|(o, n)| diff_entity_sets(o, n))
        .collect();
    let index = ProjectIndex::build(new_sets.iter().chain(&old_sets));
    let cdgs = build_cdgs(&edits, &index);
    CommitAnalysis {
        ordinal,
        old_sets,
        new_sets,
        edits,
        index,
        cdgs,
        parse_failures,
    }
}

impl CommitAnalysis {
    /// Signatures of edited classes, functions and variables.
    pub fn edited_signatures(&self) -> BTreeSet<String> {
        self.edits
            .iter()
            .filter(|e| e.kind.entity_kind() != EntityKind::Block)
            .map(|e| e.signature().to_string())
            .collect()
    }

    pub fn pattern_graphs(&self) -> Vec<PatternGraph> {
        self.cdgs.iter().map(PatternGraph::from_cdg).collect()
    }

    pub fn pattern_matches(&self) -> Vec<PatternMatch> {
        detect_patterns(&self.cdgs, &self.edits, &self.new_sets)
    }

    /// Entity-set dumps of the new versions, one file after another.
    pub fn entity_dump(&self) -> String {
        self.new_sets
            .iter()
            .map(|s| format!("# {}\n{}", s.module_path, s.dump()))
            .collect()
    }

    /// `KIND<TAB>signature` per edit.
    pub fn edit_dump(&self) -> String {
        self.edits
            .iter()
            .map(|e| format!("{}\t{}\n", e.kind, e.signature()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distill::EditKind;
    use crate::fixtures::BUILDMESSAGE_COMMIT;

    #[test]
    fn two_file_fixture() {
        let pairs: Vec<FilePair> = BUILDMESSAGE_COMMIT
            .iter()
            .map(|(p, o, n)| FilePair::modified(p, o, n))
            .collect();
        let a = analyze_commit(0, &pairs);
        let kinds: BTreeSet<EditKind> = a.edits.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, BTreeSet::from([EditKind::AF, EditKind::CF, EditKind::CB]));
        assert_eq!(a.cdgs.len(), 1);
        assert!(a.parse_failures.is_empty());
    }

    #[test]
    fn parse_failure_skips_only_that_file() {
        let pairs = vec![
            FilePair::modified("a.js", "function f() {}", "function f() { g(); }\nfunction g() {}"),
            FilePair::modified("b.js", "function h() {}", "function h( {"),
        ];
        let a = analyze_commit(3, &pairs);
        assert_eq!(a.parse_failures.len(), 1);
        assert_eq!(a.parse_failures[0].path, "b.js");
        let alone = analyze_commit(3, &pairs[..1]);
        assert_eq!(a.edits, alone.edits);
    }

    #[test]
    fn added_file_gives_added_entities() {
        let a = analyze_commit(0, &[FilePair::added("lib/x.js", "var k = 1;\nfunction f() { return k; }")]);
        let kinds: Vec<EditKind> = a.edits.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, [EditKind::AF, EditKind::AV]);
        assert_eq!(a.edited_signatures(), BTreeSet::from(["lib.x.f".to_string(), "lib.x.k".to_string()]));
    }
}
