//! Which entities were edited in which commit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HistoryIndex {
    /// Signature to the ordinals of commits editing it.
    pub edits_by_signature: BTreeMap<String, BTreeSet<usize>>,
    /// Ordinal to the signatures it edited.
    pub entities_by_commit: BTreeMap<usize, BTreeSet<String>>,
}

impl HistoryIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records every signature edited by commit `ordinal`.
    pub fn record<I, S>(&mut self, ordinal: usize, signatures: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let entry = self.entities_by_commit.entry(ordinal).or_default();
        for s in signatures {
            let s = s.into();
            self.edits_by_signature.entry(s.clone()).or_default().insert(ordinal);
            entry.insert(s);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entities_by_commit.is_empty()
    }

    /// Commits before `before` editing both `a` and `b`.
    pub fn co_change_count(&self, a: &str, b: &str, before: usize) -> usize {
        match (self.edits_by_signature.get(a), self.edits_by_signature.get(b)) {
            (Some(x), Some(y)) => x.range(..before).filter(|o| y.contains(o)).count(),
            _ => 0,
        }
    }

    /// The commits with ordinal below `before`, as edited-signature sets.
    pub fn transactions_before(&self, before: usize) -> impl Iterator<Item = (usize, &BTreeSet<String>)> {
        self.entities_by_commit.range(..before).map(|(o, s)| (*o, s))
    }

    /// `signature<TAB>ordinal` per pair, sorted by signature then ordinal.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (sig, ords) in &self.edits_by_signature {
            for o in ords {
                let _ = writeln!(out, "{sig}\t{o}");
            }
        }
        out
    }
}
