//! Detection of the star-shaped patterns that seed recommendation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::graph::PatternGraph;
use crate::binding::EdgeLabel;
use crate::cdg::Cdg;
use crate::distill::{EditKind, EntityEdit};
use crate::entity::{Entity, EntityKind, EntitySet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternId {
    /// Changed callers of a changed function.
    P1,
    /// Changed callers of an added function.
    P2,
    /// Changed accessors of an added variable.
    P3,
    /// Added accessors of an added variable.
    P4,
    /// Changed blocks calling a changed function.
    P5,
}

impl PatternId {
    pub const ALL: [PatternId; 5] = [PatternId::P1, PatternId::P2, PatternId::P3, PatternId::P4, PatternId::P5];
    /// Patterns that drive recommendation.
    pub const RECOMMENDABLE: [PatternId; 3] = [PatternId::P1, PatternId::P2, PatternId::P3];

    /// (dependent kind, label, depended-upon kind).
    pub fn shape(self) -> (EditKind, EdgeLabel, EditKind) {
        match self {
            PatternId::P1 => (EditKind::CF, EdgeLabel::F, EditKind::CF),
            PatternId::P2 => (EditKind::CF, EdgeLabel::F, EditKind::AF),
            PatternId::P3 => (EditKind::CF, EdgeLabel::V, EditKind::AV),
            PatternId::P4 => (EditKind::AF, EdgeLabel::V, EditKind::AV),
            PatternId::P5 => (EditKind::CB, EdgeLabel::F, EditKind::CF),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PatternId::P1 => "P1",
            PatternId::P2 => "P2",
            PatternId::P3 => "P3",
            PatternId::P4 => "P4",
            PatternId::P5 => "P5",
        }
    }

    /// `*CF-f->AF` style notation.
    pub fn notation(self) -> String {
        let (from, label, to) = self.shape();
        format!("*{from}-{label}->{to}")
    }

    /// The pattern whose star shape `g` is: one hub and at least one spoke,
    /// every spoke having exactly the pattern's edge into the hub.
    pub fn classify(g: &PatternGraph) -> Option<PatternId> {
        PatternId::ALL.into_iter().find(|p| {
            let (from, label, to) = p.shape();
            (0..g.len()).any(|hub| {
                g.nodes[hub] == to
                    && g.len() >= 2
                    && g.edges.len() == g.len() - 1
                    && g.edges.iter().all(|&(a, b, l)| b == hub && a != hub && l == label && g.nodes[a] == from)
            })
        })
    }
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatternId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PatternId::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown pattern `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatch {
    pub pattern: PatternId,
    /// The depended-upon entity.
    pub em: EntityEdit,
    /// Every dependent edit with the pattern's edge into `em`, sorted by signature.
    pub cf_set: Vec<EntityEdit>,
    /// Functions of the commit's edited files that were not changed.
    pub uf_set: Vec<Entity>,
}

/// Functions of the edited files' new versions not touched by any edit.
pub fn unchanged_functions(edits: &[EntityEdit], new_sets: &[EntitySet]) -> Vec<Entity> {
    let touched: BTreeSet<&str> = edits
        .iter()
        .filter(|e| e.kind.entity_kind() == EntityKind::Function)
        .map(EntityEdit::signature)
        .collect();
    let mut out: Vec<Entity> = new_sets
        .iter()
        .flat_map(|s| s.of_kind(EntityKind::Function))
        .filter(|f| !touched.contains(f.signature.as_str()))
        .cloned()
        .collect();
    out.sort_by(|a, b| a.signature.cmp(&b.signature));
    out.dedup_by(|a, b| a.signature == b.signature);
    out
}

/// One match per hub node of each pattern shape found in the commit's graphs.
pub fn detect_patterns(cdgs: &[Cdg], edits: &[EntityEdit], new_sets: &[EntitySet]) -> Vec<PatternMatch> {
    let uf_set = unchanged_functions(edits, new_sets);
    let mut out = Vec::new();
    for g in cdgs {
        for (hub, node) in g.nodes.iter().enumerate() {
            for p in PatternId::ALL {
                let (from, label, to) = p.shape();
                if node.kind != to {
                    continue;
                }
                let cf_set: Vec<EntityEdit> = g
                    .edges
                    .iter()
                    .filter(|&&(a, b, l)| b == hub && l == label && g.nodes[a].kind == from)
                    .map(|&(a, _, _)| g.nodes[a].clone())
                    .collect();
                if !cf_set.is_empty() {
                    out.push(PatternMatch {
                        pattern: p,
                        em: node.clone(),
                        cf_set,
                        uf_set: uf_set.clone(),
                    });
                }
            }
        }
    }
    out
}
