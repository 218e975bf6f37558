//! Change dependency graphs: edited entities linked by access and containment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::binding::{EdgeLabel, ProjectIndex};
use crate::distill::{EditKind, EntityEdit};
use crate::entity::EntityKind;

/// One weakly connected component of a commit's edited entities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cdg {
    /// Sorted by (signature, edit kind); a node's id is its index.
    pub nodes: Vec<EntityEdit>,
    /// (from, to, label), sorted; `from` depends on `to`.
    pub edges: Vec<(usize, usize, EdgeLabel)>,
}

impl Cdg {
    pub fn node_kinds(&self) -> Vec<EditKind> {
        self.nodes.iter().map(|n| n.kind).collect()
    }

    /// `node <id> <kind> <sig>` and `edge <from> <to> <label>` lines.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "node {i} {} {}", n.kind, n.signature());
        }
        for (a, b, l) in &self.edges {
            let _ = writeln!(out, "edge {a} {b} {l}");
        }
        out
    }

    pub fn find(&self, kind: EditKind, signature: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.kind == kind && n.signature() == signature)
    }

    pub fn has_edge(&self, from: usize, to: usize, label: EdgeLabel) -> bool {
        self.edges.contains(&(from, to, label))
    }
}

/// Exports several graphs, separated by blank lines.
pub fn export_all(cdgs: &[Cdg]) -> String {
    cdgs.iter().map(Cdg::export).collect::<Vec<_>>().join("\n")
}

fn covered_by(a: &EntityEdit, b: &EntityEdit) -> bool {
    let versions = match (&a.new, &b.new, &a.old, &b.old) {
        (Some(p), Some(q), _, _) | (_, _, Some(p), Some(q)) => Some((p, q)),
        _ => None,
    };
    versions.is_some_and(|(p, q)| {
        p.module_path == q.module_path && q.char_range.contains(p.char_range) && p.char_range != q.char_range
    })
}

/// Builds the graphs for one commit's edits.
pub fn build_cdgs(edits: &[EntityEdit], index: &ProjectIndex) -> Vec<Cdg> {
    let mut order: Vec<usize> = (0..edits.len()).collect();
    order.sort_by(|&a, &b| (edits[a].signature(), edits[a].kind).cmp(&(edits[b].signature(), edits[b].kind)));
    let nodes: Vec<&EntityEdit> = order.iter().map(|&i| &edits[i]).collect();

    let mut by_sig: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if n.kind.entity_kind() != EntityKind::Block {
            by_sig.entry(n.signature()).or_default().push(i);
        }
    }

    let mut edges: BTreeSet<(usize, usize, EdgeLabel)> = BTreeSet::new();
    let mut linked: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, n) in nodes.iter().enumerate() {
        for (sig, label) in index.resolve_references(n.current()) {
            for &j in by_sig.get(sig.as_str()).into_iter().flatten() {
                if i != j {
                    edges.insert((i, j, label));
                    linked.insert((i.min(j), i.max(j)));
                }
            }
        }
    }
    for (i, a) in nodes.iter().enumerate() {
        for (j, b) in nodes.iter().enumerate() {
            if i != j && !linked.contains(&(i.min(j), i.max(j))) && covered_by(a, b) {
                edges.insert((i, j, EdgeLabel::Containment));
            }
        }
    }

    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b, _) in &edges {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..nodes.len() {
        let r = root(&mut parent, i);
        comps.entry(r).or_default().push(i);
    }
    let mut out = Vec::new();
    for members in comps.values() {
        if members.len() < 2 {
            continue;
        }
        let local: BTreeMap<usize, usize> = members.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let cdg_edges = edges
            .iter()
            .filter(|(a, _, _)| local.contains_key(a))
            .map(|&(a, b, l)| (local[&a], local[&b], l))
            .collect();
        out.push(Cdg {
            nodes: members.iter().map(|&g| nodes[g].clone()).collect(),
            edges: cdg_edges,
        });
    }
    out
}
