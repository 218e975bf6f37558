//! Maximum common connected subgraph of two labelled graphs.

use std::collections::HashSet;

use super::graph::PatternGraph;
use crate::binding::EdgeLabel;

/// Search states explored before giving up on proving optimality.
pub const SEARCH_BUDGET: usize = 500_000;

struct Search<'g> {
    g1: &'g PatternGraph,
    g2: &'g PatternGraph,
    /// Incident edges per node: (other end, label, outgoing).
    adj1: Vec<Vec<(usize, EdgeLabel, bool)>>,
    adj2: Vec<Vec<(usize, EdgeLabel, bool)>>,
    seen: HashSet<Vec<(usize, usize)>>,
    best: Option<(usize, String, PatternGraph)>,
    exhausted: bool,
}

fn adjacency(g: &PatternGraph) -> Vec<Vec<(usize, EdgeLabel, bool)>> {
    let mut adj = vec![Vec::new(); g.len()];
    for &(a, b, l) in &g.edges {
        adj[a].push((b, l, true));
        adj[b].push((a, l, false));
    }
    adj
}

/// The common subgraph induced by a node mapping: every edge present in both.
pub fn mapped_subgraph(g1: &PatternGraph, g2: &PatternGraph, mapping: &[(usize, usize)]) -> PatternGraph {
    let mut pairs = mapping.to_vec();
    pairs.sort();
    let pos = |u: usize| pairs.iter().position(|&(a, _)| a == u);
    let image = |u: usize| pairs.iter().find(|&&(a, _)| a == u).map(|&(_, v)| v);
    let mut edges = Vec::new();
    for &(a, b, l) in &g1.edges {
        if let (Some(pa), Some(pb), Some(ia), Some(ib)) = (pos(a), pos(b), image(a), image(b)) {
            if g2.has_edge(ia, ib, l) {
                edges.push((pa, pb, l));
            }
        }
    }
    PatternGraph::new(pairs.iter().map(|&(a, _)| g1.nodes[a]).collect(), edges)
}

impl Search<'_> {
    fn bound(&self, map1: &[Option<usize>], used2: &[bool], size: usize) -> usize {
        let mut free1 = [0usize; 11];
        let mut free2 = [0usize; 11];
        for (i, m) in map1.iter().enumerate() {
            if m.is_none() {
                free1[self.g1.nodes[i] as usize] += 1;
            }
        }
        for (j, &u) in used2.iter().enumerate() {
            if !u {
                free2[self.g2.nodes[j] as usize] += 1;
            }
        }
        size + free1.iter().zip(&free2).map(|(a, b)| a.min(b)).sum::<usize>()
    }

    fn record(&mut self, mapping: &[(usize, usize)]) {
        let n = mapping.len();
        if self.best.as_ref().is_some_and(|(bn, _, _)| n < *bn) {
            return;
        }
        let g = mapped_subgraph(self.g1, self.g2, mapping).canonical();
        let key = g.key();
        let better = match &self.best {
            None => true,
            Some((bn, bk, _)) => n > *bn || (n == *bn && key < *bk),
        };
        if better {
            self.best = Some((n, key, g));
        }
    }

    fn grow(&mut self, map1: &mut Vec<Option<usize>>, used2: &mut Vec<bool>, mapping: &mut Vec<(usize, usize)>) {
        if self.exhausted {
            return;
        }
        let mut sorted = mapping.clone();
        sorted.sort();
        if !self.seen.insert(sorted) {
            return;
        }
        if self.seen.len() > SEARCH_BUDGET {
            self.exhausted = true;
            return;
        }
        self.record(mapping);
        if let Some((bn, _, _)) = &self.best {
            if self.bound(map1, used2, mapping.len()) < *bn {
                return;
            }
        }
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for &(w, x) in mapping.iter() {
            for &(u, l, out) in &self.adj1[w] {
                if map1[u].is_some() {
                    continue;
                }
                for &(v, l2, out2) in &self.adj2[x] {
                    if !used2[v] && l == l2 && out == out2 && self.g1.nodes[u] == self.g2.nodes[v] {
                        candidates.push((u, v));
                    }
                }
            }
        }
        candidates.sort();
        candidates.dedup();
        for (u, v) in candidates {
            map1[u] = Some(v);
            used2[v] = true;
            mapping.push((u, v));
            self.grow(map1, used2, mapping);
            mapping.pop();
            used2[v] = false;
            map1[u] = None;
        }
    }
}

/// Largest connected common subgraph (by node count, ties to the least
/// canonical key) with at least one edge; `None` when there is none.
pub fn largest_common_subgraph(g1: &PatternGraph, g2: &PatternGraph) -> Option<PatternGraph> {
    let mut s = Search {
        g1,
        g2,
        adj1: adjacency(g1),
        adj2: adjacency(g2),
        seen: HashSet::new(),
        best: None,
        exhausted: false,
    };
    for &(a, b, l) in &g1.edges {
        for &(c, d, l2) in &g2.edges {
            if l != l2 || g1.nodes[a] != g2.nodes[c] || g1.nodes[b] != g2.nodes[d] {
                continue;
            }
            let mut map1 = vec![None; g1.len()];
            let mut used2 = vec![false; g2.len()];
            map1[a] = Some(c);
            map1[b] = Some(d);
            used2[c] = true;
            used2[d] = true;
            let mut mapping = vec![(a, c), (b, d)];
            s.grow(&mut map1, &mut used2, &mut mapping);
        }
    }
    if s.exhausted {
        log::warn!(
            "common subgraph search stopped after {SEARCH_BUDGET} states ({} and {} nodes)",
            g1.len(),
            g2.len()
        );
    }
    s.best.map(|(_, _, g)| g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distill::EditKind::{self, *};
    use proptest::prelude::*;
    use EdgeLabel::*;

    /// Every injective partial mapping, kept when its common edges connect
    /// all mapped nodes.
    fn brute_force(g1: &PatternGraph, g2: &PatternGraph) -> Option<PatternGraph> {
        fn rec(
            g1: &PatternGraph,
            g2: &PatternGraph,
            i: usize,
            used: &mut Vec<bool>,
            mapping: &mut Vec<(usize, usize)>,
            best: &mut Option<(usize, String)>,
        ) {
            if i == g1.len() {
                if mapping.len() < 2 {
                    return;
                }
                let g = mapped_subgraph(g1, g2, mapping);
                if g.edges.is_empty() || !g.is_weakly_connected() {
                    return;
                }
                let key = g.canonical_key();
                let better = best
                    .as_ref()
                    .is_none_or(|(n, k)| g.len() > *n || (g.len() == *n && key < *k));
                if better {
                    *best = Some((g.len(), key));
                }
                return;
            }
            rec(g1, g2, i + 1, used, mapping, best);
            for j in 0..g2.len() {
                if !used[j] && g1.nodes[i] == g2.nodes[j] {
                    used[j] = true;
                    mapping.push((i, j));
                    rec(g1, g2, i + 1, used, mapping, best);
                    mapping.pop();
                    used[j] = false;
                }
            }
        }
        let mut best = None;
        rec(g1, g2, 0, &mut vec![false; g2.len()], &mut Vec::new(), &mut best);
        best.map(|(_, k)| PatternGraph::parse_key(&k).unwrap())
    }

    fn key(g: Option<PatternGraph>) -> Option<String> {
        g.map(|g| g.canonical_key())
    }

    #[test]
    fn identical_graphs() {
        let g = PatternGraph::new(vec![CF, AF], vec![(0, 1, F)]);
        assert_eq!(key(largest_common_subgraph(&g, &g)), Some(g.canonical_key()));
    }

    #[test]
    fn incompatible_labels() {
        let g1 = PatternGraph::new(vec![CF, CF], vec![(0, 1, F)]);
        let g2 = PatternGraph::new(vec![CF, AV], vec![(0, 1, V)]);
        assert_eq!(largest_common_subgraph(&g1, &g2), None);
    }

    #[test]
    fn four_node_fixtures() {
        let g1 = PatternGraph::new(vec![CF, CF, AF, AV], vec![(0, 2, F), (1, 2, F), (1, 3, V)]);
        let g2 = PatternGraph::new(vec![AF, CF, CF, CV], vec![(1, 0, F), (2, 0, F), (2, 3, V)]);
        let got = largest_common_subgraph(&g1, &g2).unwrap();
        assert_eq!(got.len(), 3);
        assert_eq!(Some(got.canonical_key()), key(brute_force(&g1, &g2)));
    }

    fn arb_graph(kinds: Vec<EditKind>) -> impl Strategy<Value = PatternGraph> {
        (2usize..=6).prop_flat_map(move |n| {
            let k = prop::collection::vec(prop::sample::select(kinds.clone()), n);
            let e = prop::collection::vec((0..n, 0..n, prop::sample::select(vec![F, V])), 1..9);
            (k, e).prop_map(|(k, e)| PatternGraph::new(k, e.into_iter().filter(|(a, b, _)| a != b).collect()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn equals_brute_force(g1 in arb_graph(vec![CF, AF, AV]), g2 in arb_graph(vec![CF, AF, AV])) {
            prop_assert_eq!(key(largest_common_subgraph(&g1, &g2)), key(brute_force(&g1, &g2)));
        }

        #[test]
        fn symmetric(g1 in arb_graph(vec![CF, AF]), g2 in arb_graph(vec![CF, AF])) {
            prop_assert_eq!(key(largest_common_subgraph(&g1, &g2)), key(largest_common_subgraph(&g2, &g1)));
        }
    }
}
