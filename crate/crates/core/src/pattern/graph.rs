//! Labelled pattern graphs with code identity erased.

use std::collections::BTreeMap;
use std::fmt;

use crate::binding::EdgeLabel;
use crate::cdg::Cdg;
use crate::distill::EditKind;

/// Above this many candidate orderings the canonical form falls back to the
/// refined colour order without exhaustive search.
const MAX_CANONICAL_ORDERINGS: usize = 40_320;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternGraph {
    pub nodes: Vec<EditKind>,
    /// Sorted and de-duplicated.
    pub edges: Vec<(usize, usize, EdgeLabel)>,
}

impl PatternGraph {
    pub fn new(nodes: Vec<EditKind>, mut edges: Vec<(usize, usize, EdgeLabel)>) -> Self {
        edges.sort();
        edges.dedup();
        PatternGraph { nodes, edges }
    }

    pub fn from_cdg(cdg: &Cdg) -> Self {
        PatternGraph::new(cdg.node_kinds(), cdg.edges.clone())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn has_edge(&self, a: usize, b: usize, l: EdgeLabel) -> bool {
        self.edges.binary_search(&(a, b, l)).is_ok()
    }

    pub fn is_weakly_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(a, b, _) in &self.edges {
                let next = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Iterated neighbourhood colouring; ranks are isomorphism-invariant.
    fn colour_ranks(&self) -> Vec<usize> {
        let n = self.nodes.len();
        let mut ranks: Vec<usize> = self.nodes.iter().map(|k| *k as usize).collect();
        for _ in 0..n.max(1) {
            let sigs: Vec<(usize, Vec<(u8, EdgeLabel, usize)>)> = (0..n)
                .map(|i| {
                    let mut nb: Vec<(u8, EdgeLabel, usize)> = Vec::new();
                    for &(a, b, l) in &self.edges {
                        if a == i {
                            nb.push((0, l, ranks[b]));
                        }
                        if b == i {
                            nb.push((1, l, ranks[a]));
                        }
                    }
                    nb.sort();
                    (ranks[i], nb)
                })
                .collect();
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).unwrap_or(0)).collect();
            let stable = distinct.len() == {
                let mut r = ranks.clone();
                r.sort();
                r.dedup();
                r.len()
            };
            ranks = next;
            if stable {
                break;
            }
        }
        ranks
    }

    /// The same graph with nodes renumbered into canonical order.
    pub fn canonical(&self) -> PatternGraph {
        let n = self.nodes.len();
        let ranks = self.colour_ranks();
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &r) in ranks.iter().enumerate() {
            cells.entry(r).or_default().push(i);
        }
        let cell_of_pos: Vec<&Vec<usize>> = cells.values().flat_map(|c| std::iter::repeat_n(c, c.len())).collect();
        let orderings = cells.values().try_fold(1usize, |acc, c| {
            (1..=c.len()).try_fold(acc, |a, k| a.checked_mul(k))
        });

        let relabel = |order: &[usize]| -> Vec<(usize, usize, EdgeLabel)> {
            let mut pos = vec![0; n];
            for (p, &node) in order.iter().enumerate() {
                pos[node] = p;
            }
            let mut e: Vec<_> = self.edges.iter().map(|&(a, b, l)| (pos[a], pos[b], l)).collect();
            e.sort();
            e
        };

        let mut best: Option<(Vec<(usize, usize, EdgeLabel)>, Vec<usize>)> = None;
        if orderings.is_some_and(|o| o <= MAX_CANONICAL_ORDERINGS) {
            let mut order = Vec::with_capacity(n);
            let mut used = vec![false; n];
            search(&cell_of_pos, &mut order, &mut used, &mut |o| {
                let e = relabel(o);
                if best.as_ref().is_none_or(|(b, _)| e < *b) {
                    best = Some((e, o.to_vec()));
                }
            });
        }
        let (edges, order) = best.unwrap_or_else(|| {
            let order: Vec<usize> = cells.values().flatten().copied().collect();
            (relabel(&order), order)
        });
        PatternGraph {
            nodes: order.iter().map(|&i| self.nodes[i]).collect(),
            edges,
        }
    }

    /// Identical for isomorphic graphs, e.g. `CF,AF|0>1:f`.
    pub fn canonical_key(&self) -> String {
        self.canonical().key()
    }

    /// The key of this exact numbering (canonical only after [`Self::canonical`]).
    pub fn key(&self) -> String {
        let nodes: Vec<&str> = self.nodes.iter().map(|k| k.as_str()).collect();
        let edges: Vec<String> = self.edges.iter().map(|(a, b, l)| format!("{a}>{b}:{l}")).collect();
        format!("{}|{}", nodes.join(","), edges.join(";"))
    }

    pub fn parse_key(key: &str) -> Option<PatternGraph> {
        let (nodes, edges) = key.split_once('|')?;
        let nodes: Vec<EditKind> = nodes.split(',').map(|s| s.parse().ok()).collect::<Option<_>>()?;
        let mut out = Vec::new();
        for e in edges.split(';').filter(|s| !s.is_empty()) {
            let (ab, l) = e.split_once(':')?;
            let (a, b) = ab.split_once('>')?;
            let (a, b): (usize, usize) = (a.parse().ok()?, b.parse().ok()?);
            if a >= nodes.len() || b >= nodes.len() {
                return None;
            }
            out.push((a, b, EdgeLabel::parse(l)?));
        }
        Some(PatternGraph::new(nodes, out))
    }

    /// Whether `self` maps injectively into `host`, preserving node labels
    /// and every edge with its label.
    pub fn embeds_in(&self, host: &PatternGraph) -> bool {
        if self.nodes.len() > host.nodes.len() || self.edges.len() > host.edges.len() {
            return false;
        }
        let mut map = vec![usize::MAX; self.nodes.len()];
        let mut used = vec![false; host.nodes.len()];
        self.embed_from(host, 0, &mut map, &mut used)
    }

    fn embed_from(&self, host: &PatternGraph, i: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if i == self.nodes.len() {
            return true;
        }
        for h in 0..host.nodes.len() {
            if used[h] || host.nodes[h] != self.nodes[i] {
                continue;
            }
            let consistent = self.edges.iter().all(|&(a, b, l)| {
                let (ma, mb) = (
                    if a == i { h } else { map[a] },
                    if b == i { h } else { map[b] },
                );
                if (a == i || a < i) && (b == i || b < i) {
                    host.has_edge(ma, mb, l)
                } else {
                    true
                }
            });
            if !consistent {
                continue;
            }
            map[i] = h;
            used[h] = true;
            if self.embed_from(host, i + 1, map, used) {
                return true;
            }
            used[h] = false;
            map[i] = usize::MAX;
        }
        false
    }

    /// Strictly smaller pattern contained in `other`.
    pub fn is_proper_subpattern_of(&self, other: &PatternGraph) -> bool {
        (self.nodes.len(), self.edges.len()) < (other.nodes.len(), other.edges.len())
            && self.nodes.len() <= other.nodes.len()
            && self.embeds_in(other)
    }
}

fn search(cell_of_pos: &[&Vec<usize>], order: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
    let p = order.len();
    if p == cell_of_pos.len() {
        f(order);
        return;
    }
    for &node in cell_of_pos[p] {
        if !used[node] {
            used[node] = true;
            order.push(node);
            search(cell_of_pos, order, used, f);
            order.pop();
            used[node] = false;
        }
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_key())
    }
}
