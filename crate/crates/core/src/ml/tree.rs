//! Binary CART trees split on Gini impurity.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

/// Improvements smaller than this count as ties.
const TIE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// Weighted fraction of Relevant samples reaching the leaf.
    Leaf { score: f64 },
    /// Rows with `row[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Nodes in creation order; the root is node 0 and children follow their parent.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

pub(crate) struct Grow<'a> {
    pub x: &'a [Vec<f64>],
    pub y: &'a [bool],
    /// Per-row weights; `None` weighs each sample 1.
    pub weights: Option<&'a [f64]>,
    pub max_depth: Option<usize>,
    /// Draws this many candidate features per split.
    pub sample_features: Option<(usize, &'a mut ChaCha8Rng)>,
}

struct Best {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

impl DecisionTree {
    /// Fully grown tree over all rows.
    pub fn fit(x: &[Vec<f64>], y: &[bool]) -> Self {
        let all: Vec<usize> = (0..x.len()).collect();
        Grow {
            x,
            y,
            weights: None,
            max_depth: None,
            sample_features: None,
        }
        .build(all)
    }

    /// Depth-one tree under sample weights.
    pub fn fit_stump(x: &[Vec<f64>], y: &[bool], weights: &[f64]) -> Self {
        let all: Vec<usize> = (0..x.len()).collect();
        Grow {
            x,
            y,
            weights: Some(weights),
            max_depth: Some(1),
            sample_features: None,
        }
        .build(all)
    }

    pub fn score(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { score } => return score,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn votes_relevant(&self, row: &[f64]) -> bool {
        self.score(row) >= 0.5
    }

    pub fn depth(&self) -> usize {
        fn walk(t: &DecisionTree, at: usize) -> usize {
            match t.nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(t, left).max(walk(t, right)),
            }
        }
        walk(self, 0)
    }
}

impl Grow<'_> {
    fn weight(&self, i: usize) -> f64 {
        self.weights.map_or(1.0, |w| w[i])
    }

    /// Grows from `rows`, which may repeat indices (bootstrap samples).
    pub(crate) fn build(mut self, rows: Vec<usize>) -> DecisionTree {
        let mut nodes = vec![Node::Leaf { score: 0.0 }];
        let mut work = vec![(0usize, rows, 0usize)];
        while let Some((at, rows, depth)) = work.pop() {
            let (pos, total) = rows.iter().fold((0.0, 0.0), |(p, t), &i| {
                let w = self.weight(i);
                (if self.y[i] { p + w } else { p }, t + w)
            });
            let score = if total > 0.0 {
                pos / total
            } else {
                rows.iter().filter(|&&i| self.y[i]).count() as f64 / rows.len().max(1) as f64
            };
            let pure = rows.iter().all(|&i| self.y[i] == self.y[rows[0]]);
            let capped = self.max_depth.is_some_and(|d| depth >= d);
            let split = if pure || rows.len() < 2 || capped {
                None
            } else {
                self.best_split(&rows)
            };
            match split {
                None => nodes[at] = Node::Leaf { score },
                Some(b) => {
                    let (l, r): (Vec<usize>, Vec<usize>) =
                        rows.iter().partition(|&&i| self.x[i][b.feature] <= b.threshold);
                    let left = nodes.len();
                    nodes.push(Node::Leaf { score: 0.0 });
                    nodes.push(Node::Leaf { score: 0.0 });
                    nodes[at] = Node::Split {
                        feature: b.feature,
                        threshold: b.threshold,
                        left,
                        right: left + 1,
                    };
                    work.push((left + 1, r, depth + 1));
                    work.push((left, l, depth + 1));
                }
            }
        }
        DecisionTree { nodes }
    }

    fn best_split(&mut self, rows: &[usize]) -> Option<Best> {
        let width = self.x[rows[0]].len();
        let (first, rest) = match &mut self.sample_features {
            None => ((0..width).collect::<Vec<_>>(), Vec::new()),
            Some((m, rng)) => {
                let mut all: Vec<usize> = (0..width).collect();
                all.shuffle(*rng);
                let rest = all.split_off((*m).min(width));
                (all, rest)
            }
        };
        self.best_among(rows, first).or_else(|| self.best_among(rows, rest))
    }

    fn best_among(&self, rows: &[usize], mut features: Vec<usize>) -> Option<Best> {
        features.sort_unstable();
        let mut best: Option<Best> = None;
        let mut column: Vec<(f64, bool, f64)> = Vec::with_capacity(rows.len());
        for f in features {
            column.clear();
            column.extend(rows.iter().map(|&i| (self.x[i][f], self.y[i], self.weight(i))));
            column.sort_by(|a, b| a.0.total_cmp(&b.0));
            let total: f64 = column.iter().map(|c| c.2).sum();
            let total_pos: f64 = column.iter().filter(|c| c.1).map(|c| c.2).sum();
            let (mut lw, mut lp) = (0.0, 0.0);
            for k in 0..column.len() - 1 {
                let (v, pos, w) = column[k];
                lw += w;
                if pos {
                    lp += w;
                }
                let next = column[k + 1].0;
                if next == v {
                    continue;
                }
                let impurity = gini(lp, lw) + gini(total_pos - lp, total - lw);
                if best.as_ref().is_none_or(|b| impurity < b.impurity - TIE_EPSILON) {
                    best = Some(Best {
                        feature: f,
                        threshold: v + (next - v) / 2.0,
                        impurity,
                    });
                }
            }
        }
        best
    }
}

/// Weight times Gini impurity of a node holding `pos` of `total` weight positive.
fn gini(pos: f64, total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let p = pos / total;
    total * 2.0 * p * (1.0 - p)
}
