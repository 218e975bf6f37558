//! Line-oriented model files. Floats are stored as their IEEE-754 bit
//! patterns so a round trip is exact.

use std::fmt::Write as _;

use super::{
    AdaBoost, Algorithm, DecisionTree, GaussianNb, Label, Model, ModelSpec, RandomForest, TrainedModel, WeakLearner,
};
use crate::error::{Error, Result};
use crate::ml::tree::Node;

pub const MAGIC: &str = "CORECMODEL";
pub const VERSION: u32 = 1;

pub fn save(model: &TrainedModel) -> Vec<u8> {
    let mut out = String::new();
    let s = &model.spec;
    let _ = writeln!(out, "{MAGIC} {VERSION}");
    let _ = writeln!(
        out,
        "spec {} {} {} {}",
        s.algorithm, s.tree_count, s.boost_rounds, s.seed
    );
    let _ = writeln!(out, "features {}", model.feature_count);
    match &model.model {
        Model::Constant(l) => {
            let _ = writeln!(out, "constant {l}");
        }
        Model::Tree(t) => write_tree(&mut out, t),
        Model::Forest(f) => write_forest(&mut out, f),
        Model::Bayes(b) => {
            out.push_str("bayes\n");
            let _ = writeln!(out, "priors {}", floats(&b.priors));
            for c in 0..2 {
                let _ = writeln!(out, "means {}", floats(&b.means[c]));
                let _ = writeln!(out, "variances {}", floats(&b.variances[c]));
            }
        }
        Model::Boost(b) => {
            let _ = writeln!(out, "boost {}", b.members.len());
            for (alpha, h) in &b.members {
                let _ = writeln!(out, "member {}", hex(*alpha));
                match h {
                    WeakLearner::Stump(t) => write_tree(&mut out, t),
                    WeakLearner::Forest(f) => write_forest(&mut out, f),
                }
            }
        }
    }
    out.push_str("end\n");
    out.into_bytes()
}

fn hex(v: f64) -> String {
    format!("{:016x}", v.to_bits())
}

fn floats(vs: &[f64]) -> String {
    vs.iter().map(|v| hex(*v)).collect::<Vec<_>>().join(" ")
}

fn write_tree(out: &mut String, t: &DecisionTree) {
    let _ = writeln!(out, "tree {}", t.nodes.len());
    for n in &t.nodes {
        match n {
            Node::Leaf { score } => {
                let _ = writeln!(out, "L {}", hex(*score));
            }
            Node::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                let _ = writeln!(out, "S {feature} {} {left} {right}", hex(*threshold));
            }
        }
    }
}

fn write_forest(out: &mut String, f: &RandomForest) {
    let _ = writeln!(out, "forest {}", f.trees.len());
    for t in &f.trees {
        write_tree(out, t);
    }
}

pub fn load(bytes: &[u8]) -> Result<TrainedModel> {
    let text = std::str::from_utf8(bytes).map_err(|_| corrupt("not UTF-8 text"))?;
    let mut r = Reader {
        lines: text.lines(),
        line_no: 0,
    };
    let head = r.fields()?;
    if head.first() != Some(&MAGIC) {
        return Err(corrupt("missing model header"));
    }
    let version: u32 = r.parse(head.get(1).copied())?;
    if version != VERSION {
        return Err(corrupt(&format!("unsupported model version {version}")));
    }
    let spec_line = r.expect("spec", 5)?;
    let algorithm: Algorithm = spec_line[1].parse().map_err(|e: String| corrupt(&e))?;
    let spec = ModelSpec {
        algorithm,
        tree_count: r.parse(Some(spec_line[2]))?,
        boost_rounds: r.parse(Some(spec_line[3]))?,
        seed: r.parse(Some(spec_line[4]))?,
    };
    let features_line = r.expect("features", 2)?;
    let feature_count: usize = r.parse(Some(features_line[1]))?;
    let body = r.fields()?;
    let model = match body.first().copied() {
        Some("constant") if body.len() == 2 => Model::Constant(match body[1] {
            "Relevant" => Label::Relevant,
            "NotRelevant" => Label::NotRelevant,
            other => return Err(corrupt(&format!("unknown label `{other}`"))),
        }),
        Some("tree") => Model::Tree(r.tree_body(&body, feature_count)?),
        Some("forest") => Model::Forest(r.forest_body(&body, feature_count)?),
        Some("bayes") => {
            let priors = r.float_line("priors", 2)?;
            let mut means = [Vec::new(), Vec::new()];
            let mut variances = [Vec::new(), Vec::new()];
            for c in 0..2 {
                means[c] = r.float_line("means", feature_count)?;
                variances[c] = r.float_line("variances", feature_count)?;
            }
            Model::Bayes(GaussianNb {
                priors: [priors[0], priors[1]],
                means,
                variances,
            })
        }
        Some("boost") if body.len() == 2 => {
            let count: usize = r.parse(Some(body[1]))?;
            let mut members = Vec::with_capacity(count.min(1024));
            for _ in 0..count {
                let m = r.expect("member", 2)?;
                let alpha = r.float(m[1])?;
                let inner = r.fields()?;
                let h = match inner.first().copied() {
                    Some("tree") => WeakLearner::Stump(r.tree_body(&inner, feature_count)?),
                    Some("forest") => WeakLearner::Forest(r.forest_body(&inner, feature_count)?),
                    _ => return Err(r.error("expected a tree or forest")),
                };
                members.push((alpha, h));
            }
            Model::Boost(AdaBoost { members })
        }
        _ => return Err(r.error("unknown model body")),
    };
    if r.fields()? != ["end"] {
        return Err(r.error("expected `end`"));
    }
    Ok(TrainedModel {
        spec,
        feature_count,
        model,
    })
}

fn corrupt(msg: &str) -> Error {
    Error::CorruptModel(msg.to_string())
}

struct Reader<'a> {
    lines: std::str::Lines<'a>,
    line_no: usize,
}

impl<'a> Reader<'a> {
    fn error(&self, msg: &str) -> Error {
        corrupt(&format!("line {}: {msg}", self.line_no))
    }

    fn fields(&mut self) -> Result<Vec<&'a str>> {
        self.line_no += 1;
        match self.lines.next() {
            Some(l) => Ok(l.split_ascii_whitespace().collect()),
            None => Err(self.error("unexpected end of file")),
        }
    }

    fn expect(&mut self, tag: &str, len: usize) -> Result<Vec<&'a str>> {
        let f = self.fields()?;
        if f.first() != Some(&tag) || f.len() != len {
            return Err(self.error(&format!("expected `{tag}` with {} values", len - 1)));
        }
        Ok(f)
    }

    fn parse<T: std::str::FromStr>(&self, s: Option<&str>) -> Result<T> {
        s.and_then(|s| s.parse().ok()).ok_or_else(|| self.error("malformed number"))
    }

    fn float(&self, s: &str) -> Result<f64> {
        if s.len() != 16 {
            return Err(self.error("malformed float"));
        }
        u64::from_str_radix(s, 16)
            .map(f64::from_bits)
            .map_err(|_| self.error("malformed float"))
    }

    fn float_line(&mut self, tag: &str, len: usize) -> Result<Vec<f64>> {
        let f = self.expect(tag, len + 1)?;
        f[1..].iter().map(|s| self.float(s)).collect()
    }

    fn tree_body(&mut self, head: &[&str], width: usize) -> Result<DecisionTree> {
        if head.len() != 2 {
            return Err(self.error("malformed tree header"));
        }
        let count: usize = self.parse(Some(head[1]))?;
        if count == 0 {
            return Err(self.error("empty tree"));
        }
        let mut nodes = Vec::with_capacity(count.min(1 << 16));
        for at in 0..count {
            let f = self.fields()?;
            let node = match f.as_slice() {
                ["L", score] => Node::Leaf {
                    score: self.float(score)?,
                },
                ["S", feature, threshold, left, right] => {
                    let feature: usize = self.parse(Some(feature))?;
                    let left: usize = self.parse(Some(left))?;
                    let right: usize = self.parse(Some(right))?;
                    if feature >= width || left <= at || right <= at || left >= count || right >= count {
                        return Err(self.error("split refers outside the tree"));
                    }
                    Node::Split {
                        feature,
                        threshold: self.float(threshold)?,
                        left,
                        right,
                    }
                }
                _ => return Err(self.error("malformed tree node")),
            };
            nodes.push(node);
        }
        Ok(DecisionTree { nodes })
    }

    fn forest_body(&mut self, head: &[&str], width: usize) -> Result<RandomForest> {
        if head.len() != 2 {
            return Err(self.error("malformed forest header"));
        }
        let count: usize = self.parse(Some(head[1]))?;
        if count == 0 {
            return Err(self.error("empty forest"));
        }
        let mut trees = Vec::with_capacity(count.min(4096));
        for _ in 0..count {
            let h = self.fields()?;
            if h.first() != Some(&"tree") {
                return Err(self.error("expected a tree"));
            }
            trees.push(self.tree_body(&h, width)?);
        }
        Ok(RandomForest { trees })
    }
}
