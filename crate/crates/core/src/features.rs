//! Pair features describing how much two functions have in common relative
//! to a depended-upon entity.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::binding::ProjectIndex;
use crate::distill::EditKind;
use crate::entity::{Entity, EntityKind, EntitySet};
use crate::history::HistoryIndex;
use crate::lcs::{lcs_similarity, overlap_similarity};

pub const FEATURE_COUNT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub em_param_types: u32,
    pub em_return_type_used: bool,
    pub common_peer_vars: u32,
    pub common_peer_funcs: u32,
    pub common_param_types: u32,
    pub same_return_type: bool,
    pub same_definition_style: bool,
    pub token_similarity: f64,
    pub statement_similarity: f64,
    pub coevolution_count: u32,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; FEATURE_COUNT] {
        [
            self.em_param_types as f64,
            self.em_return_type_used as u8 as f64,
            self.common_peer_vars as f64,
            self.common_peer_funcs as f64,
            self.common_param_types as f64,
            self.same_return_type as u8 as f64,
            self.same_definition_style as u8 as f64,
            self.token_similarity,
            self.statement_similarity,
            self.coevolution_count as f64,
        ]
    }
}

/// Variables and functions defined in the depended-upon entity's file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PeerContext {
    pub peer_variables: BTreeSet<String>,
    pub peer_functions: BTreeSet<String>,
}

impl PeerContext {
    /// Peers of `em` taken from the set of its module, `em` excluded.
    pub fn new<'a>(em: &Entity, sets: impl IntoIterator<Item = &'a EntitySet>) -> Self {
        let mut ctx = PeerContext::default();
        for set in sets.into_iter().filter(|s| s.module_path == em.module_path) {
            for e in &set.entities {
                if e.signature == em.signature {
                    continue;
                }
                match e.kind {
                    EntityKind::Variable => {
                        ctx.peer_variables.insert(e.signature.clone());
                    }
                    EntityKind::Function => {
                        ctx.peer_functions.insert(e.signature.clone());
                    }
                    _ => {}
                }
            }
        }
        ctx
    }
}

/// Everything needed to compute features for pairs sharing one `E_m`.
pub struct FeatureContext<'a> {
    pub em: &'a Entity,
    pub em_kind: EditKind,
    pub peers: &'a PeerContext,
    pub index: &'a ProjectIndex,
    pub history: &'a HistoryIndex,
    /// Ordinal of the commit under analysis; history before it counts.
    pub ordinal: usize,
}

pub fn token_similarity(f1: &Entity, f2: &Entity) -> f64 {
    lcs_similarity(&f1.token_sequence, &f2.token_sequence)
}

pub fn statement_similarity(f1: &Entity, f2: &Entity) -> f64 {
    overlap_similarity(&f1.statements, &f2.statements)
}

fn known_param_types(f: &Entity) -> BTreeSet<&str> {
    f.parameters.iter().filter_map(|p| p.type_token.as_deref()).collect()
}

fn accessed(f: &Entity, index: &ProjectIndex, peers: &BTreeSet<String>) -> BTreeSet<String> {
    index
        .resolve_references(f)
        .into_iter()
        .map(|(s, _)| s)
        .filter(|s| peers.contains(s))
        .collect()
}

pub fn extract_features(f1: &Entity, f2: &Entity, ctx: &FeatureContext<'_>) -> FeatureVector {
    let em = ctx.em;
    let em_param_types = if ctx.em_kind == EditKind::AV {
        0
    } else {
        em.parameters
            .iter()
            .filter(|p| p.type_token.as_ref().is_some_and(|t| f2.type_tokens.contains(t)))
            .count() as u32
    };
    let em_return_type_used = em
        .return_type
        .as_ref()
        .is_some_and(|t| f2.type_tokens.contains(t));
    let vars = |f: &Entity| accessed(f, ctx.index, &ctx.peers.peer_variables);
    let funcs = |f: &Entity| accessed(f, ctx.index, &ctx.peers.peer_functions);
    let common_peer_vars = vars(f1).intersection(&vars(f2)).count() as u32;
    let common_peer_funcs = funcs(f1).intersection(&funcs(f2)).count() as u32;
    let common_param_types = known_param_types(f1).intersection(&known_param_types(f2)).count() as u32;
    let same_return_type = matches!((&f1.return_type, &f2.return_type), (Some(a), Some(b)) if a == b);
    FeatureVector {
        em_param_types,
        em_return_type_used,
        common_peer_vars,
        common_peer_funcs,
        common_param_types,
        same_return_type,
        same_definition_style: f1.definition_style == f2.definition_style,
        token_similarity: token_similarity(f1, f2),
        statement_similarity: statement_similarity(f1, f2),
        coevolution_count: ctx.history.co_change_count(&f1.signature, &f2.signature, ctx.ordinal) as u32,
    }
}

/// One labelled sample row for export.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub ordinal: usize,
    pub f1: String,
    pub f2: String,
    pub features: FeatureVector,
    pub relevant: bool,
}

/// Comma-separated table with header `f1,...,f10,label`, sorted by
/// (ordinal, f1, f2).
pub fn feature_table_csv(rows: &[FeatureRow]) -> String {
    let mut sorted: Vec<&FeatureRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (a.ordinal, &a.f1, &a.f2).cmp(&(b.ordinal, &b.f1, &b.f2)));
    let mut out = String::from("f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,label\n");
    for r in sorted {
        let v = r.features.to_array();
        for x in v {
            let _ = write!(out, "{},", format_number(x));
        }
        let _ = writeln!(out, "{}", if r.relevant { "Relevant" } else { "NotRelevant" });
    }
    out
}

fn format_number(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{}", x as i64)
    } else {
        format!("{x:.4}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entity::extract_source;

    fn ctx_for<'a>(
        em: &'a Entity,
        kind: EditKind,
        peers: &'a PeerContext,
        index: &'a ProjectIndex,
        history: &'a HistoryIndex,
    ) -> FeatureContext<'a> {
        FeatureContext {
            em,
            em_kind: kind,
            peers,
            index,
            history,
            ordinal: 10,
        }
    }

    #[test]
    fn statement_similarity_formula() {
        let set = extract_source(
            "function a() { x(); y(); z(); }\nfunction b() { x(); y(); p(); q(); r(); }",
            "m",
        )
        .unwrap();
        let (a, b) = (set.get("m.a").unwrap(), set.get("m.b").unwrap());
        assert_eq!(statement_similarity(a, b), 50.0);
        assert_eq!(statement_similarity(a, a), 100.0);
    }

    #[test]
    fn peers_params_and_history() {
        let src = "var shared = 1;\nvar other = 2;\nfunction em(buf) { return 'x'; }\nfunction h1() {}\nfunction h2() {}\n\
                   function f(a = 1) { shared; h1(); h2(); em(); return 3; }\n\
                   function g(b = 2) { shared; other; h1(); var s = new Buffer(1); return 'str' + b; }";
        let set = extract_source(src, "m").unwrap();
        let index = ProjectIndex::build([&set]);
        let em = set.get("m.em").unwrap();
        let peers = PeerContext::new(em, [&set]);
        assert!(!peers.peer_functions.contains("m.em"));
        let mut history = HistoryIndex::new();
        history.record(3, ["m.f", "m.g"]);
        history.record(12, ["m.f", "m.g"]);
        let ctx = ctx_for(em, EditKind::CF, &peers, &index, &history);
        let (f, g) = (set.get("m.f").unwrap(), set.get("m.g").unwrap());
        let v = extract_features(f, g, &ctx);
        assert_eq!(v.em_param_types, 0);
        assert!(v.em_return_type_used);
        assert_eq!(v.common_peer_vars, 1);
        assert_eq!(v.common_peer_funcs, 1);
        assert_eq!(v.common_param_types, 1);
        assert!(!v.same_return_type);
        assert!(v.same_definition_style);
        assert_eq!(v.coevolution_count, 1);
        let ctx_av = ctx_for(em, EditKind::AV, &peers, &index, &history);
        assert_eq!(extract_features(f, g, &ctx_av).em_param_types, 0);
    }

    #[test]
    fn csv_header_and_order() {
        let fv = FeatureVector {
            em_param_types: 1,
            em_return_type_used: true,
            common_peer_vars: 0,
            common_peer_funcs: 2,
            common_param_types: 0,
            same_return_type: true,
            same_definition_style: true,
            token_similarity: 76.0,
            statement_similarity: 45.5,
            coevolution_count: 1,
        };
        let rows = vec![
            FeatureRow { ordinal: 2, f1: "b".into(), f2: "a".into(), features: fv, relevant: false },
            FeatureRow { ordinal: 1, f1: "z".into(), f2: "a".into(), features: fv, relevant: true },
        ];
        let csv = feature_table_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,label");
        assert_eq!(lines[1], "1,1,0,2,0,1,1,76,45.5000,1,Relevant");
        assert!(lines[2].ends_with("NotRelevant"));
    }

    #[test]
    fn fs_read_write_similarity() {
        let set = extract_source(crate::fixtures::FS_JS, "lib.fs").unwrap();
        let (w, r) = (set.get("lib.fs.fs.write").unwrap(), set.get("lib.fs.fs.read").unwrap());
        assert!((token_similarity(w, r) - 41.0).abs() <= 2.0, "{}", token_similarity(w, r));
        assert!((statement_similarity(w, r) - 42.0).abs() <= 2.0, "{}", statement_similarity(w, r));
        assert_eq!(token_similarity(w, r), token_similarity(r, w));
    }

    #[test]
    fn react_checker_vector() {
        let set = extract_source(crate::fixtures::REACT_PROP_TYPES_JS, "m").unwrap();
        let index = ProjectIndex::build([&set]);
        let em = set.get("m.createChainableTypeChecker").unwrap();
        let peers = PeerContext::new(em, [&set]);
        let (f1, f2) = (set.get("m.createObjectOfTypeChecker").unwrap(), set.get("m.createShapeTypeChecker").unwrap());
        let mut history = HistoryIndex::new();
        history.record(1, [f1.signature.clone(), f2.signature.clone()]);
        let ctx = ctx_for(em, EditKind::CF, &peers, &index, &history);
        let mut v = extract_features(f1, f2, &ctx).to_array();
        v[7] = v[7].round();
        v[8] = v[8].round();
        assert_eq!(v, [1.0, 1.0, 0.0, 2.0, 0.0, 1.0, 1.0, 76.0, 45.0, 1.0]);
    }
}
