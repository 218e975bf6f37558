//! Association-rule recommenders built from co-change history.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::history::HistoryIndex;

pub const DEFAULT_MIN_SUPPORT: usize = 1;
pub const DEFAULT_MIN_CONFIDENCE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule {
    pub antecedent: String,
    pub consequent: String,
    /// Commits containing both sides (for derived rules, the weaker parent's).
    pub support: usize,
    pub confidence: f64,
    /// Confidence counted from history; `None` for purely derived rules.
    pub mined_confidence: Option<f64>,
}

impl AssociationRule {
    pub fn is_derived(&self) -> bool {
        self.mined_confidence.is_none()
    }
}

/// Single-antecedent rules over every transaction, sorted by
/// (antecedent, consequent).
pub fn mine_rules<'a>(
    transactions: impl IntoIterator<Item = &'a BTreeSet<String>>,
    min_support: usize,
    min_confidence: f64,
) -> Vec<AssociationRule> {
    let mut single: BTreeMap<&str, usize> = BTreeMap::new();
    let mut pairs: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for t in transactions {
        for a in t {
            *single.entry(a).or_default() += 1;
            for b in t {
                if a != b {
                    *pairs.entry((a, b)).or_default() += 1;
                }
            }
        }
    }
    pairs
        .into_iter()
        .filter_map(|((a, b), support)| {
            let confidence = support as f64 / single[a] as f64;
            (support >= min_support.max(1) && confidence >= min_confidence).then(|| AssociationRule {
                antecedent: a.to_string(),
                consequent: b.to_string(),
                support,
                confidence,
                mined_confidence: Some(confidence),
            })
        })
        .collect()
}

/// Rules over the whole history.
pub fn mine_rose(history: &HistoryIndex, min_support: usize, min_confidence: f64) -> Vec<AssociationRule> {
    mine_rules(history.entities_by_commit.values(), min_support, min_confidence)
}

/// Rules over the commits with ordinal below `before`.
pub fn mine_rose_before(
    history: &HistoryIndex,
    before: usize,
    min_support: usize,
    min_confidence: f64,
) -> Vec<AssociationRule> {
    mine_rules(history.transactions_before(before).map(|(_, t)| t), min_support, min_confidence)
}

/// Adds one-hop transitive rules with multiplied confidence. Only mined
/// rules act as parents. A pair keeps its highest confidence.
pub fn derive_tar(rules: &[AssociationRule], min_support: usize, min_confidence: f64) -> Vec<AssociationRule> {
    let mined: Vec<(&AssociationRule, f64)> = rules
        .iter()
        .filter_map(|r| r.mined_confidence.map(|c| (r, c)))
        .collect();
    let mut by_antecedent: BTreeMap<&str, Vec<(&AssociationRule, f64)>> = BTreeMap::new();
    for &(r, c) in &mined {
        by_antecedent.entry(r.antecedent.as_str()).or_default().push((r, c));
    }
    let mut out: BTreeMap<(String, String), AssociationRule> = rules
        .iter()
        .map(|r| ((r.antecedent.clone(), r.consequent.clone()), r.clone()))
        .collect();
    for &(first, c1) in &mined {
        for &(second, c2) in by_antecedent.get(first.consequent.as_str()).into_iter().flatten() {
            if second.consequent == first.antecedent {
                continue;
            }
            let confidence = c1 * c2;
            let key = (first.antecedent.clone(), second.consequent.clone());
            match out.get_mut(&key) {
                Some(existing) => {
                    if confidence > existing.confidence {
                        existing.confidence = confidence;
                    }
                }
                None => {
                    out.insert(
                        key,
                        AssociationRule {
                            antecedent: first.antecedent.clone(),
                            consequent: second.consequent.clone(),
                            support: first.support.min(second.support),
                            confidence,
                            mined_confidence: None,
                        },
                    );
                }
            }
        }
    }
    out.into_values()
        .filter(|r| r.support >= min_support && r.confidence >= min_confidence)
        .collect()
}

/// Consequents of rules fired by `known`, restricted to `candidates` and
/// excluding `known`.
pub fn recommend_rules(
    rules: &[AssociationRule],
    known: &BTreeSet<String>,
    candidates: &BTreeSet<String>,
) -> BTreeSet<String> {
    rules
        .iter()
        .filter(|r| known.contains(&r.antecedent))
        .map(|r| &r.consequent)
        .filter(|c| candidates.contains(*c) && !known.contains(*c))
        .cloned()
        .collect()
}

/// `antecedent<TAB>consequent<TAB>support<TAB>confidence` per rule.
pub fn rule_dump(rules: &[AssociationRule]) -> String {
    let mut out = String::new();
    for r in rules {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{:.6}",
            r.antecedent, r.consequent, r.support, r.confidence
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn history(commits: &[&[&str]]) -> HistoryIndex {
        let mut h = HistoryIndex::new();
        for (i, c) in commits.iter().enumerate() {
            h.record(i, c.iter().copied());
        }
        h
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn find<'a>(rules: &'a [AssociationRule], a: &str, b: &str) -> Option<&'a AssociationRule> {
        rules.iter().find(|r| r.antecedent == a && r.consequent == b)
    }

    fn rule(a: &str, b: &str, confidence: f64) -> AssociationRule {
        AssociationRule {
            antecedent: a.into(),
            consequent: b.into(),
            support: 1,
            confidence,
            mined_confidence: Some(confidence),
        }
    }

    #[test]
    fn counts_support_and_confidence() {
        let h = history(&[&["A", "B"], &["A", "B"], &["A", "C"]]);
        let rules = mine_rose(&h, 1, 0.1);
        let ab = find(&rules, "A", "B").unwrap();
        assert_eq!((ab.support, ab.confidence), (2, 2.0 / 3.0));
        let ac = find(&rules, "A", "C").unwrap();
        assert_eq!((ac.support, ac.confidence), (1, 1.0 / 3.0));
        let strict = mine_rose(&h, 1, 1.0);
        let pairs: Vec<(&str, &str)> = strict
            .iter()
            .map(|r| (r.antecedent.as_str(), r.consequent.as_str()))
            .collect();
        assert_eq!(pairs, [("B", "A"), ("C", "A")]);
        assert!(mine_rose(&HistoryIndex::new(), 1, 0.1).is_empty());
    }

    #[test]
    fn history_cutoff() {
        let h = history(&[&["A", "B"], &["A", "C"]]);
        let rules = mine_rose_before(&h, 1, 1, 0.1);
        assert!(find(&rules, "A", "C").is_none());
        assert_eq!(find(&rules, "A", "B").unwrap().confidence, 1.0);
    }

    #[test]
    fn transitive_confidence_is_product() {
        let rules = vec![rule("A", "B", 0.5), rule("B", "C", 0.4)];
        let tar = derive_tar(&rules, 1, 0.1);
        let ac = find(&tar, "A", "C").unwrap();
        assert_eq!(ac.confidence, 0.5 * 0.4);
        assert!(ac.is_derived());
        let unchained = vec![rule("A", "B", 0.5), rule("C", "D", 0.4)];
        assert_eq!(derive_tar(&unchained, 1, 0.1), unchained);
    }

    #[test]
    fn direct_rule_keeps_higher_confidence() {
        let rules = vec![rule("A", "B", 0.5), rule("A", "C", 0.3), rule("B", "C", 0.4)];
        let tar = derive_tar(&rules, 1, 0.1);
        assert_eq!(find(&tar, "A", "C").unwrap().confidence, 0.3);
        let low = derive_tar(&[rule("A", "B", 0.3), rule("B", "C", 0.3)], 1, 0.1);
        assert!(find(&low, "A", "C").is_none());
    }

    #[test]
    fn recommends_fired_consequents() {
        let rules = vec![rule("cf", "g", 0.5), rule("x", "h", 0.9), rule("cf", "em", 0.9)];
        let got = recommend_rules(&rules, &set(&["em", "cf"]), &set(&["g", "h", "em"]));
        assert_eq!(got, set(&["g"]));
        assert!(recommend_rules(&rules, &set(&["zz"]), &set(&["g"])).is_empty());
        let h = history(&[&["f", "g", "h"], &["f", "g", "h"], &["q"]]);
        let mined = mine_rose(&h, 1, 0.1);
        assert_eq!(recommend_rules(&mined, &set(&["f"]), &set(&["g", "h", "q"])), set(&["g", "h"]));
    }

    #[test]
    fn dump_format() {
        let d = rule_dump(&[rule("A", "B", 2.0 / 3.0)]);
        assert_eq!(d, "A\tB\t1\t0.666667\n");
    }

    fn histories() -> impl Strategy<Value = Vec<BTreeSet<String>>> {
        let item = prop::sample::select(vec!["a", "b", "c", "d", "e", "f"]);
        prop::collection::vec(prop::collection::btree_set(item.prop_map(String::from), 0..5), 0..12)
    }

    proptest! {
        #[test]
        fn rules_match_recount(commits in histories(), min_support in 1usize..3, min_conf in 0.0f64..1.0) {
            let rules = mine_rules(&commits, min_support, min_conf);
            for r in &rules {
                let both = commits.iter().filter(|t| t.contains(&r.antecedent) && t.contains(&r.consequent)).count();
                let ante = commits.iter().filter(|t| t.contains(&r.antecedent)).count();
                prop_assert_eq!(r.support, both);
                prop_assert_eq!(r.confidence, both as f64 / ante as f64);
            }
            let expected: usize = {
                let names: BTreeSet<&String> = commits.iter().flatten().collect();
                names.iter().flat_map(|a| names.iter().map(move |b| (*a, *b))).filter(|(a, b)| {
                    let both = commits.iter().filter(|t| t.contains(*a) && t.contains(*b)).count();
                    let ante = commits.iter().filter(|t| t.contains(*a)).count();
                    a != b && both >= min_support && both as f64 / ante as f64 >= min_conf
                }).count()
            };
            prop_assert_eq!(rules.len(), expected);
        }

        #[test]
        fn tar_is_idempotent(commits in histories()) {
            let rules = mine_rules(&commits, 1, 0.1);
            let once = derive_tar(&rules, 1, 0.1);
            prop_assert_eq!(derive_tar(&once, 1, 0.1), once);
        }

        #[test]
        fn never_recommends_known(commits in histories(), known in prop::collection::btree_set("[a-f]", 0..4)) {
            let rules = derive_tar(&mine_rules(&commits, 1, 0.1), 1, 0.1);
            let all: BTreeSet<String> = ["a", "b", "c", "d", "e", "f"].iter().map(|s| s.to_string()).collect();
            let got = recommend_rules(&rules, &known, &all);
            prop_assert!(got.is_disjoint(&known));
        }
    }
}
