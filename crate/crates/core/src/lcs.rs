//! Longest common subsequence and the similarity scores built on it.

use std::collections::BTreeMap;

/// Length of the longest common subsequence of `a` and `b`.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (outer, inner) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut prev = vec![0usize; inner.len() + 1];
    let mut cur = vec![0usize; inner.len() + 1];
    for x in outer {
        for (j, y) in inner.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[inner.len()]
}

/// `100 * 2 * |LCS| / (|a| + |b|)`; 100 when both are empty.
pub fn lcs_similarity<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    let total = a.len() + b.len();
    if total == 0 {
        return 100.0;
    }
    100.0 * 2.0 * lcs_len(a, b) as f64 / total as f64
}

/// Size of the multiset intersection of `a` and `b`.
pub fn multiset_overlap<T: Ord>(a: &[T], b: &[T]) -> usize {
    let mut counts: BTreeMap<&T, usize> = BTreeMap::new();
    for x in a {
        *counts.entry(x).or_default() += 1;
    }
    let mut n = 0;
    for y in b {
        if let Some(c) = counts.get_mut(y) {
            if *c > 0 {
                *c -= 1;
                n += 1;
            }
        }
    }
    n
}

/// `100 * 2 * |a ∩ b| / (|a| + |b|)` over multisets; 100 when both are empty.
pub fn overlap_similarity<T: Ord>(a: &[T], b: &[T]) -> f64 {
    let total = a.len() + b.len();
    if total == 0 {
        return 100.0;
    }
    100.0 * 2.0 * multiset_overlap(a, b) as f64 / total as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Longest common subsequence by enumerating every subsequence of `a`.
    fn brute_lcs(a: &[u8], b: &[u8]) -> usize {
        fn is_subseq(s: &[u8], b: &[u8]) -> bool {
            let mut it = b.iter();
            s.iter().all(|x| it.any(|y| y == x))
        }
        let mut best = 0;
        for mask in 0u32..(1 << a.len()) {
            let sub: Vec<u8> = (0..a.len()).filter(|i| mask & (1 << i) != 0).map(|i| a[i]).collect();
            if sub.len() > best && is_subseq(&sub, b) {
                best = sub.len();
            }
        }
        best
    }

    #[test]
    fn worked_example() {
        let a = ["a", "b", "c", "d"];
        let b = ["a", "x", "c", "y"];
        assert_eq!(lcs_len(&a, &b), 2);
        assert_eq!(lcs_similarity(&a, &b), 50.0);
    }

    #[test]
    fn edge_cases() {
        let e: [&str; 0] = [];
        assert_eq!(lcs_similarity(&e, &e), 100.0);
        assert_eq!(lcs_similarity(&["a"], &e), 0.0);
        assert_eq!(lcs_similarity(&["a", "b"], &["c"]), 0.0);
        assert_eq!(overlap_similarity(&["x", "x", "y"], &["x", "y", "y"]), 100.0 * 4.0 / 6.0);
    }

    proptest! {
        #[test]
        fn matches_enumeration(a in prop::collection::vec(0u8..4, 0..=12), b in prop::collection::vec(0u8..4, 0..=12)) {
            prop_assert_eq!(lcs_len(&a, &b), brute_lcs(&a, &b));
        }

        #[test]
        fn symmetric_and_bounded(a in prop::collection::vec(0u8..5, 0..30), b in prop::collection::vec(0u8..5, 0..30)) {
            let s = lcs_similarity(&a, &b);
            prop_assert_eq!(s, lcs_similarity(&b, &a));
            prop_assert!((0.0..=100.0).contains(&s));
            prop_assert_eq!(lcs_similarity(&a, &a), 100.0);
            prop_assert_eq!(overlap_similarity(&a, &b), overlap_similarity(&b, &a));
        }
    }
}
