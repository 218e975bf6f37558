//! Gaussian naive Bayes over two classes.

pub const VARIANCE_FLOOR: f64 = 1e-9;

/// Index 0 describes NotRelevant, index 1 Relevant.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb {
    pub priors: [f64; 2],
    pub means: [Vec<f64>; 2],
    pub variances: [Vec<f64>; 2],
}

impl GaussianNb {
    /// Requires both classes to be present.
    pub fn fit(x: &[Vec<f64>], y: &[bool]) -> Self {
        let width = x.first().map_or(0, Vec::len);
        let mut counts = [0usize; 2];
        let mut sums = [vec![0.0; width], vec![0.0; width]];
        for (row, &l) in x.iter().zip(y) {
            let c = l as usize;
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(row) {
                *s += v;
            }
        }
        let means = [0, 1].map(|c| sums[c].iter().map(|s| s / counts[c] as f64).collect::<Vec<f64>>());
        let mut sq = [vec![0.0; width], vec![0.0; width]];
        for (row, &l) in x.iter().zip(y) {
            let c = l as usize;
            for j in 0..width {
                let d = row[j] - means[c][j];
                sq[c][j] += d * d;
            }
        }
        let variances = [0, 1].map(|c| {
            sq[c]
                .iter()
                .map(|s| (s / counts[c] as f64).max(VARIANCE_FLOOR))
                .collect::<Vec<f64>>()
        });
        let n = x.len() as f64;
        GaussianNb {
            priors: [counts[0] as f64 / n, counts[1] as f64 / n],
            means,
            variances,
        }
    }

    fn log_joint(&self, c: usize, row: &[f64]) -> f64 {
        let mut l = self.priors[c].ln();
        for (j, v) in row.iter().enumerate() {
            let var = self.variances[c][j];
            let d = v - self.means[c][j];
            l -= 0.5 * (2.0 * std::f64::consts::PI * var).ln() + d * d / (2.0 * var);
        }
        l
    }

    /// Posterior of both classes.
    pub fn posteriors(&self, row: &[f64]) -> [f64; 2] {
        let l0 = self.log_joint(0, row);
        let l1 = self.log_joint(1, row);
        let p1 = 1.0 / (1.0 + (l0 - l1).exp());
        [1.0 - p1, p1]
    }

    pub fn score(&self, row: &[f64]) -> f64 {
        self.posteriors(row)[1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn density(x: f64, mean: f64, var: f64) -> f64 {
        (-(x - mean).powi(2) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
    }

    #[test]
    fn two_point_posterior_matches_closed_form() {
        let m = GaussianNb::fit(&[vec![0.0], vec![10.0]], &[true, false]);
        assert_eq!(m.variances, [vec![VARIANCE_FLOOR], vec![VARIANCE_FLOOR]]);
        // Exponent difference of the two floored Gaussians at x = 1.
        let gap = (81.0 - 1.0) / (2.0 * VARIANCE_FLOOR);
        let closed = 1.0 / (1.0 + (-gap).exp());
        let p = m.posteriors(&[1.0]);
        assert!((p[1] - closed).abs() < 1e-9);
        assert!(p[1] > p[0]);
    }

    #[test]
    fn matches_direct_bayes_rule() {
        let x = vec![vec![1.0], vec![2.0], vec![3.0], vec![6.0], vec![8.0]];
        let y = [true, true, true, false, false];
        let m = GaussianNb::fit(&x, &y);
        let (m1, v1) = (2.0, 2.0 / 3.0);
        let (m0, v0) = (7.0, 1.0);
        let j1 = 0.6 * density(4.0, m1, v1);
        let j0 = 0.4 * density(4.0, m0, v0);
        assert!((m.score(&[4.0]) - j1 / (j0 + j1)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn posteriors_sum_to_one(
            rows in proptest::collection::vec((0.0f64..50.0, 0.0f64..5.0), 4..30),
            probe in (-10.0f64..60.0, -1.0f64..6.0),
        ) {
            let x: Vec<Vec<f64>> = rows.iter().map(|&(a, b)| vec![a, b]).collect();
            let y: Vec<bool> = (0..x.len()).map(|i| i % 2 == 0).collect();
            let m = GaussianNb::fit(&x, &y);
            let p = m.posteriors(&[probe.0, probe.1]);
            prop_assert!((p[0] + p[1] - 1.0).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&p[1]));
        }
    }
}
