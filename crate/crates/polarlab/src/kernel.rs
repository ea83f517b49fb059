//! Partial distances and exponents of square binary polarization kernels.
//!
//! For an invertible l-by-l matrix over GF(2), the i-th partial distance is
//! the Hamming distance from row i to the linear span of the rows after it.
//! The exponent E(G) and variance V(G) are the mean and variance of
//! log_l D_B over a uniformly random row index B; they set the kernel's
//! threshold exponent n E + t sqrt(n V), the l-ary analogue of the
//! (n + t sqrt(n))/2 exponent of the 2-by-2 kernel.
//!
//! Only the threshold arithmetic and the uniform row-index statistic are
//! implemented here; evolving a channel under an l-ary kernel is out of
//! scope, so the distributional limit behind the threshold is not checked
//! numerically.

use rand::Rng;

use crate::Error;

/// Largest kernel size: the distance search enumerates 2^(l-1) span
/// elements in the worst row.
pub const MAX_KERNEL_DIM: usize = 20;

/// An invertible square binary matrix, rows stored as bit masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryKernel {
    ell: usize,
    rows: Vec<u64>,
}

impl BinaryKernel {
    pub fn new(ell: usize, rows: Vec<u64>) -> Result<Self, Error> {
        if ell == 0 || ell > MAX_KERNEL_DIM {
            return Err(Error::InvalidParameter(format!(
                "kernel dimension {ell} not in 1..={MAX_KERNEL_DIM}"
            )));
        }
        if rows.len() != ell {
            return Err(Error::LengthMismatch {
                expected: ell,
                got: rows.len(),
            });
        }
        let mask = (1u64 << ell) - 1;
        if rows.iter().any(|&r| r & !mask != 0) {
            return Err(Error::InvalidParameter(format!(
                "row uses columns beyond {ell}"
            )));
        }
        // Invertibility check by elimination.
        let mut work = rows.clone();
        for col in 0..ell {
            let bit = 1u64 << col;
            let pivot = (col..ell).find(|&r| work[r] & bit != 0);
            let Some(pivot) = pivot else {
                return Err(Error::SingularKernel);
            };
            work.swap(col, pivot);
            let p = work[col];
            for (r, row) in work.iter_mut().enumerate() {
                if r != col && *row & bit != 0 {
                    *row ^= p;
                }
            }
        }
        Ok(Self { ell, rows })
    }

    /// The 2-by-2 kernel [[1, 0], [1, 1]].
    pub fn arikan() -> Self {
        Self {
            ell: 2,
            rows: vec![0b01, 0b11],
        }
    }

    pub fn identity(ell: usize) -> Result<Self, Error> {
        Self::new(ell, (0..ell).map(|i| 1u64 << i).collect())
    }

    /// A kernel with the worst polarizing profile: partial distances
    /// (1, ..., 1, 2). Rows e_1..e_{l-1} followed by e_{l-1} + e_l.
    pub fn worst_case(ell: usize) -> Result<Self, Error> {
        if ell < 2 {
            return Err(Error::InvalidParameter(format!(
                "worst-case kernel needs l >= 2, got {ell}"
            )));
        }
        let mut rows: Vec<u64> = (0..ell - 1).map(|i| 1u64 << i).collect();
        rows.push((1u64 << (ell - 2)) | (1u64 << (ell - 1)));
        Self::new(ell, rows)
    }

    pub fn dim(&self) -> usize {
        self.ell
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// D_i = min Hamming distance from row i to the span of rows i+1..l,
    /// by exhaustive search over the 2^(l-i-1) span elements with early
    /// exit at distance 1.
    pub fn partial_distances(&self) -> Vec<u32> {
        (0..self.ell)
            .map(|i| self.distance_to_span(self.rows[i], &self.rows[i + 1..]))
            .collect()
    }

    fn distance_to_span(&self, row: u64, span_rows: &[u64]) -> u32 {
        let mut cur = row;
        let mut best = cur.count_ones();
        // Gray-code walk over all subset XORs of span_rows.
        for g in 1u64..(1u64 << span_rows.len()) {
            cur ^= span_rows[g.trailing_zeros() as usize];
            best = best.min(cur.count_ones());
            if best == 1 {
                break;
            }
        }
        best
    }

    pub fn profile(&self) -> KernelProfile {
        KernelProfile::from_distances(self.ell, self.partial_distances())
    }
}

/// Partial distances with their exponent and variance.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelProfile {
    pub ell: usize,
    pub partial_distances: Vec<u32>,
    pub exponent: f64,
    pub variance: f64,
}

impl KernelProfile {
    pub fn from_distances(ell: usize, partial_distances: Vec<u32>) -> Self {
        let logs: Vec<f64> = partial_distances
            .iter()
            .map(|&d| log_base(ell, f64::from(d)))
            .collect();
        let exponent = logs.iter().sum::<f64>() / ell as f64;
        let variance =
            logs.iter().map(|l| (l - exponent) * (l - exponent)).sum::<f64>() / ell as f64;
        Self {
            ell,
            partial_distances,
            exponent,
            variance,
        }
    }
}

fn log_base(ell: usize, x: f64) -> f64 {
    x.ln() / (ell as f64).ln()
}

/// Closed-form (E, V) for the worst polarizing profile (1, ..., 1, 2):
/// E = log_l(2) / l and V = E^2 (l - 1).
pub fn worst_case_profile(ell: usize) -> Result<(f64, f64), Error> {
    if ell < 2 {
        return Err(Error::InvalidParameter(format!(
            "worst-case profile needs l >= 2, got {ell}"
        )));
    }
    let e = log_base(ell, 2.0) / ell as f64;
    Ok((e, e * e * (ell - 1) as f64))
}

/// The kernel threshold exponent n E + t sqrt(n V); the threshold itself is
/// 2^(-l^exponent), handled in the double-log base-l domain.
pub fn kernel_threshold_exponent(n: usize, t: f64, e: f64, v: f64) -> f64 {
    let n = n as f64;
    n * e + t * (n * v).sqrt()
}

/// A sequence of uniform row indices in 1..=l, the l-ary counterpart of the
/// fair bit path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArySamplePath {
    ell: usize,
    symbols: Vec<usize>,
}

impl ArySamplePath {
    pub fn sample<R: Rng>(ell: usize, len: usize, rng: &mut R) -> Self {
        Self {
            ell,
            symbols: (0..len).map(|_| rng.gen_range(1..=ell)).collect(),
        }
    }

    pub fn new(ell: usize, symbols: Vec<usize>) -> Result<Self, Error> {
        if symbols.iter().any(|&s| s < 1 || s > ell) {
            return Err(Error::InvalidParameter(format!(
                "symbols must lie in 1..={ell}"
            )));
        }
        Ok(Self { ell, symbols })
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    /// Empirical mean and variance of log_l D_B along the path.
    pub fn statistic(&self, profile: &KernelProfile) -> (f64, f64) {
        let logs: Vec<f64> = self
            .symbols
            .iter()
            .map(|&s| log_base(self.ell, f64::from(profile.partial_distances[s - 1])))
            .collect();
        let mean = logs.iter().sum::<f64>() / logs.len() as f64;
        let var = logs.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / logs.len() as f64;
        (mean, var)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn arikan_kernel_profile() {
        let f = BinaryKernel::arikan();
        assert_eq!(f.partial_distances(), vec![1, 2]);
        let p = f.profile();
        assert_eq!(p.exponent, 0.5);
        assert_eq!(p.variance, 0.25);
    }

    #[test]
    fn identity_kernel_profile() {
        let id = BinaryKernel::identity(2).unwrap();
        assert_eq!(id.partial_distances(), vec![1, 1]);
        let p = id.profile();
        assert_eq!(p.exponent, 0.0);
        assert_eq!(p.variance, 0.0);
    }

    #[test]
    fn three_by_three_example() {
        // Rows (1,0,0), (0,1,0), (0,1,1).
        let g = BinaryKernel::new(3, vec![0b001, 0b010, 0b110]).unwrap();
        assert_eq!(g.partial_distances(), vec![1, 1, 2]);
        let p = g.profile();
        let e = 2.0f64.ln() / 3.0f64.ln() / 3.0;
        assert!((p.exponent - e).abs() < 1e-15);
        assert!((p.exponent - 0.2103).abs() < 1e-4);
        assert!((p.variance - e * e * 2.0).abs() < 1e-15);
    }

    #[test]
    fn singular_kernels_are_rejected() {
        assert!(matches!(
            BinaryKernel::new(2, vec![0b11, 0b11]),
            Err(Error::SingularKernel)
        ));
        assert!(matches!(
            BinaryKernel::new(3, vec![0b011, 0b101, 0b110]),
            Err(Error::SingularKernel)
        ));
    }

    #[test]
    fn worst_case_matches_closed_form() {
        for ell in 2..=8 {
            let g = BinaryKernel::worst_case(ell).unwrap();
            let mut expected = vec![1u32; ell - 1];
            expected.push(2);
            assert_eq!(g.partial_distances(), expected, "l = {ell}");
            let p = g.profile();
            let (e, v) = worst_case_profile(ell).unwrap();
            assert!((p.exponent - e).abs() < 1e-15);
            assert!((p.variance - v).abs() < 1e-15);
        }
        assert!(worst_case_profile(1).is_err());
        // E -> 0 as l grows.
        let (e8, _) = worst_case_profile(8).unwrap();
        let (e16, _) = worst_case_profile(16).unwrap();
        assert!(e16 < e8);
    }

    #[test]
    fn threshold_exponent_examples() {
        assert_eq!(kernel_threshold_exponent(9, 0.0, 0.5, 0.25), 4.5);
        // The 2-by-2 kernel recovers the (n + t sqrt(n))/2 exponent.
        for n in [4usize, 9, 16] {
            for t in [-1.0, 0.5, 2.0] {
                let got = kernel_threshold_exponent(n, t, 0.5, 0.25);
                let reference = 0.5 * (n as f64 + t * (n as f64).sqrt());
                assert!((got - reference).abs() < 1e-12);
            }
        }
        // Worst case: (n + t sqrt((l-1) n)) log_l(2) / l.
        for ell in [3usize, 5] {
            let (e, v) = worst_case_profile(ell).unwrap();
            for t in [-0.5, 1.0] {
                let n = 25;
                let got = kernel_threshold_exponent(n, t, e, v);
                let reference = (n as f64 + t * ((ell - 1) as f64 * n as f64).sqrt())
                    * (2.0f64.ln() / (ell as f64).ln())
                    / ell as f64;
                assert!((got - reference).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn row_weight_bounds_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ell in 2..=6usize {
            for _ in 0..50 {
                let rows: Vec<u64> = (0..ell)
                    .map(|_| rng.gen_range(0..(1u64 << ell)))
                    .collect();
                let Ok(g) = BinaryKernel::new(ell, rows) else {
                    continue;
                };
                let d = g.partial_distances();
                for (i, &di) in d.iter().enumerate() {
                    assert!(di >= 1);
                    assert!(di <= g.rows()[i].count_ones());
                }
                assert_eq!(d[ell - 1], g.rows()[ell - 1].count_ones());
            }
        }
    }

    #[test]
    fn appending_rows_never_increases_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ell in 2..=6usize {
            for _ in 0..30 {
                let rows: Vec<u64> = (0..ell)
                    .map(|_| rng.gen_range(0..(1u64 << ell)))
                    .collect();
                let Ok(g) = BinaryKernel::new(ell, rows) else {
                    continue;
                };
                for i in 0..ell {
                    let mut prev = u32::MAX;
                    // Growing suffix spans: rows[j..] for j = l down to i+1.
                    for j in (i + 1..=ell).rev() {
                        let d = g.distance_to_span(g.rows()[i], &g.rows()[j..]);
                        assert!(d <= prev, "span growth increased the distance");
                        prev = d;
                    }
                }
            }
        }
    }

    #[test]
    fn ary_path_statistic_tracks_the_profile() {
        let g = BinaryKernel::worst_case(4).unwrap();
        let p = g.profile();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let path = ArySamplePath::sample(4, 200_000, &mut rng);
        let (mean, var) = path.statistic(&p);
        // Monte Carlo agreement within generous CLT bands.
        let sd = (p.variance / 200_000.0).sqrt();
        assert!((mean - p.exponent).abs() < 5.0 * sd);
        assert!((var - p.variance).abs() < 0.05 * p.variance.max(1e-3));
        assert!(ArySamplePath::new(4, vec![0]).is_err());
        assert!(ArySamplePath::new(4, vec![5]).is_err());
    }
}
