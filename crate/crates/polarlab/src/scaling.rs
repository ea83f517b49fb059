//! Gaussian tail functionals and the threshold-fraction experiments.
//!
//! The object of study is the fraction of level-n synthetic channels whose
//! Bhattacharyya value sits below `2^(-2^((n + t sqrt(n))/2 + f(n)))`, as a
//! function of t, against the target curve `Q(t) * I(W)`. The converse side
//! bounds that fraction by an exact fair-binomial tail through the
//! squaring-only comparison process.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

use crate::channel::ErasureParameter;
use crate::polarization::{binomial_tail, AnomalyFn, DualLogValue, ZSpectrum};
use crate::Error;

/// The upper-tail probability Q(t) of a standard Gaussian, via a
/// series/continued-fraction complementary error function. Absolute error
/// is well under 1e-12 over [-8, 8].
pub fn q_function(t: f64) -> f64 {
    0.5 * erfc(t * FRAC_1_SQRT_2)
}

/// erf by its Maclaurin series; accurate for |x| < 2 where at most ~1.5
/// digits cancel.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0u32;
    loop {
        let kf = f64::from(k);
        // t_{k+1} = -t_k * x^2 (2k+1) / ((k+1)(2k+3))
        term *= -x2 * (2.0 * kf + 1.0) / ((kf + 1.0) * (2.0 * kf + 3.0));
        sum += term;
        k += 1;
        if term.abs() <= sum.abs() * 1e-18 || k > 200 {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

/// erfc by the Laplace continued fraction
/// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
/// evaluated with the modified Lentz algorithm; accurate for x >= 2.
fn erfc_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0f64;
    for n in 1..=300 {
        let a = f64::from(n) * 0.5;
        d = x + a * d;
        if d == 0.0 {
            d = tiny;
        }
        c = x + a / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    (-x * x).exp() / std::f64::consts::PI.sqrt() / f
}

fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        erfc_cf(x)
    }
}

/// The unique t with Q(t) = p, found by monotone bisection run down to f64
/// resolution. Both plateau edges are located and averaged, so the answer
/// sits centrally among the floats that evaluate to p.
pub fn q_inverse(p: f64) -> Result<f64, Error> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    // sup{t : Q(t) > p} and inf side of the same crossing.
    let edge = |keep_if: &dyn Fn(f64) -> bool| -> f64 {
        let mut lo = -40.0f64;
        let mut hi = 40.0f64;
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return mid;
            }
            if keep_if(q_function(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    };
    let left = edge(&|q| q > p);
    let right = edge(&|q| q >= p);
    Ok(0.5 * (left + right))
}

/// The double-log statistic log2(-log2 v); `None` marks the undefined
/// endpoint cases v = 0 and v = 1.
pub fn loglog_statistic(z: DualLogValue) -> Option<f64> {
    z.log2_neg_log2()
}

/// A threshold 2^(-2^e) with e = (n + t sqrt(n))/2 + f(n), kept in exponent
/// form; the value itself would underflow for n beyond ~20.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingThreshold {
    pub n: usize,
    pub t: f64,
    pub f_value: f64,
}

impl ScalingThreshold {
    pub fn new(n: usize, t: f64, f: &AnomalyFn) -> Self {
        Self {
            n,
            t,
            f_value: f.eval(n),
        }
    }

    /// The inner exponent e.
    pub fn exponent(&self) -> f64 {
        let n = self.n as f64;
        0.5 * (n + self.t * n.sqrt()) + self.f_value
    }
}

/// One measured point of a scaling curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    pub t: f64,
    pub fraction: f64,
    pub target: f64,
}

/// The empirical law of the threshold events at one level, next to the
/// Gaussian-tail target Q(t) * I(W).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingCurve {
    pub n: usize,
    pub points: Vec<ScalingPoint>,
}

/// Sort key for threshold counting: the double-log statistic, with exact
/// zeros mapped to +inf (they pass every threshold) and exact ones to -inf
/// (they fail every threshold).
fn loglog_key(z: &DualLogValue) -> f64 {
    if z.is_zero() {
        f64::INFINITY
    } else if z.is_one() {
        f64::NEG_INFINITY
    } else {
        z.log2_neg_log2().expect("interior value")
    }
}

/// The fraction of `values` with v <= 2^(-2^e), under the convention that
/// values at or above 1/2 fail every threshold: the effective cut is
/// loglog(v) >= max(e, 0).
pub fn fraction_at_exponent(values: &[DualLogValue], e: f64) -> f64 {
    let cut = e.max(0.0);
    let hits = values.iter().filter(|z| loglog_key(z) >= cut).count();
    hits as f64 / values.len() as f64
}

/// The limit mass estimator for processes without a closed-form capacity:
/// the fraction of final values already below 2^-20.
pub fn estimate_p_zero(final_values: &[DualLogValue]) -> f64 {
    let cut = -20.0;
    final_values.iter().filter(|z| z.le_exp2(cut)).count() as f64 / final_values.len() as f64
}

/// The empirical scaling curve of a spectrum over a sorted t grid, with
/// P(X_inf = 0) instantiated as the base channel capacity `i_w`.
pub fn empirical_scaling_curve(
    spec: &ZSpectrum,
    t_grid: &[f64],
    f: &AnomalyFn,
    i_w: f64,
) -> ScalingCurve {
    let keys: Vec<f64> = spec.values().iter().map(loglog_key).collect();
    let n = spec.level();
    let points = t_grid
        .iter()
        .map(|&t| {
            let e = ScalingThreshold::new(n, t, f).exponent();
            let cut = e.max(0.0);
            let hits = keys.iter().filter(|&&k| k >= cut).count();
            ScalingPoint {
                t,
                fraction: hits as f64 / keys.len() as f64,
                target: q_function(t) * i_w,
            }
        })
        .collect();
    ScalingCurve { n, points }
}

/// Exact upper bound on the fraction of values below 2^(-2^e): the
/// comparison process only squares, so its double-log statistic is the
/// squaring count shifted by log2 log2 (1 / eps0), and the bound is a fair
/// binomial tail.
pub fn converse_dominance_bound(
    eps0: ErasureParameter,
    n: usize,
    e: f64,
) -> Result<f64, Error> {
    let z0 = eps0.get();
    if z0 <= 0.0 || z0 >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "starting value {z0} must be interior to (0, 1)"
        )));
    }
    let offset = (-z0.ln() / LN_2).log2();
    Ok(binomial_tail(n, e - offset))
}

/// The supremum of admissible t for rate R: Q^{-1}(R / I(W)).
pub fn rate_to_t(rate: f64, i_w: f64) -> Result<f64, Error> {
    if rate.is_nan() || rate <= 0.0 || rate >= i_w {
        return Err(Error::RateExceedsCapacity {
            rate,
            capacity: i_w,
        });
    }
    q_inverse(rate / i_w)
}

/// Both union-bound forms over the best k = ceil(N R) channels, saturated
/// at certainty so they stay probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnionBound {
    /// Sum of the selected Z values.
    pub sum: DualLogValue,
    /// k * gamma with gamma the k-th smallest Z.
    pub k_gamma: DualLogValue,
}

fn from_ln_saturating(ln: f64) -> DualLogValue {
    if ln >= 0.0 {
        DualLogValue::ONE
    } else {
        DualLogValue::from_log_parts(ln, crate::polarization::log1mexp(ln))
            .expect("negative log coordinate")
    }
}

/// Union bound on SC block error from a spectrum at rate R.
pub fn union_bound_pe(spec: &ZSpectrum, rate: f64) -> Result<UnionBound, Error> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!("rate = {rate} not in (0, 1]")));
    }
    let n_block = spec.len() as f64;
    let k = (n_block * rate).ceil() as usize;
    let mut lns: Vec<f64> = spec.values().iter().map(|z| z.ln_value()).collect();
    lns.sort_unstable_by(|a, b| a.partial_cmp(b).expect("no NaN log values"));
    let selected = &lns[..k];
    let ln_gamma = selected[k - 1];
    if ln_gamma == f64::NEG_INFINITY {
        // Every selected channel is perfect.
        return Ok(UnionBound {
            sum: DualLogValue::ZERO,
            k_gamma: DualLogValue::ZERO,
        });
    }
    // Scale by gamma: each term is <= 1, so the scaled sum is <= k and the
    // sum form can never exceed the k gamma form, in floating point too.
    let scaled: f64 = selected.iter().map(|&ln| (ln - ln_gamma).exp()).sum();
    let ln_sum = ln_gamma + scaled.ln();
    let ln_k_gamma = ln_gamma + (k as f64).ln();
    Ok(UnionBound {
        sum: from_ln_saturating(ln_sum),
        k_gamma: from_ln_saturating(ln_k_gamma),
    })
}

/// Kolmogorov distance between the empirical sub-law of the normalized
/// double-log statistic (restricted to values at or below 1/2, each with
/// mass 2^-n) and the target sub-distribution Q(t) * i_w.
pub fn kolmogorov_distance(spec: &ZSpectrum, i_w: f64) -> f64 {
    let n = spec.level() as f64;
    let scale = 0.5 * n.sqrt();
    let total = spec.len() as f64;
    let mut us: Vec<f64> = spec
        .values()
        .iter()
        .map(loglog_key)
        .filter(|&k| k >= 0.0)
        .map(|k| (k - 0.5 * n) / scale)
        .collect();
    us.sort_unstable_by(|a, b| a.partial_cmp(b).expect("keys are not NaN"));

    let mut sup: f64 = 0.0;
    let mut remaining = us.len();
    // Left boundary of the restricted domain: all kept mass vs the target.
    let u_min = -n.sqrt();
    sup = sup.max((remaining as f64 / total - q_function(u_min) * i_w).abs());
    let mut j = 0;
    while j < us.len() {
        let u = us[j];
        let mut ties = 0;
        while j < us.len() && us[j] == u {
            ties += 1;
            j += 1;
        }
        if u.is_infinite() {
            // Mass at +inf (exact zeros) never drops off the survivor.
            break;
        }
        let target = q_function(u) * i_w;
        let at = remaining as f64 / total;
        let after = (remaining - ties) as f64 / total;
        sup = sup.max((at - target).abs()).max((after - target).abs());
        remaining -= ties;
    }
    // Right limit: whatever mass never drops (exact zeros) vs target 0.
    sup.max(remaining as f64 / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarization::enumerate_bec_spectrum;

    fn eps(e: f64) -> ErasureParameter {
        ErasureParameter::new(e).unwrap()
    }

    #[test]
    fn q_known_values() {
        assert_eq!(q_function(0.0), 0.5);
        // Frozen reference values (15+ digits).
        assert!((q_function(1.0) - 0.158_655_253_931_457_07).abs() < 1e-14);
        assert!((q_function(2.0) - 0.022_750_131_948_179_2).abs() < 1e-14);
        assert!((q_function(-1.0) - 0.841_344_746_068_543).abs() < 1e-13);
        assert!((q_function(6.0) - 9.865_876_450_376_946e-10).abs() < 1e-20);
    }

    #[test]
    fn q_symmetry() {
        for t in [0.5, 1.7, 3.2] {
            assert!((q_function(t) + q_function(-t) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn q_is_strictly_decreasing_on_a_grid() {
        let mut prev = q_function(-8.0);
        let mut t = -8.0 + 0.05;
        while t <= 8.0 {
            let q = q_function(t);
            assert!(q < prev, "not decreasing at t = {t}");
            prev = q;
            t += 0.05;
        }
    }

    #[test]
    fn q_inverse_examples() {
        assert!(q_inverse(0.5).unwrap().abs() < 1e-13);
        assert!((q_inverse(0.25).unwrap() - 0.674_489_750_196_081_7).abs() < 1e-9);
        assert!(q_inverse(0.0).is_err());
        assert!(q_inverse(1.0).is_err());
    }

    #[test]
    fn q_round_trips_through_inverse() {
        let mut t = -3.0;
        while t <= 3.0 {
            let rt = q_inverse(q_function(t)).unwrap();
            assert!((rt - t).abs() <= 1e-9, "round trip at {t}: {rt}");
            t += 0.25;
        }
    }

    #[test]
    fn loglog_examples() {
        let mut v = DualLogValue::half();
        assert_eq!(loglog_statistic(v), Some(0.0));
        for _ in 0..8 {
            v = v.square();
        }
        assert_eq!(loglog_statistic(v), Some(8.0));
        assert_eq!(
            loglog_statistic(DualLogValue::from_prob(0.25).unwrap()),
            Some(1.0)
        );
        assert_eq!(loglog_statistic(DualLogValue::ZERO), None);
        assert_eq!(loglog_statistic(DualLogValue::ONE), None);
    }

    #[test]
    fn curve_on_the_level_one_spectrum() {
        let spec = enumerate_bec_spectrum(eps(0.5), 1).unwrap();
        // Exponent 1 needs t = 1: only the 0.25 leaf (loglog exactly 1)
        // qualifies.
        let curve = empirical_scaling_curve(&spec, &[1.0], &AnomalyFn::Zero, 0.5);
        assert_eq!(curve.points[0].fraction, 0.5);
        // A hugely negative t drives the exponent to or below zero; the cut
        // is then "v <= 1/2", which both leaves fail except 0.25.
        let curve = empirical_scaling_curve(&spec, &[-3.0], &AnomalyFn::Zero, 0.5);
        assert_eq!(curve.points[0].fraction, 0.5);
    }

    #[test]
    fn curve_is_monotone_in_t() {
        let spec = enumerate_bec_spectrum(eps(0.5), 10).unwrap();
        let grid: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.1).collect();
        let curve = empirical_scaling_curve(&spec, &grid, &AnomalyFn::Zero, 0.5);
        for pair in curve.points.windows(2) {
            assert!(pair[1].fraction <= pair[0].fraction);
        }
    }

    #[test]
    fn converse_bound_offsets() {
        // eps0 = 1/2 has zero double-log offset.
        assert_eq!(
            converse_dominance_bound(eps(0.5), 14, 3.0).unwrap(),
            binomial_tail(14, 3.0)
        );
        assert_eq!(converse_dominance_bound(eps(0.5), 14, -1.0).unwrap(), 1.0);
        assert!(converse_dominance_bound(eps(0.0), 14, 3.0).is_err());
        assert!(converse_dominance_bound(eps(1.0), 14, 3.0).is_err());
    }

    #[test]
    fn rate_to_t_examples() {
        assert!(rate_to_t(0.25, 0.5).unwrap().abs() < 1e-12);
        assert!((rate_to_t(0.125, 0.5).unwrap() - 0.674_489_750_196_081_7).abs() < 1e-9);
        assert!(rate_to_t(0.5, 0.5).is_err());
        assert!(rate_to_t(0.0, 0.5).is_err());
        // Monotone decreasing in R.
        let t1 = rate_to_t(0.2, 0.5).unwrap();
        let t2 = rate_to_t(0.4, 0.5).unwrap();
        assert!(t2 < t1);
    }

    #[test]
    fn union_bound_single_channel() {
        let spec = enumerate_bec_spectrum(eps(0.5), 3).unwrap();
        // k = 1: both forms reduce to the smallest Z = 0.5^8.
        let ub = union_bound_pe(&spec, 0.125).unwrap();
        let z_min = 0.5f64.powi(8);
        assert!((ub.sum.value() - z_min).abs() < 1e-15);
        assert!((ub.k_gamma.value() - z_min).abs() < 1e-15);
    }

    #[test]
    fn union_bound_sum_never_exceeds_k_gamma() {
        for e in [0.2, 0.5, 0.8] {
            let spec = enumerate_bec_spectrum(eps(e), 8).unwrap();
            for rate in [0.1, 0.25, 0.3337, 0.5, 0.75, 1.0] {
                let ub = union_bound_pe(&spec, rate).unwrap();
                assert!(ub.sum.ln_value() <= ub.k_gamma.ln_value());
            }
        }
    }

    #[test]
    fn union_bound_sum_matches_plain_summation() {
        // At level 10 the selected values are all representable, so the
        // log-domain sum must agree with a direct f64 sum. Compare in the
        // ln domain, where the rounding budget is a few ulps of |ln|.
        let spec = enumerate_bec_spectrum(eps(0.5), 10).unwrap();
        for rate in [0.05, 0.25, 0.6] {
            let ub = union_bound_pe(&spec, rate).unwrap();
            let k = (1024.0 * rate).ceil() as usize;
            let mut plain: Vec<f64> = spec.values().iter().map(|z| z.value()).collect();
            plain.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            let direct: f64 = plain[..k].iter().sum();
            if direct >= 1.0 {
                assert!(ub.sum.is_one(), "rate {rate} should saturate");
            } else {
                assert!(
                    (ub.sum.ln_value() - direct.ln()).abs() <= 1e-11,
                    "rate {rate}: {} vs {}",
                    ub.sum.ln_value(),
                    direct.ln()
                );
            }
        }
    }

    #[test]
    fn union_bound_saturates_at_one() {
        let spec = enumerate_bec_spectrum(eps(0.9), 4).unwrap();
        let ub = union_bound_pe(&spec, 1.0).unwrap();
        assert!(ub.k_gamma.is_one());
        assert!(ub.sum.is_one());
    }

    #[test]
    fn threshold_exponent_shape() {
        let th = ScalingThreshold::new(16, 0.0, &AnomalyFn::Zero);
        assert_eq!(th.exponent(), 8.0);
        let th = ScalingThreshold::new(16, 1.0, &AnomalyFn::Zero);
        assert_eq!(th.exponent(), 10.0);
        let th = ScalingThreshold::new(16, 0.0, &AnomalyFn::LogScaled(1.0));
        assert_eq!(th.exponent(), 12.0);
    }

    #[test]
    fn p_zero_estimate_tracks_capacity() {
        // On a deep erasure spectrum the sub-2^-20 mass approaches I(W).
        let spec = enumerate_bec_spectrum(eps(0.5), 18).unwrap();
        let hat = estimate_p_zero(spec.values());
        assert!((hat - 0.5).abs() < 0.1, "estimate {hat}");
        assert_eq!(estimate_p_zero(&[DualLogValue::ZERO, DualLogValue::ONE]), 0.5);
    }

    #[test]
    fn kolmogorov_distance_shrinks_with_level() {
        let d10 = kolmogorov_distance(&enumerate_bec_spectrum(eps(0.5), 10).unwrap(), 0.5);
        let d14 = kolmogorov_distance(&enumerate_bec_spectrum(eps(0.5), 14).unwrap(), 0.5);
        assert!(d14 < d10, "d14 = {d14}, d10 = {d10}");
    }
}
