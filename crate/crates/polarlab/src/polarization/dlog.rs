//! Double-logarithmic representation of values in [0, 1].
//!
//! A value `v` is stored as the pair `(ln v, ln(1-v))`. The polarization
//! recursion only ever squares `v` (plus branch) or squares `1-v` (erasure
//! minus branch), and both act as an exact doubling of one coordinate, so
//! values like `2^(-2^900)` keep full precision where a plain `f64`
//! underflows at ~1e-308.

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use crate::Error;

/// ln(1 - e^x) for x <= 0, split at -ln 2 to avoid cancellation.
pub fn log1mexp(x: f64) -> f64 {
    debug_assert!(x <= 0.0, "log1mexp needs x <= 0, got {x}");
    if x < -LN_2 {
        (-x.exp()).ln_1p()
    } else {
        (-x.exp_m1()).ln()
    }
}

/// A probability-like value v in [0, 1] stored as (ln v, ln(1-v)).
///
/// Exactly one coordinate may be -inf (v = 0 or v = 1). When v crowds so
/// close to an endpoint that the near-zero coordinate rounds to -0.0, the
/// far coordinate still carries the value, and the step operations switch
/// to updating that coordinate directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualLogValue {
    log_v: f64,
    log_1mv: f64,
}

impl DualLogValue {
    /// Exact zero (absorbing endpoint).
    pub const ZERO: Self = Self {
        log_v: f64::NEG_INFINITY,
        log_1mv: 0.0,
    };

    /// Exact one (absorbing endpoint).
    pub const ONE: Self = Self {
        log_v: 0.0,
        log_1mv: f64::NEG_INFINITY,
    };

    pub fn from_prob(p: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Self {
            log_v: p.ln(),
            log_1mv: (-p).ln_1p(),
        })
    }

    /// Rebuild from the two log coordinates.
    pub fn from_log_parts(log_v: f64, log_1mv: f64) -> Result<Self, Error> {
        let ok = log_v <= 0.0
            && log_1mv <= 0.0
            && !log_v.is_nan()
            && !log_1mv.is_nan()
            && !(log_v == f64::NEG_INFINITY && log_1mv == f64::NEG_INFINITY);
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "log coordinates ({log_v}, {log_1mv}) do not describe a value in [0, 1]"
            )));
        }
        Ok(Self { log_v, log_1mv })
    }

    pub fn half() -> Self {
        Self {
            log_v: -LN_2,
            log_1mv: -LN_2,
        }
    }

    pub fn value(&self) -> f64 {
        self.log_v.exp()
    }

    pub fn complement_value(&self) -> f64 {
        self.log_1mv.exp()
    }

    /// ln v.
    pub fn ln_value(&self) -> f64 {
        self.log_v
    }

    /// ln (1 - v).
    pub fn ln_complement(&self) -> f64 {
        self.log_1mv
    }

    /// log2 v.
    pub fn log2_value(&self) -> f64 {
        self.log_v / LN_2
    }

    pub fn is_zero(&self) -> bool {
        self.log_v == f64::NEG_INFINITY
    }

    pub fn is_one(&self) -> bool {
        self.log_1mv == f64::NEG_INFINITY
    }

    /// Plus-branch step: v -> v^2. Endpoints are absorbing.
    pub fn square(self) -> Self {
        if self.is_zero() || self.is_one() {
            return self;
        }
        if self.log_v == 0.0 {
            // v within an ulp of 1: 1 - v^2 = (1-v)(1+v) ~= 2(1-v).
            return Self {
                log_v: 0.0,
                log_1mv: self.log_1mv + LN_2,
            };
        }
        let log_v = 2.0 * self.log_v;
        Self {
            log_v,
            log_1mv: log1mexp(log_v),
        }
    }

    /// Erasure minus-branch step: v -> 2v - v^2 = 1 - (1-v)^2.
    /// Endpoints are absorbing.
    pub fn minus_step(self) -> Self {
        if self.is_zero() || self.is_one() {
            return self;
        }
        if self.log_1mv == 0.0 {
            // v within an ulp of 0: 2v - v^2 ~= 2v.
            return Self {
                log_v: self.log_v + LN_2,
                log_1mv: self.log_1mv,
            };
        }
        let log_1mv = 2.0 * self.log_1mv;
        Self {
            log_v: log1mexp(log_1mv),
            log_1mv,
        }
    }

    /// The double-log statistic log2(-log2 v). `None` at the endpoints,
    /// where it is undefined.
    pub fn log2_neg_log2(&self) -> Option<f64> {
        if self.is_zero() || self.is_one() {
            return None;
        }
        Some((-self.log_v / LN_2).log2())
    }

    /// Order by the represented value.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.log_v
            .partial_cmp(&other.log_v)
            .expect("log coordinates are never NaN")
    }

    /// v <= 2^t, compared in the log domain.
    pub fn le_exp2(&self, t: f64) -> bool {
        if self.is_zero() {
            return true;
        }
        self.log_v <= t * LN_2
    }

    /// Internal consistency: exp(ln v) + exp(ln(1-v)) = 1 within `tol`
    /// whenever both coordinates exceed -30.
    pub fn is_consistent(&self, tol: f64) -> bool {
        if self.log_v <= -30.0 || self.log_1mv <= -30.0 {
            return true;
        }
        (self.value() + self.complement_value() - 1.0).abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn platform_ln_half_is_minus_ln2() {
        // The exact-boundary tests in this crate lean on this identity.
        assert_eq!(0.5f64.ln(), -LN_2);
    }

    #[test]
    fn endpoints_absorb() {
        for v in [DualLogValue::ZERO, DualLogValue::ONE] {
            assert_eq!(v.square(), v);
            assert_eq!(v.minus_step(), v);
        }
        assert!(DualLogValue::ZERO.is_zero());
        assert!(DualLogValue::ONE.is_one());
        assert_eq!(DualLogValue::ZERO.value(), 0.0);
        assert_eq!(DualLogValue::ONE.value(), 1.0);
    }

    #[test]
    fn from_prob_bounds() {
        assert!(DualLogValue::from_prob(-0.1).is_err());
        assert!(DualLogValue::from_prob(1.1).is_err());
        assert!(DualLogValue::from_prob(f64::NAN).is_err());
        assert_eq!(DualLogValue::from_prob(0.0).unwrap(), DualLogValue::ZERO);
        assert_eq!(DualLogValue::from_prob(1.0).unwrap(), DualLogValue::ONE);
    }

    #[test]
    fn square_matches_plain_arithmetic() {
        let v = DualLogValue::from_prob(0.3).unwrap().square();
        assert!((v.value() - 0.09).abs() < 1e-15);
        assert!((v.complement_value() - 0.91).abs() < 1e-15);
    }

    #[test]
    fn minus_step_matches_plain_arithmetic() {
        let v = DualLogValue::from_prob(0.3).unwrap().minus_step();
        assert!((v.value() - 0.51).abs() < 1e-15);
    }

    #[test]
    fn repeated_squaring_is_exact_in_representation() {
        // k plus steps double ln v exactly each time: no drift at all.
        for p in [0.5, 0.3, 0.9173] {
            let start = DualLogValue::from_prob(p).unwrap();
            let mut v = start;
            for k in 1..=40u32 {
                v = v.square();
                let scale = f64::powi(2.0, k as i32);
                assert_eq!(v.ln_value(), start.ln_value() * scale);
            }
        }
    }

    #[test]
    fn loglog_of_repeated_squaring_from_half() {
        let mut v = DualLogValue::half();
        for _ in 0..10 {
            v = v.square();
        }
        assert_eq!(v.log2_neg_log2(), Some(10.0));
    }

    #[test]
    fn loglog_small_cases() {
        assert_eq!(DualLogValue::half().log2_neg_log2(), Some(0.0));
        let quarter = DualLogValue::from_prob(0.25).unwrap();
        assert_eq!(quarter.log2_neg_log2(), Some(1.0));
        assert_eq!(DualLogValue::ZERO.log2_neg_log2(), None);
        assert_eq!(DualLogValue::ONE.log2_neg_log2(), None);
    }

    #[test]
    fn deep_minus_steps_survive_complement_underflow() {
        // Drive v far below the f64 underflow threshold, then take minus
        // steps: each one must still multiply v by ~2.
        let mut v = DualLogValue::half();
        for _ in 0..11 {
            v = v.square(); // ln v = -2^11 ln 2 ~= -1420, e^(ln v) underflows
        }
        let before = v.ln_value();
        let stepped = v.minus_step();
        assert!((stepped.ln_value() - (before + LN_2)).abs() < 1e-9);
        assert!(!stepped.is_zero());
    }

    #[test]
    fn minus_step_duality_with_square() {
        // The minus step is the square step with coordinates swapped.
        let swap = |v: DualLogValue| {
            DualLogValue::from_log_parts(v.ln_complement(), v.ln_value()).unwrap()
        };
        let mut x = 0.017_f64;
        for _ in 0..1000 {
            x = (x * 4.63) % 1.0;
            if x == 0.0 || x == 1.0 {
                continue;
            }
            let v = DualLogValue::from_prob(x).unwrap();
            let direct = v.minus_step();
            let mirrored = swap(swap(v).square());
            assert!((direct.ln_value() - mirrored.ln_value()).abs() <= 1e-12);
            assert!((direct.ln_complement() - mirrored.ln_complement()).abs() <= 1e-12);
        }
    }

    proptest! {
        #[test]
        fn steps_preserve_consistency(p in 1e-6..=0.999_999f64, bits in proptest::collection::vec(any::<bool>(), 0..40)) {
            let mut v = DualLogValue::from_prob(p).unwrap();
            prop_assert!(v.is_consistent(1e-9));
            for minus in bits {
                v = if minus { v.minus_step() } else { v.square() };
                prop_assert!(v.is_consistent(1e-9));
                prop_assert!(v.ln_value() <= 0.0 && v.ln_complement() <= 0.0);
            }
        }

        #[test]
        fn value_order_preserved_by_both_steps(a in 1e-9..=1.0f64, b in 1e-9..=1.0f64) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let lo = DualLogValue::from_prob(lo).unwrap();
            let hi = DualLogValue::from_prob(hi).unwrap();
            prop_assert!(lo.square().cmp_value(&hi.square()) != Ordering::Greater);
            prop_assert!(lo.minus_step().cmp_value(&hi.minus_step()) != Ordering::Greater);
        }
    }
}
