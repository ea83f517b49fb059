//! Branch-choice sequences and the counting events over them.

use rand::Rng;

use crate::Error;

/// A finite sequence of fair branch choices B_1..B_n.
///
/// Bit convention for trajectories: `true` (B = 1) selects the minus branch,
/// `false` (B = 0) the plus (squaring) branch. Spectrum leaf indices use the
/// opposite convention; see `enumerate_bec_spectrum`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePath {
    bits: Vec<bool>,
}

impl SamplePath {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Fair i.i.d. bits.
    pub fn sample<R: Rng>(len: usize, rng: &mut R) -> Self {
        Self {
            bits: (0..len).map(|_| rng.gen()).collect(),
        }
    }

    /// The path of length `n` encoded by the low `n` bits of `code`:
    /// bit `j` of `code` is B_{j+1}. Handy for exhaustive enumeration.
    pub fn from_code(code: u64, n: usize) -> Self {
        Self {
            bits: (0..n).map(|j| (code >> j) & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// S_{m,n}: the number of one-bits among B_{m+1}..B_n.
    pub fn partial_sum(&self, m: usize, n: usize) -> Result<usize, Error> {
        if m >= n || n > self.bits.len() {
            return Err(Error::InvalidIndexRange {
                m,
                n,
                len: self.bits.len(),
            });
        }
        Ok(self.bits[m..n].iter().filter(|&&b| b).count())
    }

    /// The number of plus (squaring) steps among B_{m+1}..B_n.
    pub fn squaring_count(&self, m: usize, n: usize) -> Result<usize, Error> {
        Ok(n - m - self.partial_sum(m, n)?)
    }

    /// The path whose one-bits mark this path's squaring steps. Statements
    /// about the doubling process are counted on this complement.
    pub fn squaring_indicator(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    /// Event G: S_{m,n} >= gamma (n - m).
    pub fn event_g(&self, m: usize, n: usize, gamma: f64) -> Result<bool, Error> {
        let s = self.partial_sum(m, n)? as f64;
        Ok(s >= gamma * (n - m) as f64)
    }

    /// Event H: S_{m,n} >= (n - m + t sqrt(n - m)) / 2 + f(n - m).
    pub fn event_h(&self, m: usize, n: usize, t: f64, f: &AnomalyFn) -> Result<bool, Error> {
        let s = self.partial_sum(m, n)? as f64;
        let span = (n - m) as f64;
        Ok(s >= 0.5 * (span + t * span.sqrt()) + f.eval(n - m))
    }
}

/// The o(sqrt(n)) anomaly term allowed in the threshold exponent. The zero
/// function is the default; the other closed forms cover the CLI choices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnomalyFn {
    Zero,
    /// c * log2(n), with f(0) = 0.
    LogScaled(f64),
    /// c * n^a with a < 1/2.
    Power { c: f64, a: f64 },
}

impl AnomalyFn {
    pub fn power(c: f64, a: f64) -> Result<Self, Error> {
        if a.is_nan() || a >= 0.5 {
            return Err(Error::InvalidParameter(format!(
                "anomaly exponent a = {a} must be < 1/2"
            )));
        }
        Ok(Self::Power { c, a })
    }

    pub fn eval(&self, n: usize) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::LogScaled(c) => {
                if n == 0 {
                    0.0
                } else {
                    c * (n as f64).log2()
                }
            }
            Self::Power { c, a } => c * (n as f64).powf(a),
        }
    }
}

/// Validated parameter bag for the event family: gamma for G, zeta for T,
/// rho for C, beta for D, (t, f) for H, the level index m, and the growth
/// constant q (q = 2 for the Bhattacharyya process).
#[derive(Debug, Clone, PartialEq)]
pub struct EventParams {
    pub gamma: f64,
    pub zeta: f64,
    pub rho: f64,
    pub beta: f64,
    pub t: f64,
    pub f: AnomalyFn,
    pub m: usize,
    pub q: f64,
}

impl EventParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gamma: f64,
        zeta: f64,
        rho: f64,
        beta: f64,
        t: f64,
        f: AnomalyFn,
        m: usize,
        q: f64,
    ) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!("gamma = {gamma} not in [0, 1]")));
        }
        if !(zeta > 0.0 && zeta < 1.0) {
            return Err(Error::InvalidParameter(format!("zeta = {zeta} not in (0, 1)")));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidParameter(format!("rho = {rho} not in (0, 1)")));
        }
        if !(beta > 0.0 && beta < 0.5) {
            return Err(Error::InvalidParameter(format!("beta = {beta} not in (0, 1/2)")));
        }
        if !t.is_finite() {
            return Err(Error::InvalidParameter(format!("t = {t} not finite")));
        }
        if q.is_nan() || q < 1.0 {
            return Err(Error::InvalidParameter(format!("q = {q} must be >= 1")));
        }
        Ok(Self {
            gamma,
            zeta,
            rho,
            beta,
            t,
            f,
            m,
            q,
        })
    }
}
