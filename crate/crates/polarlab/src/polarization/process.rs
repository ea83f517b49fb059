//! Trajectories of the polarization process and its bounding companions.
//!
//! The exact erasure trajectory applies `z -> 2z - z^2` on minus steps and
//! `z -> z^2` on plus steps. Interval mode keeps two trajectories along one
//! path: the lower one freezes z on minus steps (the stagnation side of the
//! one-step inequality), the upper one applies the erasure rule, which is
//! the worst admissible growth. The log-domain upper process L and the
//! converse process both pair their fast moves with the trajectory's
//! squaring steps, so their dominance over the trajectory holds path by
//! path, not just in distribution.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dlog::DualLogValue;
use super::path::SamplePath;
use crate::Error;

/// One exact erasure evolution step; `minus` follows the B = 1 branch.
pub fn step_bec(z: DualLogValue, minus: bool) -> DualLogValue {
    if minus {
        z.minus_step()
    } else {
        z.square()
    }
}

/// An exact erasure trajectory Z_0..Z_n along a sample path.
#[derive(Debug, Clone, PartialEq)]
pub struct ZTrajectory {
    path: SamplePath,
    values: Vec<DualLogValue>,
}

impl ZTrajectory {
    /// Evolve `start` along `path` with the exact erasure rule.
    pub fn from_path_bec(start: DualLogValue, path: SamplePath) -> Self {
        let mut values = Vec::with_capacity(path.len() + 1);
        values.push(start);
        let mut z = start;
        for &minus in path.bits() {
            z = step_bec(z, minus);
            values.push(z);
        }
        Self { path, values }
    }

    /// Evolve along a freshly sampled fair path.
    pub fn sample_bec(start: DualLogValue, n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_path_bec(start, SamplePath::sample(n, &mut rng))
    }

    pub fn path(&self) -> &SamplePath {
        &self.path
    }

    /// Z_0..Z_n (length n + 1).
    pub fn values(&self) -> &[DualLogValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn final_value(&self) -> DualLogValue {
        *self.values.last().expect("trajectory holds Z_0")
    }

    /// Event T: every available value from index n on stays <= zeta.
    pub fn event_t(&self, n: usize, zeta: f64) -> Result<bool, Error> {
        if !(zeta > 0.0 && zeta < 1.0) {
            return Err(Error::InvalidParameter(format!("zeta = {zeta} not in (0, 1)")));
        }
        if n >= self.values.len() {
            return Err(Error::InvalidIndexRange {
                m: n,
                n: self.values.len(),
                len: self.path.len(),
            });
        }
        let ln_zeta = zeta.ln();
        Ok(self.values[n..].iter().all(|z| z.ln_value() <= ln_zeta))
    }
}

/// Enclosing trajectories sharing one path: lower <= exact <= upper holds
/// pointwise for any process obeying the one-step inequalities with q = 2.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalTrajectory {
    pub lower: ZTrajectory,
    pub upper: ZTrajectory,
}

impl IntervalTrajectory {
    pub fn from_path(start: DualLogValue, path: SamplePath) -> Self {
        let mut lower_values = Vec::with_capacity(path.len() + 1);
        let mut upper_values = Vec::with_capacity(path.len() + 1);
        lower_values.push(start);
        upper_values.push(start);
        let (mut lo, mut hi) = (start, start);
        for &minus in path.bits() {
            if minus {
                // Lower: z -> z (stagnation bound); upper: z -> 2z - z^2.
                hi = hi.minus_step();
            } else {
                lo = lo.square();
                hi = hi.square();
            }
            lower_values.push(lo);
            upper_values.push(hi);
        }
        Self {
            lower: ZTrajectory {
                path: path.clone(),
                values: lower_values,
            },
            upper: ZTrajectory {
                path,
                values: upper_values,
            },
        }
    }

    pub fn sample(start: DualLogValue, n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_path(start, SamplePath::sample(n, &mut rng))
    }

    pub fn path(&self) -> &SamplePath {
        self.lower.path()
    }
}

/// Event C: z <= rho^n. Closed comparison, evaluated in the log domain.
pub fn event_c(z: DualLogValue, n: usize, rho: f64) -> bool {
    z.is_zero() || z.ln_value() <= n as f64 * rho.ln()
}

/// Event D: z <= 2^(-2^(n beta)). Closed comparison in the log domain.
pub fn event_d(z: DualLogValue, n: usize, beta: f64) -> bool {
    z.le_exp2(-((n as f64 * beta).exp2()))
}

/// The log-domain upper process along `path`, started at L_m = log2 X_m:
/// doubles on squaring steps, gains log2(q) on minus steps. Returns
/// L_m..L_n inclusive.
pub fn upper_process(
    path: &SamplePath,
    m: usize,
    l_m: f64,
    q: f64,
) -> Result<Vec<f64>, Error> {
    if m > path.len() {
        return Err(Error::InvalidIndexRange {
            m,
            n: path.len(),
            len: path.len(),
        });
    }
    if l_m > 0.0 || l_m.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "L_m = {l_m} must be a log2 of a value in (0, 1]"
        )));
    }
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidParameter(format!("q = {q} must be >= 1")));
    }
    let log2_q = q.log2();
    let mut values = Vec::with_capacity(path.len() - m + 1);
    let mut l = l_m;
    values.push(l);
    for &minus in &path.bits()[m..] {
        l = if minus { l + log2_q } else { 2.0 * l };
        values.push(l);
    }
    Ok(values)
}

/// Closed-form upper bound on L_n given the squaring-step count `s` over a
/// span of `span` steps: 2^s (L_m + (span - s) log2 q). The worst ordering
/// takes all additive steps first.
pub fn ln_upper_bound(l_m: f64, s: u32, span: u32, q: f64) -> f64 {
    debug_assert!(s <= span);
    f64::powi(2.0, s as i32) * (l_m + f64::from(span - s) * q.log2())
}

/// The concentration radius rho(gamma) with
/// log2 rho = -(1 - gamma)(n - m) log2(q) / m - epsilon.
pub fn rho_of_gamma(
    gamma: f64,
    n: usize,
    m: usize,
    q: f64,
    epsilon: f64,
) -> Result<f64, Error> {
    if m == 0 || m >= n {
        return Err(Error::InvalidParameter(format!(
            "need 0 < m < n, got m = {m}, n = {n}"
        )));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must be > 0")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} not in [0, 1]")));
    }
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidParameter(format!("q = {q} must be >= 1")));
    }
    let log2_rho = -(1.0 - gamma) * (n - m) as f64 * q.log2() / m as f64 - epsilon;
    Ok(log2_rho.exp2())
}

/// The converse companion of a trajectory from index `m` on: squares exactly
/// when the trajectory squares, stays constant on minus steps. The
/// trajectory dominates it at every index.
#[derive(Debug, Clone, PartialEq)]
pub struct ConverseProcess {
    /// X-check at indices m..=n.
    pub values: Vec<DualLogValue>,
    /// log2 log2 (1 / X-check_{m+k}) for each k, when X_m is interior;
    /// `None` flags the undefined endpoint cases.
    pub loglog: Option<Vec<f64>>,
}

pub fn converse_process(traj: &ZTrajectory, m: usize) -> Result<ConverseProcess, Error> {
    if m > traj.len() {
        return Err(Error::InvalidIndexRange {
            m,
            n: traj.len(),
            len: traj.len(),
        });
    }
    let start = traj.values()[m];
    let mut values = Vec::with_capacity(traj.len() - m + 1);
    values.push(start);
    let mut x = start;
    for &minus in &traj.path().bits()[m..] {
        if !minus {
            x = x.square();
        }
        values.push(x);
    }
    let loglog = if start.is_zero() || start.is_one() {
        None
    } else {
        Some(
            values
                .iter()
                .map(|v| v.log2_neg_log2().expect("interior start stays interior"))
                .collect(),
        )
    };
    Ok(ConverseProcess { values, loglog })
}

/// Check that log2 X_i <= L_i along a whole trajectory, pairing the L
/// doubling with the trajectory's squaring steps. Comparison slack sits at
/// the few-ulp scale of the magnitudes involved.
pub fn upper_process_dominates(traj: &ZTrajectory, m: usize, q: f64) -> Result<bool, Error> {
    let x_m = traj.values()[m];
    if x_m.is_zero() {
        // L is a log2, so a zero start has no finite L_m; dominance is
        // vacuous there.
        return Ok(true);
    }
    let l = upper_process(traj.path(), m, x_m.log2_value(), q)?;
    Ok(traj.values()[m..]
        .iter()
        .zip(&l)
        .all(|(x, &li)| x.log2_value() <= li + 1e-12 * li.abs().max(1.0)))
}
