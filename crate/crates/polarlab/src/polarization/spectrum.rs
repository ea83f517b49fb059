//! Exact synthetic-channel spectra.
//!
//! Leaf index convention: index `i` at level `n` has the binary expansion
//! b_1..b_n (most significant bit first), and b_j = 0 applies the minus
//! transform while b_j = 1 applies the plus transform. Larger indices
//! therefore tend to be better channels and the SC decoding order is
//! ascending index. This is the opposite of the trajectory bit convention,
//! where B = 1 selects the minus branch; as multisets the spectra agree
//! either way.

use super::dlog::DualLogValue;
use crate::channel::{DiscreteBMC, ErasureParameter};
use crate::Error;

/// Exhaustive enumeration guard: 2^26 values of 16 bytes is 1 GiB.
pub const MAX_SPECTRUM_LEVEL: usize = 26;

/// The multiset of all 2^n synthetic-channel Bhattacharyya values at level
/// `n`, indexed by leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct ZSpectrum {
    level: usize,
    values: Vec<DualLogValue>,
}

impl ZSpectrum {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[DualLogValue] {
        &self.values
    }

    /// Mean of the plain values, Kahan-compensated so the error stays far
    /// below the 1e-10 conservation tolerance even at level 20+.
    pub fn mean(&self) -> f64 {
        let mut sum = 0.0f64;
        let mut carry = 0.0f64;
        for v in &self.values {
            let y = v.value() - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        sum / self.values.len() as f64
    }
}

fn check_level(n: usize) -> Result<(), Error> {
    if n > MAX_SPECTRUM_LEVEL {
        return Err(Error::LevelTooLarge {
            n,
            max: MAX_SPECTRUM_LEVEL,
        });
    }
    Ok(())
}

/// All 2^n exact erasure-channel Z values at level `n`.
pub fn enumerate_bec_spectrum(eps: ErasureParameter, n: usize) -> Result<ZSpectrum, Error> {
    check_level(n)?;
    let mut values = vec![DualLogValue::ZERO; 1 << n];
    values[0] = DualLogValue::from_prob(eps.get())?;
    for level in 0..n {
        let count = 1usize << level;
        // Expand in place, back to front: parent i spawns children 2i
        // (minus) and 2i + 1 (plus).
        for i in (0..count).rev() {
            let parent = values[i];
            values[2 * i] = parent.minus_step();
            values[2 * i + 1] = parent.square();
        }
    }
    Ok(ZSpectrum { level: n, values })
}

/// Interval enclosures for a general process started at `start`: the lower
/// spectrum freezes values on minus steps, the upper applies the erasure
/// rule. Any process obeying the one-step inequalities with q = 2 lies
/// between the two, leaf by leaf.
pub fn enumerate_interval_spectrum(
    start: DualLogValue,
    n: usize,
) -> Result<(ZSpectrum, ZSpectrum), Error> {
    check_level(n)?;
    let mut lower = vec![DualLogValue::ZERO; 1 << n];
    let mut upper = vec![DualLogValue::ZERO; 1 << n];
    lower[0] = start;
    upper[0] = start;
    for level in 0..n {
        let count = 1usize << level;
        for i in (0..count).rev() {
            let lo = lower[i];
            let hi = upper[i];
            lower[2 * i] = lo;
            lower[2 * i + 1] = lo.square();
            upper[2 * i] = hi.minus_step();
            upper[2 * i + 1] = hi.square();
        }
    }
    Ok((
        ZSpectrum {
            level: n,
            values: lower,
        },
        ZSpectrum {
            level: n,
            values: upper,
        },
    ))
}

/// Exact spectrum of a general discrete channel by repeated transform and
/// merge. The output alphabet roughly squares per level even after merging,
/// so this fails with an explicit alphabet-cap error beyond small levels;
/// erasure or interval mode cover everything larger.
pub fn enumerate_exact_spectrum(w: &DiscreteBMC, n: usize) -> Result<ZSpectrum, Error> {
    check_level(n)?;
    let mut values = Vec::with_capacity(1 << n);
    // Depth-first, minus child before plus child: leaves come out in
    // ascending index order.
    fn descend(
        w: &DiscreteBMC,
        depth: usize,
        values: &mut Vec<DualLogValue>,
    ) -> Result<(), Error> {
        if depth == 0 {
            values.push(DualLogValue::from_prob(w.bhattacharyya().min(1.0))?);
            return Ok(());
        }
        let minus = w.transform_minus()?.merge_equivalent_outputs();
        descend(&minus, depth - 1, values)?;
        let plus = w.transform_plus()?.merge_equivalent_outputs();
        descend(&plus, depth - 1, values)
    }
    descend(w, n, &mut values)?;
    Ok(ZSpectrum { level: n, values })
}
