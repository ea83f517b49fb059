//! Discrete binary-input memoryless channels and the polar transform pair.
//!
//! A channel is a finite list of likelihood pairs `(W(y|0), W(y|1))`, one per
//! output symbol. The combining/splitting step turns two copies of `W` into a
//! degraded channel `W-` over output pairs and an upgraded channel `W+` over
//! output pairs plus the first input; both are computed exactly by
//! enumeration. For the erasure channel the step collapses to closed-form
//! arithmetic on the erasure probability, which is what makes exact
//! large-level experiments possible elsewhere in the crate.

use crate::Error;

/// Generic transforms refuse to build a channel with more outputs than this.
/// Exact transforms are quadratic in the alphabet per step; the cap keeps
/// memory bounded and makes the failure mode explicit instead of silent.
pub const MAX_OUTPUTS: usize = 1 << 16;

const PROB_SUM_TOL: f64 = 1e-12;

/// A discrete binary-input memoryless channel: one `(W(y|0), W(y|1))` pair
/// per output symbol. Likelihoods are validated and renormalized exactly
/// once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBMC {
    outputs: Vec<(f64, f64)>,
}

impl DiscreteBMC {
    /// Build a channel from raw likelihood pairs.
    ///
    /// Each column must sum to 1 within 1e-12 (file-sourced channels carry
    /// decimal rounding); the columns are then renormalized once. Output
    /// symbols with an exactly `(0, 0)` likelihood pair are unreachable and
    /// dropped.
    pub fn new(outputs: Vec<(f64, f64)>) -> Result<Self, Error> {
        if outputs.is_empty() {
            return Err(Error::InvalidChannel("no output symbols".into()));
        }
        for &(w0, w1) in &outputs {
            if !w0.is_finite() || !w1.is_finite() || w0 < 0.0 || w1 < 0.0 {
                return Err(Error::InvalidChannel(format!(
                    "likelihood pair ({w0}, {w1}) is not a pair of finite nonnegative numbers"
                )));
            }
        }
        let sum0: f64 = outputs.iter().map(|o| o.0).sum();
        let sum1: f64 = outputs.iter().map(|o| o.1).sum();
        if (sum0 - 1.0).abs() > PROB_SUM_TOL || (sum1 - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidChannel(format!(
                "likelihoods must sum to 1 per input (got {sum0} and {sum1})"
            )));
        }
        let outputs: Vec<(f64, f64)> = outputs
            .into_iter()
            .filter(|&(w0, w1)| w0 != 0.0 || w1 != 0.0)
            .map(|(w0, w1)| (w0 / sum0, w1 / sum1))
            .collect();
        if outputs.is_empty() {
            return Err(Error::InvalidChannel("all output symbols unreachable".into()));
        }
        Ok(Self { outputs })
    }

    /// Already-normalized outputs from an internal transform.
    fn from_transform(outputs: Vec<(f64, f64)>) -> Self {
        Self { outputs }
    }

    /// The binary erasure channel with erasure probability `eps`, encoded
    /// over three outputs: correct-0, erasure, correct-1.
    pub fn bec(eps: ErasureParameter) -> Self {
        let e = eps.get();
        // Columns sum to 1 exactly up to one rounding; skip revalidation.
        Self {
            outputs: vec![(1.0 - e, 0.0), (e, e), (0.0, 1.0 - e)],
        }
    }

    /// The binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Self {
            outputs: vec![(1.0 - p, p), (p, 1.0 - p)],
        })
    }

    pub fn outputs(&self) -> &[(f64, f64)] {
        &self.outputs
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    /// The Bhattacharyya parameter Z(W) = sum_y sqrt(W(y|0) W(y|1)).
    pub fn bhattacharyya(&self) -> f64 {
        self.outputs.iter().map(|&(w0, w1)| (w0 * w1).sqrt()).sum()
    }

    /// The symmetric capacity I(W) in bits: the mutual information between
    /// input and output under a uniform input, with the 0 log 0 = 0
    /// convention.
    pub fn symmetric_capacity(&self) -> f64 {
        let mut bits = 0.0;
        for &(w0, w1) in &self.outputs {
            let p = 0.5 * (w0 + w1);
            if w0 > 0.0 {
                bits += 0.5 * w0 * (w0 / p).log2();
            }
            if w1 > 0.0 {
                bits += 0.5 * w1 * (w1 / p).log2();
            }
        }
        bits
    }

    /// The degraded channel W- over output pairs (y1, y2), ordered
    /// lexicographically.
    pub fn transform_minus(&self) -> Result<Self, Error> {
        let k = self.outputs.len();
        let required = k.checked_mul(k).ok_or(Error::AlphabetCapExceeded {
            required: usize::MAX,
            cap: MAX_OUTPUTS,
        })?;
        if required > MAX_OUTPUTS {
            return Err(Error::AlphabetCapExceeded {
                required,
                cap: MAX_OUTPUTS,
            });
        }
        let mut out = Vec::with_capacity(required);
        for &(a0, a1) in &self.outputs {
            for &(b0, b1) in &self.outputs {
                // W-(y1,y2|x1) = 1/2 sum_{x2} W(y1|x1+x2) W(y2|x2)
                let w0 = 0.5 * (a0 * b0 + a1 * b1);
                let w1 = 0.5 * (a1 * b0 + a0 * b1);
                if w0 != 0.0 || w1 != 0.0 {
                    out.push((w0, w1));
                }
            }
        }
        Ok(Self::from_transform(out))
    }

    /// The upgraded channel W+ over outputs (y1, y2, x1), ordered
    /// lexicographically. Z of the result equals Z(W)^2.
    pub fn transform_plus(&self) -> Result<Self, Error> {
        let k = self.outputs.len();
        let required = k
            .checked_mul(k)
            .and_then(|kk| kk.checked_mul(2))
            .ok_or(Error::AlphabetCapExceeded {
                required: usize::MAX,
                cap: MAX_OUTPUTS,
            })?;
        if required > MAX_OUTPUTS {
            return Err(Error::AlphabetCapExceeded {
                required,
                cap: MAX_OUTPUTS,
            });
        }
        let mut out = Vec::with_capacity(required);
        for &(a0, a1) in &self.outputs {
            for &(b0, b1) in &self.outputs {
                // W+(y1,y2,x1|x2) = 1/2 W(y1|x1+x2) W(y2|x2)
                // x1 = 0:
                let w0 = 0.5 * a0 * b0;
                let w1 = 0.5 * a1 * b1;
                if w0 != 0.0 || w1 != 0.0 {
                    out.push((w0, w1));
                }
                // x1 = 1:
                let w0 = 0.5 * a1 * b0;
                let w1 = 0.5 * a0 * b1;
                if w0 != 0.0 || w1 != 0.0 {
                    out.push((w0, w1));
                }
            }
        }
        Ok(Self::from_transform(out))
    }

    /// Merge output symbols whose likelihood pairs are exactly proportional
    /// (equal likelihood ratio, including the two one-sided classes with a
    /// zero coordinate). Z and I are invariant under this merge; the output
    /// keeps first-occurrence order.
    pub fn merge_equivalent_outputs(&self) -> Self {
        use std::collections::HashMap;

        let ratio_key = |w0: f64, w1: f64| -> u64 {
            let r = if w0 == 0.0 { f64::INFINITY } else { w1 / w0 };
            r.to_bits()
        };

        let mut merged: Vec<(f64, f64)> = Vec::new();
        // Ratio buckets hold candidate slots; exact proportionality is then
        // confirmed by cross-multiplication, which is rounding-free for
        // genuinely proportional pairs.
        let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
        for &(w0, w1) in &self.outputs {
            let key = ratio_key(w0, w1);
            let slots = buckets.entry(key).or_default();
            let found = slots
                .iter()
                .copied()
                .find(|&i| w0 * merged[i].1 == w1 * merged[i].0);
            match found {
                Some(i) => {
                    merged[i].0 += w0;
                    merged[i].1 += w1;
                }
                None => {
                    slots.push(merged.len());
                    merged.push((w0, w1));
                }
            }
        }
        Self::from_transform(merged)
    }
}

/// The erasure probability of a binary erasure channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErasureParameter(f64);

impl ErasureParameter {
    pub fn new(epsilon: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidProbability(epsilon));
        }
        Ok(Self(epsilon))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// One polarization step in closed form: `(minus, plus) = (2e - e^2, e^2)`.
    ///
    /// For the erasure channel the generic transforms, after merging
    /// equivalent outputs, are again erasure channels with exactly these
    /// parameters.
    pub fn transform(self) -> (Self, Self) {
        let e = self.0;
        (Self(2.0 * e - e * e), Self(e * e))
    }
}
