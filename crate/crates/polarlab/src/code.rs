//! Polar codes on the erasure channel: construction from a spectrum,
//! encoding by the recursive butterfly, exact three-valued SC decoding,
//! genie-aided per-index erasure rates, block-error simulation, and the
//! minimum-distance side of the analysis.
//!
//! No bit-reversal permutation appears anywhere: the leaf-index convention
//! of the spectrum module fixes the decoder schedule, and the genie rates
//! reproduce the exact spectrum index by index, which pins the convention
//! down in tests.

use rand::Rng;

use crate::polarization::{binomial_tail, ZSpectrum};
use crate::sim::{run_partitioned, trial_rng};
use crate::Error;

/// A polar code: level n, block length N = 2^n, and the sorted information
/// set. Frozen positions carry zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCode {
    n: usize,
    info_set: Vec<usize>,
}

impl PolarCode {
    /// Pick the ceil(N R) indices with the smallest spectrum values; ties
    /// break toward the smaller index.
    pub fn construct(spec: &ZSpectrum, rate: f64) -> Result<Self, Error> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidParameter(format!("rate = {rate} not in (0, 1]")));
        }
        let n_block = spec.len();
        let k = ((n_block as f64) * rate).ceil() as usize;
        let mut indices: Vec<usize> = (0..n_block).collect();
        indices.sort_by(|&a, &b| {
            spec.values()[a]
                .cmp_value(&spec.values()[b])
                .then(a.cmp(&b))
        });
        let mut info_set = indices[..k].to_vec();
        info_set.sort_unstable();
        Ok(Self {
            n: spec.level(),
            info_set,
        })
    }

    /// A code with an explicit information set.
    pub fn from_info_set(n: usize, mut info_set: Vec<usize>) -> Result<Self, Error> {
        let n_block = 1usize << n;
        info_set.sort_unstable();
        info_set.dedup();
        if info_set.is_empty() {
            return Err(Error::InvalidParameter("empty information set".into()));
        }
        if *info_set.last().unwrap() >= n_block {
            return Err(Error::InvalidParameter(format!(
                "information index beyond block length {n_block}"
            )));
        }
        Ok(Self { n, info_set })
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn block_length(&self) -> usize {
        1 << self.n
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn dimension(&self) -> usize {
        self.info_set.len()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.block_length() as f64
    }

    fn frozen_mask(&self) -> Vec<bool> {
        let mut frozen = vec![true; self.block_length()];
        for &i in &self.info_set {
            frozen[i] = false;
        }
        frozen
    }

    /// Encode: place information bits at their indices, zeros elsewhere,
    /// and apply the n-fold butterfly transform in natural order.
    pub fn encode(&self, info_bits: &[bool]) -> Result<Vec<bool>, Error> {
        if info_bits.len() != self.info_set.len() {
            return Err(Error::LengthMismatch {
                expected: self.info_set.len(),
                got: info_bits.len(),
            });
        }
        let mut u = vec![false; self.block_length()];
        for (&pos, &bit) in self.info_set.iter().zip(info_bits) {
            u[pos] = bit;
        }
        butterfly_transform(&mut u);
        Ok(u)
    }

    /// Exact SC decoding over erasures. Frozen decisions are known zeros;
    /// an information decision that combines to an erasure is a decoding
    /// failure. Unerased combinations on the erasure channel always carry
    /// the true value, so a successful decode is a correct one.
    pub fn sc_decode_bec(&self, word: &ErasureWord) -> Result<ScDecodeOutcome, Error> {
        if word.len() != self.block_length() {
            return Err(Error::LengthMismatch {
                expected: self.block_length(),
                got: word.len(),
            });
        }
        let frozen = self.frozen_mask();
        let mut decisions = Vec::with_capacity(self.block_length());
        match sc_recurse(word.symbols(), &frozen, 0, &mut decisions) {
            Ok(_) => Ok(ScDecodeOutcome::Decoded(
                self.info_set.iter().map(|&i| decisions[i]).collect(),
            )),
            Err(index) => Ok(ScDecodeOutcome::Erased { index }),
        }
    }

    /// Genie-aided erasure flags, one per leaf index: whether the decision
    /// at that index combines to an erasure when every earlier decision is
    /// known. Depends only on the erasure pattern of the word; project onto
    /// `info_set` for the per-information-index report.
    pub fn genie_erasure_flags(&self, word: &ErasureWord) -> Result<Vec<bool>, Error> {
        if word.len() != self.block_length() {
            return Err(Error::LengthMismatch {
                expected: self.block_length(),
                got: word.len(),
            });
        }
        let known: Vec<bool> = word.symbols().iter().map(|s| s.is_some()).collect();
        let mut flags = Vec::with_capacity(known.len());
        genie_recurse(&known, &mut flags);
        Ok(flags)
    }

    /// Minimum distance: min over the information set of 2^(weight of the
    /// index), an exact formula for codes built from rows of the n-fold
    /// butterfly matrix.
    pub fn min_distance(&self) -> u64 {
        self.info_set
            .iter()
            .map(|&i| row_weight_distance(i as u64))
            .min()
            .expect("information set is non-empty")
    }
}

/// In-place u -> u F^(x n) in natural order (no bit-reversal).
pub fn butterfly_transform(bits: &mut [bool]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut step = 1;
    while step < n {
        let mut block = 0;
        while block < n {
            for j in block..block + step {
                bits[j] ^= bits[j + step];
            }
            block += 2 * step;
        }
        step *= 2;
    }
}

/// 2^(Hamming weight of the binary expansion of i): the weight of row i of
/// the n-fold butterfly matrix.
pub fn row_weight_distance(i: u64) -> u64 {
    1u64 << i.count_ones()
}

/// The largest integer d whose fair binomial tail still clears the rate,
/// and its normalized form t_hat = (2 d - n)/sqrt(n): the finite-n analogue
/// of the Q^{-1}(R) minimum-distance ceiling.
pub fn md_rate_condition(n: usize, rate: f64) -> Result<(usize, f64), Error> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!("rate = {rate} not in (0, 1]")));
    }
    let mut d_max = 0usize;
    for d in 0..=n {
        if binomial_tail(n, d as f64) >= rate {
            d_max = d;
        } else {
            break;
        }
    }
    let t_hat = (2.0 * d_max as f64 - n as f64) / (n as f64).sqrt();
    Ok((d_max, t_hat))
}

/// A received block over the erasure channel: per position either the
/// transmitted bit or an erasure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasureWord {
    symbols: Vec<Option<bool>>,
}

impl ErasureWord {
    pub fn new(symbols: Vec<Option<bool>>) -> Self {
        Self { symbols }
    }

    /// Send a codeword through BEC(eps).
    pub fn transmit<R: Rng>(codeword: &[bool], eps: f64, rng: &mut R) -> Self {
        Self {
            symbols: codeword
                .iter()
                .map(|&b| if rng.gen::<f64>() < eps { None } else { Some(b) })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Option<bool>] {
        &self.symbols
    }
}

/// The outcome of an SC decode: the information bits, or the first
/// information index whose decision was erased.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScDecodeOutcome {
    Decoded(Vec<bool>),
    Erased { index: usize },
}

/// Recursive SC over the three-valued erasure domain. Returns the
/// re-encoded decisions (x-domain) for the parent's partial sums, or the
/// first erased information index.
fn sc_recurse(
    y: &[Option<bool>],
    frozen: &[bool],
    base: usize,
    decisions: &mut Vec<bool>,
) -> Result<Vec<bool>, usize> {
    if y.len() == 1 {
        if frozen[0] {
            decisions.push(false);
            return Ok(vec![false]);
        }
        return match y[0] {
            Some(b) => {
                decisions.push(b);
                Ok(vec![b])
            }
            None => Err(base),
        };
    }
    let half = y.len() / 2;
    // Check side: known only when both looks are known.
    let f_word: Vec<Option<bool>> = (0..half)
        .map(|i| match (y[i], y[i + half]) {
            (Some(a), Some(b)) => Some(a ^ b),
            _ => None,
        })
        .collect();
    let x_left = sc_recurse(&f_word, &frozen[..half], base, decisions)?;
    // Variable side: two independent looks at the right codeword, one of
    // them through the decided left partial sums.
    let g_word: Vec<Option<bool>> = (0..half)
        .map(|i| match (y[i], y[i + half]) {
            (_, Some(b)) => Some(b),
            (Some(a), None) => Some(a ^ x_left[i]),
            (None, None) => None,
        })
        .collect();
    let x_right = sc_recurse(&g_word, &frozen[half..], base + half, decisions)?;
    let mut x = Vec::with_capacity(y.len());
    for i in 0..half {
        x.push(x_left[i] ^ x_right[i]);
    }
    x.extend_from_slice(&x_right);
    Ok(x)
}

/// Knownness recursion for the genie decoder: with every earlier decision
/// supplied, the check side needs both looks and the variable side needs
/// either. This is the erasure density evolution, run on one pattern.
fn genie_recurse(known: &[bool], flags: &mut Vec<bool>) {
    if known.len() == 1 {
        flags.push(!known[0]);
        return;
    }
    let half = known.len() / 2;
    let f: Vec<bool> = (0..half).map(|i| known[i] && known[i + half]).collect();
    genie_recurse(&f, flags);
    let g: Vec<bool> = (0..half).map(|i| known[i] || known[i + half]).collect();
    genie_recurse(&g, flags);
}

/// Monte Carlo estimate of the genie-aided per-index erasure probability at
/// level n over BEC(eps). For the erasure channel this estimates exactly
/// the spectrum value of each index.
pub fn genie_bit_error_rates(
    n: usize,
    eps: f64,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<f64>, Error> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidProbability(eps));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let n_block = 1usize << n;
    let counts = run_partitioned(trials, workers, |range| {
        let mut counts = vec![0u64; n_block];
        let mut flags = Vec::with_capacity(n_block);
        for trial in range {
            let mut rng = trial_rng(seed, trial as u64);
            let known: Vec<bool> = (0..n_block).map(|_| rng.gen::<f64>() >= eps).collect();
            flags.clear();
            genie_recurse(&known, &mut flags);
            for (c, &f) in counts.iter_mut().zip(&flags) {
                *c += u64::from(f);
            }
        }
        counts
    });
    let mut total = vec![0u64; n_block];
    for part in counts {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    Ok(total
        .into_iter()
        .map(|c| c as f64 / trials as f64)
        .collect())
}

/// A block-error estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlerEstimate {
    pub bler: f64,
    pub stderr: f64,
    pub failures: u64,
    pub trials: u64,
}

/// Monte Carlo SC block-error rate over BEC(eps): random information bits,
/// erasure transmission, full decode. A decode that returns wrong bits
/// would count as a failure too, though exact erasure SC cannot miscorrect.
pub fn simulate_bler(
    code: &PolarCode,
    eps: f64,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<BlerEstimate, Error> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidProbability(eps));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let failures: u64 = run_partitioned(trials, workers, |range| {
        let mut fails = 0u64;
        for trial in range {
            let mut rng = trial_rng(seed, trial as u64);
            let info: Vec<bool> = (0..code.dimension()).map(|_| rng.gen()).collect();
            let codeword = code.encode(&info).expect("dimension matches");
            let word = ErasureWord::transmit(&codeword, eps, &mut rng);
            let failed = match code.sc_decode_bec(&word).expect("length matches") {
                ScDecodeOutcome::Erased { .. } => true,
                ScDecodeOutcome::Decoded(bits) => bits != info,
            };
            fails += u64::from(failed);
        }
        fails
    })
    .into_iter()
    .sum();
    let p = failures as f64 / trials as f64;
    let stderr = (p * (1.0 - p) / trials as f64).sqrt();
    Ok(BlerEstimate {
        bler: p,
        stderr,
        failures,
        trials: trials as u64,
    })
}
