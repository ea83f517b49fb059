//! Deterministic seeding and worker partitioning for Monte Carlo runs.
//!
//! Every trial draws its randomness from a generator seeded by
//! `(master seed, trial index)` alone, never by scheduling order, so the
//! result of a partitioned run is identical for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::Range;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The per-trial seed for `(master, index)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// A generator for one trial.
pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}

/// Split `0..total` into at most `workers` contiguous ranges.
pub fn partition_ranges(total: usize, workers: usize) -> Vec<Range<usize>> {
    let workers = workers.max(1).min(total.max(1));
    let base = total / workers;
    let extra = total % workers;
    let mut ranges = Vec::with_capacity(workers);
    let mut start = 0;
    for w in 0..workers {
        let len = base + usize::from(w < extra);
        ranges.push(start..start + len);
        start += len;
    }
    ranges
}

/// Run `body` over the partition of `0..total`, one worker per range, and
/// return the per-range results in range order.
pub fn run_partitioned<T, F>(total: usize, workers: usize, body: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync,
{
    let ranges = partition_ranges(total, workers);
    if ranges.len() == 1 {
        let range = ranges.into_iter().next().unwrap();
        return vec![body(range)];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|range| scope.spawn(|| body(range)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}
