//! Trial fan-out for Monte Carlo work.
//!
//! Trials are indexed and seeded independently, results come back in index
//! order, and callers reduce them sequentially, so aggregates are identical
//! whether the map runs on rayon (the `parallel` feature, on by default) or
//! on one thread.

/// Derives an independent child seed (splitmix64 over the indexed base).
pub fn child_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `f(trial_index, trial_seed)` for every trial and collects results in
/// index order, sequentially.
pub fn map_trials_seq<R, F>(trials: usize, base_seed: u64, f: F) -> Vec<R>
where
    F: Fn(usize, u64) -> R,
{
    (0..trials).map(|i| f(i, child_seed(base_seed, i as u64))).collect()
}

/// Same as [`map_trials_seq`] but fans out across the rayon pool when the
/// `parallel` feature is enabled. Result order is index order either way.
#[cfg(feature = "parallel")]
pub fn map_trials<R, F>(trials: usize, base_seed: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize, u64) -> R + Sync,
{
    use rayon::prelude::*;
    (0..trials)
        .into_par_iter()
        .map(|i| f(i, child_seed(base_seed, i as u64)))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_trials<R, F>(trials: usize, base_seed: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize, u64) -> R + Sync,
{
    map_trials_seq(trials, base_seed, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn child_seeds_are_distinct() {
        let seeds: Vec<u64> = (0..1000).map(|i| child_seed(42, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let f = |i: usize, s: u64| (i as u64).wrapping_mul(s);
        assert_eq!(map_trials(64, 7, f), map_trials_seq(64, 7, f));
    }
}
