//! Seeded, batch-parallel Monte Carlo plumbing.
//!
//! Reproducibility contract: a run is a pure function of `(seed, trials)`.
//! Every trial owns a dedicated ChaCha stream derived from its index, and
//! partial tallies are integer counts merged by a commutative, associative
//! operation over fixed batch ranges, so results are bit-identical no matter
//! how many worker threads rayon schedules.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Trials per work unit handed to rayon.
///
/// Large enough to amortize scheduling, small enough that a default pool
/// stays busy at the trial counts the harness uses.
pub const TRIAL_BATCH: u64 = 8192;

/// The generator owned by one trial: a fixed-seed ChaCha8 cipher on the
/// stream named by the trial index.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// An independent seed for a named sub-experiment of a seeded run.
///
/// SplitMix64 finalizer over the seed offset by the context, so sweeps and
/// multi-leg runs can give each leg its own seed without correlations while
/// remaining a pure function of the top-level seed.
pub fn derive_seed(seed: u64, context: u64) -> u64 {
    let mut z = seed.wrapping_add(context.wrapping_mul(0x9e3779b97f4a7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Partial results that can start empty and absorb another partial.
///
/// Merging must be commutative and associative; the runner gives no
/// ordering guarantees between batches.
pub trait Tally: Send {
    fn empty() -> Self;
    fn merged(self, other: Self) -> Self;
}

/// Run `trials` independent trials and merge their tallies.
///
/// Trials are grouped into fixed ranges of [`TRIAL_BATCH`] indices; each
/// range is processed sequentially on one worker with a per-trial generator
/// from [`trial_rng`].
pub fn run_trials<T, F>(seed: u64, trials: u64, per_trial: F) -> T
where
    T: Tally,
    F: Fn(&mut ChaCha8Rng, &mut T) + Sync,
{
    (0..trials.div_ceil(TRIAL_BATCH))
        .into_par_iter()
        .map(|batch| {
            let lo = batch * TRIAL_BATCH;
            let hi = (lo + TRIAL_BATCH).min(trials);
            let mut acc = T::empty();
            for trial in lo..hi {
                per_trial(&mut trial_rng(seed, trial), &mut acc);
            }
            acc
        })
        .reduce(T::empty, T::merged)
}
