//! Parallel drivers. Work items are computed on the rayon pool, collected
//! in index order and folded sequentially, so results do not depend on the
//! thread count.

use anyhow::{Context, Result};
use cdg_core::process::{sample_endpoint, EndpointHistogram, ProcessParams};
use cdg_core::stats::{trial_histogram, Conditioning, FrequencyAccumulator, FrequencyReport};
use cdg_core::Error;
use rayon::prelude::*;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "CDG_THREADS";

const CHUNK: u64 = 1 << 14;

/// A pool sized by `CDG_THREADS`, or rayon's default when unset.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("{THREADS_ENV}={v:?} is not a count"))?;
        builder = builder.num_threads(n);
    }
    builder.build().context("cannot start worker pool")
}

fn chunks(trials: u64) -> impl Iterator<Item = std::ops::Range<u64>> {
    (0..trials.div_ceil(CHUNK)).map(move |c| c * CHUNK..((c + 1) * CHUNK).min(trials))
}

/// Same result as [`cdg_core::stats::monte_carlo_frequencies`].
pub fn monte_carlo_frequencies(
    params: &ProcessParams,
    n: usize,
    trials: u64,
    seed: u64,
    conditioning: Conditioning,
) -> Result<FrequencyReport, Error> {
    if !params.is_standard() {
        return Err(Error::UnsupportedParams);
    }
    if n < 2 {
        return Err(Error::DomainError("pair statistics need n >= 2"));
    }
    let mut acc = FrequencyAccumulator::new(n, conditioning);
    for range in chunks(trials) {
        let hs: Vec<_> = range
            .into_par_iter()
            .map(|t| trial_histogram(n, seed, t, conditioning))
            .collect();
        for h in hs.iter().flatten() {
            acc.add(h);
        }
    }
    Ok(acc.finish(trials, false))
}

/// Same result as [`cdg_core::process::simulate_endpoints`].
pub fn simulate_endpoints(
    params: &ProcessParams,
    n: usize,
    trials: u64,
    seed: u64,
) -> EndpointHistogram {
    let mut h = EndpointHistogram::new(params.modulus());
    for range in chunks(trials) {
        let ends: Vec<u64> = range
            .into_par_iter()
            .map(|t| sample_endpoint(params, n, seed, t))
            .collect();
        for x in ends {
            h.record(x);
        }
    }
    h
}
