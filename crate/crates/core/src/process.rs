//! Process parameters, digit sampling and seeded trajectories.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream selected
//! by `(seed, trial index)`, so trials can be generated in any order, or in
//! parallel, and still reproduce bit for bit.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{Digit, Error, Result, SignedDigitString};

const SUM_TOLERANCE: f64 = 1e-12;

/// Law of one increment `b_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IncrementDistribution {
    q_minus1: f64,
    q_zero: f64,
    q_plus1: f64,
}

impl IncrementDistribution {
    /// `P(b = -1) = P(b = 0) = P(b = 1) = 1/3`.
    pub const UNIFORM: IncrementDistribution = IncrementDistribution {
        q_minus1: 1.0 / 3.0,
        q_zero: 1.0 / 3.0,
        q_plus1: 1.0 / 3.0,
    };

    pub fn new(q_minus1: f64, q_zero: f64, q_plus1: f64) -> Result<Self> {
        let qs = [q_minus1, q_zero, q_plus1];
        if qs.iter().any(|q| !q.is_finite()) {
            return Err(Error::BadDistribution("probabilities must be finite"));
        }
        if qs.iter().any(|&q| q < 0.0) {
            return Err(Error::BadDistribution("probabilities must be non-negative"));
        }
        if libm::fabs(q_minus1 + q_zero + q_plus1 - 1.0) > SUM_TOLERANCE {
            return Err(Error::BadDistribution("probabilities must sum to 1"));
        }
        Ok(IncrementDistribution {
            q_minus1,
            q_zero,
            q_plus1,
        })
    }

    pub fn q_minus1(&self) -> f64 {
        self.q_minus1
    }

    pub fn q_zero(&self) -> f64 {
        self.q_zero
    }

    pub fn q_plus1(&self) -> f64 {
        self.q_plus1
    }

    pub fn probability(&self, d: Digit) -> f64 {
        match d {
            Digit::MinusOne => self.q_minus1,
            Digit::Zero => self.q_zero,
            Digit::PlusOne => self.q_plus1,
        }
    }

    pub fn is_uniform(&self) -> bool {
        [self.q_minus1, self.q_zero, self.q_plus1]
            .iter()
            .all(|&q| libm::fabs(q - 1.0 / 3.0) <= SUM_TOLERANCE)
    }

    /// Draws one digit by inverting the cumulative distribution.
    #[inline]
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Digit {
        let u = unit_f64(rng.next_u64());
        if u < self.q_minus1 {
            Digit::MinusOne
        } else if u < self.q_minus1 + self.q_zero {
            Digit::Zero
        } else {
            Digit::PlusOne
        }
    }
}

impl Default for IncrementDistribution {
    fn default() -> Self {
        IncrementDistribution::UNIFORM
    }
}

/// Uniform in `[0, 1)` from the top 53 bits.
#[inline]
fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The chain `X_{n+1} = multiplier * X_n + b_n (mod modulus)`, `X_0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProcessParams {
    modulus: u64,
    multiplier: i64,
    increments: IncrementDistribution,
}

impl ProcessParams {
    pub const DEFAULT_MULTIPLIER: i64 = 2;

    pub fn new(modulus: u64, multiplier: i64, increments: IncrementDistribution) -> Result<Self> {
        if modulus < 3 {
            return Err(Error::ModulusTooSmall(modulus));
        }
        if modulus % 2 == 0 {
            return Err(Error::EvenModulus(modulus));
        }
        if gcd(multiplier.unsigned_abs(), modulus) != 1 {
            return Err(Error::NonInvertibleMultiplier {
                multiplier,
                modulus,
            });
        }
        Ok(ProcessParams {
            modulus,
            multiplier,
            increments,
        })
    }

    /// Multiplier 2 with uniform increments.
    pub fn standard(modulus: u64) -> Result<Self> {
        Self::new(
            modulus,
            Self::DEFAULT_MULTIPLIER,
            IncrementDistribution::UNIFORM,
        )
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn multiplier(&self) -> i64 {
        self.multiplier
    }

    /// The multiplier reduced into `0..modulus`.
    pub fn multiplier_residue(&self) -> u64 {
        self.multiplier.rem_euclid(self.modulus as i64) as u64
    }

    pub fn increments(&self) -> &IncrementDistribution {
        &self.increments
    }

    /// True for the setting the canonical-form statistics are about.
    pub fn is_standard(&self) -> bool {
        self.multiplier == 2 && self.increments.is_uniform()
    }

    /// One transition from `state` with increment `b`.
    #[inline]
    pub fn advance(&self, state: u64, b: Digit) -> u64 {
        let p = self.modulus as u128;
        let bm = match b {
            Digit::MinusOne => p - 1,
            Digit::Zero => 0,
            Digit::PlusOne => 1,
        };
        ((self.multiplier_residue() as u128 * state as u128 + bm) % p) as u64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `n` i.i.d. digits.
pub fn sample_digits<R: RngCore + ?Sized>(
    dist: &IncrementDistribution,
    n: usize,
    rng: &mut R,
) -> SignedDigitString {
    let digits: Vec<Digit> = (0..n).map(|_| dist.sample(rng)).collect();
    SignedDigitString::new(digits)
}

/// A sampled run: the increments and the state they lead to.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trajectory {
    pub digits: SignedDigitString,
    pub final_state: u64,
}

/// Trial 0 of [`sample_trial`].
pub fn sample_trajectory(params: &ProcessParams, n: usize, seed: u64) -> Trajectory {
    sample_trial(params, n, seed, 0)
}

/// Samples `n` steps using the stream for `(seed, trial)`; the state is
/// advanced step by step, independently of the digit value.
pub fn sample_trial(params: &ProcessParams, n: usize, seed: u64, trial: u64) -> Trajectory {
    let mut rng = trial_rng(seed, trial);
    let digits = sample_digits(&params.increments, n, &mut rng);
    let final_state = digits.digits().iter().fold(0, |x, &b| params.advance(x, b));
    Trajectory {
        digits,
        final_state,
    }
}

/// Final state of trial `trial`, without keeping the digits.
pub fn sample_endpoint(params: &ProcessParams, n: usize, seed: u64, trial: u64) -> u64 {
    let mut rng = trial_rng(seed, trial);
    (0..n).fold(0, |x, _| {
        params.advance(x, params.increments.sample(&mut rng))
    })
}

/// Sparse histogram of sampled endpoints `X_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EndpointHistogram {
    pub modulus: u64,
    pub trials: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl EndpointHistogram {
    pub fn new(modulus: u64) -> Self {
        EndpointHistogram {
            modulus,
            trials: 0,
            counts: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, state: u64) {
        self.trials += 1;
        *self.counts.entry(state).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &EndpointHistogram) {
        assert_eq!(
            self.modulus, other.modulus,
            "merging histograms of different moduli"
        );
        self.trials += other.trials;
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
    }

    /// `1/2 sum |count/T - 1/p|` over all residues. Biased upward when
    /// `trials` is small relative to `p`; the bias is about
    /// `sqrt(p / (2 pi T))` for a well-mixed chain.
    pub fn plug_in_tvd(&self) -> f64 {
        if self.trials == 0 {
            return 1.0;
        }
        let t = self.trials as f64;
        let u = 1.0 / self.modulus as f64;
        let observed: f64 = self
            .counts
            .values()
            .map(|&c| libm::fabs(c as f64 / t - u))
            .sum();
        let unobserved = (self.modulus - self.counts.len() as u64) as f64 * u;
        0.5 * (observed + unobserved)
    }

    /// Approximate upward bias of [`Self::plug_in_tvd`] at uniformity.
    pub fn uniform_bias_estimate(&self) -> f64 {
        libm::sqrt(self.modulus as f64 / (2.0 * core::f64::consts::PI * self.trials.max(1) as f64))
    }
}

/// Endpoint histogram over `trials` trials, sequentially.
pub fn simulate_endpoints(
    params: &ProcessParams,
    n: usize,
    trials: u64,
    seed: u64,
) -> EndpointHistogram {
    let mut h = EndpointHistogram::new(params.modulus);
    for t in 0..trials {
        h.record(sample_endpoint(params, n, seed, t));
    }
    h
}
