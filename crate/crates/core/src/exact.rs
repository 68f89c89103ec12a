//! Dense evolution of the law `P_n` of `X_n` on `Z/pZ`.
//!
//! One step costs `O(p)`: every residue `x` pushes its mass to
//! `m*x - 1`, `m*x` and `m*x + 1`. All arithmetic is `f64`.

use alloc::vec;
use alloc::vec::Vec;

use crate::process::ProcessParams;
use crate::{Error, Result};

/// Default ceiling on `p` for dense vectors (512 MiB of `f64` at the limit).
pub const DEFAULT_MAX_MODULUS: u64 = 1 << 26;

/// Mass left outside the typical set in trace rows.
pub const TRACE_TYPICAL_DELTA: f64 = 0.01;

/// Float slack when testing whether accumulated mass reaches `1 - delta`.
const TYPICAL_SLACK: f64 = 1e-12;

/// A probability vector indexed by residue.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    mass: Vec<f64>,
}

fn check_modulus(p: u64) -> Result<()> {
    if p < 3 {
        return Err(Error::ModulusTooSmall(p));
    }
    if p % 2 == 0 {
        return Err(Error::EvenModulus(p));
    }
    Ok(())
}

impl ProbVector {
    /// Unit mass at residue 0 (the law of `X_0`).
    pub fn point_mass(p: u64) -> Result<Self> {
        check_modulus(p)?;
        let mut mass = vec![0.0; p as usize];
        mass[0] = 1.0;
        Ok(ProbVector { mass })
    }

    pub fn uniform(p: u64) -> Result<Self> {
        check_modulus(p)?;
        Ok(ProbVector {
            mass: vec![1.0 / p as f64; p as usize],
        })
    }

    /// Wraps raw masses; they must be non-negative and sum to 1 within `1e-9`.
    pub fn from_masses(mass: Vec<f64>) -> Result<Self> {
        check_modulus(mass.len() as u64)?;
        if mass.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::DomainError("masses must be finite and non-negative"));
        }
        let total: f64 = mass.iter().sum();
        if libm::fabs(total - 1.0) > 1e-9 {
            return Err(Error::DomainError("masses must sum to 1"));
        }
        Ok(ProbVector { mass })
    }

    pub fn modulus(&self) -> u64 {
        self.mass.len() as u64
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// The exact one-step law under `params`.
    pub fn step(&self, params: &ProcessParams) -> Result<ProbVector> {
        if params.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch {
                vector: self.modulus(),
                params: params.modulus(),
            });
        }
        let p = self.mass.len();
        let m = params.multiplier_residue() as usize;
        let inc = params.increments();
        let (qm, q0, qp) = (inc.q_minus1(), inc.q_zero(), inc.q_plus1());
        let mut out = vec![0.0; p];
        // y tracks m*x mod p
        let mut y = 0usize;
        for &w in &self.mass {
            if w != 0.0 {
                let below = if y == 0 { p - 1 } else { y - 1 };
                let above = if y + 1 == p { 0 } else { y + 1 };
                out[below] += qm * w;
                out[y] += q0 * w;
                out[above] += qp * w;
            }
            y += m;
            if y >= p {
                y -= p;
            }
        }
        Ok(ProbVector { mass: out })
    }

    /// Total variation distance to the uniform law, `1/2 sum |P(s) - 1/p|`.
    pub fn tvd_uniform(&self) -> f64 {
        let u = 1.0 / self.mass.len() as f64;
        0.5 * self.mass.iter().map(|&w| libm::fabs(w - u)).sum::<f64>()
    }

    /// Shannon entropy in bits, with `0 log 0 = 0`.
    pub fn entropy_bits(&self) -> f64 {
        let h: f64 = self
            .mass
            .iter()
            .filter(|&&w| w > 0.0)
            .map(|&w| w * libm::log2(w))
            .sum();
        if h == 0.0 {
            0.0
        } else {
            -h
        }
    }

    /// Number of residues with mass strictly above `threshold`.
    pub fn support_size(&self, threshold: f64) -> usize {
        self.mass.iter().filter(|&&w| w > threshold).count()
    }

    /// Size of the smallest set of residues holding at least `1 - delta` of
    /// the mass. Largest masses are taken first, ties by ascending residue.
    pub fn typical_set_size(&self, delta: f64) -> usize {
        let mut sorted = self.mass.clone();
        // stable sort keeps ascending residue order among equal masses
        sorted.sort_by(|a, b| b.total_cmp(a));
        let target = 1.0 - delta - TYPICAL_SLACK;
        let mut acc = 0.0;
        for (k, w) in sorted.iter().enumerate() {
            acc += w;
            if acc >= target {
                return k + 1;
            }
        }
        sorted.len()
    }
}

/// Checks that a dense vector of length `p` is allowed.
pub fn check_dense_limit(p: u64, max_modulus: u64) -> Result<()> {
    if p > max_modulus {
        Err(Error::ModulusTooLarge {
            modulus: p,
            limit: max_modulus,
        })
    } else {
        Ok(())
    }
}

/// `P_steps`, with the default size limit.
pub fn evolve(params: &ProcessParams, steps: usize) -> Result<ProbVector> {
    evolve_observed(params, steps, DEFAULT_MAX_MODULUS, |_, _| {})
}

/// `P_steps`, calling `observe(n, &P_n)` for every `n` in `0..=steps`.
pub fn evolve_observed<F>(
    params: &ProcessParams,
    steps: usize,
    max_modulus: u64,
    mut observe: F,
) -> Result<ProbVector>
where
    F: FnMut(usize, &ProbVector),
{
    check_dense_limit(params.modulus(), max_modulus)?;
    let mut dist = ProbVector::point_mass(params.modulus())?;
    observe(0, &dist);
    for n in 1..=steps {
        dist = dist.step(params)?;
        observe(n, &dist);
    }
    Ok(dist)
}

/// Per-step functionals of `P_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceRow {
    pub step: usize,
    pub tvd: f64,
    pub entropy_bits: f64,
    pub support: usize,
    /// Typical-set size at [`TRACE_TYPICAL_DELTA`].
    pub typical99: usize,
}

impl TraceRow {
    pub fn of(step: usize, dist: &ProbVector) -> Self {
        TraceRow {
            step,
            tvd: dist.tvd_uniform(),
            entropy_bits: dist.entropy_bits(),
            support: dist.support_size(0.0),
            typical99: dist.typical_set_size(TRACE_TYPICAL_DELTA),
        }
    }
}

/// Trace rows for steps `0..=steps`.
pub fn trace(params: &ProcessParams, steps: usize, max_modulus: u64) -> Result<Vec<TraceRow>> {
    let mut rows = Vec::with_capacity(steps + 1);
    evolve_observed(params, steps, max_modulus, |n, d| {
        rows.push(TraceRow::of(n, d))
    })?;
    Ok(rows)
}

/// For each threshold, the first `n <= max_steps` with `tvd(P_n) < threshold`.
pub fn first_crossings(
    params: &ProcessParams,
    thresholds: &[f64],
    max_steps: usize,
    max_modulus: u64,
) -> Result<Vec<Option<usize>>> {
    check_dense_limit(params.modulus(), max_modulus)?;
    let mut found: Vec<Option<usize>> = vec![None; thresholds.len()];
    let mut dist = ProbVector::point_mass(params.modulus())?;
    let mut n = 0;
    loop {
        let tvd = dist.tvd_uniform();
        for (slot, &t) in found.iter_mut().zip(thresholds) {
            if slot.is_none() && tvd < t {
                *slot = Some(n);
            }
        }
        if n == max_steps || found.iter().all(Option::is_some) {
            return Ok(found);
        }
        dist = dist.step(params)?;
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn initial_distribution() {
        assert_eq!(
            ProbVector::point_mass(5).unwrap().masses(),
            &[1.0, 0.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            ProbVector::point_mass(3).unwrap().masses(),
            &[1.0, 0.0, 0.0]
        );
        assert_eq!(ProbVector::point_mass(4), Err(Error::EvenModulus(4)));
        assert_eq!(ProbVector::point_mass(1), Err(Error::ModulusTooSmall(1)));
    }

    #[test]
    fn one_step_from_zero() {
        let params = ProcessParams::standard(5).unwrap();
        let d = ProbVector::point_mass(5).unwrap().step(&params).unwrap();
        let third = 1.0 / 3.0;
        assert_eq!(d.masses(), &[third, third, 0.0, 0.0, third]);
        assert!(close(d.tvd_uniform(), 0.4, 1e-15));
        assert!(close(d.entropy_bits(), 3f64.log2(), 1e-12));
        assert_eq!(d.support_size(0.0), 3);
        assert_eq!(d.typical_set_size(0.5), 2);
    }

    #[test]
    fn three_residues_mix_in_one_step() {
        let params = ProcessParams::standard(3).unwrap();
        let d = evolve(&params, 1).unwrap();
        for &w in d.masses() {
            assert!(close(w, 1.0 / 3.0, 1e-15));
        }
        assert!(d.tvd_uniform() < 1e-15);
    }

    #[test]
    fn uniform_is_stationary() {
        let params = ProcessParams::standard(101).unwrap();
        let u = ProbVector::uniform(101).unwrap();
        let v = u.step(&params).unwrap();
        for (a, b) in u.masses().iter().zip(v.masses()) {
            assert!(close(*a, *b, 1e-14));
        }
    }

    #[test]
    fn functionals_of_extremes() {
        let delta = ProbVector::point_mass(101).unwrap();
        assert!(close(delta.tvd_uniform(), 1.0 - 1.0 / 101.0, 1e-15));
        assert_eq!(delta.entropy_bits(), 0.0);
        assert_eq!(delta.support_size(0.0), 1);
        assert_eq!(delta.typical_set_size(0.3), 1);
        let u = ProbVector::uniform(101).unwrap();
        assert!(u.tvd_uniform() < 1e-15);
        assert!(close(u.entropy_bits(), 101f64.log2(), 1e-12));
        assert_eq!(u.typical_set_size(0.01), 100);
    }

    #[test]
    fn typical_set_does_not_mutate_input() {
        let params = ProcessParams::standard(11).unwrap();
        let d = evolve(&params, 2).unwrap();
        let before = d.clone();
        let _ = d.typical_set_size(0.1);
        assert_eq!(d, before);
    }

    #[test]
    fn zero_steps_is_initial() {
        let params = ProcessParams::standard(7).unwrap();
        assert_eq!(
            evolve(&params, 0).unwrap(),
            ProbVector::point_mass(7).unwrap()
        );
    }

    #[test]
    fn support_after_four_steps() {
        let params = ProcessParams::standard(10007).unwrap();
        let d = evolve(&params, 4).unwrap();
        assert_eq!(d.support_size(0.0), 31);
    }

    #[test]
    fn modulus_checks() {
        let params = ProcessParams::standard(7).unwrap();
        let d = ProbVector::point_mass(5).unwrap();
        assert_eq!(
            d.step(&params),
            Err(Error::ModulusMismatch {
                vector: 5,
                params: 7
            })
        );
        let big = ProcessParams::standard(1001).unwrap();
        assert_eq!(
            evolve_observed(&big, 1, 1000, |_, _| {}),
            Err(Error::ModulusTooLarge {
                modulus: 1001,
                limit: 1000
            })
        );
    }

    #[test]
    fn trace_rows() {
        let params = ProcessParams::standard(101).unwrap();
        let rows = trace(&params, 0, DEFAULT_MAX_MODULUS).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].support, 1);
        assert_eq!(rows[0].typical99, 1);
        assert!(close(rows[0].tvd, 1.0 - 1.0 / 101.0, 1e-15));
        let rows = trace(&ProcessParams::standard(3).unwrap(), 1, DEFAULT_MAX_MODULUS).unwrap();
        assert_eq!((rows[1].support, rows[1].typical99), (3, 3));
    }

    #[test]
    fn crossings_for_three() {
        let params = ProcessParams::standard(3).unwrap();
        let c = first_crossings(&params, &[0.75, 0.5, 0.05], 10, DEFAULT_MAX_MODULUS).unwrap();
        assert_eq!(c, vec![Some(0), Some(1), Some(1)]);
    }

    #[test]
    fn from_masses_validates() {
        assert!(ProbVector::from_masses(vec![0.5, 0.5, 0.0]).is_ok());
        assert!(ProbVector::from_masses(vec![0.5, 0.6, 0.0]).is_err());
        assert!(ProbVector::from_masses(vec![1.5, -0.5, 0.0]).is_err());
    }
}
