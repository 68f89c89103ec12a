//! Mixing-threshold constants and the counting sums behind them.
//!
//! Counts come in two flavours: exact big integers for moderate `n` and a
//! log-gamma, log-sum-exp evaluation for large `n`. Both walk the same
//! nested structure: an outer sum over `l1`, a middle sum over `l2` and a
//! memoised inner partial row sum over `l3` with `l4` fixed by the total.
//! Unconstrained trailing coordinates collapse to powers of 2 or 3.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Slack used when rounding `x * n` to an integer boundary, so products that
/// are mathematically integers are treated as such.
const BOUNDARY_SLACK: f64 = 1e-9;

/// Largest `n` evaluated exactly under [`CountPath::Auto`].
pub const EXACT_PATH_MAX_N: usize = 2000;

#[inline]
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * libm::log2(x)
    }
}

/// The named threshold constants; every one multiplies `log2 p`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundConstants {
    /// Upper-bound constant `(1 - log2((5 + sqrt 17) / 9))^-1`.
    pub c_hat: f64,
    /// Lower-bound constant from the odd-position `(1,1)` count alone.
    pub c1_basic: f64,
    /// Lower-bound constant using all four canonical pair frequencies.
    pub c1_refined: f64,
    /// `1 / c1_basic`.
    pub exponent_basic: f64,
    /// `1 / c1_refined`.
    pub exponent_refined: f64,
}

impl BoundConstants {
    /// The `0.4 / 0.6` warm-up constant at slack `eps`; see [`c2_of_eps`].
    pub fn c2(&self, eps: f64) -> Result<f64> {
        c2_of_eps(eps)
    }
}

/// `0.5 log2 0.5 - (2/18) log2(2/18) - (7/18) log2(7/54)`, shifted by `eps`.
pub fn basic_exponent(eps: f64) -> f64 {
    let x = 2.0 / 18.0 + eps / 2.0;
    let y = 7.0 / 54.0 - eps / 6.0;
    xlog2x(0.5) - xlog2x(x) - (7.0 / 18.0 - eps / 2.0) * libm::log2(y)
}

/// `0.5 log2 0.5 - (4/18) log2(4/36) - (5/18) log2(5/36)`.
pub fn refined_exponent() -> f64 {
    xlog2x(0.5) - (4.0 / 18.0) * libm::log2(4.0 / 36.0) - (5.0 / 18.0) * libm::log2(5.0 / 36.0)
}

pub fn compute_constants() -> BoundConstants {
    let c_hat = 1.0 / (1.0 - libm::log2((5.0 + libm::sqrt(17.0)) / 9.0));
    let exponent_basic = basic_exponent(0.0);
    let exponent_refined = refined_exponent();
    BoundConstants {
        c_hat,
        c1_basic: 1.0 / exponent_basic,
        c1_refined: 1.0 / exponent_refined,
        exponent_basic,
        exponent_refined,
    }
}

/// `1 / -((0.4+eps) log2(0.4+eps) + (0.6-eps) log2(0.6-eps))` for `0 < eps < 0.1`.
pub fn c2_of_eps(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::DomainError("eps must lie in (0, 0.1)"));
    }
    Ok(1.0 / -(xlog2x(0.4 + eps) + xlog2x(0.6 - eps)))
}

/// `log2` of a big integer, accurate to double precision.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return libm::log2(x.to_u64().expect("fits") as f64);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 bits");
    libm::log2(top as f64) + shift as f64
}

/// Exact binomial tail sum with its `j` range.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCount {
    pub n: usize,
    pub eps: f64,
    pub j_min: usize,
    pub j_max: usize,
    pub count: BigUint,
    pub log2: f64,
    /// `0.4 + eps < 0.5`, the regime where the entropy bound stays below 1.
    pub in_bound_regime: bool,
}

/// `sum_{j = ceil((0.4-eps)n)}^{floor((0.4+eps)n)} C(n, j)`.
pub fn binomial_tail_count(n: usize, eps: f64) -> Result<TailCount> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::DomainError("eps must be positive"));
    }
    let nf = n as f64;
    let lo = libm::ceil((0.4 - eps) * nf - BOUNDARY_SLACK).max(0.0) as usize;
    let hi_f = libm::floor((0.4 + eps) * nf + BOUNDARY_SLACK);
    if hi_f < 0.0 {
        return Err(Error::EmptyRange);
    }
    let hi = (hi_f as usize).min(n);
    if lo > hi {
        return Err(Error::EmptyRange);
    }
    let mut count = BigUint::zero();
    for (_, c) in BinomialRow::new(n, lo, hi) {
        count += c;
    }
    Ok(TailCount {
        n,
        eps,
        j_min: lo,
        j_max: hi,
        log2: log2_big(&count),
        count,
        in_bound_regime: 0.4 + eps < 0.5,
    })
}

/// Iterates `(j, C(r, j))` for `j` in `lo..=hi` using `C(r, j+1) = C(r, j)(r-j)/(j+1)`.
struct BinomialRow {
    r: usize,
    j: usize,
    hi: usize,
    current: BigUint,
}

impl BinomialRow {
    fn new(r: usize, lo: usize, hi: usize) -> Self {
        let mut current = BigUint::one();
        for j in 0..lo.min(r + 1) {
            current = current * (r - j) / (j + 1);
        }
        BinomialRow {
            r,
            j: lo,
            hi: hi.min(r),
            current,
        }
    }
}

impl Iterator for BinomialRow {
    type Item = (usize, BigUint);

    fn next(&mut self) -> Option<(usize, BigUint)> {
        if self.j > self.hi {
            return None;
        }
        let out = (self.j, self.current.clone());
        if self.j < self.r {
            self.current = &self.current * (self.r - self.j) / (self.j + 1);
        }
        self.j += 1;
        Some(out)
    }
}

/// Which constraint set applies to `(l1, l2, l3, l4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RegionKind {
    /// Only `l1 <= (2/18 + eps/2) n`.
    Basic,
    /// Every `l_i` strictly within `eps n` of `(4, 5, 5, 4) n / 36`.
    Refined,
}

/// Splits of `n / 2` odd positions into the four canonical pair types.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CountRegion {
    pub kind: RegionKind,
    pub n: usize,
    pub eps: f64,
}

/// Closed integer interval, empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    fn contains(&self, x: usize) -> bool {
        self.lo <= x && x <= self.hi
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    /// Clipped to `0..=r`.
    fn within(&self, r: usize) -> Interval {
        Interval {
            lo: self.lo,
            hi: self.hi.min(r),
        }
    }

    fn covers(&self, r: usize) -> bool {
        self.lo == 0 && self.hi >= r
    }
}

/// Integers `l` with `lo < l < hi`.
fn open_interval(lo: f64, hi: f64) -> Interval {
    let first = libm::floor(lo + BOUNDARY_SLACK) + 1.0;
    let last = libm::ceil(hi - BOUNDARY_SLACK) - 1.0;
    if last < 0.0 || first > last {
        return Interval { lo: 1, hi: 0 };
    }
    Interval {
        lo: first.max(0.0) as usize,
        hi: last as usize,
    }
}

impl CountRegion {
    pub fn new(kind: RegionKind, n: usize, eps: f64) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::DomainError(
                "region length must be even and at least 2",
            ));
        }
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::DomainError("eps must be non-negative"));
        }
        Ok(CountRegion { kind, n, eps })
    }

    /// `n / 2`, the sum of the four coordinates.
    pub fn total(&self) -> usize {
        self.n / 2
    }

    /// Per-coordinate integer ranges, clipped to `0..=n/2`.
    pub fn intervals(&self) -> [Interval; 4] {
        let m = self.total();
        let n = self.n as f64;
        let full = Interval { lo: 0, hi: m };
        match self.kind {
            RegionKind::Basic => {
                let cap = libm::floor((2.0 / 18.0 + self.eps / 2.0) * n + BOUNDARY_SLACK);
                let first = Interval {
                    lo: 0,
                    hi: (cap.max(0.0) as usize).min(m),
                };
                [first, full, full, full]
            }
            RegionKind::Refined => {
                let around = |centre: f64| {
                    open_interval((centre - self.eps) * n, (centre + self.eps) * n).within(m)
                };
                [
                    around(4.0 / 36.0),
                    around(5.0 / 36.0),
                    around(5.0 / 36.0),
                    around(4.0 / 36.0),
                ]
            }
        }
    }

    /// Membership test straight from the defining inequalities.
    pub fn contains(&self, l: [usize; 4]) -> bool {
        if l.iter().sum::<usize>() != self.total() {
            return false;
        }
        self.intervals().iter().zip(l).all(|(iv, x)| iv.contains(x))
    }

    /// Number of admissible tuples.
    pub fn tuple_count(&self) -> u64 {
        let m = self.total();
        let [i1, i2, i3, i4] = self.intervals();
        if [i1, i2, i3, i4].iter().any(Interval::is_empty) {
            return 0;
        }
        let floor = (i2.lo + i3.lo + i4.lo) as i64;
        let caps = [i2, i3, i4].map(|iv| (iv.hi - iv.lo) as i64);
        (i1.lo..=i1.hi)
            .map(|l1| bounded_compositions(m as i64 - l1 as i64 - floor, caps))
            .sum()
    }
}

/// Solutions of `x + y + z = total` with `0 <= x_i <= caps[i]`, by
/// inclusion-exclusion over the violated caps.
fn bounded_compositions(total: i64, caps: [i64; 3]) -> u64 {
    let free = |t: i64| if t < 0 { 0 } else { (t + 1) * (t + 2) / 2 };
    let mut count = 0i64;
    for mask in 0u8..8 {
        let excess: i64 = (0..3)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| caps[i] + 1)
            .sum();
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        count += sign * free(total - excess);
    }
    count as u64
}

/// Exact integers, log-gamma floats, or exact up to [`EXACT_PATH_MAX_N`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CountPath {
    Exact,
    LogGamma,
    #[default]
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionCount {
    pub region: CountRegion,
    /// Present when evaluated on the exact path.
    pub exact: Option<BigUint>,
    pub log2: f64,
    pub tuples: u64,
}

impl RegionCount {
    /// `log2(count) / n`.
    pub fn exponent(&self) -> f64 {
        self.log2 / self.region.n as f64
    }
}

/// `sum over the region of (n/2)! / (l1! l2! l3! l4!)`.
pub fn multinomial_region_count(region: &CountRegion, path: CountPath) -> Result<RegionCount> {
    let tuples = region.tuple_count();
    if tuples == 0 || region.intervals().iter().any(Interval::is_empty) {
        return Err(Error::EmptyRegion);
    }
    let exact = match path {
        CountPath::Exact => true,
        CountPath::LogGamma => false,
        CountPath::Auto => region.n <= EXACT_PATH_MAX_N,
    };
    if exact {
        let count = ExactSum::new(region).total();
        Ok(RegionCount {
            region: *region,
            log2: log2_big(&count),
            exact: Some(count),
            tuples,
        })
    } else {
        let log2 = LogSum::new(region).total() / core::f64::consts::LN_2;
        Ok(RegionCount {
            region: *region,
            exact: None,
            log2,
            tuples,
        })
    }
}

struct ExactSum {
    m: usize,
    iv: [Interval; 4],
    inner: Vec<Option<BigUint>>,
}

impl ExactSum {
    fn new(region: &CountRegion) -> Self {
        let m = region.total();
        ExactSum {
            m,
            iv: region.intervals(),
            inner: vec![None; m + 1],
        }
    }

    fn total(&mut self) -> BigUint {
        let m = self.m;
        let mut sum = BigUint::zero();
        for (l1, c) in BinomialRow::new(m, self.iv[0].lo, self.iv[0].hi) {
            let rest = self.middle(m - l1);
            if !rest.is_zero() {
                sum += c * rest;
            }
        }
        sum
    }

    /// Strings of length `r` over letters 2..4 with counts in range.
    fn middle(&mut self, r: usize) -> BigUint {
        let [_, i2, i3, i4] = self.iv;
        if i2.covers(r) && i3.covers(r) && i4.covers(r) {
            return BigUint::from(3u32).pow(r as u32);
        }
        let i2 = i2.within(r);
        let mut sum = BigUint::zero();
        if i2.is_empty() {
            return sum;
        }
        for (l2, c) in BinomialRow::new(r, i2.lo, i2.hi) {
            let rest = self.inner(r - l2);
            if !rest.is_zero() {
                sum += c * rest;
            }
        }
        sum
    }

    /// Strings of length `t` over letters 3..4 with counts in range.
    fn inner(&mut self, t: usize) -> BigUint {
        if let Some(v) = &self.inner[t] {
            return v.clone();
        }
        let [_, _, i3, i4] = self.iv;
        let v = if i3.covers(t) && i4.covers(t) {
            BigUint::one() << t
        } else {
            let lo = i3.lo.max(t.saturating_sub(i4.hi));
            let mut s = BigUint::zero();
            if t >= i4.lo {
                let hi = i3.hi.min(t - i4.lo);
                if lo <= hi {
                    for (_, c) in BinomialRow::new(t, lo, hi) {
                        s += c;
                    }
                }
            }
            s
        };
        self.inner[t] = Some(v.clone());
        v
    }
}

/// Natural-log sum `ln(sum exp(x_i))`, accumulated stably.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSumExp {
    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.scaled += libm::exp(x - self.max);
        } else {
            self.scaled = self.scaled * libm::exp(self.max - x) + 1.0;
            self.max = x;
        }
    }

    pub fn value(&self) -> f64 {
        if self.scaled == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + libm::log(self.scaled)
        }
    }
}

struct LogSum {
    m: usize,
    iv: [Interval; 4],
    ln_fact: Vec<f64>,
    inner: Vec<Option<f64>>,
}

impl LogSum {
    fn new(region: &CountRegion) -> Self {
        let m = region.total();
        let ln_fact = (0..=m).map(|k| libm::lgamma(k as f64 + 1.0)).collect();
        LogSum {
            m,
            iv: region.intervals(),
            ln_fact,
            inner: vec![None; m + 1],
        }
    }

    fn ln_choose(&self, r: usize, j: usize) -> f64 {
        self.ln_fact[r] - self.ln_fact[j] - self.ln_fact[r - j]
    }

    fn total(&mut self) -> f64 {
        let m = self.m;
        let i1 = self.iv[0].within(m);
        let mut acc = LogSumExp::default();
        for l1 in i1.lo..=i1.hi {
            let rest = self.middle(m - l1);
            acc.add(self.ln_choose(m, l1) + rest);
        }
        acc.value()
    }

    fn middle(&mut self, r: usize) -> f64 {
        let [_, i2, i3, i4] = self.iv;
        if i2.covers(r) && i3.covers(r) && i4.covers(r) {
            return r as f64 * libm::log(3.0);
        }
        let i2 = i2.within(r);
        let mut acc = LogSumExp::default();
        if !i2.is_empty() {
            for l2 in i2.lo..=i2.hi {
                let rest = self.inner(r - l2);
                acc.add(self.ln_choose(r, l2) + rest);
            }
        }
        acc.value()
    }

    fn inner(&mut self, t: usize) -> f64 {
        if let Some(v) = self.inner[t] {
            return v;
        }
        let [_, _, i3, i4] = self.iv;
        let v = if i3.covers(t) && i4.covers(t) {
            t as f64 * core::f64::consts::LN_2
        } else {
            let mut acc = LogSumExp::default();
            let lo = i3.lo.max(t.saturating_sub(i4.hi));
            if t >= i4.lo {
                let hi = i3.hi.min(t - i4.lo);
                if lo <= hi {
                    for l3 in lo..=hi {
                        acc.add(self.ln_choose(t, l3));
                    }
                }
            }
            acc.value()
        };
        self.inner[t] = Some(v);
        v
    }
}

/// Closed-form upper bound on the basic region count, in `log2` units.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StirlingBound {
    pub n: usize,
    pub eps: f64,
    /// Exponent per step; the bound is `p1(n) 2^(exponent n)`.
    pub exponent: f64,
    /// `exponent * n`.
    pub log2_bound: f64,
    /// Degree of the polynomial prefactor `p1(n)`, not modelled further.
    pub prefactor_degree: u32,
}

impl StirlingBound {
    /// `log2_bound` plus `prefactor_degree * log2 n`.
    pub fn log2_with_prefactor(&self) -> f64 {
        self.log2_bound + self.prefactor_degree as f64 * libm::log2(self.n as f64)
    }
}

/// Degree of the prefactor: `((2/18 + eps/2) n + 1) n^2` times bounded Stirling ratios.
pub const STIRLING_PREFACTOR_DEGREE: u32 = 3;

/// Requires even `n` and `0 <= eps < 1/36`, i.e. `2/18 + eps/2 < 1/8`.
/// `eps = 0` gives the limiting exponent `1 / c1_basic`.
pub fn stirling_upper_bound(n: usize, eps: f64) -> Result<StirlingBound> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::DomainError("n must be even and at least 2"));
    }
    if eps.is_nan() || eps < 0.0 || 2.0 / 18.0 + eps / 2.0 >= 1.0 / 8.0 {
        return Err(Error::DomainError("need 0 <= eps and 2/18 + eps/2 < 1/8"));
    }
    let exponent = basic_exponent(eps);
    Ok(StirlingBound {
        n,
        eps,
        exponent,
        log2_bound: exponent * n as f64,
        prefactor_degree: STIRLING_PREFACTOR_DEGREE,
    })
}

/// `log2` of the bound on distinct values of `X_n` in one sign class and one
/// position parity. Odd `n` multiplies the `n - 1` count by the three
/// possible last increments; the even-position variant has the same count
/// by symmetry.
pub fn value_count_bound_log2(
    kind: RegionKind,
    n: usize,
    eps: f64,
    path: CountPath,
) -> Result<f64> {
    if n % 2 == 0 {
        Ok(multinomial_region_count(&CountRegion::new(kind, n, eps)?, path)?.log2)
    } else {
        let even = multinomial_region_count(&CountRegion::new(kind, n - 1, eps)?, path)?;
        Ok(even.log2 + libm::log2(3.0))
    }
}

/// Constant selector for [`predict_threshold`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ThresholdConstant {
    /// `c = 1`: below `log2 p` steps the support is too small.
    SupportBound,
    C1Basic,
    C1Refined,
    CHat,
}

impl ThresholdConstant {
    pub const ALL: [ThresholdConstant; 4] = [
        ThresholdConstant::SupportBound,
        ThresholdConstant::C1Basic,
        ThresholdConstant::C1Refined,
        ThresholdConstant::CHat,
    ];

    pub fn value(self) -> f64 {
        let c = compute_constants();
        match self {
            ThresholdConstant::SupportBound => 1.0,
            ThresholdConstant::C1Basic => c.c1_basic,
            ThresholdConstant::C1Refined => c.c1_refined,
            ThresholdConstant::CHat => c.c_hat,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ThresholdConstant::SupportBound => "support",
            ThresholdConstant::C1Basic => "c1_basic",
            ThresholdConstant::C1Refined => "c1_refined",
            ThresholdConstant::CHat => "c_hat",
        }
    }
}

/// `floor(c log2 p)`.
pub fn predict_threshold(p: u64, which: ThresholdConstant) -> Result<u64> {
    if p < 3 {
        return Err(Error::ModulusTooSmall(p));
    }
    Ok(libm::floor(which.value() * libm::log2(p as f64)) as u64)
}

/// At most `2^(n+1) - 1` residues are reachable after `n` steps.
pub fn reachable_values(n: u32) -> f64 {
    libm::exp2(n as f64 + 1.0) - 1.0
}

/// `1 - (2^(n+1) - 1) / p`, clamped at 0: a lower bound on the distance to uniform.
pub fn support_tvd_lower_bound(p: u64, n: u32) -> f64 {
    (1.0 - reachable_values(n) / p as f64).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let c = compute_constants();
        assert!((c.c_hat - 1.01999186).abs() < 1e-7);
        assert!((c.c1_basic - 1.001525).abs() < 1e-4);
        assert!((c.c1_refined - 1.00448).abs() < 1e-4);
        assert!(1.0 < c.c1_basic && c.c1_basic < c.c1_refined && c.c1_refined < c.c_hat);
        assert!((c.exponent_basic - 0.998475).abs() < 1e-5);
    }

    #[test]
    fn c2_domain() {
        assert!(c2_of_eps(0.0).is_err());
        assert!(c2_of_eps(0.1).is_err());
        assert!(c2_of_eps(-0.01).is_err());
        let near_zero = c2_of_eps(1e-12).unwrap();
        assert!((near_zero - 1.0 / 0.9709505944546686).abs() < 1e-9);
        assert!(c2_of_eps(0.099).unwrap() > 1.0);
    }

    #[test]
    fn small_binomial_tails() {
        let t = binomial_tail_count(10, 0.05).unwrap();
        assert_eq!((t.j_min, t.j_max), (4, 4));
        assert_eq!(t.count, BigUint::from(210u32));
        let t = binomial_tail_count(2, 0.1).unwrap();
        assert_eq!(t.count, BigUint::from(2u32));
        assert!(!t.in_bound_regime);
        assert_eq!(binomial_tail_count(3, 0.01).unwrap_err(), Error::EmptyRange);
    }

    #[test]
    fn log2_of_big_values() {
        assert_eq!(log2_big(&BigUint::from(1024u32)), 10.0);
        let big = BigUint::one() << 300u32;
        assert!((log2_big(&(big * 3u32)) - (300.0 + 3f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn unconstrained_basic_region() {
        let r = CountRegion::new(RegionKind::Basic, 4, 1.0).unwrap();
        let c = multinomial_region_count(&r, CountPath::Exact).unwrap();
        assert_eq!(c.exact, Some(BigUint::from(16u32)));
        assert_eq!(c.tuples, 10);
    }

    #[test]
    fn tuple_count_matches_brute_force() {
        for (kind, n, eps) in [
            (RegionKind::Basic, 30, 0.01),
            (RegionKind::Basic, 8, 0.5),
            (RegionKind::Refined, 40, 0.05),
            (RegionKind::Refined, 72, 0.02),
            (RegionKind::Refined, 4, 0.25),
        ] {
            let r = CountRegion::new(kind, n, eps).unwrap();
            let m = r.total();
            let mut brute = 0;
            for a in 0..=m {
                for b in 0..=m - a {
                    for c in 0..=m - a - b {
                        brute += r.contains([a, b, c, m - a - b - c]) as u64;
                    }
                }
            }
            assert_eq!(r.tuple_count(), brute, "{kind:?} n={n} eps={eps}");
        }
    }

    #[test]
    fn region_validation() {
        assert!(CountRegion::new(RegionKind::Basic, 5, 0.1).is_err());
        assert!(CountRegion::new(RegionKind::Basic, 0, 0.1).is_err());
        assert!(CountRegion::new(RegionKind::Refined, 4, -0.1).is_err());
        let tight = CountRegion::new(RegionKind::Refined, 10, 0.0).unwrap();
        assert_eq!(
            multinomial_region_count(&tight, CountPath::Exact).unwrap_err(),
            Error::EmptyRegion
        );
    }

    #[test]
    fn stirling_domain_and_limit() {
        assert!(stirling_upper_bound(101, 0.01).is_err());
        assert!(stirling_upper_bound(100, 1.0 / 36.0).is_err());
        assert!(stirling_upper_bound(100, -0.001).is_err());
        let b = stirling_upper_bound(100, 0.0).unwrap();
        assert!((b.exponent - 0.998475).abs() < 1e-5);
        assert!((b.log2_bound - 99.8475).abs() < 1e-3);
    }

    #[test]
    fn thresholds() {
        assert_eq!(
            predict_threshold((1 << 20) + 7, ThresholdConstant::SupportBound).unwrap(),
            20
        );
        assert_eq!(
            predict_threshold(10007, ThresholdConstant::C1Refined).unwrap(),
            13
        );
        assert!(predict_threshold(1, ThresholdConstant::CHat).is_err());
    }

    #[test]
    fn log_sum_exp() {
        let mut a = LogSumExp::default();
        assert_eq!(a.value(), f64::NEG_INFINITY);
        for x in [1.0f64, 2.0, 3.0] {
            a.add(x.ln());
        }
        assert!((a.value() - 6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn odd_length_multiplies_by_three() {
        let even = value_count_bound_log2(RegionKind::Basic, 20, 0.01, CountPath::Exact).unwrap();
        let odd = value_count_bound_log2(RegionKind::Basic, 21, 0.01, CountPath::Exact).unwrap();
        assert!((odd - even - 3f64.log2()).abs() < 1e-12);
    }
}
