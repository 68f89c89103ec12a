//! Adjacent-pair statistics of the canonical form.
//!
//! Every position `a` in `1..n` falls in exactly one cell of a 6 x 4 table:
//! the row is decided by the raw digits `(b_{a-1}, b_a)`, the column by the
//! canonical digits. Cells are also split by the parity of `a` itself.
//! Strings led by `-1` are negated first, so canonical digits are bits.
//!
//! Frequencies are `count / n`. Exhaustive reports average over all `3^n`
//! strings of a class; Monte Carlo reports average over seeded trials and
//! give standard errors of the trial means.

use alloc::vec;
use alloc::vec::Vec;

use crate::canonical::{canonicalize, classify, SequenceClass, TableCell, TableColumn, TableRow};
use crate::process::{sample_digits, trial_rng, IncrementDistribution, ProcessParams};
use crate::{Digit, Error, Result, SignedDigitString};

/// Largest length accepted by [`exhaustive_expectations`].
pub const MAX_EXHAUSTIVE_LEN: usize = 14;

/// Parity of the position `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub const ALL: [Parity; 2] = [Parity::Odd, Parity::Even];

    pub fn of(a: usize) -> Parity {
        if a % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Which strings a report is conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Conditioning {
    FirstOne,
    FirstMinusOne,
    /// Any nonzero string; both classes are pooled through negation.
    Nonzero,
}

impl Conditioning {
    pub fn admits(self, class: SequenceClass) -> bool {
        match self {
            Conditioning::FirstOne => class == SequenceClass::FirstOne,
            Conditioning::FirstMinusOne => class == SequenceClass::FirstMinusOne,
            Conditioning::Nonzero => class != SequenceClass::AllZero,
        }
    }
}

/// Cell counts of one string.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairHistogram {
    pub n: usize,
    pub class: SequenceClass,
    cells: [[[u64; 2]; 4]; 6],
}

impl PairHistogram {
    fn empty(n: usize, class: SequenceClass) -> Self {
        PairHistogram {
            n,
            class,
            cells: [[[0; 2]; 4]; 6],
        }
    }

    pub fn count(&self, cell: TableCell) -> u64 {
        self.cells[cell.row.index()][cell.column.index()]
            .iter()
            .sum()
    }

    pub fn count_parity(&self, cell: TableCell, parity: Parity) -> u64 {
        self.cells[cell.row.index()][cell.column.index()][parity.index()]
    }

    pub fn column_total(&self, column: TableColumn) -> u64 {
        TableRow::ALL
            .iter()
            .map(|&row| self.count(TableCell { row, column }))
            .sum()
    }

    pub fn column_parity(&self, column: TableColumn, parity: Parity) -> u64 {
        TableRow::ALL
            .iter()
            .map(|&row| self.count_parity(TableCell { row, column }, parity))
            .sum()
    }

    /// Sum over all cells; always `n - 1`.
    pub fn total(&self) -> u64 {
        self.cells.iter().flatten().flatten().sum()
    }

    /// `[n1, n2, n3, n4]`: positions with canonical pair `(1, 1)`, split by
    /// whether `b_{a-1}` and `b_a` are `1`.
    pub fn lemma_counts(&self) -> [u64; 4] {
        let ones = |row| {
            self.count(TableCell {
                row,
                column: TableColumn::OneOne,
            })
        };
        [
            ones(TableRow::OneOne),
            ones(TableRow::OneZero) + ones(TableRow::OneMinusOne),
            ones(TableRow::ZeroOne) + ones(TableRow::MinusOneOne),
            ones(TableRow::NotOneNotOne),
        ]
    }
}

/// Tallies every position `a` of `s` into its table cell.
pub fn count_pairs(s: &SignedDigitString) -> Result<PairHistogram> {
    let canon = canonicalize(s);
    let flip = match canon.class {
        SequenceClass::AllZero => return Err(Error::AllZeroInput),
        SequenceClass::FirstOne => false,
        SequenceClass::FirstMinusOne => true,
    };
    let orient = |d: Digit| if flip { d.negate() } else { d };
    let raw = s.digits();
    let bits = canon.digits.digits();
    let mut h = PairHistogram::empty(s.len(), canon.class);
    for a in 1..s.len() {
        let row = TableRow::of(orient(raw[a - 1]), orient(raw[a]));
        let col = TableColumn::of(bits[a - 1] != Digit::Zero, bits[a] != Digit::Zero);
        h.cells[row.index()][col.index()][Parity::of(a).index()] += 1;
    }
    Ok(h)
}

/// Mean frequency and the standard error of that mean.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellStat {
    pub mean: f64,
    pub stderr: f64,
}

// Feature layout of one histogram, all raw counts.
const F_PARITY: usize = 0; // 6 * 4 * 2
const F_CELL: usize = F_PARITY + 48; // 6 * 4
const F_COLUMN: usize = F_CELL + 24; // 4
const F_COLUMN_PARITY: usize = F_COLUMN + 4; // 4 * 2
const F_LEMMA: usize = F_COLUMN_PARITY + 8; // 4
const FEATURES: usize = F_LEMMA + 4;

fn features(h: &PairHistogram) -> [f64; FEATURES] {
    let mut f = [0.0; FEATURES];
    for cell in TableCell::all() {
        let (r, c) = (cell.row.index(), cell.column.index());
        for parity in Parity::ALL {
            f[F_PARITY + (r * 4 + c) * 2 + parity.index()] = h.count_parity(cell, parity) as f64;
        }
        f[F_CELL + r * 4 + c] = h.count(cell) as f64;
    }
    for col in TableColumn::ALL {
        f[F_COLUMN + col.index()] = h.column_total(col) as f64;
        for parity in Parity::ALL {
            f[F_COLUMN_PARITY + col.index() * 2 + parity.index()] =
                h.column_parity(col, parity) as f64;
        }
    }
    for (k, &c) in h.lemma_counts().iter().enumerate() {
        f[F_LEMMA + k] = c as f64;
    }
    f
}

/// Running sums over histograms of a fixed length; merging is additive.
#[derive(Debug, Clone)]
pub struct FrequencyAccumulator {
    n: usize,
    conditioning: Conditioning,
    samples: u64,
    sum: [f64; FEATURES],
    sumsq: [f64; FEATURES],
}

impl FrequencyAccumulator {
    pub fn new(n: usize, conditioning: Conditioning) -> Self {
        FrequencyAccumulator {
            n,
            conditioning,
            samples: 0,
            sum: [0.0; FEATURES],
            sumsq: [0.0; FEATURES],
        }
    }

    pub fn add(&mut self, h: &PairHistogram) {
        debug_assert_eq!(h.n, self.n);
        self.samples += 1;
        for (k, x) in features(h).into_iter().enumerate() {
            self.sum[k] += x;
            self.sumsq[k] += x * x;
        }
    }

    pub fn merge(&mut self, other: &FrequencyAccumulator) {
        assert_eq!(self.n, other.n, "merging accumulators of different lengths");
        self.samples += other.samples;
        for k in 0..FEATURES {
            self.sum[k] += other.sum[k];
            self.sumsq[k] += other.sumsq[k];
        }
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    fn stat(&self, k: usize, exact: bool) -> CellStat {
        let m = self.samples as f64;
        let n = self.n as f64;
        if self.samples == 0 {
            return CellStat::default();
        }
        let mean = self.sum[k] / m;
        let stderr = if exact || self.samples < 2 {
            0.0
        } else {
            let var = ((self.sumsq[k] - m * mean * mean) / (m - 1.0)).max(0.0);
            libm::sqrt(var / m)
        };
        CellStat {
            mean: mean / n,
            stderr: stderr / n,
        }
    }

    /// Exact reports (full enumeration) carry zero standard errors.
    pub fn finish(&self, trials: u64, exact: bool) -> FrequencyReport {
        let mut r = FrequencyReport {
            n: self.n,
            conditioning: self.conditioning,
            exact,
            trials,
            samples: self.samples,
            cells: [[CellStat::default(); 4]; 6],
            cells_by_parity: [[[CellStat::default(); 2]; 4]; 6],
            columns: [CellStat::default(); 4],
            columns_by_parity: [[CellStat::default(); 2]; 4],
            lemma: [CellStat::default(); 4],
        };
        for r_ in 0..6 {
            for c in 0..4 {
                r.cells[r_][c] = self.stat(F_CELL + r_ * 4 + c, exact);
                for p in 0..2 {
                    r.cells_by_parity[r_][c][p] = self.stat(F_PARITY + (r_ * 4 + c) * 2 + p, exact);
                }
            }
        }
        for c in 0..4 {
            r.columns[c] = self.stat(F_COLUMN + c, exact);
            for p in 0..2 {
                r.columns_by_parity[c][p] = self.stat(F_COLUMN_PARITY + c * 2 + p, exact);
            }
        }
        for k in 0..4 {
            r.lemma[k] = self.stat(F_LEMMA + k, exact);
        }
        r
    }
}

/// Mean cell frequencies over a set of strings.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrequencyReport {
    pub n: usize,
    pub conditioning: Conditioning,
    pub exact: bool,
    /// Strings drawn (Monte Carlo) or enumerated.
    pub trials: u64,
    /// Strings admitted by the conditioning.
    pub samples: u64,
    cells: [[CellStat; 4]; 6],
    cells_by_parity: [[[CellStat; 2]; 4]; 6],
    columns: [CellStat; 4],
    columns_by_parity: [[CellStat; 2]; 4],
    lemma: [CellStat; 4],
}

impl FrequencyReport {
    pub fn cell(&self, cell: TableCell) -> CellStat {
        self.cells[cell.row.index()][cell.column.index()]
    }

    pub fn cell_parity(&self, cell: TableCell, parity: Parity) -> CellStat {
        self.cells_by_parity[cell.row.index()][cell.column.index()][parity.index()]
    }

    pub fn column(&self, column: TableColumn) -> CellStat {
        self.columns[column.index()]
    }

    pub fn column_parity(&self, column: TableColumn, parity: Parity) -> CellStat {
        self.columns_by_parity[column.index()][parity.index()]
    }

    /// `n_k / n` for `k` in `1..=4`.
    pub fn lemma(&self, k: usize) -> CellStat {
        assert!((1..=4).contains(&k), "lemma counts are n1..n4");
        self.lemma[k - 1]
    }
}

/// Exact conditional expectations over all `3^n` equiprobable strings.
pub fn exhaustive_expectations(n: usize, conditioning: Conditioning) -> Result<FrequencyReport> {
    if n > MAX_EXHAUSTIVE_LEN {
        return Err(Error::TooLarge {
            n,
            max: MAX_EXHAUSTIVE_LEN,
        });
    }
    if n < 2 {
        return Err(Error::DomainError("pair statistics need n >= 2"));
    }
    let mut acc = FrequencyAccumulator::new(n, conditioning);
    let mut total = 0u64;
    for_each_string(n, |s| {
        total += 1;
        if conditioning.admits(classify(s)) {
            acc.add(&count_pairs(s).expect("admitted strings are nonzero"));
        }
    });
    Ok(acc.finish(total, true))
}

/// Calls `f` on every string of length `n`, in odometer order.
pub fn for_each_string<F: FnMut(&SignedDigitString)>(n: usize, mut f: F) {
    let mut digits = vec![Digit::MinusOne; n];
    loop {
        let s = SignedDigitString::new(digits.clone());
        f(&s);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            match digits[i] {
                Digit::MinusOne => {
                    digits[i] = Digit::Zero;
                    break;
                }
                Digit::Zero => {
                    digits[i] = Digit::PlusOne;
                    break;
                }
                Digit::PlusOne => digits[i] = Digit::MinusOne,
            }
        }
    }
}

fn check_standard(params: &ProcessParams) -> Result<()> {
    if params.is_standard() {
        Ok(())
    } else {
        Err(Error::UnsupportedParams)
    }
}

/// Histogram of Monte Carlo trial `trial`, or `None` if the conditioning rejects it.
pub fn trial_histogram(
    n: usize,
    seed: u64,
    trial: u64,
    conditioning: Conditioning,
) -> Option<PairHistogram> {
    let mut rng = trial_rng(seed, trial);
    let s = sample_digits(&IncrementDistribution::UNIFORM, n, &mut rng);
    if conditioning.admits(classify(&s)) {
        count_pairs(&s).ok()
    } else {
        None
    }
}

/// Seeded Monte Carlo estimate of the cell frequencies at length `n`.
pub fn monte_carlo_frequencies(
    params: &ProcessParams,
    n: usize,
    trials: u64,
    seed: u64,
    conditioning: Conditioning,
) -> Result<FrequencyReport> {
    check_standard(params)?;
    if n < 2 {
        return Err(Error::DomainError("pair statistics need n >= 2"));
    }
    let mut acc = FrequencyAccumulator::new(n, conditioning);
    for t in 0..trials {
        if let Some(h) = trial_histogram(n, seed, t, conditioning) {
            acc.add(&h);
        }
    }
    Ok(acc.finish(trials, false))
}

/// `P(first nonzero digit is 1)` for a uniform string of length `n`; also
/// the probability of the `-1` class.
pub fn first_one_probability(n: usize) -> f64 {
    0.5 * (1.0 - all_zero_probability(n))
}

pub fn all_zero_probability(n: usize) -> f64 {
    libm::pow(3.0, -(n as f64))
}

/// Empirical frequency of an event with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EventStat {
    pub hits: u64,
    pub total: u64,
    pub frequency: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassFrequencies {
    pub length: usize,
    pub first_one: EventStat,
    pub first_minus_one: EventStat,
    pub all_zero: EventStat,
    pub exact_first_one: f64,
    pub exact_first_minus_one: f64,
    pub exact_all_zero: f64,
}

/// Block-event frequencies and class frequencies from sampled streams.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EventReport {
    pub horizon: usize,
    pub trials: u64,
    /// Blocks generated, `trials * (horizon + 1)`.
    pub blocks: u64,
    /// `B_i = (1)` and `B_{i+1}` has no `-1`.
    pub d: EventStat,
    /// `B_i` ends with `-1` and `B_{i+1}` has no `-1`.
    pub e: EventStat,
    pub classes: ClassFrequencies,
}

#[derive(Debug, Clone, Copy)]
struct BlockShape {
    singleton: bool,
    ends_minus: bool,
    has_minus: bool,
}

/// Means over trials, with standard errors across trial means.
#[derive(Debug, Default, Clone, Copy)]
struct TrialMeans {
    hits: u64,
    total: u64,
    sum: f64,
    sumsq: f64,
    trials: u64,
}

impl TrialMeans {
    fn push(&mut self, hits: u64, total: u64) {
        self.hits += hits;
        self.total += total;
        let x = if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        };
        self.sum += x;
        self.sumsq += x * x;
        self.trials += 1;
    }

    fn stat(&self) -> EventStat {
        let frequency = if self.total == 0 {
            0.0
        } else {
            self.hits as f64 / self.total as f64
        };
        let m = self.trials as f64;
        let stderr = if self.trials < 2 {
            0.0
        } else {
            let mean = self.sum / m;
            libm::sqrt(((self.sumsq - m * mean * mean) / (m - 1.0)).max(0.0) / m)
        };
        EventStat {
            hits: self.hits,
            total: self.total,
            frequency,
            stderr,
        }
    }
}

/// Samples, per trial, a class label for a string of length `class_length`
/// and then `horizon + 1` blocks after the first nonzero digit (oriented so
/// that digit is `1`), counting `D_i` and `E_i` for `i` in `1..=horizon`.
pub fn event_probabilities(
    horizon: usize,
    class_length: usize,
    trials: u64,
    seed: u64,
) -> Result<EventReport> {
    if trials == 0 {
        return Err(Error::DomainError("trials must be at least 1"));
    }
    if horizon == 0 {
        return Err(Error::DomainError("horizon must be at least 1"));
    }
    let dist = IncrementDistribution::UNIFORM;
    let (mut d, mut e) = (TrialMeans::default(), TrialMeans::default());
    let (mut c1, mut cm, mut c0) = (
        TrialMeans::default(),
        TrialMeans::default(),
        TrialMeans::default(),
    );
    let mut shapes = Vec::with_capacity(horizon + 1);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);

        let class = classify(&sample_digits(&dist, class_length, &mut rng));
        c1.push((class == SequenceClass::FirstOne) as u64, 1);
        cm.push((class == SequenceClass::FirstMinusOne) as u64, 1);
        c0.push((class == SequenceClass::AllZero) as u64, 1);

        let orientation = loop {
            match dist.sample(&mut rng) {
                Digit::Zero => continue,
                other => break other,
            }
        };
        let one = orientation;
        shapes.clear();
        let (mut len, mut has_minus, mut last) = (1usize, false, one);
        while shapes.len() <= horizon {
            let b = dist.sample(&mut rng);
            if b == one {
                shapes.push(BlockShape {
                    singleton: len == 1,
                    ends_minus: last == one.negate(),
                    has_minus,
                });
                (len, has_minus) = (1, false);
            } else {
                len += 1;
                has_minus |= b == one.negate();
            }
            last = b;
        }
        let (mut dh, mut eh) = (0u64, 0u64);
        for w in shapes.windows(2) {
            let next_clean = !w[1].has_minus;
            dh += (w[0].singleton && next_clean) as u64;
            eh += (w[0].ends_minus && next_clean) as u64;
        }
        d.push(dh, horizon as u64);
        e.push(eh, horizon as u64);
    }
    Ok(EventReport {
        horizon,
        trials,
        blocks: trials * (horizon as u64 + 1),
        d: d.stat(),
        e: e.stat(),
        classes: ClassFrequencies {
            length: class_length,
            first_one: c1.stat(),
            first_minus_one: cm.stat(),
            all_zero: c0.stat(),
            exact_first_one: first_one_probability(class_length),
            exact_first_minus_one: first_one_probability(class_length),
            exact_all_zero: all_zero_probability(class_length),
        },
    })
}

/// Distribution of `A_n`, the number of `1` digits among `n` increments.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OnesReport {
    pub n: usize,
    pub trials: u64,
    pub eps: f64,
    /// `histogram[k]` trials had `A_n = k`.
    pub histogram: Vec<u64>,
    pub mean_fraction: f64,
    /// Fraction of trials with `(q - eps) n < A_n < (q + eps) n`, `q = P(b = 1)`.
    pub within_fraction: f64,
}

pub fn ones_count_statistics(
    dist: &IncrementDistribution,
    n: usize,
    trials: u64,
    seed: u64,
    eps: f64,
) -> Result<OnesReport> {
    if trials == 0 {
        return Err(Error::DomainError("trials must be at least 1"));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::DomainError("eps must be positive"));
    }
    let mut histogram = vec![0u64; n + 1];
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let ones = (0..n)
            .filter(|_| dist.sample(&mut rng) == Digit::PlusOne)
            .count();
        histogram[ones] += 1;
    }
    let q = dist.q_plus1();
    let (lo, hi) = ((q - eps) * n as f64, (q + eps) * n as f64);
    let within: u64 = histogram
        .iter()
        .enumerate()
        .filter(|&(k, _)| lo < k as f64 && (k as f64) < hi)
        .map(|(_, &c)| c)
        .sum();
    let total_ones: f64 = histogram
        .iter()
        .enumerate()
        .map(|(k, &c)| k as f64 * c as f64)
        .sum();
    Ok(OnesReport {
        n,
        trials,
        eps,
        mean_fraction: if n == 0 {
            0.0
        } else {
            total_ones / (trials as f64 * n as f64)
        },
        within_fraction: within as f64 / trials as f64,
        histogram,
    })
}
