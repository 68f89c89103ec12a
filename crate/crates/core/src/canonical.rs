//! Sign-coherent binary standard form of a signed-digit string.
//!
//! A string whose first nonzero digit is `1` has a positive value below
//! `2^n`, so it has an ordinary `n`-bit binary expansion; a string led by
//! `-1` is the negation of such a string. The standard form is that
//! expansion (negated in the second case), computed without big integers
//! by sweeping from the least significant digit and borrowing.
//!
//! This module also hosts the block decomposition of a string led by `1`
//! and the adjacent-pair table that classifies each position `a` by the
//! raw pair `(b_{a-1}, b_a)` and the canonical pair.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Digit, Error, Result, SignedDigitString};

/// Which digit comes first among the nonzero ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SequenceClass {
    FirstOne,
    FirstMinusOne,
    AllZero,
}

pub fn classify(s: &SignedDigitString) -> SequenceClass {
    match s.digits().iter().find(|&&d| d != Digit::Zero) {
        Some(Digit::PlusOne) => SequenceClass::FirstOne,
        Some(Digit::MinusOne) => SequenceClass::FirstMinusOne,
        _ => SequenceClass::AllZero,
    }
}

/// Value-preserving standard form: digits in `{0, 1}` for [`SequenceClass::FirstOne`],
/// in `{0, -1}` for [`SequenceClass::FirstMinusOne`], all zero otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CanonicalForm {
    pub digits: SignedDigitString,
    pub class: SequenceClass,
}

pub fn canonicalize(s: &SignedDigitString) -> CanonicalForm {
    let class = classify(s);
    let digits = match class {
        SequenceClass::FirstOne => positive_binary(s.digits()),
        SequenceClass::FirstMinusOne => {
            let negated: Vec<Digit> = s.digits().iter().map(|d| d.negate()).collect();
            positive_binary(&negated)
                .into_iter()
                .map(|d| d.negate())
                .collect()
        }
        SequenceClass::AllZero => vec![Digit::Zero; s.len()],
    };
    CanonicalForm {
        digits: SignedDigitString::new(digits),
        class,
    }
}

/// Binary digits of a string with positive value, by borrow propagation.
fn positive_binary(digits: &[Digit]) -> Vec<Digit> {
    let mut out = vec![Digit::Zero; digits.len()];
    let mut borrow = 0i8;
    for (slot, d) in out.iter_mut().zip(digits).rev() {
        let (bit, next) = match d.value() - borrow {
            1 => (Digit::PlusOne, 0),
            0 => (Digit::Zero, 0),
            -1 => (Digit::PlusOne, 1),
            _ => (Digit::Zero, 1),
        };
        *slot = bit;
        borrow = next;
    }
    debug_assert_eq!(borrow, 0, "positive value cannot end with a borrow");
    out
}

/// A maximal run starting with `1` and containing no other `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Block {
    /// Index of the block's leading `1` in the (oriented) source string.
    pub start: usize,
    pub digits: SignedDigitString,
    /// The block runs to the end of the string, so a longer string could
    /// extend it.
    pub is_last: bool,
}

impl Block {
    /// `B = (1)`.
    pub fn is_singleton(&self) -> bool {
        self.digits.len() == 1
    }

    pub fn has_minus_one(&self) -> bool {
        self.digits.digits().contains(&Digit::MinusOne)
    }

    pub fn ends_with_minus_one(&self) -> bool {
        self.digits.digits().last() == Some(&Digit::MinusOne)
    }
}

/// Leading zeros followed by blocks. For a string led by `-1` the blocks are
/// those of the negated string and `class` records the flip.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlockDecomposition {
    pub class: SequenceClass,
    pub leading_zeros: usize,
    pub blocks: Vec<Block>,
}

impl BlockDecomposition {
    /// Reassembles the source string.
    pub fn flatten(&self) -> SignedDigitString {
        let mut digits = vec![Digit::Zero; self.leading_zeros];
        for b in &self.blocks {
            digits.extend_from_slice(b.digits.digits());
        }
        let s = SignedDigitString::new(digits);
        match self.class {
            SequenceClass::FirstMinusOne => s.negated(),
            _ => s,
        }
    }
}

pub fn decompose_blocks(s: &SignedDigitString) -> Result<BlockDecomposition> {
    let class = classify(s);
    let oriented = match class {
        SequenceClass::AllZero => return Err(Error::WrongClass),
        SequenceClass::FirstOne => s.clone(),
        SequenceClass::FirstMinusOne => s.negated(),
    };
    let d = oriented.digits();
    let leading_zeros = d.iter().position(|&x| x != Digit::Zero).unwrap_or(d.len());
    let starts: Vec<usize> = (leading_zeros..d.len())
        .filter(|&i| d[i] == Digit::PlusOne)
        .collect();
    let blocks = starts
        .iter()
        .enumerate()
        .map(|(k, &start)| {
            let end = starts.get(k + 1).copied().unwrap_or(d.len());
            Block {
                start,
                digits: SignedDigitString::new(d[start..end].to_vec()),
                is_last: end == d.len(),
            }
        })
        .collect();
    Ok(BlockDecomposition {
        class,
        leading_zeros,
        blocks,
    })
}

/// Row of the adjacent-pair table: a partition of the nine raw pairs
/// `(b_{a-1}, b_a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TableRow {
    /// `b_{a-1} = 1, b_a = 1`
    OneOne,
    /// `b_{a-1} != 1, b_a != 1` (four raw pairs)
    NotOneNotOne,
    /// `b_{a-1} = 0, b_a = 1`
    ZeroOne,
    /// `b_{a-1} = -1, b_a = 1`
    MinusOneOne,
    /// `b_{a-1} = 1, b_a = 0`
    OneZero,
    /// `b_{a-1} = 1, b_a = -1`
    OneMinusOne,
}

impl TableRow {
    pub const ALL: [TableRow; 6] = [
        TableRow::OneOne,
        TableRow::NotOneNotOne,
        TableRow::ZeroOne,
        TableRow::MinusOneOne,
        TableRow::OneZero,
        TableRow::OneMinusOne,
    ];

    pub fn of(b_prev: Digit, b_cur: Digit) -> TableRow {
        use Digit::*;
        match (b_prev, b_cur) {
            (PlusOne, PlusOne) => TableRow::OneOne,
            (Zero, PlusOne) => TableRow::ZeroOne,
            (MinusOne, PlusOne) => TableRow::MinusOneOne,
            (PlusOne, Zero) => TableRow::OneZero,
            (PlusOne, MinusOne) => TableRow::OneMinusOne,
            _ => TableRow::NotOneNotOne,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            TableRow::OneOne => "b[a-1]=1,b[a]=1",
            TableRow::NotOneNotOne => "b[a-1]!=1,b[a]!=1",
            TableRow::ZeroOne => "b[a-1]=0,b[a]=1",
            TableRow::MinusOneOne => "b[a-1]=-1,b[a]=1",
            TableRow::OneZero => "b[a-1]=1,b[a]=0",
            TableRow::OneMinusOne => "b[a-1]=1,b[a]=-1",
        }
    }
}

/// Column of the adjacent-pair table: the canonical pair `(bt_{a-1}, bt_a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TableColumn {
    ZeroZero,
    ZeroOne,
    OneOne,
    OneZero,
}

impl TableColumn {
    pub const ALL: [TableColumn; 4] = [
        TableColumn::ZeroZero,
        TableColumn::ZeroOne,
        TableColumn::OneOne,
        TableColumn::OneZero,
    ];

    pub fn of(bt_prev: bool, bt_cur: bool) -> TableColumn {
        match (bt_prev, bt_cur) {
            (false, false) => TableColumn::ZeroZero,
            (false, true) => TableColumn::ZeroOne,
            (true, true) => TableColumn::OneOne,
            (true, false) => TableColumn::OneZero,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            TableColumn::ZeroZero => "bt=(0,0)",
            TableColumn::ZeroOne => "bt=(0,1)",
            TableColumn::OneOne => "bt=(1,1)",
            TableColumn::OneZero => "bt=(1,0)",
        }
    }

    /// Limiting frequency of the whole column, in eighteenths: 4, 5, 4, 5.
    pub fn limit_frequency(self) -> f64 {
        match self {
            TableColumn::ZeroZero | TableColumn::OneOne => 4.0 / 18.0,
            TableColumn::ZeroOne | TableColumn::OneZero => 5.0 / 18.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TableCell {
    pub row: TableRow,
    pub column: TableColumn,
}

impl TableCell {
    pub fn all() -> impl Iterator<Item = TableCell> {
        TableRow::ALL.into_iter().flat_map(|row| {
            TableColumn::ALL
                .into_iter()
                .map(move |column| TableCell { row, column })
        })
    }

    /// Limiting frequency (count / n) of the cell for strings led by `1`.
    pub fn limit_frequency(self) -> f64 {
        use TableColumn as C;
        use TableRow as R;
        const EIGHTEENTH: f64 = 1.0 / 18.0;
        match (self.row, self.column) {
            (R::NotOneNotOne, _) => 1.0 / 9.0,
            (R::OneOne, C::OneOne | C::OneZero)
            | (R::ZeroOne, C::ZeroZero | C::ZeroOne)
            | (R::MinusOneOne, C::OneOne | C::OneZero)
            | (R::OneZero, C::ZeroOne | C::OneZero)
            | (R::OneMinusOne, C::ZeroZero | C::ZeroOne) => EIGHTEENTH,
            _ => 0.0,
        }
    }
}

/// Table cell of position `a`, given raw digits and canonical bits
/// (`true` for a canonical `1`; strings led by `-1` are negated first).
pub fn pair_cell(b_prev: Digit, b_cur: Digit, bt_prev: bool, bt_cur: bool) -> TableCell {
    TableCell {
        row: TableRow::of(b_prev, b_cur),
        column: TableColumn::of(bt_prev, bt_cur),
    }
}
