use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};

use crate::{Error, Result};

/// Longest string whose value is evaluated in `i128`; `|value| <= 2^n - 1`.
pub const MAX_FIXED_WIDTH_DIGITS: usize = 126;

/// One increment of the process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[repr(i8)]
pub enum Digit {
    MinusOne = -1,
    Zero = 0,
    PlusOne = 1,
}

impl Digit {
    pub const ALL: [Digit; 3] = [Digit::MinusOne, Digit::Zero, Digit::PlusOne];

    #[inline]
    pub fn value(self) -> i8 {
        self as i8
    }

    #[inline]
    pub fn negate(self) -> Digit {
        match self {
            Digit::MinusOne => Digit::PlusOne,
            Digit::Zero => Digit::Zero,
            Digit::PlusOne => Digit::MinusOne,
        }
    }

    pub fn from_i8(v: i8) -> Option<Digit> {
        match v {
            -1 => Some(Digit::MinusOne),
            0 => Some(Digit::Zero),
            1 => Some(Digit::PlusOne),
            _ => None,
        }
    }

    /// Text form: `'-'`, `'0'` or `'+'`.
    pub fn to_char(self) -> char {
        match self {
            Digit::MinusOne => '-',
            Digit::Zero => '0',
            Digit::PlusOne => '+',
        }
    }

    /// Accepts `'-'`, `'0'`, and either `'+'` or `'1'` for one.
    pub fn from_char(c: char) -> Result<Digit> {
        match c {
            '-' => Ok(Digit::MinusOne),
            '0' => Ok(Digit::Zero),
            '+' | '1' => Ok(Digit::PlusOne),
            other => Err(Error::InvalidDigit(other)),
        }
    }
}

impl core::ops::Neg for Digit {
    type Output = Digit;

    fn neg(self) -> Digit {
        self.negate()
    }
}

/// An ordered string `(b_0, ..., b_{n-1})` of increments, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct SignedDigitString {
    digits: Vec<Digit>,
}

impl SignedDigitString {
    pub fn new(digits: Vec<Digit>) -> Self {
        SignedDigitString { digits }
    }

    pub fn zeros(n: usize) -> Self {
        SignedDigitString {
            digits: alloc::vec![Digit::Zero; n],
        }
    }

    /// Builds a string from integer digits, rejecting anything outside `{-1, 0, 1}`.
    pub fn from_i8s(values: &[i8]) -> Result<Self> {
        values
            .iter()
            .map(|&v| Digit::from_i8(v).ok_or(Error::DomainError("digit outside {-1, 0, 1}")))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    #[inline]
    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<Digit> {
        self.digits
    }

    pub fn to_i8s(&self) -> Vec<i8> {
        self.digits.iter().map(|d| d.value()).collect()
    }

    pub fn negated(&self) -> Self {
        SignedDigitString {
            digits: self.digits.iter().map(|d| d.negate()).collect(),
        }
    }

    /// `sum 2^(n-1-i) b_i` in `i128`. Fails with [`Error::LengthOverflow`]
    /// above [`MAX_FIXED_WIDTH_DIGITS`]; use [`Self::value_big`] there.
    pub fn value(&self) -> Result<i128> {
        if self.digits.len() > MAX_FIXED_WIDTH_DIGITS {
            return Err(Error::LengthOverflow(self.digits.len()));
        }
        Ok(self
            .digits
            .iter()
            .fold(0i128, |acc, d| 2 * acc + d.value() as i128))
    }

    /// Exact value at any length, as (positive digits) - (negative digits)
    /// read as two binary numbers.
    pub fn value_big(&self) -> BigInt {
        let n = self.digits.len();
        let words = n.div_ceil(32);
        let mut pos = alloc::vec![0u32; words];
        let mut neg = alloc::vec![0u32; words];
        for (i, d) in self.digits.iter().enumerate() {
            let bit = n - 1 - i;
            match d {
                Digit::PlusOne => pos[bit / 32] |= 1 << (bit % 32),
                Digit::MinusOne => neg[bit / 32] |= 1 << (bit % 32),
                Digit::Zero => {}
            }
        }
        BigInt::from_biguint(Sign::Plus, BigUint::new(pos))
            - BigInt::from_biguint(Sign::Plus, BigUint::new(neg))
    }

    /// The value reduced into `0..modulus`.
    pub fn residue(&self, modulus: u64) -> u64 {
        assert!(modulus > 0, "modulus must be positive");
        let m = modulus as u128;
        self.digits.iter().fold(0u128, |acc, d| {
            let b = match d {
                Digit::MinusOne => m - 1,
                Digit::Zero => 0,
                Digit::PlusOne => 1 % m,
            };
            (2 * acc + b) % m
        }) as u64
    }
}

impl From<Vec<Digit>> for SignedDigitString {
    fn from(digits: Vec<Digit>) -> Self {
        SignedDigitString { digits }
    }
}

impl core::ops::Index<usize> for SignedDigitString {
    type Output = Digit;

    fn index(&self, i: usize) -> &Digit {
        &self.digits[i]
    }
}

impl fmt::Display for SignedDigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.digits.iter().map(|d| d.to_char()).collect();
        f.write_str(&s)
    }
}

impl FromStr for SignedDigitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(Digit::from_char)
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}
