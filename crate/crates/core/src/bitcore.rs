//! Fixed-width bit vectors and the arbitrary-precision oracle.
//!
//! Bits are stored least-significant first, so `bits[j]` carries weight
//! `2^j`. Display and hex output are most-significant first.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer used as ground truth.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WideValue(BigUint);

impl WideValue {
    pub fn zero() -> Self {
        WideValue(BigUint::zero())
    }

    /// `2^exp`.
    pub fn pow2(exp: usize) -> Self {
        WideValue(BigUint::one() << exp)
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        if text.is_empty() || !text.bytes().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::MalformedHex(text.to_string()));
        }
        BigUint::parse_bytes(text.as_bytes(), 16)
            .map(WideValue)
            .ok_or_else(|| Error::MalformedHex(text.to_string()))
    }

    /// Lowercase hex without prefix; zero is `"0"`.
    pub fn to_hex(&self) -> String {
        self.0.to_str_radix(16)
    }

    /// Number of significant bits (0 for zero).
    pub fn bit_len(&self) -> usize {
        self.0.bits() as usize
    }

    pub fn bit(&self, index: usize) -> bool {
        self.0.bit(index as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    /// The value if it fits in 128 bits.
    pub fn to_u128(&self) -> Option<u128> {
        if self.bit_len() > 128 {
            return None;
        }
        Some(
            self.0
                .iter_u64_digits()
                .enumerate()
                .fold(0u128, |acc, (i, d)| acc | (u128::from(d) << (64 * i))),
        )
    }
}

impl From<u64> for WideValue {
    fn from(v: u64) -> Self {
        WideValue(BigUint::from(v))
    }
}

impl From<u128> for WideValue {
    fn from(v: u128) -> Self {
        WideValue(BigUint::from(v))
    }
}

impl From<BigUint> for WideValue {
    fn from(v: BigUint) -> Self {
        WideValue(v)
    }
}

impl Add for &WideValue {
    type Output = WideValue;
    fn add(self, rhs: &WideValue) -> WideValue {
        WideValue(&self.0 + &rhs.0)
    }
}

impl Mul for &WideValue {
    type Output = WideValue;
    fn mul(self, rhs: &WideValue) -> WideValue {
        WideValue(&self.0 * &rhs.0)
    }
}

impl<'a> std::iter::Sum<&'a WideValue> for WideValue {
    fn sum<I: Iterator<Item = &'a WideValue>>(iter: I) -> Self {
        WideValue(iter.map(|v| &v.0).sum())
    }
}

impl std::iter::Sum<WideValue> for WideValue {
    fn sum<I: Iterator<Item = WideValue>>(iter: I) -> Self {
        WideValue(iter.map(|v| v.0).sum())
    }
}

impl fmt::Display for WideValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Exact sum. This is the reference every adder model is checked against.
pub fn oracle_add(a: &WideValue, b: &WideValue) -> WideValue {
    a + b
}

/// Exact product. Reference for the multiplier pipeline.
pub fn oracle_mul(a: &WideValue, b: &WideValue) -> WideValue {
    a * b
}

/// A fixed-width, LSB-indexed bundle of wires.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    pub fn zeros(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::ZeroWidth);
        }
        Ok(BitVector {
            bits: vec![false; width],
        })
    }

    pub fn ones(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::ZeroWidth);
        }
        Ok(BitVector {
            bits: vec![true; width],
        })
    }

    /// Builds a vector from LSB-first bits.
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::ZeroWidth);
        }
        Ok(BitVector { bits })
    }

    pub fn from_hex(text: &str, width: usize) -> Result<Self> {
        Self::from_value(&WideValue::from_hex(text)?, width)
    }

    pub fn from_value(value: &WideValue, width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::ZeroWidth);
        }
        if value.bit_len() > width {
            return Err(Error::OutOfRange { width });
        }
        Ok(BitVector {
            bits: (0..width).map(|j| value.bit(j)).collect(),
        })
    }

    pub fn from_u128(value: u128, width: usize) -> Result<Self> {
        Self::from_value(&WideValue::from(value), width)
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.bits[index] = value;
    }

    /// `Σ bits[j]·2^j`.
    pub fn to_value(&self) -> WideValue {
        let mut digits = vec![0u64; self.bits.len().div_ceil(64)];
        for (j, _) in self.bits.iter().enumerate().filter(|(_, b)| **b) {
            digits[j / 64] |= 1 << (j % 64);
        }
        WideValue(BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                .collect::<Vec<_>>(),
        ))
    }

    /// Value as a `u128`; `None` when wider bits are set.
    pub fn to_u128(&self) -> Option<u128> {
        let mut out = 0u128;
        for (j, &b) in self.bits.iter().enumerate() {
            if b {
                if j >= 128 {
                    return None;
                }
                out |= 1 << j;
            }
        }
        Some(out)
    }

    pub fn to_hex(&self) -> String {
        self.to_value().to_hex()
    }

    /// `len` bits starting at `lo`.
    pub fn slice(&self, lo: usize, len: usize) -> BitVector {
        BitVector {
            bits: self.bits[lo..lo + len].to_vec(),
        }
    }

    /// `self` in the low bits, `high` above it.
    pub fn concat(&self, high: &BitVector) -> BitVector {
        let mut bits = Vec::with_capacity(self.width() + high.width());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&high.bits);
        BitVector { bits }
    }

    /// Zero-extends or truncates; truncation must drop only zeros.
    pub fn resize(&self, width: usize) -> Result<BitVector> {
        if width == 0 {
            return Err(Error::ZeroWidth);
        }
        if self.bits.iter().skip(width).any(|&b| b) {
            return Err(Error::OutOfRange { width });
        }
        let mut bits = self.bits.clone();
        bits.resize(width, false);
        Ok(BitVector { bits })
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// MSB-first `0`/`1` string.
    pub fn to_binary_string(&self) -> String {
        self.bits
            .iter()
            .rev()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary_string())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[{}]({})", self.width(), self)
    }
}

pub(crate) fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}
