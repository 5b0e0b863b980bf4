//! The `k`-level cascade adder for `N = 2^k` bit operands.
//!
//! Level 1 adds 2-bit blocks with a lookup table. Each later level merges
//! pairs of blocks: the odd (higher) block, with its carry as an extra top
//! bit, is incremented by the even block's carry while the even block's
//! sum bits pass through as the low half. Every level costs one tick.

use serde::Serialize;

use crate::bitcore::{is_power_of_two, BitVector, WideValue};
use crate::error::{Error, Result};

/// Leaf lookup table indexed by `(a1 a0 b1 b0)`; each entry is the 2-bit
/// block sum and its carry. Models one programmable logic array.
const LEAF_TABLE: [(u8, bool); 16] = [
    (0, false), // 0 + 0
    (1, false), // 0 + 1
    (2, false), // 0 + 2
    (3, false), // 0 + 3
    (1, false), // 1 + 0
    (2, false), // 1 + 1
    (3, false), // 1 + 2
    (0, true),  // 1 + 3
    (2, false), // 2 + 0
    (3, false), // 2 + 1
    (0, true),  // 2 + 2
    (1, true),  // 2 + 3
    (3, false), // 3 + 0
    (0, true),  // 3 + 1
    (1, true),  // 3 + 2
    (2, true),  // 3 + 3
];

/// Sums and carries after some level `l` of the cascade.
///
/// Block `i` covers sum bits `i·2^l .. (i+1)·2^l` and owns `carries[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeState {
    k: u32,
    level: u32,
    sums: BitVector,
    carries: Vec<bool>,
    a: BitVector,
    b: BitVector,
}

impl CascadeState {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn sums(&self) -> &BitVector {
        &self.sums
    }

    pub fn carries(&self) -> &[bool] {
        &self.carries
    }

    pub fn block_width(&self) -> usize {
        1 << self.level
    }

    /// Checks `c·2^(2^l) + Σ s·2^j = a_block + b_block` for every block.
    pub fn check_block_sums(&self) -> Result<()> {
        let w = self.block_width();
        if self.carries.len() != self.sums.width() / w {
            return Err(Error::fault(format!(
                "level {} holds {} carries for {} blocks",
                self.level,
                self.carries.len(),
                self.sums.width() / w
            )));
        }
        for (i, &carry) in self.carries.iter().enumerate() {
            let lhs = &self.sums.slice(i * w, w).to_value()
                + &if carry {
                    WideValue::pow2(w)
                } else {
                    WideValue::zero()
                };
            let rhs = &self.a.slice(i * w, w).to_value() + &self.b.slice(i * w, w).to_value();
            if lhs != rhs {
                return Err(Error::fault(format!(
                    "block-sum equation fails at level {} block {}: {} != {}",
                    self.level, i, lhs, rhs
                )));
            }
        }
        Ok(())
    }

    pub fn record(&self) -> LevelRecord {
        LevelRecord {
            level: self.level,
            sums: self.sums.to_hex(),
            carries: self.carries.iter().map(|&c| u8::from(c)).collect(),
        }
    }
}

/// Serializable snapshot of one cascade level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRecord {
    pub level: u32,
    pub sums: String,
    pub carries: Vec<u8>,
}

/// All levels `1..=k` of one addition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeTrace {
    pub states: Vec<CascadeState>,
    pub ticks: u32,
}

impl CascadeTrace {
    pub fn records(&self) -> Vec<LevelRecord> {
        self.states.iter().map(CascadeState::record).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeSum {
    pub sum: BitVector,
    pub carry: bool,
    pub ticks: u32,
}

impl CascadeSum {
    pub fn value(&self) -> WideValue {
        let carry = if self.carry {
            WideValue::pow2(self.sum.width())
        } else {
            WideValue::zero()
        };
        &self.sum.to_value() + &carry
    }
}

fn operand_k(a: &BitVector, b: &BitVector) -> Result<u32> {
    if a.width() != b.width() {
        return Err(Error::WidthMismatch {
            left: a.width(),
            right: b.width(),
        });
    }
    let n = a.width();
    if n < 2 || !is_power_of_two(n) {
        return Err(Error::UnsupportedWidth {
            width: n,
            reason: "cascade adder needs a power of two >= 2",
        });
    }
    Ok(n.trailing_zeros())
}

/// Level 1: every 2-bit block pair goes through the leaf table. One tick.
pub fn leaf_init(a: &BitVector, b: &BitVector) -> Result<CascadeState> {
    let k = operand_k(a, b)?;
    let n = a.width();
    let mut sums = Vec::with_capacity(n);
    let mut carries = Vec::with_capacity(n / 2);
    for i in 0..n / 2 {
        let pair = |v: &BitVector| usize::from(v.bit(2 * i)) | usize::from(v.bit(2 * i + 1)) << 1;
        let (s, c) = LEAF_TABLE[pair(a) << 2 | pair(b)];
        sums.push(s & 1 == 1);
        sums.push(s & 2 == 2);
        carries.push(c);
    }
    Ok(CascadeState {
        k,
        level: 1,
        sums: BitVector::from_bits(sums)?,
        carries,
        a: a.clone(),
        b: b.clone(),
    })
}

/// Single-tick increment of the `(2^l + 1)`-bit string `high_carry · word`.
///
/// When `inc` is set the unit locates the least position `j` (position
/// `word.width()` being `high_carry`) that is 0 with all lower positions 1,
/// then complements positions `0..=j`. A saturated input (all ones with the
/// high carry set) cannot occur inside the cascade and is reported as an
/// integrity fault.
pub fn increment_unit(word: &BitVector, high_carry: bool, inc: bool) -> Result<(BitVector, bool)> {
    if !inc {
        return Ok((word.clone(), high_carry));
    }
    let w = word.width();
    let wire = |p: usize| if p == w { high_carry } else { word.bit(p) };
    // One AND gate per candidate position, all read in the same tick.
    let j = (0..=w)
        .find(|&j| !wire(j) && (0..j).all(wire))
        .ok_or_else(|| {
            Error::fault(format!(
                "increment of saturated {}-bit word with high carry set",
                w
            ))
        })?;
    let mut out = word.clone();
    for p in 0..j.min(w) {
        out.set(p, false);
    }
    if j < w {
        out.set(j, true);
        Ok((out, high_carry))
    } else {
        Ok((out, true))
    }
}

/// Level `l → l+1`. All block pairs are processed from the level-`l`
/// state only, in one tick.
pub fn cascade_step(state: &CascadeState) -> Result<CascadeState> {
    if state.level >= state.k {
        return Err(Error::FinalLevel { level: state.level });
    }
    let w = state.block_width();
    let mut sums = Vec::with_capacity(state.sums.width());
    let mut carries = Vec::with_capacity(state.carries.len() / 2);
    for i in 0..state.carries.len() / 2 {
        let even = state.sums.slice(2 * i * w, w);
        let odd = state.sums.slice((2 * i + 1) * w, w);
        let odd_carry = state.carries[2 * i + 1];
        // A carried block can hold at most 2^w - 2, i.e. is never all ones.
        if odd_carry && odd.count_ones() == w {
            return Err(Error::fault(format!(
                "saturation bound violated at level {} block {}",
                state.level,
                2 * i + 1
            )));
        }
        let (high, carry) = increment_unit(&odd, odd_carry, state.carries[2 * i])?;
        sums.extend_from_slice(even.bits());
        sums.extend_from_slice(high.bits());
        carries.push(carry);
    }
    Ok(CascadeState {
        k: state.k,
        level: state.level + 1,
        sums: BitVector::from_bits(sums)?,
        carries,
        a: state.a.clone(),
        b: state.b.clone(),
    })
}

/// Full cascade with a retained trace; the block-sum equation is verified
/// at every level.
pub fn cascade_add(a: &BitVector, b: &BitVector) -> Result<(CascadeSum, CascadeTrace)> {
    let mut state = leaf_init(a, b)?;
    state.check_block_sums()?;
    let mut states = vec![state.clone()];
    while state.level < state.k {
        state = cascade_step(&state)?;
        state.check_block_sums()?;
        states.push(state.clone());
    }
    let ticks = states.len() as u32;
    let sum = CascadeSum {
        sum: state.sums.clone(),
        carry: state.carries[0],
        ticks,
    };
    Ok((sum, CascadeTrace { states, ticks }))
}

/// Sum-only variant: no trace retained, no per-level arithmetic check.
/// The saturation bound is still enforced inside every step.
pub fn cascade_sum(a: &BitVector, b: &BitVector) -> Result<CascadeSum> {
    let mut state = leaf_init(a, b)?;
    let mut ticks = 1;
    while state.level < state.k {
        state = cascade_step(&state)?;
        ticks += 1;
    }
    Ok(CascadeSum {
        carry: state.carries[0],
        sum: state.sums,
        ticks,
    })
}
