//! The two-tick adder built from half-add wires and `SC_AND` gates, the
//! one-tick increment-by-`2^i` unit, and the 3-tick double-width and
//! √N-blocked compositions.
//!
//! Tick 1 computes `s_i = a_i ⊕ b_i` and `c_i = a_i ∧ b_i`. Tick 2
//! evaluates every gate
//!
//! ```text
//! SC_AND(i, j) = ¬s_j ∧ s_{j-1} ∧ … ∧ s_{i+1} ∧ c_i      0 <= i < j <= N
//! ```
//!
//! against the same `s` wires. A firing gate complements `s_{i+1}..=s_j`,
//! which adds `c_i·2^(i+1)` to the sum. Each carry fires exactly one gate
//! and the complemented segments never overlap, so all writes land at once.

use serde::Serialize;

use crate::bitcore::{is_power_of_two, BitVector};
use crate::error::{Error, Result};

pub const FLASH_ADD_TICKS: u32 = 2;
pub const INCREMENT_TICKS: u32 = 1;
pub const DOUBLE_WIDTH_TICKS: u32 = 3;
pub const BLOCKED_TICKS: u32 = 3;

/// Wires after the half-add tick.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfAddState {
    n: usize,
    s: BitVector,
    c: BitVector,
}

impl HalfAddState {
    /// Operand width `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `s_0..=s_N`; `s_N` starts at 0.
    pub fn s(&self) -> &BitVector {
        &self.s
    }

    pub fn c(&self) -> &BitVector {
        &self.c
    }
}

/// A firing gate `SC_AND(i, j)`: carry `i` absorbed by complementing
/// positions `i+1..=j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Firing {
    pub i: usize,
    pub j: usize,
}

impl Firing {
    /// Positions written by this firing.
    pub fn segment(&self) -> std::ops::RangeInclusive<usize> {
        self.i + 1..=self.j
    }
}

/// The fired gates of one addition, ordered by carry index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FireSet {
    pub firings: Vec<Firing>,
    /// Number of `SC_AND` gates evaluated to produce this set.
    pub gates_evaluated: usize,
}

impl FireSet {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.firings.iter().map(|f| (f.i, f.j)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlashSum {
    /// `N+1` bits, the top bit being the carry out.
    pub sum: BitVector,
    pub ticks: u32,
    pub fires: FireSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Timed {
    pub value: BitVector,
    pub ticks: u32,
}

fn same_width(a: &BitVector, b: &BitVector) -> Result<()> {
    if a.width() != b.width() {
        return Err(Error::WidthMismatch {
            left: a.width(),
            right: b.width(),
        });
    }
    Ok(())
}

/// Tick 1: bitwise XOR / AND, `s_N` forced to 0.
pub fn half_add(a: &BitVector, b: &BitVector) -> Result<HalfAddState> {
    same_width(a, b)?;
    let n = a.width();
    let mut s: Vec<bool> = a.bits().iter().zip(b.bits()).map(|(x, y)| x ^ y).collect();
    s.push(false);
    let c: Vec<bool> = a.bits().iter().zip(b.bits()).map(|(x, y)| x & y).collect();
    Ok(HalfAddState {
        n,
        s: BitVector::from_bits(s)?,
        c: BitVector::from_bits(c)?,
    })
}

/// Evaluates one gate straight from its definition.
pub fn sc_and(state: &HalfAddState, i: usize, j: usize) -> Result<bool> {
    if i >= j || j > state.n {
        return Err(Error::IndexOrder { i, j, n: state.n });
    }
    let s = state.s.bits();
    Ok(!s[j] && s[i + 1..j].iter().all(|&x| x) && state.c.bit(i))
}

/// Evaluates all `N(N+1)/2` gates on the pre-resolution wires.
///
/// Gates sharing a carry index share their prefix conjunction, so the row
/// for carry `i` is walked once while every gate is still tallied.
pub fn fire_set(state: &HalfAddState) -> Result<FireSet> {
    let s = state.s.bits();
    let mut out = FireSet::default();
    for i in 0..state.n {
        let carry = state.c.bit(i);
        let mut prefix = carry;
        let mut fired: Option<usize> = None;
        for (j, &sj) in s.iter().enumerate().take(state.n + 1).skip(i + 1) {
            out.gates_evaluated += 1;
            if prefix && !sj {
                if let Some(prev) = fired {
                    return Err(Error::fault(format!(
                        "carry {} fires gates at both {} and {}",
                        i, prev, j
                    )));
                }
                fired = Some(j);
            }
            prefix &= sj;
        }
        match (carry, fired) {
            (true, Some(j)) => out.firings.push(Firing { i, j }),
            (false, None) => {}
            (true, None) => {
                return Err(Error::fault(format!("carry {} fires no gate", i)));
            }
            (false, Some(j)) => {
                return Err(Error::fault(format!(
                    "gate ({}, {}) fired without carry",
                    i, j
                )));
            }
        }
    }
    Ok(out)
}

/// Tick 2 write-back: every fired segment is complemented against the
/// pre-resolution `s`, all in a single simultaneous write.
pub fn resolve(state: &HalfAddState, fires: &FireSet) -> Result<BitVector> {
    let mut flip = vec![false; state.n + 1];
    for f in &fires.firings {
        for p in f.segment() {
            if flip[p] {
                return Err(Error::fault(format!("segments overlap at position {}", p)));
            }
            flip[p] = true;
        }
    }
    let bits = state
        .s
        .bits()
        .iter()
        .zip(&flip)
        .map(|(s, f)| s ^ f)
        .collect();
    BitVector::from_bits(bits)
}

/// Applies the firings one at a time in `order`, each one overwriting its
/// segment with the complement of the original wires. Agrees with
/// [`resolve`] for every order exactly when the segments are disjoint.
pub fn resolve_in_order(state: &HalfAddState, fires: &FireSet, order: &[usize]) -> BitVector {
    let original = state.s.bits();
    let mut out = state.s.clone();
    for &k in order {
        for p in fires.firings[k].segment() {
            out.set(p, !original[p]);
        }
    }
    out
}

/// Two-tick addition; the result has `N+1` bits.
pub fn flash_add(a: &BitVector, b: &BitVector) -> Result<FlashSum> {
    let state = half_add(a, b)?;
    let fires = fire_set(&state)?;
    let sum = resolve(&state, &fires)?;
    Ok(FlashSum {
        sum,
        ticks: FLASH_ADD_TICKS,
        fires,
    })
}

/// One-tick `x + 2^i`. Finds the least `j >= i` with `x_j = 0` (position
/// `N` is an implicit 0 overflow bit) and complements `i..=j`.
pub fn increment_by_pow2(x: &BitVector, i: usize) -> Result<Timed> {
    let n = x.width();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, width: n });
    }
    let mut y = x.resize(n + 1)?;
    let j = (i..=n)
        .find(|&j| !y.bit(j))
        .expect("position N is always zero");
    for p in i..=j {
        y.set(p, !y.bit(p));
    }
    Ok(Timed {
        value: y,
        ticks: INCREMENT_TICKS,
    })
}

/// `(2N)`-bit addition from two `N`-bit flash adders running in parallel
/// plus one increment tick for the cross carry. Result has `2N+1` bits.
pub fn double_width_add(
    a_lo: &BitVector,
    a_hi: &BitVector,
    b_lo: &BitVector,
    b_hi: &BitVector,
) -> Result<Timed> {
    let n = a_lo.width();
    for w in [a_hi, b_lo, b_hi] {
        same_width(a_lo, w)?;
    }
    let lo = flash_add(a_lo, b_lo)?;
    let hi = flash_add(a_hi, b_hi)?;
    let mut ticks = lo.ticks.max(hi.ticks);
    let cross = lo.sum.bit(n);
    let high = if cross {
        // hi <= 2^(N+1) - 2, so the increment stays within N+1 bits.
        increment_by_pow2(&hi.sum, 0)?
            .value
            .resize(n + 1)
            .map_err(|_| Error::fault("cross-carry increment overflowed the high half"))?
    } else {
        hi.sum
    };
    ticks += INCREMENT_TICKS;
    Ok(Timed {
        value: lo.sum.slice(0, n).concat(&high),
        ticks,
    })
}

/// [`double_width_add`] on whole `2N`-bit operands.
pub fn double_width_add_split(a: &BitVector, b: &BitVector) -> Result<Timed> {
    same_width(a, b)?;
    let w = a.width();
    if !w.is_multiple_of(2) {
        return Err(Error::UnsupportedWidth {
            width: w,
            reason: "double-width addition needs an even width",
        });
    }
    let n = w / 2;
    double_width_add(
        &a.slice(0, n),
        &a.slice(n, n),
        &b.slice(0, n),
        &b.slice(n, n),
    )
}

/// Report of a blocked addition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedSum {
    pub sum: BitVector,
    pub ticks: u32,
    /// Gates evaluated by the per-block flash adders.
    pub first_stage_gates: usize,
    /// Gates evaluated by the block-carry absorption units.
    pub second_stage_gates: usize,
    /// `(p, j)`: carry entering at position `p` absorbed by complementing
    /// `p..=j`.
    pub second_stage_firings: Vec<(usize, usize)>,
}

/// Integer square root of a power of four.
pub(crate) fn sqrt_power_of_four(n: usize) -> Option<usize> {
    if is_power_of_two(n) && n.trailing_zeros().is_multiple_of(2) {
        Some(1 << (n.trailing_zeros() / 2))
    } else {
        None
    }
}

/// Two-level addition of `2N`-bit operands.
///
/// Stage 1 (2 ticks): every `block`-bit slice is flash-added on its own.
/// Stage 2 (1 tick): each block carry-out enters at the next block
/// boundary `p`, and a trailing-ones unit spanning `p..=2N` complements
/// `p..=j` up to the first 0 wire. A block with a carry-out is never all
/// ones, so these segments are disjoint and all fire together.
pub fn blocked_add(a: &BitVector, b: &BitVector, block: usize) -> Result<BlockedSum> {
    same_width(a, b)?;
    let width = a.width();
    let half = width / 2;
    if !width.is_multiple_of(2) || half < 4 || sqrt_power_of_four(half).is_none() {
        return Err(Error::UnsupportedWidth {
            width,
            reason: "blocked addition needs width 2N with N a power of 4 (N >= 4)",
        });
    }
    if block == 0 || !width.is_multiple_of(block) {
        return Err(Error::UnsupportedWidth {
            width,
            reason: "block size must divide the operand width",
        });
    }

    let mut s = Vec::with_capacity(width + 1);
    let mut entries = Vec::new();
    let mut first_stage_gates = 0;
    for start in (0..width).step_by(block) {
        let r = flash_add(&a.slice(start, block), &b.slice(start, block))?;
        first_stage_gates += r.fires.gates_evaluated;
        s.extend_from_slice(&r.sum.bits()[..block]);
        if r.sum.bit(block) {
            entries.push(start + block);
        }
    }
    s.push(false);

    let mut second_stage_gates = 0;
    let mut firings = Vec::with_capacity(entries.len());
    let mut flip = vec![false; width + 1];
    for start in (block..=width).step_by(block) {
        let carry = entries.contains(&start);
        let mut prefix = carry;
        let mut fired = None;
        for (j, &sj) in s.iter().enumerate().take(width + 1).skip(start) {
            second_stage_gates += 1;
            if prefix && !sj && fired.is_none() {
                fired = Some(j);
            }
            prefix &= sj;
        }
        if let Some(j) = fired {
            for (p, f) in flip.iter_mut().enumerate().take(j + 1).skip(start) {
                if *f {
                    return Err(Error::fault(format!(
                        "block carry segments overlap at position {}",
                        p
                    )));
                }
                *f = true;
            }
            firings.push((start, j));
        } else if carry {
            return Err(Error::fault(format!(
                "block carry at {} not absorbed",
                start
            )));
        }
    }
    let bits = s.iter().zip(&flip).map(|(x, f)| x ^ f).collect();
    Ok(BlockedSum {
        sum: BitVector::from_bits(bits)?,
        ticks: FLASH_ADD_TICKS + INCREMENT_TICKS,
        first_stage_gates,
        second_stage_gates,
        second_stage_firings: firings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(v: u128, w: usize) -> BitVector {
        BitVector::from_u128(v, w).unwrap()
    }

    #[test]
    fn half_add_examples() {
        let st = half_add(&bv(5, 4), &bv(3, 4)).unwrap();
        assert_eq!(st.s().to_binary_string(), "00110");
        assert_eq!(st.c().to_binary_string(), "0001");

        let st = half_add(&bv(6, 4), &bv(6, 4)).unwrap();
        assert_eq!(st.s().to_binary_string(), "00000");
        assert_eq!(st.c().to_binary_string(), "0110");

        let st = half_add(&bv(13, 4), &bv(0, 4)).unwrap();
        assert_eq!(st.s().to_u128(), Some(13));
        assert_eq!(st.c().to_u128(), Some(0));

        assert!(matches!(
            half_add(&bv(0, 4), &bv(0, 5)),
            Err(Error::WidthMismatch { left: 4, right: 5 })
        ));
    }

    #[test]
    fn sc_and_examples() {
        let st = half_add(&bv(5, 4), &bv(3, 4)).unwrap();
        assert!(sc_and(&st, 0, 3).unwrap());
        assert!(!sc_and(&st, 0, 1).unwrap());
        for j in 3..=4 {
            assert!(!sc_and(&st, 2, j).unwrap());
        }

        let st = half_add(&bv(6, 4), &bv(6, 4)).unwrap();
        assert!(sc_and(&st, 1, 2).unwrap());
        assert!(!sc_and(&st, 1, 3).unwrap());

        assert!(matches!(sc_and(&st, 2, 2), Err(Error::IndexOrder { .. })));
        assert!(matches!(sc_and(&st, 0, 5), Err(Error::IndexOrder { .. })));
    }

    #[test]
    fn fire_set_examples() {
        let st = half_add(&bv(9, 4), &bv(4, 4)).unwrap();
        let fs = fire_set(&st).unwrap();
        assert!(fs.firings.is_empty());
        assert_eq!(fs.gates_evaluated, 10);

        let fs = fire_set(&half_add(&bv(5, 4), &bv(3, 4)).unwrap()).unwrap();
        assert_eq!(fs.pairs(), [(0, 3)]);

        let fs = fire_set(&half_add(&bv(6, 4), &bv(6, 4)).unwrap()).unwrap();
        assert_eq!(fs.pairs(), [(1, 2), (2, 3)]);
    }

    #[test]
    fn fire_set_matches_gate_definition() {
        for a in 0..16 {
            for b in 0..16 {
                let st = half_add(&bv(a, 4), &bv(b, 4)).unwrap();
                let fs = fire_set(&st).unwrap();
                let mut direct = Vec::new();
                for i in 0..4 {
                    for j in i + 1..=4 {
                        if sc_and(&st, i, j).unwrap() {
                            direct.push((i, j));
                        }
                    }
                }
                assert_eq!(fs.pairs(), direct);
            }
        }
    }

    #[test]
    fn resolve_examples() {
        let r = flash_add(&bv(5, 4), &bv(3, 4)).unwrap();
        assert_eq!(r.sum.to_binary_string(), "01000");

        let st = half_add(&bv(15, 4), &bv(1, 4)).unwrap();
        assert_eq!(st.s().to_binary_string(), "01110");
        let fs = fire_set(&st).unwrap();
        assert_eq!(fs.pairs(), [(0, 4)]);
        assert_eq!(resolve(&st, &fs).unwrap().to_binary_string(), "10000");

        let r = flash_add(&bv(11, 4), &bv(0, 4)).unwrap();
        assert!(r.fires.firings.is_empty());
        assert_eq!(r.sum.to_u128(), Some(11));
    }

    #[test]
    fn resolve_rejects_overlap() {
        let st = half_add(&bv(0, 4), &bv(0, 4)).unwrap();
        let fs = FireSet {
            firings: vec![Firing { i: 0, j: 2 }, Firing { i: 1, j: 3 }],
            gates_evaluated: 0,
        };
        assert!(matches!(resolve(&st, &fs), Err(Error::IntegrityFault(_))));
    }

    #[test]
    fn flash_add_examples() {
        let r = flash_add(&bv(0, 8), &bv(0, 8)).unwrap();
        assert_eq!((r.sum.to_u128(), r.ticks), (Some(0), 2));

        let m = u64::MAX as u128;
        let r = flash_add(&bv(m, 64), &bv(m, 64)).unwrap();
        assert_eq!(r.sum.width(), 65);
        assert!(r.sum.bit(64));
        assert_eq!(r.sum.to_u128(), Some((1 << 65) - 2));
    }

    #[test]
    fn increment_examples() {
        let r = increment_by_pow2(&bv(11, 4), 0).unwrap();
        assert_eq!((r.value.to_binary_string().as_str(), r.ticks), ("01100", 1));
        assert_eq!(
            increment_by_pow2(&bv(0, 4), 3).unwrap().value.to_u128(),
            Some(8)
        );
        assert_eq!(
            increment_by_pow2(&bv(15, 4), 0)
                .unwrap()
                .value
                .to_binary_string(),
            "10000"
        );
        assert!(matches!(
            increment_by_pow2(&bv(0, 4), 4),
            Err(Error::IndexOutOfRange { index: 4, width: 4 })
        ));
    }

    #[test]
    fn double_width_examples() {
        let r = double_width_add_split(&bv(1, 8), &bv(2, 8)).unwrap();
        assert_eq!(
            (r.value.to_u128(), r.ticks, r.value.width()),
            (Some(3), 3, 9)
        );

        let r = double_width_add_split(&bv(0x0f, 8), &bv(0x01, 8)).unwrap();
        assert_eq!(r.value.to_u128(), Some(0x10));

        let r = double_width_add_split(&bv(0xff, 8), &bv(0xff, 8)).unwrap();
        assert_eq!(r.value.to_u128(), Some(0x1fe));

        assert!(double_width_add_split(&bv(0, 7), &bv(0, 7)).is_err());
    }

    #[test]
    fn blocked_examples() {
        let r = blocked_add(&bv(0, 32), &bv(0, 32), 4).unwrap();
        assert_eq!((r.sum.to_u128(), r.ticks), (Some(0), 3));

        // carry chain across several all-ones blocks
        let r = blocked_add(&bv(0x0fff_ffff, 32), &bv(1, 32), 4).unwrap();
        assert_eq!(r.sum.to_u128(), Some(0x1000_0000));
        assert_eq!(r.second_stage_firings, [(4, 28)]);

        let r = blocked_add(&bv(u32::MAX as u128, 32), &bv(u32::MAX as u128, 32), 4).unwrap();
        assert_eq!(r.sum.to_u128(), Some(2 * u32::MAX as u128));
        assert_eq!(r.first_stage_gates, 8 * 10);
        // boundaries 4, 8, .., 32 span 29, 25, .., 1 gates
        assert_eq!(r.second_stage_gates, (1..=29).step_by(4).sum::<usize>());
    }

    #[test]
    fn blocked_rejects_bad_shapes() {
        for (w, block) in [(16, 4), (24, 4), (32, 5), (32, 0), (4, 2)] {
            assert!(
                matches!(
                    blocked_add(&bv(0, w), &bv(0, w), block),
                    Err(Error::UnsupportedWidth { .. })
                ),
                "{} {}",
                w,
                block
            );
        }
    }
}
