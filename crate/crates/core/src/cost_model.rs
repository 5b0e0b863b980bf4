//! Closed-form gate, memory-entry and tick counts for every design.
//!
//! Counts are in "special purpose AND gates" (wide trailing-ones
//! detectors), 3:2 consolidation circuits, quantizers and associative
//! memory entries. Formulas that could yield fractions are guarded by
//! preconditions instead of rounding.

use std::fmt;

use serde::Serialize;

use crate::bitcore::is_power_of_two;
use crate::csa_multiplier::planned_ticks;
use crate::error::{Error, Result};
use crate::flash_adder::{sqrt_power_of_four, DOUBLE_WIDTH_TICKS};

/// Width of the multiplier the hardware estimates are stated for.
pub const ESTIMATE_WIDTH: usize = 64;

/// Ticks charged to a conventional 128-bit adder in the 3:2-only
/// multiplier estimate. Taken as given, not derived.
pub const CONVENTIONAL_128_BIT_ADD_TICKS: u64 = 15;

/// Entries of one 3-bit to 2-bit circuit.
pub const CSA_CIRCUIT_ENTRIES: u64 = 8;

/// Entries of one 4-bit to 3-bit leaf table (two-bit pair addition).
pub const LEAF_TABLE_ENTRIES: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Design {
    Cascade,
    Flash,
    FlashDouble,
    BlockedDouble,
    MultScheduleA,
    MultScheduleB,
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Design::Cascade => "cascade",
            Design::Flash => "flash",
            Design::FlashDouble => "flash_double",
            Design::BlockedDouble => "blocked_double",
            Design::MultScheduleA => "mult_schedule_a",
            Design::MultScheduleB => "mult_schedule_b",
        })
    }
}

/// Multiplier consolidation schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Schedule {
    /// 3:2 circuits only.
    A,
    /// Quantizers while many rows remain, then 3:2 circuits.
    B,
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schedule::A => "A",
            Schedule::B => "B",
        })
    }
}

/// Leaf initialization of a flash adder's half-add wires.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LeafMode {
    /// One XOR/AND pair per bit.
    #[default]
    Bit,
    /// Two-bit lookup tables, halving the `SC_AND` network.
    Pair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub design: Design,
    /// Operand width in bits.
    pub width: usize,
    /// Special AND gates for adders, 3:2 circuits for multipliers.
    pub special_and_gates: u64,
    pub memory_entries: u64,
    pub ticks: u64,
}

/// `k·2^(k-1) - 1` for `N = 2^k`.
pub fn cascade_gates(k: u32) -> u64 {
    assert!(k >= 1, "cascade needs k >= 1");
    u64::from(k) * (1 << (k - 1)) - 1
}

/// `Σ_{l=1}^{k-1} (2^l + 1)·2^(k-l-1)`: one `(2^l+1)`-gate increment unit
/// per merged block pair at each level.
pub fn cascade_gates_by_level(k: u32) -> u64 {
    assert!(k >= 1, "cascade needs k >= 1");
    (1..k).map(|l| ((1u64 << l) + 1) << (k - l - 1)).sum()
}

/// `n(n+1)/2`: one gate per pair `0 <= i < j <= n`.
pub fn flash_gates(n: usize) -> u64 {
    let n = n as u64;
    n * (n + 1) / 2
}

/// Flash network size under the given leaf mode. Pair leaves halve the
/// count, which must then be divisible by 2.
pub fn flash_gates_with_leaf(n: usize, leaf: LeafMode) -> Result<u64> {
    let full = flash_gates(n);
    match leaf {
        LeafMode::Bit => Ok(full),
        LeafMode::Pair if full.is_multiple_of(2) => Ok(full / 2),
        LeafMode::Pair => Err(Error::UnsupportedWidth {
            width: n,
            reason: "pair-leaf gate count n(n+1)/4 is not an integer",
        }),
    }
}

/// `n(n+3)/2` for a `2n`-bit adder: two pair-leaf `n`-bit networks
/// (`2·n(n+1)/4`) plus `n` gates for the cross-carry increment.
pub fn double_width_gates(n: usize) -> u64 {
    let n = n as u64;
    n * (n + 3) / 2
}

/// First and second stage of the blocked `2n`-bit adder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockedGates {
    /// `n√n + n/2`
    pub first_stage: u64,
    /// `n√n - n + √n`
    pub second_stage: u64,
    /// `(2n+1)√n - n/2`
    pub total: u64,
}

pub fn blocked_gates(n: usize) -> Result<BlockedGates> {
    let root = match sqrt_power_of_four(n) {
        Some(r) if n >= 4 => r as u64,
        _ => {
            return Err(Error::UnsupportedWidth {
                width: n,
                reason: "blocked estimate needs n a power of 4, n >= 4",
            })
        }
    };
    let n = n as u64;
    let first_stage = n * root + n / 2;
    let second_stage = n * root - n + root;
    let total = (2 * n + 1) * root - n / 2;
    if first_stage + second_stage != total {
        return Err(Error::fault("blocked stage split does not sum to total"));
    }
    Ok(BlockedGates {
        first_stage,
        second_stage,
        total,
    })
}

/// `⌈log_{3/2}(from / to)⌉`, the fewest 3:2 stages that can shrink
/// `from` rows to `to`. Evaluated exactly as the least `s` with
/// `to·3^s >= from·2^s`.
pub fn consolidation_lower_bound(from_rows: usize, to_rows: usize) -> u32 {
    assert!(
        from_rows >= to_rows && to_rows >= 1,
        "need from_rows >= to_rows >= 1"
    );
    let (mut lhs, mut rhs) = (to_rows as u128, from_rows as u128);
    let mut stages = 0;
    while lhs < rhs {
        lhs *= 3;
        rhs *= 2;
        stages += 1;
    }
    stages
}

/// Consolidation hardware of the 64-bit multiplier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplierHardware {
    pub schedule: Schedule,
    pub quantizer_reuse: bool,
    pub three_to_two_circuits: u64,
    pub three_to_two_entries: u64,
    /// 63-bit to 6-bit quantizers (64 entries each).
    pub wide_quantizers: u64,
    /// 7-bit to 3-bit quantizers (8 entries each); zero with reuse.
    pub narrow_quantizers: u64,
    pub quantizer_entries: u64,
    /// Entries not shared by both schedules: the compared figure.
    pub comparison_entries: u64,
}

/// `Σ_{i=0}^{20} (6i+1)`: first-stage 3:2 circuits under the triangular
/// row arrangement, 21 groups of three rows shrinking by 6 per group.
pub fn first_stage_csa_circuits() -> u64 {
    let groups = (ESTIMATE_WIDTH as u64 - 1) / 3;
    let total: u64 = (0..groups).map(|i| 6 * i + 1).sum();
    debug_assert_eq!(total, groups * (1 + 6 * (groups - 1) + 1) / 2);
    total
}

pub fn multiplier_hardware(
    schedule: Schedule,
    width: usize,
    quantizer_reuse: bool,
) -> Result<MultiplierHardware> {
    if width != ESTIMATE_WIDTH {
        return Err(Error::UnsupportedWidth {
            width,
            reason: "hardware estimates are stated for 64-bit multiplication only",
        });
    }
    let columns = 2 * width as u64;
    let csa_a = first_stage_csa_circuits();
    Ok(match schedule {
        Schedule::A => MultiplierHardware {
            schedule,
            quantizer_reuse,
            three_to_two_circuits: csa_a,
            three_to_two_entries: csa_a * CSA_CIRCUIT_ENTRIES,
            wide_quantizers: 0,
            narrow_quantizers: 0,
            quantizer_entries: 0,
            comparison_entries: (csa_a - columns) * CSA_CIRCUIT_ENTRIES,
        },
        Schedule::B => {
            let wide = columns;
            let narrow = if quantizer_reuse { 0 } else { columns };
            // A quantizer for up to m rows stores one entry per level 0..=m.
            let quantizer_entries = wide * width as u64 + narrow * 8;
            MultiplierHardware {
                schedule,
                quantizer_reuse,
                three_to_two_circuits: columns,
                three_to_two_entries: columns * CSA_CIRCUIT_ENTRIES,
                wide_quantizers: wide,
                narrow_quantizers: narrow,
                quantizer_entries,
                comparison_entries: quantizer_entries,
            }
        }
    })
}

/// End-to-end tick accounting for the 64-bit multiplier.
///
/// `total` is the headline figure. The simulated fields come from the
/// stage plan actually executed by the multiplier, always followed by the
/// 3-tick double-width adder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TickAccounting {
    pub schedule: Schedule,
    pub consolidation_ticks: u64,
    pub final_add_ticks: u64,
    pub total: u64,
    pub simulated_consolidation_ticks: u64,
    pub simulated_total: u64,
}

/// A: lower-bound 9 stages plus a conventional 15-tick add.
/// B: the planned quantizer schedule plus the 3-tick double-width add.
pub fn end_to_end_ticks(schedule: Schedule) -> TickAccounting {
    let simulated = u64::from(planned_ticks(ESTIMATE_WIDTH, schedule));
    let flash_add = u64::from(DOUBLE_WIDTH_TICKS);
    let (consolidation_ticks, final_add_ticks) = match schedule {
        Schedule::A => (
            u64::from(consolidation_lower_bound(ESTIMATE_WIDTH, 2)),
            CONVENTIONAL_128_BIT_ADD_TICKS,
        ),
        Schedule::B => (simulated, flash_add),
    };
    TickAccounting {
        schedule,
        consolidation_ticks,
        final_add_ticks,
        total: consolidation_ticks + final_add_ticks,
        simulated_consolidation_ticks: simulated,
        simulated_total: simulated + flash_add,
    }
}

/// `A / B` end-to-end ticks.
pub fn speedup() -> f64 {
    end_to_end_ticks(Schedule::A).total as f64 / end_to_end_ticks(Schedule::B).total as f64
}

pub fn mult_hardware_estimate(schedule: Schedule, quantizer_reuse: bool) -> Result<CostReport> {
    let hw = multiplier_hardware(schedule, ESTIMATE_WIDTH, quantizer_reuse)?;
    Ok(CostReport {
        design: match schedule {
            Schedule::A => Design::MultScheduleA,
            Schedule::B => Design::MultScheduleB,
        },
        width: ESTIMATE_WIDTH,
        special_and_gates: hw.three_to_two_circuits,
        memory_entries: hw.three_to_two_entries + hw.quantizer_entries,
        ticks: end_to_end_ticks(schedule).total,
    })
}

/// Cost of an adder design at operand `width`. For the double-width
/// designs `width` is the full `2N`.
pub fn adder_cost(design: Design, width: usize) -> Result<CostReport> {
    let unsupported = |reason| Error::UnsupportedWidth { width, reason };
    let (special_and_gates, memory_entries, ticks) = match design {
        Design::Cascade => {
            if width < 2 || !is_power_of_two(width) {
                return Err(unsupported("cascade adder needs a power of two >= 2"));
            }
            let k = width.trailing_zeros();
            (
                cascade_gates(k),
                (width as u64 / 2) * LEAF_TABLE_ENTRIES,
                u64::from(k),
            )
        }
        Design::Flash => {
            if width == 0 {
                return Err(Error::ZeroWidth);
            }
            (flash_gates(width), 0, 2)
        }
        Design::FlashDouble => {
            if width < 2 || !width.is_multiple_of(2) {
                return Err(unsupported("double-width adder needs an even width"));
            }
            let n = width / 2;
            (double_width_gates(n), n as u64 * LEAF_TABLE_ENTRIES, 3)
        }
        Design::BlockedDouble => {
            if !width.is_multiple_of(2) {
                return Err(unsupported("blocked adder needs width 2N"));
            }
            let n = width / 2;
            (blocked_gates(n)?.total, n as u64 * LEAF_TABLE_ENTRIES, 3)
        }
        Design::MultScheduleA | Design::MultScheduleB => {
            return Err(unsupported("use mult_hardware_estimate for multipliers"))
        }
    };
    Ok(CostReport {
        design,
        width,
        special_and_gates,
        memory_entries,
        ticks,
    })
}

/// One line of the reproduction table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub quantity: &'static str,
    pub value: u64,
}

/// The headline figures, in a fixed order.
pub fn reproduction_table() -> Vec<TableRow> {
    let a = multiplier_hardware(Schedule::A, ESTIMATE_WIDTH, true).expect("64-bit estimate");
    let b = multiplier_hardware(Schedule::B, ESTIMATE_WIDTH, true).expect("64-bit estimate");
    let ticks_a = end_to_end_ticks(Schedule::A).total;
    let ticks_b = end_to_end_ticks(Schedule::B).total;
    vec![
        TableRow {
            quantity: "cascade_gates_n128",
            value: cascade_gates(7),
        },
        TableRow {
            quantity: "double_width_gates_n64",
            value: double_width_gates(64),
        },
        TableRow {
            quantity: "blocked_gates_n64",
            value: blocked_gates(64).expect("64 is a power of 4").total,
        },
        TableRow {
            quantity: "schedule_a_csa_circuits",
            value: a.three_to_two_circuits,
        },
        TableRow {
            quantity: "schedule_b_quantizer_entries",
            value: b.quantizer_entries,
        },
        TableRow {
            quantity: "schedule_a_comparison_entries",
            value: a.comparison_entries,
        },
        TableRow {
            quantity: "consolidation_lower_bound_64_to_2",
            value: u64::from(consolidation_lower_bound(64, 2)),
        },
        TableRow {
            quantity: "end_to_end_ticks_a",
            value: ticks_a,
        },
        TableRow {
            quantity: "end_to_end_ticks_b",
            value: ticks_b,
        },
        TableRow {
            quantity: "speedup",
            value: ticks_a / ticks_b,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cascade_examples() {
        assert_eq!(cascade_gates(7), 447);
        assert_eq!(cascade_gates(1), 0);
        assert_eq!(cascade_gates(3), 11);
        assert_eq!(cascade_gates_by_level(3), 11);
        for k in 1..=20 {
            assert_eq!(cascade_gates(k), cascade_gates_by_level(k), "k={}", k);
        }
    }

    #[test]
    fn flash_examples() {
        assert_eq!(flash_gates(1), 1);
        assert_eq!(flash_gates(8), 36);
        assert_eq!(flash_gates(64), 2080);
        assert_eq!(flash_gates_with_leaf(64, LeafMode::Pair), Ok(1040));
        assert!(flash_gates_with_leaf(5, LeafMode::Pair).is_err());
    }

    #[test]
    fn double_width_examples() {
        assert_eq!(double_width_gates(64), 2144);
        assert_eq!(double_width_gates(1), 2);
        assert_eq!(double_width_gates(16), 152);
        for n in [4, 8, 16, 64] {
            assert_eq!(
                double_width_gates(n),
                2 * flash_gates_with_leaf(n, LeafMode::Pair).unwrap() + n as u64
            );
        }
    }

    #[test]
    fn blocked_examples() {
        let g = blocked_gates(64).unwrap();
        assert_eq!((g.total, g.first_stage, g.second_stage), (1000, 544, 456));
        assert_eq!(blocked_gates(4).unwrap().total, 16);
        for bad in [1, 2, 8, 32, 48] {
            assert!(blocked_gates(bad).is_err(), "{}", bad);
        }
        for p in 1..=10 {
            assert!(blocked_gates(1 << (2 * p)).is_ok());
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(consolidation_lower_bound(64, 2), 9);
        assert_eq!(consolidation_lower_bound(3, 2), 1);
        for n in 1..50 {
            assert_eq!(consolidation_lower_bound(n, n), 0);
        }
        // float route for cross-checking away from exact powers
        for from in 2..200usize {
            let exact = consolidation_lower_bound(from, 2);
            let approx = ((from as f64 / 2.0).ln() / 1.5f64.ln()).ceil() as u32;
            if (1.5f64.powi(approx as i32) - from as f64 / 2.0).abs() > 1e-9 {
                assert_eq!(exact, approx, "from={}", from);
            }
        }
    }

    #[test]
    fn multiplier_estimates() {
        let a = multiplier_hardware(Schedule::A, 64, true).unwrap();
        assert_eq!(a.three_to_two_circuits, 1281);
        assert_eq!(a.comparison_entries, 9224);
        let b = multiplier_hardware(Schedule::B, 64, true).unwrap();
        assert_eq!(b.quantizer_entries, 8192);
        assert_eq!(b.three_to_two_circuits, 128);
        let b_no_reuse = multiplier_hardware(Schedule::B, 64, false).unwrap();
        assert_eq!(b_no_reuse.narrow_quantizers, 128);
        assert_eq!(b_no_reuse.quantizer_entries, 8192 + 1024);
        assert!(multiplier_hardware(Schedule::A, 32, true).is_err());

        assert_eq!(end_to_end_ticks(Schedule::A).total, 24);
        assert_eq!(end_to_end_ticks(Schedule::A).simulated_total, 13);
        assert_eq!(end_to_end_ticks(Schedule::B).simulated_total, 8);
        assert_eq!(end_to_end_ticks(Schedule::B).total, 8);
        assert_eq!(speedup(), 3.0);

        let r = mult_hardware_estimate(Schedule::A, true).unwrap();
        assert_eq!((r.special_and_gates, r.ticks), (1281, 24));
    }

    #[test]
    fn adder_costs() {
        let c = adder_cost(Design::Cascade, 128).unwrap();
        assert_eq!((c.special_and_gates, c.ticks), (447, 7));
        assert_eq!(
            adder_cost(Design::FlashDouble, 128)
                .unwrap()
                .special_and_gates,
            2144
        );
        assert_eq!(
            adder_cost(Design::BlockedDouble, 128)
                .unwrap()
                .special_and_gates,
            1000
        );
        assert_eq!(adder_cost(Design::Flash, 8).unwrap().special_and_gates, 36);
        assert!(adder_cost(Design::Cascade, 12).is_err());
        assert!(adder_cost(Design::BlockedDouble, 64).is_err());
    }

    #[test]
    fn table_values() {
        let values: Vec<u64> = reproduction_table().iter().map(|r| r.value).collect();
        assert_eq!(values, [447, 2144, 1000, 1281, 8192, 9224, 9, 24, 8, 3]);
    }
}
