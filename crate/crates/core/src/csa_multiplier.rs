//! Multiplication by row consolidation.
//!
//! The `N` shifted partial products of an `N`-bit multiplication are held as
//! `2N`-bit rows. Consolidation stages shrink the row count while keeping
//! the row total fixed:
//!
//! * a 3:2 stage compresses each triple of rows into a sum row and a
//!   left-shifted carry row (one tick);
//! * a quantizer stage counts the ones in every column of `m` rows and
//!   writes bit `q` of each count into row `q`, shifted by `q`, giving
//!   `⌊log2 m⌋ + 1` rows (two ticks).
//!
//! The last two rows are added by the double-width flash adder.

use std::fmt;

use serde::Serialize;

use crate::bitcore::{is_power_of_two, BitVector, WideValue};
use crate::cost_model::Schedule;
use crate::error::{Error, Result};
use crate::flash_adder::double_width_add_split;

pub const CSA_TICKS: u32 = 1;
pub const QUANTIZER_TICKS: u32 = 2;

/// Below this many rows schedule B switches from quantizers to 3:2 stages.
pub const QUANTIZER_MIN_ROWS: usize = 6;

/// Rows of equal width awaiting summation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSet {
    width: usize,
    rows: Vec<BitVector>,
}

impl RowSet {
    pub fn new(width: usize, rows: Vec<BitVector>) -> Result<Self> {
        if width == 0 {
            return Err(Error::ZeroWidth);
        }
        if let Some(r) = rows.iter().find(|r| r.width() != width) {
            return Err(Error::WidthMismatch {
                left: width,
                right: r.width(),
            });
        }
        Ok(RowSet { width, rows })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Σ of row values.
    pub fn total(&self) -> WideValue {
        self.rows.iter().map(BitVector::to_value).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageKind {
    Csa32,
    Quantizer,
}

impl fmt::Display for StageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StageKind::Csa32 => "csa_3_2",
            StageKind::Quantizer => "quantizer",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub kind: StageKind,
    pub rows_in: usize,
    pub rows_out: usize,
    pub left_out: usize,
    pub ticks: u32,
    /// 3:2 circuits (one per column per triple) or quantizers (one per
    /// column).
    pub circuits_used: usize,
}

impl StageRecord {
    /// Checks the row-count law for this stage kind.
    pub fn check(&self) -> Result<()> {
        let expected = match self.kind {
            StageKind::Csa32 => (self.rows_in - self.rows_in / 3, CSA_TICKS),
            StageKind::Quantizer => (
                quantizer_outputs(self.rows_in - self.left_out) + self.left_out,
                QUANTIZER_TICKS,
            ),
        };
        if (self.rows_out, self.ticks) != expected {
            return Err(Error::fault(format!(
                "{} stage {} -> {} in {} ticks breaks its row-count law",
                self.kind, self.rows_in, self.rows_out, self.ticks
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleReport {
    pub schedule: Schedule,
    pub stages: Vec<StageRecord>,
    pub row_trajectory: Vec<usize>,
    pub total_ticks: u32,
}

/// `⌊log2 m⌋ + 1` for `m >= 1`: the bits needed for a column count.
fn quantizer_outputs(m: usize) -> usize {
    (usize::BITS - m.leading_zeros()) as usize
}

/// One row per multiplier bit: `a << i` when `b_i = 1`, a zero row
/// otherwise, all `2N` bits wide.
pub fn partial_products(a: &BitVector, b: &BitVector) -> Result<RowSet> {
    if a.width() != b.width() {
        return Err(Error::WidthMismatch {
            left: a.width(),
            right: b.width(),
        });
    }
    let n = a.width();
    let rows = (0..n)
        .map(|i| {
            let mut bits = vec![false; 2 * n];
            if b.bit(i) {
                bits[i..i + n].copy_from_slice(a.bits());
            }
            BitVector::from_bits(bits)
        })
        .collect::<Result<_>>()?;
    RowSet::new(2 * n, rows)
}

/// A row of full adders: `sum = r1 ⊕ r2 ⊕ r3`, `carry = maj(r1, r2, r3) << 1`.
pub fn csa_3_2(r1: &BitVector, r2: &BitVector, r3: &BitVector) -> Result<(BitVector, BitVector)> {
    let w = r1.width();
    for r in [r2, r3] {
        if r.width() != w {
            return Err(Error::WidthMismatch {
                left: w,
                right: r.width(),
            });
        }
    }
    let mut sum = Vec::with_capacity(w);
    let mut carry = vec![false; w];
    for p in 0..w {
        let (x, y, z) = (r1.bit(p), r2.bit(p), r3.bit(p));
        sum.push(x ^ y ^ z);
        let maj = (x & y) | (x & z) | (y & z);
        if maj {
            if p + 1 == w {
                return Err(Error::OutOfRange { width: w });
            }
            carry[p + 1] = true;
        }
    }
    Ok((BitVector::from_bits(sum)?, BitVector::from_bits(carry)?))
}

fn check_total(before: &WideValue, after: &RowSet, what: &str) -> Result<()> {
    let total = after.total();
    if &total != before {
        return Err(Error::fault(format!(
            "{} changed the row total from {} to {}",
            what, before, total
        )));
    }
    Ok(())
}

/// One 3:2 tick: triples taken first to last, the `n mod 3` trailing rows
/// passed through.
pub fn csa_stage(rows: &RowSet) -> Result<(RowSet, StageRecord)> {
    let n = rows.len();
    if n < 3 {
        return Err(Error::TooFewRows {
            what: "3:2 stage",
            needed: 3,
            got: n,
        });
    }
    let before = rows.total();
    let triples = n / 3;
    let mut out = Vec::with_capacity(n - triples);
    for t in rows.rows.chunks_exact(3) {
        let (s, c) = csa_3_2(&t[0], &t[1], &t[2])?;
        out.push(s);
        out.push(c);
    }
    out.extend_from_slice(&rows.rows[3 * triples..]);
    let next = RowSet::new(rows.width, out)?;
    check_total(&before, &next, "3:2 stage")?;
    let record = StageRecord {
        kind: StageKind::Csa32,
        rows_in: n,
        rows_out: next.len(),
        left_out: n % 3,
        ticks: CSA_TICKS,
        circuits_used: triples * rows.width,
    };
    record.check()?;
    Ok((next, record))
}

/// Column-count consolidation of every row in `rows` by quantizers of
/// capacity `capacity`. Produces `⌊log2 m⌋ + 1` rows for `m` input rows.
pub fn quantize_columns(rows: &RowSet, capacity: usize) -> Result<(RowSet, StageRecord)> {
    if capacity < 3 {
        return Err(Error::InvalidCapacity(capacity));
    }
    let m = rows.len();
    if m > capacity {
        return Err(Error::CapacityExceeded { rows: m, capacity });
    }
    if m == 0 {
        return Err(Error::TooFewRows {
            what: "quantizer stage",
            needed: 1,
            got: 0,
        });
    }
    let w = rows.width;
    let planes = quantizer_outputs(m);
    let mut out = vec![vec![false; w]; planes];
    for p in 0..w {
        let count = rows.rows.iter().filter(|r| r.bit(p)).count();
        if count > capacity {
            return Err(Error::fault(format!(
                "column {} holds {} ones, above capacity {}",
                p, count, capacity
            )));
        }
        for (q, plane) in out.iter_mut().enumerate() {
            if count >> q & 1 == 1 {
                if p + q >= w {
                    return Err(Error::OutOfRange { width: w });
                }
                plane[p + q] = true;
            }
        }
    }
    let next = RowSet::new(
        w,
        out.into_iter()
            .map(BitVector::from_bits)
            .collect::<Result<_>>()?,
    )?;
    let record = StageRecord {
        kind: StageKind::Quantizer,
        rows_in: m,
        rows_out: planes,
        left_out: 0,
        ticks: QUANTIZER_TICKS,
        circuits_used: w,
    };
    Ok((next, record))
}

/// Quantizes the first `consume` rows and appends the rest unchanged.
pub fn quantizer_stage(rows: &RowSet, consume: usize) -> Result<(RowSet, StageRecord)> {
    let n = rows.len();
    if consume > n {
        return Err(Error::TooFewRows {
            what: "quantizer stage",
            needed: consume,
            got: n,
        });
    }
    let before = rows.total();
    let head = RowSet::new(rows.width, rows.rows[..consume].to_vec())?;
    let (mut next, mut record) = quantize_columns(&head, consume)?;
    next.rows.extend_from_slice(&rows.rows[consume..]);
    check_total(&before, &next, "quantizer stage")?;
    record.rows_in = n;
    record.left_out = n - consume;
    record.rows_out = next.len();
    record.check()?;
    Ok((next, record))
}

/// A stage decided from the row count alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlannedStage {
    Csa,
    /// Quantize this many leading rows.
    Quantize(usize),
}

/// Rows a schedule B quantizer should consume out of `n`: the `m` giving
/// the fewest rows afterwards, preferring the smaller `m` on ties (63 of
/// 64, leaving one out).
fn best_quantizer_take(n: usize) -> usize {
    (3..=n)
        .min_by_key(|&m| (quantizer_outputs(m) + n - m, m))
        .expect("n >= 3")
}

/// Stage sequence taking `rows` rows down to two.
pub fn plan_schedule(rows: usize, schedule: Schedule) -> Vec<PlannedStage> {
    let mut n = rows;
    let mut plan = Vec::new();
    while n > 2 {
        if schedule == Schedule::B && n >= QUANTIZER_MIN_ROWS {
            let m = best_quantizer_take(n);
            plan.push(PlannedStage::Quantize(m));
            n = quantizer_outputs(m) + n - m;
        } else {
            plan.push(PlannedStage::Csa);
            n -= n / 3;
        }
    }
    plan
}

/// Ticks a schedule spends consolidating `rows` rows.
pub fn planned_ticks(rows: usize, schedule: Schedule) -> u32 {
    plan_schedule(rows, schedule)
        .iter()
        .map(|s| match s {
            PlannedStage::Csa => CSA_TICKS,
            PlannedStage::Quantize(_) => QUANTIZER_TICKS,
        })
        .sum()
}

/// Runs a schedule to two rows (zero rows are added if fewer than two
/// are given). Every stage is checked for sum preservation.
pub fn run_schedule(rows: &RowSet, schedule: Schedule) -> Result<(RowSet, ScheduleReport)> {
    let mut current = rows.clone();
    while current.len() < 2 {
        current.rows.push(BitVector::zeros(current.width)?);
    }
    let mut report = ScheduleReport {
        schedule,
        stages: Vec::new(),
        row_trajectory: vec![current.len()],
        total_ticks: 0,
    };
    for stage in plan_schedule(current.len(), schedule) {
        let (next, record) = match stage {
            PlannedStage::Csa => csa_stage(&current)?,
            PlannedStage::Quantize(m) => quantizer_stage(&current, m)?,
        };
        report.total_ticks += record.ticks;
        report.row_trajectory.push(record.rows_out);
        report.stages.push(record);
        current = next;
    }
    Ok((current, report))
}

pub fn run_schedule_a(rows: &RowSet) -> Result<(RowSet, ScheduleReport)> {
    run_schedule(rows, Schedule::A)
}

pub fn run_schedule_b(rows: &RowSet) -> Result<(RowSet, ScheduleReport)> {
    run_schedule(rows, Schedule::B)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    /// `2N` bits.
    pub product: BitVector,
    /// Consolidation ticks plus the final double-width addition.
    pub ticks: u32,
    pub report: ScheduleReport,
}

/// Full pipeline: partial products, consolidation, final 3-tick addition.
pub fn multiply(a: &BitVector, b: &BitVector, schedule: Schedule) -> Result<Product> {
    let n = a.width();
    if n < 2 || !is_power_of_two(n) {
        return Err(Error::UnsupportedWidth {
            width: n,
            reason: "multiplier needs a power-of-two width >= 2",
        });
    }
    let rows = partial_products(a, b)?;
    let (last, report) = run_schedule(&rows, schedule)?;
    let sum = double_width_add_split(&last.rows[0], &last.rows[1])?;
    let product = sum
        .value
        .resize(2 * n)
        .map_err(|_| Error::fault("product overflowed 2N bits"))?;
    Ok(Product {
        product,
        ticks: report.total_ticks + sum.ticks,
        report,
    })
}
