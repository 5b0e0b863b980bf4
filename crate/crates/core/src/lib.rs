//! Gate-level models of two parallel binary adders and a carry-save /
//! quantizer multiplier, with a big-integer oracle and closed-form cost
//! formulas.
//!
//! * [`bitcore`]: LSB-first bit vectors and the oracle arithmetic.
//! * [`cascade_adder`]: the `k`-level merge-style adder (`k = log2 N` ticks).
//! * [`flash_adder`]: the two-tick half-add / `SC_AND` adder and its
//!   double-width and blocked compositions.
//! * [`csa_multiplier`]: partial products, 3:2 and quantizer consolidation
//!   stages and the two published schedules.
//! * [`cost_model`]: gate counts, memory entries and tick totals.
//! * [`cli`]: the `paradd` command-line front end.

pub mod bitcore;
pub mod cascade_adder;
pub mod cli;
pub mod cost_model;
pub mod csa_multiplier;
mod error;
pub mod flash_adder;

pub use bitcore::{BitVector, WideValue};
pub use error::{Error, Result};
