//! The `paradd` command line.
//!
//! Every command produces a [`Report`]: an ordered list of records. In
//! structured mode each record is one JSON object per line with a fixed
//! field order; in text mode it is `name key=value ...`. Exit status is 0
//! when every check passed, 1 on a check failure and 2 on a usage error.
//!
//! Random sweeps draw operands from `ChaCha8Rng::seed_from_u64(seed)`.
//! Each trial draws `a` then `b`, each as `⌈width/64⌉` calls to
//! `next_u64` assembled little-endian and truncated to `width` bits.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::bitcore::{oracle_add, oracle_mul, BitVector, WideValue};
use crate::cascade_adder::cascade_add;
use crate::cost_model::{
    self, adder_cost, end_to_end_ticks, multiplier_hardware, reproduction_table, Design, Schedule,
};
use crate::csa_multiplier::{multiply, partial_products, run_schedule};
use crate::error::Error;
use crate::flash_adder::{blocked_add, double_width_add_split, flash_add, sqrt_power_of_four};

pub const GENERATOR: &str = "ChaCha8Rng/seed_from_u64";
pub const FORMAT_ENV: &str = "PARADD_FORMAT";

/// Widths up to this many bits are verified exhaustively for adders.
pub const EXHAUSTIVE_ADDER_WIDTH: usize = 8;
/// Widths up to this many bits are verified exhaustively for the multiplier.
pub const EXHAUSTIVE_MULT_WIDTH: usize = 4;

#[derive(Debug, Parser)]
#[command(
    name = "paradd",
    version,
    about = "Parallel adder and multiplier simulator"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, env = FORMAT_ENV, default_value = "text")]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignArg {
    Cascade,
    Flash,
    #[value(alias = "flash_double")]
    FlashDouble,
    #[value(alias = "blocked_double")]
    Blocked,
    #[value(alias = "multiplier")]
    Mult,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<ScheduleArg> for Schedule {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::A => Schedule::A,
            ScheduleArg::B => Schedule::B,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Add two hex operands.
    Add(AddArgs),
    /// Multiply two hex operands.
    Mul(MulArgs),
    /// Check a design against the oracle.
    Verify(VerifyArgs),
    /// Print gate, memory-entry and tick estimates.
    Cost(CostArgs),
    /// Run a consolidation schedule and print its trajectory.
    Schedule(ScheduleArgs),
}

#[derive(Debug, Args)]
pub struct AddArgs {
    #[arg(long, value_enum, default_value = "flash")]
    pub design: DesignArg,
    /// Operand width in bits (the full 2N for double-width designs).
    #[arg(long, default_value_t = 64)]
    pub width: usize,
    /// Include the level trace (cascade) or fire set (flash).
    #[arg(long)]
    pub trace: bool,
    pub a: String,
    pub b: String,
}

#[derive(Debug, Args)]
pub struct MulArgs {
    #[arg(long, default_value_t = 64)]
    pub width: usize,
    #[arg(long, value_enum, default_value = "B")]
    pub schedule: ScheduleArg,
    pub a: String,
    pub b: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "flash")]
    pub design: DesignArg,
    #[arg(long, default_value_t = 8)]
    pub width: usize,
    #[arg(long, value_enum, default_value = "B")]
    pub schedule: ScheduleArg,
    /// Random trials when the width is too large for an exhaustive sweep.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// Print the headline reproduction table.
    #[arg(long)]
    pub table: bool,
    #[arg(long, value_enum)]
    pub design: Option<DesignArg>,
    #[arg(long, default_value_t = 64)]
    pub width: usize,
    #[arg(long, value_enum, default_value = "B")]
    pub schedule: ScheduleArg,
    /// Do not reuse the first-stage quantizers in the second stage.
    #[arg(long)]
    pub no_reuse: bool,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long, value_enum, default_value = "A")]
    pub schedule: ScheduleArg,
    /// Multiplier width; the schedule starts from this many rows.
    #[arg(long, default_value_t = 64)]
    pub width: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Add,
    Mul,
    Verify,
    Cost,
    Schedule,
}

/// Resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub design: Option<DesignArg>,
    pub width: usize,
    pub schedule: Schedule,
    pub trials: u64,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub trace: bool,
    pub table: bool,
    pub quantizer_reuse: bool,
}

impl RunConfig {
    fn base(command: CommandKind, format: OutputFormat) -> Self {
        RunConfig {
            command,
            design: None,
            width: 64,
            schedule: Schedule::B,
            trials: 1,
            seed: 0,
            output_format: format,
            trace: false,
            table: false,
            quantizer_reuse: true,
        }
    }
}

/// Ordered output records plus the overall verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub records: Vec<(String, Value)>,
    pub passed: bool,
}

impl Report {
    fn new() -> Self {
        Report {
            records: Vec::new(),
            passed: true,
        }
    }

    fn push(&mut self, name: &str, record: impl Serialize) {
        let value = serde_json::to_value(record).expect("records serialize");
        self.records.push((name.to_string(), value));
    }

    /// Process exit status: 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        for (name, value) in &self.records {
            match format {
                OutputFormat::Structured => {
                    let mut obj = serde_json::Map::new();
                    obj.insert("record".into(), Value::String(name.clone()));
                    if let Value::Object(fields) = value {
                        obj.extend(fields.clone());
                    } else {
                        obj.insert("value".into(), value.clone());
                    }
                    out.push_str(&Value::Object(obj).to_string());
                }
                OutputFormat::Text => {
                    out.push_str(name);
                    if let Value::Object(fields) = value {
                        for (k, v) in fields {
                            out.push(' ');
                            out.push_str(k);
                            out.push('=');
                            match v {
                                Value::String(s) => out.push_str(s),
                                other => out.push_str(&other.to_string()),
                            }
                        }
                    } else {
                        out.push(' ');
                        out.push_str(&value.to_string());
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize)]
struct AddRecord<'a> {
    design: DesignArg,
    width: usize,
    a: &'a str,
    b: &'a str,
    sum: String,
    carry: u8,
    value: String,
    ticks: u32,
}

fn parse_operand(text: &str, width: usize) -> Result<BitVector, Error> {
    BitVector::from_hex(text, width)
}

fn blocked_block_size(width: usize) -> Result<usize, Error> {
    sqrt_power_of_four(width / 2)
        .filter(|_| width.is_multiple_of(2) && width >= 8)
        .ok_or(Error::UnsupportedWidth {
            width,
            reason: "blocked addition needs width 2N with N a power of 4 (N >= 4)",
        })
}

pub fn cmd_add(config: &RunConfig, a_hex: &str, b_hex: &str) -> Result<Report, Error> {
    let w = config.width;
    let a = parse_operand(a_hex, w)?;
    let b = parse_operand(b_hex, w)?;
    let (a_hex, b_hex) = (&*a.to_hex(), &*b.to_hex());
    let design = config.design.unwrap_or(DesignArg::Flash);
    let mut report = Report::new();
    let top_bit = |v: &BitVector| u8::from(v.bit(v.width() - 1));
    match design {
        DesignArg::Cascade => {
            let (s, trace) = cascade_add(&a, &b)?;
            report.push(
                "add",
                AddRecord {
                    design,
                    width: w,
                    a: a_hex,
                    b: b_hex,
                    sum: s.sum.to_hex(),
                    carry: u8::from(s.carry),
                    value: s.value().to_hex(),
                    ticks: s.ticks,
                },
            );
            if config.trace {
                for level in trace.records() {
                    report.push("level", level);
                }
            }
        }
        DesignArg::Flash => {
            let r = flash_add(&a, &b)?;
            report.push(
                "add",
                AddRecord {
                    design,
                    width: w,
                    a: a_hex,
                    b: b_hex,
                    sum: r.sum.to_hex(),
                    carry: top_bit(&r.sum),
                    value: r.sum.to_hex(),
                    ticks: r.ticks,
                },
            );
            if config.trace {
                report.push(
                    "fire_set",
                    serde_json::json!({
                        "gates_evaluated": r.fires.gates_evaluated,
                        "firings": r.fires.pairs(),
                    }),
                );
            }
        }
        DesignArg::FlashDouble => {
            let r = double_width_add_split(&a, &b)?;
            report.push(
                "add",
                AddRecord {
                    design,
                    width: w,
                    a: a_hex,
                    b: b_hex,
                    sum: r.value.to_hex(),
                    carry: top_bit(&r.value),
                    value: r.value.to_hex(),
                    ticks: r.ticks,
                },
            );
        }
        DesignArg::Blocked => {
            let r = blocked_add(&a, &b, blocked_block_size(w)?)?;
            report.push(
                "add",
                AddRecord {
                    design,
                    width: w,
                    a: a_hex,
                    b: b_hex,
                    sum: r.sum.to_hex(),
                    carry: top_bit(&r.sum),
                    value: r.sum.to_hex(),
                    ticks: r.ticks,
                },
            );
            if config.trace {
                report.push(
                    "second_stage",
                    serde_json::json!({
                        "first_stage_gates": r.first_stage_gates,
                        "second_stage_gates": r.second_stage_gates,
                        "firings": r.second_stage_firings,
                    }),
                );
            }
        }
        DesignArg::Mult => {
            return Err(Error::UnsupportedWidth {
                width: w,
                reason: "use the mul command for the multiplier",
            })
        }
    }
    Ok(report)
}

pub fn cmd_mul(config: &RunConfig, a_hex: &str, b_hex: &str) -> Result<Report, Error> {
    let a = parse_operand(a_hex, config.width)?;
    let b = parse_operand(b_hex, config.width)?;
    let (a_hex, b_hex) = (&*a.to_hex(), &*b.to_hex());
    let p = multiply(&a, &b, config.schedule)?;
    let mut report = Report::new();
    report.push(
        "mul",
        serde_json::json!({
            "width": config.width,
            "schedule": config.schedule,
            "a": a_hex,
            "b": b_hex,
            "product": p.product.to_hex(),
            "ticks": p.ticks,
        }),
    );
    report.push("schedule", &p.report);
    Ok(report)
}

#[derive(Serialize)]
struct VerifyHeader {
    design: DesignArg,
    width: usize,
    schedule: Option<Schedule>,
    mode: &'static str,
    generator: Option<&'static str>,
    seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
struct Counterexample {
    trial: u64,
    a: String,
    b: String,
    expected: String,
    got: String,
}

#[derive(Serialize)]
struct VerifySummary {
    trials: u64,
    passed: u64,
    failed: u64,
    first_counterexample: Option<Counterexample>,
}

/// `width` random bits from the sweep generator.
pub fn random_operand(rng: &mut ChaCha8Rng, width: usize) -> BitVector {
    let mut bits = Vec::with_capacity(width.div_ceil(64) * 64);
    for _ in 0..width.div_ceil(64) {
        let word = rng.next_u64();
        bits.extend((0..64).map(|j| word >> j & 1 == 1));
    }
    bits.truncate(width);
    BitVector::from_bits(bits).expect("positive width")
}

/// Checks one operand pair; `Err` carries what the design produced.
type Checker = Box<dyn Fn(&BitVector, &BitVector) -> Result<(), String>>;

fn checker(design: DesignArg, width: usize, schedule: Schedule) -> Result<Checker, Error> {
    let expect_add = |a: &BitVector, b: &BitVector| oracle_add(&a.to_value(), &b.to_value());
    let compare = |expected: WideValue, got: Result<WideValue, Error>| match got {
        Ok(v) if v == expected => Ok(()),
        Ok(v) => Err(v.to_hex()),
        Err(e) => Err(e.to_string()),
    };
    // Probe once so configuration errors surface as usage errors.
    let zero = BitVector::zeros(width)?;
    Ok(match design {
        DesignArg::Cascade => {
            cascade_add(&zero, &zero)?;
            Box::new(move |a, b| {
                compare(expect_add(a, b), cascade_add(a, b).map(|(s, _)| s.value()))
            })
        }
        DesignArg::Flash => Box::new(move |a, b| {
            compare(expect_add(a, b), flash_add(a, b).map(|r| r.sum.to_value()))
        }),
        DesignArg::FlashDouble => {
            double_width_add_split(&zero, &zero)?;
            Box::new(move |a, b| {
                compare(
                    expect_add(a, b),
                    double_width_add_split(a, b).map(|r| r.value.to_value()),
                )
            })
        }
        DesignArg::Blocked => {
            let block = blocked_block_size(width)?;
            blocked_add(&zero, &zero, block)?;
            Box::new(move |a, b| {
                compare(
                    expect_add(a, b),
                    blocked_add(a, b, block).map(|r| r.sum.to_value()),
                )
            })
        }
        DesignArg::Mult => {
            multiply(&zero, &zero, schedule)?;
            Box::new(move |a, b| {
                compare(
                    oracle_mul(&a.to_value(), &b.to_value()),
                    multiply(a, b, schedule).map(|p| p.product.to_value()),
                )
            })
        }
    })
}

pub fn cmd_verify(config: &RunConfig) -> Result<Report, Error> {
    let design = config.design.unwrap_or(DesignArg::Flash);
    let w = config.width;
    let check = checker(design, w, config.schedule)?;
    let limit = if design == DesignArg::Mult {
        EXHAUSTIVE_MULT_WIDTH
    } else {
        EXHAUSTIVE_ADDER_WIDTH
    };
    let exhaustive = w <= limit;

    let mut summary = VerifySummary {
        trials: 0,
        passed: 0,
        failed: 0,
        first_counterexample: None,
    };
    let mut run = |trial: u64, a: &BitVector, b: &BitVector| {
        summary.trials += 1;
        match check(a, b) {
            Ok(()) => summary.passed += 1,
            Err(got) => {
                summary.failed += 1;
                if summary.first_counterexample.is_none() {
                    let expected = if design == DesignArg::Mult {
                        oracle_mul(&a.to_value(), &b.to_value())
                    } else {
                        oracle_add(&a.to_value(), &b.to_value())
                    };
                    summary.first_counterexample = Some(Counterexample {
                        trial,
                        a: a.to_hex(),
                        b: b.to_hex(),
                        expected: expected.to_hex(),
                        got,
                    });
                }
            }
        }
    };
    if exhaustive {
        let max = 1u64 << w;
        for x in 0..max {
            let a = BitVector::from_u128(u128::from(x), w)?;
            for y in 0..max {
                let b = BitVector::from_u128(u128::from(y), w)?;
                run(x * max + y, &a, &b);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for trial in 0..config.trials {
            let a = random_operand(&mut rng, w);
            let b = random_operand(&mut rng, w);
            run(trial, &a, &b);
        }
    }

    let mut report = Report::new();
    report.push(
        "verify",
        VerifyHeader {
            design,
            width: w,
            schedule: (design == DesignArg::Mult).then_some(config.schedule),
            mode: if exhaustive { "exhaustive" } else { "random" },
            generator: (!exhaustive).then_some(GENERATOR),
            seed: (!exhaustive).then_some(config.seed),
        },
    );
    report.passed = summary.failed == 0;
    report.push("result", summary);
    Ok(report)
}

pub fn cmd_cost(config: &RunConfig) -> Result<Report, Error> {
    let mut report = Report::new();
    let design = match config.design {
        Some(d) if !config.table => d,
        _ => {
            for row in reproduction_table() {
                report.push("table", row);
            }
            return Ok(report);
        }
    };
    let w = config.width;
    match design {
        DesignArg::Mult => {
            let hw = multiplier_hardware(config.schedule, w, config.quantizer_reuse)?;
            report.push(
                "cost",
                cost_model::mult_hardware_estimate(config.schedule, config.quantizer_reuse)?,
            );
            report.push("hardware", hw);
            report.push("ticks", end_to_end_ticks(config.schedule));
        }
        other => {
            let d = match other {
                DesignArg::Cascade => Design::Cascade,
                DesignArg::Flash => Design::Flash,
                DesignArg::FlashDouble => Design::FlashDouble,
                _ => Design::BlockedDouble,
            };
            report.push("cost", adder_cost(d, w)?);
            if d == Design::BlockedDouble {
                report.push("blocked_split", cost_model::blocked_gates(w / 2)?);
            }
        }
    }
    Ok(report)
}

pub fn cmd_schedule(config: &RunConfig) -> Result<Report, Error> {
    let w = config.width;
    let ones = BitVector::ones(w)?;
    let rows = partial_products(&ones, &ones)?;
    let (_, schedule_report) = run_schedule(&rows, config.schedule)?;
    let mut report = Report::new();
    report.push("schedule", schedule_report);
    Ok(report)
}

/// Resolves parsed arguments into a [`RunConfig`] and runs the command.
pub fn run(cli: &Cli) -> Result<(RunConfig, Report), Error> {
    let fmt = cli.format;
    let (config, report) = match &cli.command {
        Command::Add(args) => {
            let config = RunConfig {
                design: Some(args.design),
                width: args.width,
                trace: args.trace,
                ..RunConfig::base(CommandKind::Add, fmt)
            };
            let report = cmd_add(&config, &args.a, &args.b)?;
            (config, report)
        }
        Command::Mul(args) => {
            let config = RunConfig {
                design: Some(DesignArg::Mult),
                width: args.width,
                schedule: args.schedule.into(),
                ..RunConfig::base(CommandKind::Mul, fmt)
            };
            let report = cmd_mul(&config, &args.a, &args.b)?;
            (config, report)
        }
        Command::Verify(args) => {
            let config = RunConfig {
                design: Some(args.design),
                width: args.width,
                schedule: args.schedule.into(),
                trials: args.trials,
                seed: args.seed,
                ..RunConfig::base(CommandKind::Verify, fmt)
            };
            let report = cmd_verify(&config)?;
            (config, report)
        }
        Command::Cost(args) => {
            let config = RunConfig {
                design: args.design,
                width: args.width,
                schedule: args.schedule.into(),
                table: args.table,
                quantizer_reuse: !args.no_reuse,
                ..RunConfig::base(CommandKind::Cost, fmt)
            };
            let report = cmd_cost(&config)?;
            (config, report)
        }
        Command::Schedule(args) => {
            let config = RunConfig {
                width: args.width,
                schedule: args.schedule.into(),
                ..RunConfig::base(CommandKind::Schedule, fmt)
            };
            let report = cmd_schedule(&config)?;
            (config, report)
        }
    };
    Ok((config, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("paradd").chain(args.iter().copied())).unwrap()
    }

    fn field<'a>(report: &'a Report, record: &str, key: &str) -> &'a Value {
        let (_, v) = report
            .records
            .iter()
            .find(|(n, _)| n == record)
            .unwrap_or_else(|| panic!("no {} record", record));
        &v[key]
    }

    #[test]
    fn add_flash() {
        let (_, r) = run(&parse(&[
            "add", "--design", "flash", "--width", "8", "ff", "01",
        ]))
        .unwrap();
        assert_eq!(field(&r, "add", "sum"), "100");
        assert_eq!(field(&r, "add", "ticks"), 2);
    }

    #[test]
    fn add_cascade_with_trace() {
        let cli = parse(&[
            "add", "--design", "cascade", "--width", "4", "--trace", "b", "6",
        ]);
        let (_, r) = run(&cli).unwrap();
        assert_eq!(field(&r, "add", "sum"), "1");
        assert_eq!(field(&r, "add", "carry"), 1);
        assert_eq!(field(&r, "add", "value"), "11");
        assert_eq!(field(&r, "add", "ticks"), 2);
        assert_eq!(r.records.iter().filter(|(n, _)| n == "level").count(), 2);
    }

    #[test]
    fn add_zero_default_design() {
        let (_, r) = run(&parse(&["add", "0", "0"])).unwrap();
        assert_eq!(field(&r, "add", "sum"), "0");
    }

    #[test]
    fn add_errors() {
        assert!(matches!(
            run(&parse(&["add", "--width", "4", "1f", "0"])),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            run(&parse(&[
                "add", "--design", "cascade", "--width", "6", "1", "0"
            ])),
            Err(Error::UnsupportedWidth { .. })
        ));
        assert!(matches!(
            run(&parse(&[
                "add", "--design", "blocked", "--width", "64", "1", "0"
            ])),
            Err(Error::UnsupportedWidth { .. })
        ));
        assert!(matches!(
            run(&parse(&["add", "zz", "0"])),
            Err(Error::MalformedHex(_))
        ));
    }

    #[test]
    fn structured_rendering_keeps_field_order() {
        let (_, r) = run(&parse(&["add", "--width", "8", "ff", "01"])).unwrap();
        let line = r.render(OutputFormat::Structured);
        assert_eq!(
            line,
            "{\"record\":\"add\",\"design\":\"flash\",\"width\":8,\"a\":\"ff\",\"b\":\"1\",\
             \"sum\":\"100\",\"carry\":1,\"value\":\"100\",\"ticks\":2}\n"
        );
        assert_eq!(
            r.render(OutputFormat::Text),
            "add design=flash width=8 a=ff b=1 sum=100 carry=1 value=100 ticks=2\n"
        );
    }

    #[test]
    fn verify_small_random_is_deterministic() {
        let cli = parse(&[
            "verify", "--design", "cascade", "--width", "64", "--trials", "200", "--seed", "7",
        ]);
        let (_, r1) = run(&cli).unwrap();
        let (_, r2) = run(&cli).unwrap();
        assert!(r1.passed);
        assert_eq!(field(&r1, "result", "passed"), 200);
        assert_eq!(
            r1.render(OutputFormat::Structured),
            r2.render(OutputFormat::Structured)
        );
        assert_eq!(field(&r1, "verify", "generator"), GENERATOR);
    }

    #[test]
    fn verify_mult_exhaustive() {
        let (_, r) = run(&parse(&[
            "verify",
            "--design",
            "mult",
            "--schedule",
            "B",
            "--width",
            "4",
        ]))
        .unwrap();
        assert_eq!(field(&r, "verify", "mode"), "exhaustive");
        assert_eq!(field(&r, "result", "passed"), 256);
        assert_eq!(field(&r, "result", "failed"), 0);
    }

    #[test]
    fn random_operands_respect_width() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for w in [1, 5, 64, 65, 128] {
            assert_eq!(random_operand(&mut rng, w).width(), w);
        }
    }

    #[test]
    fn cost_and_schedule() {
        let (_, r) = run(&parse(&["cost", "--table"])).unwrap();
        let values: Vec<u64> = r
            .records
            .iter()
            .map(|(_, v)| v["value"].as_u64().unwrap())
            .collect();
        assert_eq!(values, [447, 2144, 1000, 1281, 8192, 9224, 9, 24, 8, 3]);

        let (_, r) = run(&parse(&["cost", "--design", "blocked", "--width", "128"])).unwrap();
        assert_eq!(field(&r, "cost", "special_and_gates"), 1000);
        assert_eq!(field(&r, "blocked_split", "first_stage"), 544);

        let (_, r) = run(&parse(&["cost", "--design", "mult", "--schedule", "A"])).unwrap();
        assert_eq!(field(&r, "hardware", "comparison_entries"), 9224);
        assert_eq!(field(&r, "ticks", "total"), 24);

        assert!(run(&parse(&["cost", "--design", "mult", "--width", "32"])).is_err());

        let (_, r) = run(&parse(&["schedule", "--schedule", "A"])).unwrap();
        assert_eq!(
            field(&r, "schedule", "row_trajectory"),
            &serde_json::json!([64, 43, 29, 20, 14, 10, 7, 5, 4, 3, 2])
        );
        let (_, r) = run(&parse(&["schedule", "--schedule", "B"])).unwrap();
        assert_eq!(field(&r, "schedule", "total_ticks"), 5);
    }

    #[test]
    fn zero_trials_rejected_at_parse() {
        assert!(Cli::try_parse_from(["paradd", "verify", "--trials", "0"]).is_err());
    }

    #[test]
    fn failed_report_exits_one() {
        let mut r = Report::new();
        assert_eq!(r.exit_code(), 0);
        r.passed = false;
        assert_eq!(r.exit_code(), 1);
    }
}
