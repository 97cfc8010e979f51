//! Command-line front end.
//!
//! Exit codes: 0 success, 1 malformed arguments, 2 invalid tower
//! (`q != 1 mod 3` or `b = c = 0`), 3 compute budget exceeded, 4 I/O failure,
//! 5 internal inconsistency or a failed verification sweep.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::classifier_criterion::{
    check_criterion, classify, verify_mawu, Classification, ClassificationRecord, TowerSpec, VerdictRecord,
    DEFAULT_MAX_WITNESS_DEGREE,
};
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldSpec, FiniteField, DEFAULT_MAX_ORDER};
use crate::kummer_basic::{BasicField, RamificationReport};
use crate::polynomial::set_splitting_seed;
use crate::tower_census::{
    census, count_chain_levels, CensusOptions, CsvSink, JsonSink, LevelData, RowSink, DEFAULT_CHAIN_BUDGET,
    ESTIMATOR_CAVEAT,
};

pub const GOOD_CANDIDATE_NOTE: &str = "good candidate (necessary condition only)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Options shared by every subcommand; each may also be set through the
/// environment with the `KUMMER_TOWERS_` prefix.
#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Field as "p" or "p^r", e.g. "7" or "2^2".
    #[arg(long, global = true, env = "KUMMER_TOWERS_FIELD")]
    pub field: Option<String>,
    /// Seed for randomized equal-degree splitting.
    #[arg(long, global = true, env = "KUMMER_TOWERS_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, env = "KUMMER_TOWERS_FORMAT", default_value = "text")]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true, env = "KUMMER_TOWERS_OUT")]
    pub out: Option<PathBuf>,
    /// Largest witness degree searched by the infinite-genus criterion.
    #[arg(long, global = true, env = "KUMMER_TOWERS_MAX_WITNESS_DEGREE", default_value_t = DEFAULT_MAX_WITNESS_DEGREE)]
    pub max_witness_degree: u64,
    /// Cap on q^ext * 3^level for chain counting.
    #[arg(long, global = true, env = "KUMMER_TOWERS_CHAIN_BUDGET", default_value_t = DEFAULT_CHAIN_BUDGET)]
    pub chain_budget: u128,
    /// Largest field order accepted.
    #[arg(long, global = true, env = "KUMMER_TOWERS_MAX_Q", default_value_t = DEFAULT_MAX_ORDER)]
    pub max_q: u64,
}

#[derive(Debug, Clone, Args)]
pub struct Coefficients {
    /// Coefficient b of f = x^2 + b x + c: an integer, or "c0,c1,..." over an extension.
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// Coefficient c of f, same format as b.
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Classify y^3 = x f(x) and, for irreducible f, run the infinite-genus criterion.
    Classify {
        #[command(flatten)]
        coeffs: Coefficients,
    },
    /// Ramification, differents, genus and the degree set N of the basic function field.
    Analyze {
        #[command(flatten)]
        coeffs: Coefficients,
        /// Largest degree for the y-side discriminant cross-check (0 disables it).
        #[arg(long, default_value_t = 3)]
        oracle_degree: usize,
    },
    /// Every (b, c) over the field.
    Census {
        #[arg(long, default_value_t = 1)]
        levels: u32,
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
    /// Chain counts at levels 0..=L over F_{q^ext}.
    Count {
        #[command(flatten)]
        coeffs: Coefficients,
        #[arg(long, default_value_t = 4)]
        levels: u32,
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
    /// Check p = 1 mod 3 and that -1/3 is a square for primes p = 1, 7 mod 12.
    VerifyMawu {
        #[arg(long, default_value_t = 10_000)]
        limit: u64,
    },
}

#[derive(Debug, Clone, Parser)]
#[command(name = "kummer-towers", version, about = "Cubic Kummer towers y^3 = x f(x) over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOutput {
    pub field: String,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub classification: ClassificationRecord,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub criterion: Option<VerdictRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOutput {
    pub field: String,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub levels: Vec<LevelData>,
    pub estimators: Vec<String>,
    pub caveat: String,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotPrime(_)
        | Error::ZeroExtensionDegree
        | Error::FieldTooLarge { .. }
        | Error::InvalidArgument(_)
        | Error::ZeroPolynomial
        | Error::ConstantPolynomial
        | Error::ZeroElement
        | Error::WildIndex { .. } => 1,
        Error::QNotOneModThree(_) | Error::DoubleRootAtZero | Error::TrivialKummer => 2,
        Error::BudgetExceeded { .. } => 3,
        Error::Io(_) => 4,
        Error::Diagnostic(_) => 5,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

fn open_output(config: &Config) -> Result<Box<dyn Write>> {
    Ok(match &config.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn field_of(config: &Config) -> Result<FiniteField> {
    let spec: FieldSpec = config
        .field
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("--field is required".into()))?
        .parse()?;
    FiniteField::from_spec(spec, config.max_q)
}

/// Integers (possibly negative) over prime fields, "c0,c1,..." otherwise.
pub fn parse_element(field: &FiniteField, s: &str) -> Result<FieldElement> {
    if field.is_prime_field() {
        if let Ok(n) = s.trim().parse::<i64>() {
            return Ok(field.from_int(n));
        }
    }
    FieldElement::parse_in(field, s)
}

fn spec_of(config: &Config, coeffs: &Coefficients) -> Result<TowerSpec> {
    let field = field_of(config)?;
    let b = parse_element(&field, &coeffs.b)?;
    let c = parse_element(&field, &coeffs.c)?;
    Ok(TowerSpec::new(&field, b, c))
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<i32> {
    let config = &cli.config;
    set_splitting_seed(config.seed);
    match &cli.command {
        Command::Classify { coeffs } => cmd_classify(config, &spec_of(config, coeffs)?),
        Command::Analyze { coeffs, oracle_degree } => cmd_analyze(config, &spec_of(config, coeffs)?, *oracle_degree),
        Command::Census { levels, ext } => cmd_census(config, *levels, *ext),
        Command::Count { coeffs, levels, ext } => cmd_count(config, &spec_of(config, coeffs)?, *levels, *ext),
        Command::VerifyMawu { limit } => cmd_verify_mawu(config, *limit),
    }
}

pub fn cmd_classify(config: &Config, spec: &TowerSpec) -> Result<i32> {
    let class = classify(spec);
    let verdict = match class {
        Classification::IrreducibleInfiniteGenus => Some(check_criterion(spec, config.max_witness_degree)?),
        _ => None,
    };
    let note = class.is_good_candidate().then(|| GOOD_CANDIDATE_NOTE.to_string());
    let mut out = open_output(config)?;
    match config.format {
        Format::Json => write_json(
            &mut out,
            &ClassifyOutput {
                field: spec.field.spec().to_string(),
                b: spec.b.coeffs().to_vec(),
                c: spec.c.coeffs().to_vec(),
                classification: class.record(),
                criterion: verdict.as_ref().map(|v| v.record()),
                note: note.clone(),
            },
        )?,
        Format::Text | Format::Csv => {
            match &verdict {
                Some(v) => writeln!(out, "{class}; criterion: {v}")?,
                None => writeln!(out, "{class}")?,
            }
            if let Some(note) = &note {
                writeln!(out, "{note}")?;
            }
        }
    }
    out.flush()?;
    Ok(if matches!(class, Classification::Invalid(_)) { 2 } else { 0 })
}

fn render_report_text(out: &mut dyn Write, r: &RamificationReport) -> Result<()> {
    let divisor = |entries: &[crate::rational_places::DivisorEntry]| {
        if entries.is_empty() {
            return "0".to_string();
        }
        entries
            .iter()
            .map(|e| if e.coefficient == 1 { e.place.clone() } else { format!("{}*{}", e.coefficient, e.place) })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let degree = |entries: &[crate::rational_places::DivisorEntry]| -> i64 {
        entries.iter().map(|e| e.coefficient * e.degree as i64).sum()
    };
    let n: Vec<String> = r.n.iter().map(u64::to_string).collect();
    writeln!(out, "field F_{} ({}), f = {}", r.q, r.field, r.f)?;
    writeln!(out, "genus {}", r.genus)?;
    writeln!(out, "Diff(F/F_q(x)) = {}  [degree {}]", divisor(&r.diff_x), degree(&r.diff_x))?;
    writeln!(out, "Diff(F/F_q(y)) = {}  [degree {}]", divisor(&r.diff_y), degree(&r.diff_y))?;
    writeln!(out, "N = {{{}}}", n.join(", "))?;
    writeln!(out, "Galois over F_q(x): {}", r.galois_over_x)?;
    for rec in &r.x_records {
        writeln!(out, "  x-side {}: e = {}, f = {}, d = {}, degree {}", rec.place, rec.e, rec.f, rec.d, rec.degree)?;
    }
    for rec in &r.y_records {
        writeln!(
            out,
            "  y-side {} over {}: e = {}{}, d = {}{}",
            rec.place,
            rec.below_y,
            rec.e,
            if rec.e_inferred { " (from d)" } else { "" },
            rec.d,
            if rec.wild { ", wild" } else { "" }
        )?;
    }
    if let Some(o) = &r.oracle {
        let verdict = if o.agrees() { "agrees".to_string() } else { "DISAGREES".to_string() };
        writeln!(out, "y-side discriminant check (degree <= {}): {verdict}", o.max_degree)?;
    }
    for d in &r.diagnostics {
        writeln!(out, "note: {d}")?;
    }
    Ok(())
}

pub fn cmd_analyze(config: &Config, spec: &TowerSpec, oracle_degree: usize) -> Result<i32> {
    let bf = BasicField::new(&spec.field, spec.b.clone(), spec.c.clone())?;
    let report = bf.report((oracle_degree > 0).then_some(oracle_degree))?;
    let mut out = open_output(config)?;
    match config.format {
        Format::Json => write_json(&mut out, &report)?,
        Format::Text | Format::Csv => render_report_text(&mut out, &report)?,
    }
    out.flush()?;
    Ok(0)
}

pub fn cmd_census(config: &Config, levels: u32, ext: u32) -> Result<i32> {
    let field = field_of(config)?;
    let opts = CensusOptions { levels, ext, chain_budget: config.chain_budget, max_witness_degree: config.max_witness_degree };
    let mut out = open_output(config)?;
    let rows = {
        let mut sink: Box<dyn RowSink + '_> = match config.format {
            Format::Json => Box::new(JsonSink::new(&mut out)),
            Format::Text | Format::Csv => Box::new(CsvSink::new(&mut out, levels)?),
        };
        census(&field, &opts, sink.as_mut())?
    };
    out.flush()?;
    eprintln!("{rows} rows");
    Ok(0)
}

pub fn cmd_count(config: &Config, spec: &TowerSpec, levels: u32, ext: u32) -> Result<i32> {
    let data = count_chain_levels(spec, levels, ext, config.chain_budget)?;
    let estimators: Vec<String> = data
        .iter()
        .map(|l| num_rational::Ratio::new(l.chain_count, l.extension_degree_over_f0).to_string())
        .collect();
    let mut out = open_output(config)?;
    match config.format {
        Format::Json => write_json(
            &mut out,
            &CountOutput {
                field: spec.field.spec().to_string(),
                b: spec.b.coeffs().to_vec(),
                c: spec.c.coeffs().to_vec(),
                levels: data,
                estimators,
                caveat: ESTIMATOR_CAVEAT.to_string(),
            },
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["level", "degree", "ext", "chains", "estimator"])?;
            for (l, e) in data.iter().zip(&estimators) {
                w.write_record([
                    l.level.to_string(),
                    l.extension_degree_over_f0.to_string(),
                    l.ext.to_string(),
                    l.chain_count.to_string(),
                    e.clone(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "{:>5} {:>8} {:>4} {:>12} {:>12}", "level", "[F_L:F_0]", "ext", "chains", "estimator")?;
            for (l, e) in data.iter().zip(&estimators) {
                writeln!(
                    out,
                    "{:>5} {:>8} {:>4} {:>12} {:>12}",
                    l.level, l.extension_degree_over_f0, l.ext, l.chain_count, e
                )?;
            }
            writeln!(out, "note: {ESTIMATOR_CAVEAT}")?;
        }
    }
    out.flush()?;
    Ok(0)
}

pub fn cmd_verify_mawu(config: &Config, limit: u64) -> Result<i32> {
    let report = verify_mawu(limit)?;
    let mut out = open_output(config)?;
    match config.format {
        Format::Json => write_json(&mut out, &report)?,
        Format::Text | Format::Csv => {
            writeln!(out, "{} primes p <= {} with p = 1, 7 mod 12 checked", report.primes_checked, report.limit)?;
            writeln!(out, "{} violations", report.violations())?;
            for p in report.not_one_mod_three.iter() {
                writeln!(out, "  p = {p}: not 1 mod 3")?;
            }
            for p in report.not_square.iter() {
                writeln!(out, "  p = {p}: -1/3 is not a square")?;
            }
        }
    }
    out.flush()?;
    Ok(if report.violations() == 0 { 0 } else { 5 })
}
