//! Command-line front end. [`run_cli`] does all the work so it can be
//! driven from tests; the binary only forwards `std::env::args`.
//!
//! Exit codes: 0 success, 1 invalid arguments or parameters, 2 a
//! verification check failed.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::closed_form;
use crate::equilibrium;
use crate::error::Error;
use crate::market::{Firm, ModelParams, Pattern, StrategyAssignment};
use crate::rational::Rational;
use crate::report::{self, EquilibriumDoc, EquivalenceDoc, FloatEquilibriumDoc, MinimaxDoc, PatternClosedForm, VerifyDoc};
use crate::verification::{self, GridSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "triopoly", version, about = "Equilibria of a three-firm relative-profit oligopoly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve equilibria for one or all strategy assignments.
    Solve(SolveArgs),
    /// Run the property suite, equivalence matrix and typo ledger.
    Verify(VerifyArgs),
    /// Check the minimax chain on a payoff slice through the Cournot equilibrium.
    Minimax(MinimaxArgs),
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Demand intercept
    #[arg(long = "a", allow_hyphen_values = true)]
    a: Rational,
    /// Cross-price coefficient, strictly between 0 and 1
    #[arg(long = "b", allow_hyphen_values = true)]
    b: Rational,
    /// Marginal cost of firm A
    #[arg(long = "cA", allow_hyphen_values = true)]
    c_a: Rational,
    /// Marginal cost of firm B
    #[arg(long = "cB", allow_hyphen_values = true)]
    c_b: Rational,
    /// Marginal cost of firm C
    #[arg(long = "cC", allow_hyphen_values = true)]
    c_c: Rational,
}

impl ParamArgs {
    fn build(&self) -> Result<ModelParams, Error> {
        ModelParams::new(self.a.clone(), self.b.clone(), self.c_a.clone(), self.c_b.clone(), self.c_c.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone)]
enum PatternSelector {
    All,
    One(StrategyAssignment),
}

impl std::str::FromStr for PatternSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(PatternSelector::All);
        }
        if let Some(p) = s.parse::<u8>().ok().and_then(Pattern::from_number) {
            return Ok(PatternSelector::One(p.assignment()));
        }
        s.parse::<StrategyAssignment>()
            .map(PatternSelector::One)
            .map_err(|_| "expected all, 1-6 or a Q/P string such as QQP".to_string())
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// `all`, a pattern number 1-6, or an assignment such as QPQ.
    #[arg(long, default_value = "all")]
    pattern: PatternSelector,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Exact rationals or a float fast path.
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Random parameter draws; the first one is the given market.
    #[arg(long, default_value_t = 100)]
    draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Args)]
struct MinimaxArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Payoff firm; it maximizes over its own output. Firm C is the
    /// minimizer unless the payoff firm is C, in which case A is.
    #[arg(long, default_value = "A")]
    firm: Firm,
    /// Value of the remaining firm's output, e.g. xB=114/35. Defaults to
    /// its Cournot equilibrium value.
    #[arg(long = "fix", value_name = "VAR=VALUE")]
    fix: Vec<String>,
    /// Grid bounds for both slice variables, 0 and a by default.
    #[arg(long = "grid-lo", allow_hyphen_values = true)]
    grid_lo: Option<Rational>,
    #[arg(long = "grid-hi", allow_hyphen_values = true)]
    grid_hi: Option<Rational>,
    #[arg(long = "grid-points", default_value_t = GridSpec::DEFAULT_POINTS)]
    grid_points: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(std::io::Error::other(e))
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let rendered = e.render().to_string();
            let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: invalid arguments");
            let _ = writeln!(err, "{}", first.trim());
            return EXIT_USAGE;
        }
    };
    let result = match &cli.command {
        Command::Solve(args) => solve(args, out),
        Command::Verify(args) => verify(args, out),
        Command::Minimax(args) => minimax(args, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let params = args.params.build()?;
    let assignments: Vec<StrategyAssignment> = match &args.pattern {
        PatternSelector::All => Pattern::ALL.iter().map(|p| p.assignment()).collect(),
        PatternSelector::One(a) => vec![*a],
    };

    match args.mode {
        Mode::Exact => {
            let eqs = assignments
                .iter()
                .map(|&a| equilibrium::solve_equilibrium(&params, a))
                .collect::<Result<Vec<_>, _>>()?;
            match args.format {
                Format::Csv | Format::Table => {
                    let rows: Vec<Vec<String>> = eqs.iter().map(report::equilibrium_csv_row).collect();
                    if args.format == Format::Csv {
                        write_csv(out, &report::CSV_HEADER, &rows)?;
                    } else {
                        writeln!(out, "params  {}", report::render_params(&params))?;
                        write!(out, "{}", report::render_table(&report::CSV_HEADER[..11], &cut(&rows, 11)))?;
                    }
                }
                Format::Json => {
                    let docs: Vec<EquilibriumDoc> = eqs
                        .iter()
                        .map(|e| {
                            let cf = e
                                .assignment
                                .pattern()
                                .filter(|_| params.ab_symmetric())
                                .map(|p| closed_form::closed_form_outputs(&params, p))
                                .transpose()?;
                            Ok(EquilibriumDoc::new(&params, e, cf.as_ref()))
                        })
                        .collect::<Result<_, Error>>()?;
                    write_json(out, &docs)?;
                }
            }
        }
        Mode::Float => {
            let eqs = assignments
                .iter()
                .map(|&a| equilibrium::solve_equilibrium_f64(&params, a))
                .collect::<Result<Vec<_>, _>>()?;
            match args.format {
                Format::Csv => {
                    let rows: Vec<Vec<String>> = eqs.iter().map(report::float_equilibrium_csv_row).collect();
                    write_csv(out, &report::CSV_HEADER, &rows)?;
                }
                Format::Table => {
                    let rows: Vec<Vec<String>> = eqs.iter().map(report::float_equilibrium_csv_row).collect();
                    let keep: Vec<Vec<String>> = rows.iter().map(|r| [&r[..2], &r[11..20]].concat()).collect();
                    let header: Vec<&str> = [&report::CSV_HEADER[..2], &report::CSV_HEADER[11..20]].concat();
                    writeln!(out, "params  {}", report::render_params(&params))?;
                    write!(out, "{}", report::render_table(&header, &keep))?;
                }
                Format::Json => {
                    let docs: Vec<FloatEquilibriumDoc> = eqs.iter().map(|e| FloatEquilibriumDoc::new(&params, e)).collect();
                    write_json(out, &docs)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn cut(rows: &[Vec<String>], n: usize) -> Vec<Vec<String>> {
    rows.iter().map(|r| r[..n].to_vec()).collect()
}

/// Builds the full verification document for `params`.
pub fn verify_document(params: &ModelParams, draws: usize, seed: u64) -> Result<VerifyDoc, Error> {
    let suite = verification::property_suite(params, draws, seed)?;
    let matrix = verification::equivalence_matrix(params)?;
    let (closed_forms, typo_ledger) = if params.ab_symmetric() {
        let forms = Pattern::ALL
            .iter()
            .map(|&p| {
                closed_form::closed_form_outputs(params, p)
                    .map(|cf| PatternClosedForm { pattern: p.number(), form: (&cf).into() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        (Some(forms), Some(closed_form::typo_ledger(params)?))
    } else {
        (None, None)
    };
    let passed = suite.all_passed();
    Ok(VerifyDoc { params: params.clone(), suite, equivalence: EquivalenceDoc::new(&matrix), closed_forms, typo_ledger, passed })
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let params = args.params.build()?;
    let doc = verify_document(&params, args.draws, args.seed)?;
    match args.format {
        Format::Table => write!(out, "{}", report::render_verify_table(&doc))?,
        Format::Json => write_json(out, &doc)?,
        Format::Csv => write_csv(out, &["property", "status", "checked", "detail"], &report::render_verify_csv(&doc))?,
    }
    Ok(if doc.passed { EXIT_OK } else { EXIT_VERIFICATION })
}

fn parse_fix(spec: &str) -> Result<(Firm, Rational), Failure> {
    let bad = || Failure::Usage(format!("--fix expects xA=VALUE, xB=VALUE or xC=VALUE, got {spec:?}"));
    let (var, value) = spec.split_once('=').ok_or_else(bad)?;
    let firm = var.trim().strip_prefix('x').ok_or_else(bad)?.parse::<Firm>().map_err(|_| bad())?;
    let value = value.parse::<Rational>().map_err(|e| Failure::Usage(format!("--fix: {e}")))?;
    Ok((firm, value))
}

fn minimax(args: &MinimaxArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let params = args.params.build()?;
    let mut slice = verification::equilibrium_slice(&params, args.firm)?;
    let fixed_firm = slice.fixed_firm()?;
    for spec in &args.fix {
        let (firm, value) = parse_fix(spec)?;
        if firm != fixed_firm {
            return Err(Failure::Usage(format!(
                "--fix: the slice for firm {} pins x{fixed_firm}, not x{firm}",
                args.firm
            )));
        }
        slice.fixed = value;
    }
    let lo = args.grid_lo.clone().unwrap_or_else(Rational::zero);
    let hi = args.grid_hi.clone().unwrap_or_else(|| params.a().clone());
    let grid = GridSpec::new(lo, hi, args.grid_points)?;
    let rep = verification::minimax_check(&params, &slice, &grid)?;
    let pass = rep.pass;
    let doc = MinimaxDoc::new(&params, &slice, &grid, rep);
    match args.format {
        Format::Table => write!(out, "{}", report::render_minimax_table(&doc))?,
        Format::Json => write_json(out, &doc)?,
        Format::Csv => {
            let mut header = vec!["firm", "min_firm", "fixed"];
            let mut row = vec![doc.payoff_firm.clone(), doc.min_firm.clone(), format!("{}={}", doc.fixed_variable, doc.fixed_value)];
            let labels: Vec<String> = doc.report.quantities.iter().map(|q| q.label.replace(' ', "_")).collect();
            header.extend(labels.iter().map(String::as_str));
            row.extend(doc.report.quantities.iter().map(|q| q.value.to_string()));
            header.extend(["spread", "tolerance", "pass"]);
            row.extend([doc.report.spread.to_string(), doc.report.tolerance.to_string(), doc.report.pass.to_string()]);
            write_csv(out, &header, &[row])?;
        }
    }
    Ok(if pass { EXIT_OK } else { EXIT_VERIFICATION })
}
