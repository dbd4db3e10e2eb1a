//! Command-line front end for `orbitq-core`.
//!
//! Every subcommand produces a [`CheckReport`]; [`run`] renders it and maps the outcome
//! onto the exit-code contract: 0 pass, 1 fail, 2 invalid input, 3 inconclusive.

mod commands;

use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use orbitq_core::exact::Rational;
use orbitq_core::liealg::ParabolicDatum;
use orbitq_core::Error;
use serde_json::{json, Value};

pub use commands::{dispatch, verify_all};

#[derive(Parser, Debug)]
#[command(name = "orbitq", version, about = "Verma-module quantization of semisimple coadjoint orbits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Root system: A1, A2, A3 or B2.
    #[arg(long, global = true, default_value = "A1")]
    pub algebra: String,
    /// Comma-separated 1-based simple roots of the Levi factor; empty for the torus.
    #[arg(long, global = true, default_value = "")]
    pub levi: String,
    /// `symbolic` or comma-separated nonzero rationals, one per orbit parameter.
    #[arg(long, global = true, default_value = "symbolic")]
    pub lambda: String,
    /// Degree cap (subcommand default when omitted).
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Fixed truncation depth; chosen automatically when omitted.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Largest depth tried while waiting for ranks to stabilize.
    #[arg(long, global = true, default_value_t = 24)]
    pub depth_cap: usize,
    /// Order in t for the quantum layer; 0 skips quantum checks.
    #[arg(long, global = true, default_value_t = 2)]
    pub t_order: usize,
    /// Seed for every random choice (`ORBITQ_SEED` takes precedence).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Random points for flatness evidence.
    #[arg(long, global = true, default_value_t = 5)]
    pub points: usize,
    /// Random pairs for equivariance checks.
    #[arg(long, global = true, default_value_t = 20)]
    pub pairs: usize,
    /// Random symmetrized monomials for leading-term checks.
    #[arg(long, global = true, default_value_t = 50)]
    pub samples: usize,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Root datum and Chevalley basis.
    Roots,
    /// Generator actions on the truncated generalized Verma module.
    VermaAct,
    /// Shapovalov form ranks and determinant factors.
    Shapovalov,
    /// Graded slice ranks.
    Hilbert,
    /// Generic versus specialized ranks at random points.
    Flatness,
    /// Commutativity modulo h and leading terms of symmetrized monomials.
    Poisson,
    /// Isotypic multiplicities against the orbit.
    Multiplicity,
    /// Filtered dimensions of the orbit coordinate ring.
    OrbitDim,
    /// Ranks of the two-parameter slices by order in t.
    QHilbert,
    /// The deformed adjoint representation inside U_q.
    Gq,
    /// Hopf axioms and equivariance of multiplication.
    Equivariance,
    /// Second bracket for sl2.
    Bracket2,
    /// Run every check for the configured algebra.
    VerifyAll,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    pub details: Value,
    /// `degree,rank` rows when the check produces a table.
    pub table: Option<Vec<(usize, usize)>>,
    pub timing: Duration,
}

impl CheckReport {
    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "status": self.status.as_str(), "details": self.details})
    }
}

/// Validated configuration shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub pd: ParabolicDatum,
    pub algebra: String,
    pub levi: Vec<usize>,
    pub lambda: Option<Vec<Rational>>,
    pub degree: Option<usize>,
    pub depth: Option<usize>,
    pub depth_cap: usize,
    pub t_order: usize,
    pub seed: u64,
    pub points: usize,
    pub pairs: usize,
    pub samples: usize,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<RunConfig, Error> {
        let levi = parse_levi(&cli.levi)?;
        let pd = ParabolicDatum::from_names(&cli.algebra, &levi)?;
        let lambda = parse_lambda(&cli.lambda, pd.levi.n_params())?;
        let seed = match std::env::var("ORBITQ_SEED") {
            Ok(s) => s.trim().parse().map_err(|_| Error::InvalidInput(format!("ORBITQ_SEED is not an integer: {s}")))?,
            Err(_) => cli.seed,
        };
        Ok(RunConfig {
            algebra: pd.rs().name(),
            pd,
            levi,
            lambda,
            degree: cli.degree,
            depth: cli.depth,
            depth_cap: cli.depth_cap,
            t_order: cli.t_order,
            seed,
            points: cli.points,
            pairs: cli.pairs,
            samples: cli.samples,
        })
    }
}

fn parse_levi(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| match x.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(Error::InvalidInput(format!("levi index {x} is not a positive integer"))),
        })
        .collect()
}

fn parse_lambda(s: &str, n: usize) -> Result<Option<Vec<Rational>>, Error> {
    if s.trim() == "symbolic" {
        return Ok(None);
    }
    let vals: Vec<Rational> = s
        .split(',')
        .map(|x| x.trim().parse::<Rational>().map_err(|_| Error::InvalidInput(format!("cannot parse λ entry {x:?}"))))
        .collect::<Result<_, _>>()?;
    if vals.iter().any(|v| *v == Rational::from_integer(0.into())) {
        return Err(Error::InvalidInput("λ_i must be nonzero".into()));
    }
    if vals.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} λ entries, got {}", vals.len())));
    }
    Ok(Some(vals))
}

fn render(cmd: &str, reports: &[CheckReport], format: Format) -> Result<String, Error> {
    match format {
        Format::Json => {
            let body = if reports.len() == 1 && cmd != "verify-all" {
                let r = &reports[0];
                json!({"schema": 1, "command": cmd, "status": r.status.as_str(), "details": r.details})
            } else {
                json!({"schema": 1, "command": cmd, "status": overall(reports).as_str(), "checks": reports.iter().map(CheckReport::to_json).collect::<Vec<_>>()})
            };
            Ok(serde_json::to_string_pretty(&body).expect("serializable") + "\n")
        }
        Format::Csv => {
            let [r] = reports else {
                return Err(Error::InvalidInput("csv output is only available for single-table subcommands".into()));
            };
            let Some(t) = &r.table else {
                return Err(Error::InvalidInput(format!("{cmd} does not produce a degree/rank table")));
            };
            let mut s = String::from("degree,rank\n");
            for (d, k) in t {
                s.push_str(&format!("{d},{k}\n"));
            }
            Ok(s)
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                s.push_str(&format!("{:<14} {:<13} {:>8.2?}\n", r.name, r.status.as_str(), r.timing));
                if let Some(t) = &r.table {
                    s.push_str(&format!("  ranks: {:?}\n", t.iter().map(|x| x.1).collect::<Vec<_>>()));
                }
                if reports.len() == 1 {
                    s.push_str(&serde_json::to_string_pretty(&r.details).expect("serializable"));
                    s.push('\n');
                }
            }
            if reports.len() > 1 {
                s.push_str(&format!("overall: {}\n", overall(reports).as_str()));
            }
            Ok(s)
        }
    }
}

/// Any failure beats inconclusive, which beats pass; skipped checks do not count.
pub fn overall(reports: &[CheckReport]) -> Status {
    if reports.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if reports.iter().any(|r| r.status == Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Pass | Status::Skipped => 0,
        Status::Fail => 1,
        Status::Inconclusive => 3,
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Unsupported(_) => 2,
        Error::DepthExhausted(_) => 3,
        _ => 1,
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Roots => "roots",
        Command::VermaAct => "verma-act",
        Command::Shapovalov => "shapovalov",
        Command::Hilbert => "hilbert",
        Command::Flatness => "flatness",
        Command::Poisson => "poisson",
        Command::Multiplicity => "multiplicity",
        Command::OrbitDim => "orbit-dim",
        Command::QHilbert => "q-hilbert",
        Command::Gq => "gq",
        Command::Equivariance => "equivariance",
        Command::Bracket2 => "bracket2",
        Command::VerifyAll => "verify-all",
    }
}

/// Parse `argv`, run, write the report; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let name = command_name(cli.command);
    let outcome = RunConfig::from_cli(&cli).and_then(|cfg| {
        let reports = if cli.command == Command::VerifyAll { verify_all(&cfg)? } else { vec![dispatch(cli.command, &cfg)?] };
        let text = render(name, &reports, cli.format)?;
        Ok((reports, text))
    });
    match outcome {
        Ok((reports, text)) => {
            match &cli.output {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &text) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            exit_code(overall(&reports))
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(status: Status) -> CheckReport {
        CheckReport { name: "x".into(), status, details: Value::Null, table: None, timing: Duration::ZERO }
    }

    #[test]
    fn levi_indices_are_one_based() {
        assert_eq!(parse_levi("").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_levi("1, 3").unwrap(), vec![0, 2]);
        assert!(parse_levi("0").is_err());
        assert!(parse_levi("a").is_err());
    }

    #[test]
    fn lambda_parsing() {
        assert_eq!(parse_lambda("symbolic", 2).unwrap(), None);
        let v = parse_lambda("1/2,-3", 2).unwrap().unwrap();
        assert_eq!(v[0], Rational::new(1.into(), 2.into()));
        assert!(parse_lambda("1,0", 2).is_err());
        assert!(parse_lambda("1", 2).is_err());
        assert!(parse_lambda("x", 1).is_err());
    }

    #[test]
    fn overall_status_ordering() {
        assert_eq!(overall(&[report(Status::Pass), report(Status::Skipped)]), Status::Pass);
        assert_eq!(overall(&[report(Status::Inconclusive), report(Status::Pass)]), Status::Inconclusive);
        assert_eq!(overall(&[report(Status::Inconclusive), report(Status::Fail)]), Status::Fail);
        assert_eq!(exit_code(Status::Inconclusive), 3);
    }

    #[test]
    fn csv_needs_a_table() {
        let mut r = report(Status::Pass);
        assert!(render("gq", &[r.clone()], Format::Csv).is_err());
        r.table = Some(vec![(0, 1), (1, 5)]);
        assert_eq!(render("hilbert", &[r], Format::Csv).unwrap(), "degree,rank\n0,1\n1,5\n");
    }
}
