//! Command-line front end: argument handling, dispatch and output.
//!
//! [`run`] is the whole program; `main` only wires it to the process
//! streams. Every command produces one envelope,
//! `{command, mode, input, result, diagnostics}`, printed as JSON or text.

pub mod parse;

mod commands;
mod render;

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quadrat::construct::StrategyChoice;
use quadrat::scalars::DEFAULT_TOLERANCE;
use quadrat::Mode;

pub use parse::{parse_exact, parse_poly, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "quadrat", version, about = "Quadratize scalar polynomial ODEs x' = p(x)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Float tolerance for rank and equality decisions.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = ModeFlag::Auto)]
    pub mode: ModeFlag,
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeFlag {
    Exact,
    Float,
    /// Exact unless the input has a decimal or an exact radical is missing.
    Auto,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quadratize with the best available construction.
    Quadratize {
        /// Polynomial in x, or `-` to read it from stdin.
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value = "auto", value_parser = parse_strategy)]
        strategy: StrategyChoice,
    },
    /// Test for an order-one quadratization after a shift (degree >= 5).
    CheckOneVar {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Search for a minimal set of monomial new variables.
    Search {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        /// Test every subset instead of skipping provably useless ones.
        #[arg(long)]
        no_pruning: bool,
    },
    /// Check whether given new variables quadratize the polynomial.
    Verify {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// New variables as polynomials in x, separated by `;`.
        #[arg(long)]
        vars: String,
    },
    /// Integrate the original and the quadratized system side by side.
    Simulate {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long = "T", default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// Write the trajectories to this CSV file.
        #[arg(long)]
        csv: Option<std::path::PathBuf>,
    },
    /// Eliminate the z coefficients from the one-variable conditions.
    Eliminate {
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Run above the default degree cap.
        #[arg(long)]
        allow_large: bool,
    },
    /// Print the coefficient matrices behind the one-variable conditions.
    Matrices {
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Quadratize { .. } => "quadratize",
            Command::CheckOneVar { .. } => "check-one-var",
            Command::Search { .. } => "search",
            Command::Verify { .. } => "verify",
            Command::Simulate { .. } => "simulate",
            Command::Eliminate { .. } => "eliminate",
            Command::Matrices { .. } => "matrices",
        }
    }

    pub fn poly(&self) -> Option<&str> {
        match self {
            Command::Quadratize { poly, .. }
            | Command::CheckOneVar { poly }
            | Command::Search { poly, .. }
            | Command::Verify { poly, .. }
            | Command::Simulate { poly, .. } => Some(poly),
            Command::Eliminate { .. } | Command::Matrices { .. } => None,
        }
    }
}

fn parse_strategy(s: &str) -> Result<StrategyChoice, String> {
    s.parse()
}

/// Why a command did not succeed, with its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Usage(String),
    Infeasible(String),
    Indeterminate(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Infeasible(_) => EXIT_INFEASIBLE,
            Failure::Indeterminate(_) => EXIT_INDETERMINATE,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Infeasible(m) | Failure::Indeterminate(m) => m,
        }
    }
}

/// What a command produced. `exit` is nonzero for negative answers that
/// still carry a result, such as a rejected one-variable test.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub mode: Option<Mode>,
    pub input: Value,
    pub result: Value,
    pub text: String,
    pub diagnostics: Vec<String>,
    pub exit: i32,
}

impl Outcome {
    fn new(mode: Option<Mode>, input: Value, result: Value, text: String) -> Self {
        Outcome { mode, input, result, text, diagnostics: Vec::new(), exit: EXIT_OK }
    }
}

/// Runs the program on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let mut piped = None;
    if cli.command.poly() == Some("-") {
        let mut s = String::new();
        if let Err(e) = stdin.read_to_string(&mut s) {
            let _ = writeln!(err, "error: cannot read stdin: {e}");
            return EXIT_USAGE;
        }
        piped = Some(s.trim().to_string());
    }
    let result = match cli.global.jobs {
        Some(0) => Err(Failure::Usage("--jobs must be positive".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| commands::execute(&cli, piped.as_deref())),
            Err(e) => Err(Failure::Usage(format!("cannot start {j} worker threads: {e}"))),
        },
        None => commands::execute(&cli, piped.as_deref()),
    };
    emit(&cli, result, out, err)
}

fn emit(cli: &Cli, result: Result<Outcome, Failure>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let command = cli.command.name();
    let (envelope, code) = match &result {
        Ok(o) => (
            json!({
                "command": command,
                "mode": o.mode,
                "input": o.input,
                "result": o.result,
                "diagnostics": o.diagnostics,
            }),
            o.exit,
        ),
        Err(f) => (
            json!({
                "command": command,
                "mode": Value::Null,
                "input": Value::Null,
                "result": Value::Null,
                "diagnostics": [f.message()],
            }),
            f.exit_code(),
        ),
    };
    let written = match (cli.global.format, &result) {
        (Format::Json, _) => {
            let text = serde_json::to_string_pretty(&envelope).expect("values serialize");
            writeln!(out, "{text}")
        }
        (Format::Text, Ok(o)) => {
            let mut r = out.write_all(o.text.as_bytes());
            for d in &o.diagnostics {
                r = r.and_then(|_| writeln!(out, "note: {d}"));
            }
            r
        }
        (Format::Text, Err(f)) => writeln!(err, "error: {}", f.message()),
    };
    match written {
        Ok(()) => code,
        Err(_) => EXIT_USAGE,
    }
}
