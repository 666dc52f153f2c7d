//! Command-line front end of `tm-lab`.
//!
//! Exit codes: 0 success (whatever the verdict), 1 an audited inequality was violated,
//! 2 usage or input error, 3 numerical failure.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::groundstate::Tolerances;
use crate::radial::{fmt_f64, RadialGrid, DEFAULT_ENDPOINT_GAP, DEFAULT_NODES};
pub use config::{OutputFormat, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tm-lab", version, about = "Trudinger-Moser suprema with remainder terms on the unit disk")]
pub struct Cli {
    /// JSON file with settings; command-line flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Grid nodes.
    #[arg(long)]
    pub n: Option<usize>,
    /// First grid node (distance of the innermost node from the center).
    #[arg(long)]
    pub inner: Option<f64>,
    /// Output file (standard output when absent).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate Q, J, the Onofri functional and the Luxemburg norm of one profile.
    Eval {
        #[command(flatten)]
        common: Common,
        /// zero | moser:K | file:PATH
        #[arg(long)]
        u: Option<String>,
        /// none | lp:LAMBDA:P | potential:SPEC | SPEC
        #[arg(long)]
        form: Option<String>,
        /// Coefficient c in J(u) = int e^{c u^2} (default 4 pi).
        #[arg(long)]
        exponent: Option<f64>,
    },
    /// Shoot the radial ground state equation, build s(r) and classify the form.
    Groundstate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        potential: Option<String>,
        /// principal | flat
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        rtol: Option<f64>,
        #[arg(long)]
        atol: Option<f64>,
    },
    /// Sweep a trial family and classify the growth of J.
    Probe {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        form: Option<String>,
        /// moser | wk | wk-printed | gsapprox | gsapprox-printed
        #[arg(long)]
        family: Option<String>,
        /// Comma separated parameters (family default when absent).
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<f64>>,
        #[arg(long)]
        exponent: Option<f64>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        residual_ratio: Option<f64>,
    },
    /// Audit an inequality on seeded random profiles.
    Audit {
        #[command(flatten)]
        common: Common,
        /// onofri | onofri-refined | adimurthi-druet | orlicz
        #[arg(long)]
        ineq: Option<String>,
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decreasing rearrangement of a nonnegative profile.
    Rearrange {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        u: Option<String>,
        /// hyperbolic | euclidean
        #[arg(long)]
        measure: Option<String>,
    },
    /// Estimate lambda_1, or lambda_p when --p is given.
    Lambda {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        starts: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Groundstate { .. } => "groundstate",
            Command::Probe { .. } => "probe",
            Command::Audit { .. } => "audit",
            Command::Rearrange { .. } => "rearrange",
            Command::Lambda { .. } => "lambda",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Eval { common, .. }
            | Command::Groundstate { common, .. }
            | Command::Probe { common, .. }
            | Command::Audit { common, .. }
            | Command::Rearrange { common, .. }
            | Command::Lambda { common, .. } => common,
        }
    }
}

/// Everything a command needs besides its own flags.
pub(crate) struct Context {
    command: &'static str,
    file: RunConfig,
    settings: Map<String, Value>,
    output: Option<PathBuf>,
    format: OutputFormat,
    grid: RadialGrid,
}

impl Context {
    fn new(cmd: &Command, file: RunConfig) -> Result<Self> {
        let common = cmd.common();
        if let Some(c) = &file.command {
            if c != cmd.name() {
                return Err(Error::invalid(format!("config is for `{c}`, running `{}`", cmd.name())));
            }
        }
        let n = config::pick(common.n, file.n, DEFAULT_NODES);
        let inner = config::pick(common.inner, file.inner, DEFAULT_ENDPOINT_GAP);
        let grid = RadialGrid::logit(n, inner, DEFAULT_ENDPOINT_GAP)?;
        let output = common.output.clone().or_else(|| file.output.clone());
        let format = config::pick(common.format, file.format, OutputFormat::Csv);
        let mut settings = Map::new();
        settings.insert("n".into(), json!(n));
        settings.insert("inner".into(), json!(inner));
        settings.insert("format".into(), json!(format));
        Ok(Self { command: cmd.name(), file, settings, output, format, grid })
    }

    /// Records an effective setting for the provenance header.
    fn set(&mut self, key: &str, value: impl serde::Serialize) {
        self.settings.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    fn grid_line(&self) -> String {
        let nodes = self.grid.nodes();
        format!(
            "grid=logit n={} first={} last_interior={}",
            nodes.len(),
            fmt_f64(nodes[0]),
            fmt_f64(nodes[nodes.len() - 2])
        )
    }

    /// Provenance lines: tool version, command, effective settings, grid and tolerances.
    fn header(&self, tol: Option<Tolerances>) -> Vec<String> {
        let mut h = vec![
            format!("tm-lab {}", env!("CARGO_PKG_VERSION")),
            format!("command={}", self.command),
            format!("config={}", Value::Object(self.settings.clone())),
            self.grid_line(),
        ];
        if let Some(t) = tol {
            h.push(format!("tolerances rtol={} atol={}", fmt_f64(t.rtol), fmt_f64(t.atol)));
        }
        h
    }

    fn metadata(&self, tol: Option<Tolerances>) -> Value {
        let nodes = self.grid.nodes();
        let mut m = json!({
            "tool": "tm-lab",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": Value::Object(self.settings.clone()),
            "grid": {"kind": "logit", "n": nodes.len(), "first": nodes[0], "last_interior": nodes[nodes.len() - 2]},
        });
        if let Some(t) = tol {
            m["tolerances"] = json!({"rtol": t.rtol, "atol": t.atol});
        }
        m
    }

    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.output {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| Error::Io { path: p.clone(), source })?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn write_json(&self, value: &Value) -> Result<()> {
        let mut w = self.writer()?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w).and_then(|_| w.flush()).map_err(|source| self.io_error(source))
    }

    fn io_error(&self, source: io::Error) -> Error {
        Error::Io { path: self.output.clone().unwrap_or_else(|| "<stdout>".into()), source }
    }

    /// Summary lines go to standard output when the data goes to a file, otherwise to
    /// standard error.
    fn say(&self, line: &str) {
        if self.output.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let file = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mut ctx = Context::new(&cli.command, file)?;
    match cli.command {
        Command::Eval { u, form, exponent, .. } => commands::eval(&mut ctx, u, form, exponent),
        Command::Groundstate { potential, start, delta, rtol, atol, .. } => {
            commands::groundstate(&mut ctx, potential, start, delta, rtol, atol)
        }
        Command::Probe { form, family, k, exponent, window, residual_ratio, .. } => {
            commands::probe(&mut ctx, form, family, k, exponent, window, residual_ratio)
        }
        Command::Audit { ineq, form, samples, seed, .. } => commands::audit(&mut ctx, ineq, form, samples, seed),
        Command::Rearrange { u, measure, .. } => commands::rearrange(&mut ctx, u, measure),
        Command::Lambda { p, seed, starts, .. } => commands::lambda(&mut ctx, p, seed, starts),
    }
}
