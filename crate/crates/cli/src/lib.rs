//! Batch front end for the morita-lab checks.
//!
//! Exit codes: 0 when every check passes, 2 when a verification check fails
//! (the report lists the failing residuals), 1 on usage or IO errors.

// Tolerance checks are written `!(x <= tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod pipelines;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use morita_core::context::fixtures::Fixture;
use morita_core::obstruction::OptimizeParams;
use morita_core::Exec;
use serde::Serialize;

use pipelines::{Checks, Failure, ObstructionArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const THREADS_ENV: &str = "MORITA_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "morita-lab", version, about = "Morita contexts of twisted function algebras on the disk and annulus")]
pub struct Cli {
    /// Directory for the JSON report and CSV traces; the report goes to stdout when absent.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Run every sampling loop on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 1)]
    pub terms: usize,
    #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
    pub degree_min: i64,
    #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
    pub degree_max: i64,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 25)]
    pub max_iters: usize,
}

impl SearchArgs {
    fn params(&self, seed: u64) -> OptimizeParams {
        OptimizeParams {
            terms: self.terms,
            degree_min: self.degree_min,
            degree_max: self.degree_max,
            restarts: self.restarts,
            seed,
            max_iters: self.max_iters,
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Balancing identities, lift residuals and symmetry flags.
    VerifyContext {
        /// Fixture name or JSON context file.
        context: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Idempotent, Kaplansky projection, corner maps and the similarity bound.
    Similarity {
        context: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
    /// Obstruction constants, eps* and a lift search on the annulus.
    Obstruction {
        #[arg(long)]
        beta: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        thetas: Vec<f64>,
        #[arg(long, default_value_t = morita_core::obstruction::DEFAULT_SAFETY)]
        safety: f64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Multi-start search for a low-norm holomorphic lift of 1_B.
    OptimizeLift {
        context: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Bundled end-to-end runs.
    Demo {
        #[arg(value_parser = parse_fixture)]
        fixture: Fixture,
    },
}

fn parse_fixture(s: &str) -> Result<Fixture, String> {
    s.parse::<Fixture>().map_err(|e| e.to_string())
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::VerifyContext { .. } => "verify-context".into(),
            Command::Similarity { .. } => "similarity".into(),
            Command::Obstruction { .. } => "obstruction".into(),
            Command::OptimizeLift { .. } => "optimize-lift".into(),
            Command::Demo { fixture } => format!("demo-{}", fixture.name()),
        }
    }
}

/// A parsed invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
    pub exec: Exec,
}

impl From<Cli> for RunConfig {
    fn from(c: Cli) -> Self {
        let exec = if c.sequential { Exec::Sequential } else { Exec::default() };
        RunConfig { command: c.command, output_dir: c.output_dir, seed: c.seed, exec }
    }
}

#[derive(Debug, Serialize)]
pub struct Envelope {
    pub schema: &'static str,
    pub command: String,
    pub seed: u64,
    pub passed: bool,
    pub failures: Vec<Failure>,
    pub report: serde_json::Value,
}

pub struct RunOutput {
    pub envelope: Envelope,
    pub json: String,
    pub trace: Vec<morita_core::obstruction::TraceRow>,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        if self.envelope.passed {
            EXIT_OK
        } else {
            EXIT_VERIFICATION
        }
    }
}

/// Runs one command and writes its outputs. Errors are usage or IO errors.
pub fn run(config: &RunConfig) -> anyhow::Result<RunOutput> {
    let mut checks = Checks::default();
    let section = match &config.command {
        Command::VerifyContext { context, trials } => {
            pipelines::verify_context(&config::load_context(context)?, *trials, config.seed, &mut checks)?
        }
        Command::Similarity { context, trials } => {
            pipelines::similarity(&config::load_context(context)?, *trials, config.seed, &mut checks)?
        }
        Command::Obstruction { beta, thetas, safety, search } => {
            let args = ObstructionArgs { beta: *beta, thetas: thetas.clone(), safety: *safety, optimize: search.params(config.seed) };
            pipelines::obstruction(&args, config.exec, &mut checks)?
        }
        Command::OptimizeLift { context, search } => {
            pipelines::optimize_lift(&config::load_context(context)?, &search.params(config.seed), config.exec, &mut checks)?
        }
        Command::Demo { fixture } => pipelines::demo(*fixture, config.seed, config.exec, &mut checks)?,
    };
    let envelope = Envelope {
        schema: report::SCHEMA,
        command: config.command.name(),
        seed: config.seed,
        passed: checks.failures.is_empty(),
        failures: checks.failures,
        report: section.payload,
    };
    let json = report::to_string(&envelope)?;
    if let Some(dir) = &config.output_dir {
        std::fs::create_dir_all(dir)?;
        let name = config.command.name();
        std::fs::write(dir.join(format!("{name}.json")), &json)?;
        if !section.trace.is_empty() {
            report::write_csv(&dir.join(format!("{name}_trace.csv")), &section.trace)?;
        }
    }
    Ok(RunOutput { envelope, json, trace: section.trace })
}

/// Sizes the global rayon pool from `MORITA_LAB_THREADS` when set.
pub fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| anyhow::anyhow!("{THREADS_ENV}={v:?} is not a thread count"))?;
    if n == 0 {
        anyhow::bail!("{THREADS_ENV} must be positive");
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

/// Parses `args`, runs, prints, and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
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
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return EXIT_USAGE;
    }
    let config = RunConfig::from(cli);
    match run(&config) {
        Ok(out) => {
            if config.output_dir.is_none() {
                print!("{}", out.json);
            }
            for f in &out.envelope.failures {
                eprintln!("check failed: {} = {:e} (tolerance {:e})", f.check, f.value, f.tolerance);
            }
            out.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}
