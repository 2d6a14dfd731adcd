//! Command-line runner for `asymprod` experiments.
//!
//! Every subcommand reads the same experiment description: a `key=value`
//! file given with `--config`, overlaid by flags of the same names.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;
pub mod expr;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{read_config_file, ExperimentConfig, RawConfig};
pub use error::{CliError, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_HYPOTHESIS, EXIT_OK};

/// Environment fallback for `--threads`.
pub const THREADS_ENV: &str = "ASYMPROD_THREADS";

#[derive(Debug, Parser)]
#[command(name = "asymprod", version, about = "Products of S-function quotients: evaluation, asymptotics and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: ExperimentArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// One row per scheduled n: n,m,log_D,D,log_K,K,E
    Eval,
    /// Growth exponent, K_n asymptote constant and upper bound for C
    Asymptote,
    /// Extrapolated lim E_n and the constant C as JSON; series CSV to --out
    Estimate,
    /// Run a check suite; exit 1 if any check fails
    Check,
    /// Fit |E_n - E_inf| under each decay model and rank them
    Convergence,
    /// List catalog functions
    Catalog,
}

/// Flags mirror the config-file keys; flags win over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentArgs {
    /// key=value experiment file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Catalog name or add(f,g) | mul(f,g) | scale(f,s) | deriv(s)
    #[arg(long, global = true)]
    pub function: Option<String>,
    #[arg(long = "a", global = true)]
    pub a: Option<String>,
    #[arg(long = "b", global = true)]
    pub b: Option<String>,
    #[arg(long = "c", global = true)]
    pub c: Option<String>,
    /// Argument scale (default 1)
    #[arg(long = "d", global = true)]
    pub d: Option<String>,
    /// Cutoff; omit or pass `auto` to select it from the function
    #[arg(long, global = true)]
    pub eps: Option<String>,
    /// First n of the geometric schedule (default 1000)
    #[arg(long, global = true)]
    pub n0: Option<String>,
    /// Schedule ratio (default 2)
    #[arg(long, global = true)]
    pub ratio: Option<String>,
    /// Number of schedule points (default 11)
    #[arg(long, global = true)]
    pub count: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// csv or json
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// lower_bound, monotone, logconcavity, upper_bound or all
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Skip the eps <= c d compatibility condition
    #[arg(long, global = true)]
    pub compat_override: bool,
    /// Worker threads (falls back to ASYMPROD_THREADS)
    #[arg(long, global = true)]
    pub threads: Option<String>,
    /// Where `convergence` writes its residual table
    #[arg(long, global = true)]
    pub residuals: Option<String>,
    /// Read an n,E series instead of computing one (convergence)
    #[arg(long, global = true, hide = true)]
    pub series_file: Option<String>,
}

impl ExperimentArgs {
    /// File entries overlaid by flags, then the thread fallback.
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut raw = match &self.config {
            Some(path) => read_config_file(path)?,
            None => RawConfig::new(),
        };
        let flags = [
            ("function", &self.function),
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("d", &self.d),
            ("eps", &self.eps),
            ("n0", &self.n0),
            ("ratio", &self.ratio),
            ("count", &self.count),
            ("out", &self.out),
            ("format", &self.format),
            ("suite", &self.suite),
            ("threads", &self.threads),
            ("residuals", &self.residuals),
            ("series_file", &self.series_file),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                raw.insert(key.to_owned(), v.clone());
            }
        }
        if self.compat_override {
            raw.insert("compat_override".into(), "true".into());
        }
        if !raw.contains_key("threads") {
            if let Ok(v) = std::env::var(THREADS_ENV) {
                raw.insert("threads".into(), v);
            }
        }
        ExperimentConfig::from_raw(&raw)
    }
}

fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = threads {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = cli.args.resolve()?;
    configure_threads(cfg.threads)?;
    match cli.command {
        Command::Eval => commands::cmd_eval(cfg, out),
        Command::Asymptote => commands::cmd_asymptote(cfg, out),
        Command::Estimate => commands::cmd_estimate(cfg, out),
        Command::Check => commands::cmd_check(cfg, out),
        Command::Convergence => commands::cmd_convergence(cfg, out),
        Command::Catalog => commands::cmd_catalog(cfg, out),
    }
}

/// Parses `args` (including the program name) and runs; errors go to `err`.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{e}");
            return if code == 0 { EXIT_OK } else { EXIT_CONFIG };
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
