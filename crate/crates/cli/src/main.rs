//! `moyal-phi4`: tables and verification reports for the planar two-point
//! function of the self-dual Φ⁴ model.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numerical failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons deliberately reject NaN

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use config::{expand_range, Command, ConfigError, Form, Format, GridKind, RunConfig};

const THREADS_ENV: &str = "MOYAL_PHI4_THREADS";

#[derive(Debug, Parser)]
#[command(name = "moyal-phi4", version, about = "Exact planar two-point function of self-dual Phi^4 on Moyal space")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Coupling constant, must exceed -1/pi.
    #[arg(long, global = true, default_value_t = 0.1, allow_negative_numbers = true)]
    lambda: f64,

    /// Mass policy: ribbon, unit, explicit:<value> or a bare number.
    #[arg(long, global = true, default_value = "ribbon")]
    mu2_policy: String,

    /// Nyström grid size (at least 16).
    #[arg(long, global = true, default_value_t = 400)]
    grid_n: usize,

    /// Output format; `verify` defaults to json, everything else to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// JSON object whose keys override the corresponding settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Absolute tolerance of the two-point integrals.
    #[arg(long, global = true, default_value_t = 1e-10)]
    abs_tol: f64,

    /// Relative tolerance of the two-point integrals.
    #[arg(long, global = true, default_value_t = 1e-10)]
    rel_tol: f64,

    /// Initial truncation of the two-point t-integral, in units of mu^2.
    #[arg(long, global = true, default_value_t = 1e3)]
    t_max: f64,

    /// Epsilon sequence for the boundary limit in `tau`.
    #[arg(long, global = true, value_delimiter = ',', default_value = "1e-4,1e-5,1e-6")]
    eps_seq: Vec<f64>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// J(x), J'(x) and the density at real x.
    EvalJ {
        /// Comma-separated x values.
        #[arg(long = "x", value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
        /// Linear range MIN,MAX,COUNT.
        #[arg(long)]
        x_range: Option<String>,
        /// Logarithmic range MIN,MAX,COUNT.
        #[arg(long)]
        x_logrange: Option<String>,
    },
    /// N(x,y) and G(x,y) on the tensor grid of x and y values.
    EvalG {
        #[arg(long = "x", value_delimiter = ',')]
        x: Vec<f64>,
        #[arg(long)]
        x_range: Option<String>,
        #[arg(long)]
        x_logrange: Option<String>,
        #[arg(long = "y", value_delimiter = ',')]
        y: Vec<f64>,
        #[arg(long)]
        y_range: Option<String>,
        #[arg(long)]
        y_logrange: Option<String>,
    },
    /// The angle τ_a(p) and its first-order approximation.
    Tau {
        #[arg(long = "p", value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long)]
        p_range: Option<String>,
        #[arg(long)]
        p_logrange: Option<String>,
        /// External momentum a.
        #[arg(long, default_value_t = 0.0)]
        a: f64,
    },
    /// Nyström solution of the linear integral equation for J or φ.
    SolveFredholm {
        #[arg(long, value_enum, default_value = "j")]
        form: Form,
        #[arg(long, value_enum, default_value = "log")]
        grid: GridKind,
    },
    /// Eigenvalues of the symmetrised kernel A_μ.
    Spectrum {
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        /// List every eigenvalue instead of the largest one.
        #[arg(long)]
        all: bool,
    },
    /// Closed-form spectral dimension and the log-log slope estimate.
    Dimension,
    /// Partial sums of the weak-coupling series of μ².
    Series {
        #[arg(long, default_value_t = 10)]
        max_order: usize,
    },
    /// Runs every identity check and reports the measured errors.
    Verify,
}

fn collect(explicit: Vec<f64>, lin: Option<String>, log: Option<String>) -> Result<Vec<f64>, ConfigError> {
    let mut v = explicit;
    if let Some(s) = lin {
        v.extend(expand_range(&s, false)?);
    }
    if let Some(s) = log {
        v.extend(expand_range(&s, true)?);
    }
    Ok(v)
}

fn build_config(cli: Cli) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig {
        command: Command::Verify,
        lambda: cli.lambda,
        mu2_policy: cli.mu2_policy,
        grid_n: cli.grid_n,
        grid: GridKind::Log,
        form: Form::J,
        abs_tol: cli.abs_tol,
        rel_tol: cli.rel_tol,
        t_max: cli.t_max,
        eps_seq: cli.eps_seq,
        xs: Vec::new(),
        ys: Vec::new(),
        ps: Vec::new(),
        a: 0.0,
        mu: 0.0,
        all_eigenvalues: false,
        max_order: 10,
        output: cli.output,
        format: Format::Csv,
    };
    cfg.command = match cli.command {
        Cmd::EvalJ { x, x_range, x_logrange } => {
            cfg.xs = collect(x, x_range, x_logrange)?;
            Command::EvalJ
        }
        Cmd::EvalG {
            x,
            x_range,
            x_logrange,
            y,
            y_range,
            y_logrange,
        } => {
            cfg.xs = collect(x, x_range, x_logrange)?;
            cfg.ys = collect(y, y_range, y_logrange)?;
            Command::EvalG
        }
        Cmd::Tau { p, p_range, p_logrange, a } => {
            cfg.ps = collect(p, p_range, p_logrange)?;
            cfg.a = a;
            Command::Tau
        }
        Cmd::SolveFredholm { form, grid } => {
            cfg.form = form;
            cfg.grid = grid;
            Command::SolveFredholm
        }
        Cmd::Spectrum { mu, all } => {
            cfg.mu = mu;
            cfg.all_eigenvalues = all;
            Command::Spectrum
        }
        Cmd::Dimension => Command::Dimension,
        Cmd::Series { max_order } => {
            cfg.max_order = max_order;
            Command::Series
        }
        Cmd::Verify => Command::Verify,
    };
    cfg.format = cli.format.unwrap_or(if cfg.command == Command::Verify {
        Format::Json
    } else {
        Format::Csv
    });
    if let Some(path) = cli.config {
        let command = cfg.command;
        cfg = cfg.apply_file(&path)?;
        if cfg.command != command {
            return Err(ConfigError(format!(
                "config file selects command {:?} but {:?} was invoked",
                cfg.command, command
            )));
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn init_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ConfigError(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ConfigError(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match init_threads().and_then(|()| build_config(cli)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(commands::EXIT_CONFIG);
        }
    };
    match commands::run(&cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
