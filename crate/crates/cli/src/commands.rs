//! One function per subcommand, each building a [`Table`].

use moyal_phi4::fredholm::{build_grid, solve_j_nystrom, solve_phi_nystrom, NystromSolution};
use moyal_phi4::model::{self, Coupling};
use moyal_phi4::twopoint::{self, TwoPointConfig};
use moyal_phi4::verify::{verify_all, VerifyOptions};
use moyal_phi4::{operator, perturb, Complex64, Error, QuadGrid};

use crate::config::{Command, Form, GridKind, RunConfig};
use crate::output::{Cell, Table};

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

/// Number of points in the log-log slope fit.
const DIMENSION_FIT_POINTS: usize = 40;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_)
            | Error::Policy(_)
            | Error::Threshold(_)
            | Error::Order(_)
            | Error::BranchCut(_)
            | Error::Pole { .. } => EXIT_CONFIG,
            _ => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Runs the configured command and writes its table; returns the exit code.
pub fn run(cfg: &RunConfig) -> Result<u8, Failure> {
    let (table, code) = match cfg.command {
        Command::Verify => verify(cfg)?,
        cmd => {
            let table = match cmd {
                Command::EvalJ => eval_j(cfg)?,
                Command::EvalG => eval_g(cfg)?,
                Command::Tau => tau(cfg)?,
                Command::SolveFredholm => solve_fredholm(cfg)?,
                Command::Spectrum => spectrum(cfg)?,
                Command::Dimension => dimension(cfg)?,
                Command::Series => series(cfg)?,
                Command::Verify => unreachable!(),
            };
            (table, 0)
        }
    };
    table
        .write(cfg.format, cfg.output.as_deref())
        .map_err(|e| Failure {
            code: EXIT_CONFIG,
            message: format!("cannot write output: {e}"),
        })?;
    Ok(code)
}

fn coupling(cfg: &RunConfig) -> Result<Coupling, Failure> {
    let policy = cfg.mu2().map_err(|e| Failure {
        code: EXIT_CONFIG,
        message: e.0,
    })?;
    Ok(Coupling::new(cfg.lambda, policy)?)
}

fn two_point(cfg: &RunConfig) -> TwoPointConfig {
    TwoPointConfig {
        t_max: cfg.t_max,
        abs_tol: cfg.abs_tol,
        rel_tol: cfg.rel_tol,
        eps_seq: cfg.eps_seq.clone(),
    }
}

/// Table with the metadata shared by every command.
fn table(cfg: &RunConfig, c: Option<&Coupling>, columns: &[&str]) -> Table {
    let mut t = Table::new(columns);
    let name = serde_json::to_value(cfg.command).ok().and_then(|v| v.as_str().map(String::from));
    t.meta("command", name.unwrap_or_default());
    t.meta("version", env!("CARGO_PKG_VERSION"));
    t.meta("lambda", cfg.lambda);
    t.meta("mu2_policy", cfg.mu2_policy.as_str());
    if let Some(c) = c {
        t.meta("mu2", c.mu2);
        t.meta("alpha_re", c.alpha.re);
        t.meta("alpha_im", c.alpha.im);
        t.meta("c_lambda", c.c_lambda);
    }
    t
}

/// Value or NaN when x lies outside the function's domain.
fn or_nan(r: moyal_phi4::Result<f64>) -> Result<f64, Failure> {
    match r {
        Ok(v) => Ok(v),
        Err(Error::Domain(_)) => Ok(f64::NAN),
        Err(e) => Err(e.into()),
    }
}

fn eval_j(cfg: &RunConfig) -> Result<Table, Failure> {
    let c = coupling(cfg)?;
    let mut t = table(cfg, Some(&c), &["x", "j", "j_prime", "rho_tilde"]);
    for &x in &cfg.xs {
        let j = model::j_real(&c, x)?;
        let jp = model::j_prime(&c, Complex64::new(x, 0.0))?.re;
        let rho = or_nan(model::rho_tilde(&c, x))?;
        t.push(vec![x.into(), j.into(), jp.into(), rho.into()]);
    }
    Ok(t)
}

fn eval_g(cfg: &RunConfig) -> Result<Table, Failure> {
    let c = coupling(cfg)?;
    let n = twopoint::n_grid(&c, &cfg.xs, &cfg.ys, &two_point(cfg))?;
    let mut t = table(cfg, Some(&c), &["x", "y", "n", "g"]);
    for (row, &x) in n.iter().zip(&cfg.xs) {
        for (&nv, &y) in row.iter().zip(&cfg.ys) {
            let g = c.mu2 * nv.exp() / (c.mu2 + x + y);
            t.push(vec![x.into(), y.into(), nv.into(), g.into()]);
        }
    }
    Ok(t)
}

fn tau(cfg: &RunConfig) -> Result<Table, Failure> {
    let c = coupling(cfg)?;
    let tp = two_point(cfg);
    let mut t = table(cfg, Some(&c), &["a", "p", "tau", "tau_first_order"]);
    t.meta("eps_seq", format!("{:?}", cfg.eps_seq));
    for &p in &cfg.ps {
        let v = twopoint::tau(&c, cfg.a, p, &tp)?;
        let first = twopoint::tau_first_order(cfg.lambda, cfg.a, p);
        t.push(vec![cfg.a.into(), p.into(), v.into(), first.into()]);
    }
    Ok(t)
}

fn solve_fredholm(cfg: &RunConfig) -> Result<Table, Failure> {
    let grid_for = |scale: f64| match cfg.grid {
        GridKind::Log => QuadGrid::log_default(cfg.grid_n, scale),
        GridKind::Rational => build_grid(cfg.grid_n, scale),
    };
    let (c, sol): (Option<Coupling>, NystromSolution) = match cfg.form {
        Form::J => {
            let c = coupling(cfg)?;
            let s = solve_j_nystrom(c.lambda, c.mu2, &grid_for(c.mu2))?;
            (Some(c), s)
        }
        // the φ equation depends on λ only
        Form::Phi => (
            model::coupling_from_lambda(cfg.lambda, model::Mu2Policy::Unit).ok(),
            solve_phi_nystrom(cfg.lambda, &grid_for(1.0))?,
        ),
    };
    let closed_name = match cfg.form {
        Form::J => "j_closed",
        Form::Phi => "phi_closed",
    };
    let value_name = match cfg.form {
        Form::J => "j",
        Form::Phi => "phi",
    };
    let mut t = table(cfg, c.as_ref(), &["t", "weight", value_name, "density", closed_name]);
    t.meta("form", format!("{:?}", cfg.form).to_lowercase().as_str());
    t.meta("grid", format!("{:?}", cfg.grid).to_lowercase().as_str());
    t.meta("grid_n", cfg.grid_n);
    t.meta("residual_max", sol.residual_max);
    if let Some(cv) = sol.c_value {
        t.meta("c_value", cv);
    }
    for (i, (&node, &w)) in sol.grid.nodes.iter().zip(&sol.grid.weights).enumerate() {
        let closed = match (&cfg.form, &c) {
            (Form::J, Some(c)) => or_nan(model::j_real(c, node))?,
            (Form::Phi, Some(c)) if c.is_subcritical() => or_nan(model::phi(c, node))?,
            _ => f64::NAN,
        };
        t.push(vec![
            node.into(),
            w.into(),
            sol.values[i].into(),
            sol.density()[i].into(),
            closed.into(),
        ]);
    }
    Ok(t)
}

fn spectrum(cfg: &RunConfig) -> Result<Table, Failure> {
    let k = operator::build_kernel(cfg.mu, &operator::operator_grid(cfg.grid_n))?;
    let mut t;
    if cfg.all_eigenvalues {
        t = table(cfg, None, &["index", "eigenvalue"]);
        for (i, ev) in operator::all_eigenvalues(&k).into_iter().enumerate() {
            t.push(vec![i.into(), ev.into()]);
        }
    } else {
        t = table(cfg, None, &["mu", "n", "top_eigenvalue", "pi_minus_top"]);
        let top = operator::top_eigenvalue(&k)?;
        t.push(vec![
            cfg.mu.into(),
            cfg.grid_n.into(),
            top.into(),
            (std::f64::consts::PI - top).into(),
        ]);
    }
    t.meta("mu", cfg.mu);
    t.meta("grid_n", cfg.grid_n);
    t.meta("asymmetry", k.asymmetry());
    Ok(t)
}

fn dimension(cfg: &RunConfig) -> Result<Table, Failure> {
    let c = coupling(cfg)?;
    let closed = model::spectral_dimension(&c)?;
    let (lo, hi) = model::dimension_fit_window(&c);
    let fit = model::spectral_dimension_estimate(&c, lo, hi, DIMENSION_FIT_POINTS)?;
    let mut t = table(
        cfg,
        Some(&c),
        &["lambda", "alpha", "d_closed", "d_fit", "fit_x_min", "fit_x_max"],
    );
    t.push(vec![
        cfg.lambda.into(),
        c.alpha.re.into(),
        closed.into(),
        fit.into(),
        lo.into(),
        hi.into(),
    ]);
    Ok(t)
}

fn series(cfg: &RunConfig) -> Result<Table, Failure> {
    let closed = perturb::mu2_closed(cfg.lambda);
    let mut t = table(cfg, None, &["order", "coefficient", "partial_sum", "closed", "difference"]);
    for k in 0..=cfg.max_order {
        let s = perturb::mu2_series(cfg.lambda, k)?;
        t.push(vec![
            k.into(),
            perturb::mu2_coefficient(k).into(),
            s.into(),
            closed.into(),
            (closed - s).into(),
        ]);
    }
    Ok(t)
}

fn verify(cfg: &RunConfig) -> Result<(Table, u8), Failure> {
    let opts = VerifyOptions {
        lambda: cfg.lambda,
        mu2_policy: coupling(cfg)?.mu2_policy,
        grid_n: cfg.grid_n,
        twopoint: two_point(cfg),
    };
    let report = verify_all(&opts);
    let mut t = table(cfg, None, &["name", "measured_error", "tolerance", "passed"]);
    t.meta("checks", report.entries.len());
    t.meta("failures", report.failures().count());
    t.meta("all_passed", report.all_passed());
    for e in &report.entries {
        t.push(vec![
            Cell::from(e.name.as_str()),
            e.measured_error.into(),
            e.tolerance.into(),
            e.passed.into(),
        ]);
    }
    let code = if report.all_passed() { 0 } else { EXIT_VERIFY };
    Ok((t, code))
}
