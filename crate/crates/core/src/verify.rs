//! The full identity suite, collected into one [`VerificationReport`].
//!
//! Checks that depend on the coupling run at the requested λ (and are
//! skipped where they have no meaning, e.g. the real-branch checks for
//! |λ| ≥ 1/π). The remaining checks run at fixed couplings.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fredholm::{build_grid, residual_of_closed_form, solve_j_nystrom, solve_phi_nystrom, THRESHOLD_MARGIN};
use crate::grid::QuadGrid;
use crate::model::{self, Coupling, Mu2Policy, LAMBDA_CRITICAL};
use crate::operator::{all_eigenvalues, build_kernel, cosh_norm_check, operator_grid, top_eigenvalue};
use crate::perturb;
use crate::report::VerificationReport;
use crate::specfun::{gamma, hlog, hyp2f1, hyp2f1_deriv, hyp2f1_real, sin_pi, Word};
use crate::twopoint::{self, TwoPointConfig};

/// Parameters of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub lambda: f64,
    pub mu2_policy: Mu2Policy,
    /// Nyström grid size for the λ-dependent Fredholm checks.
    pub grid_n: usize,
    pub twopoint: TwoPointConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            lambda: 0.1,
            mu2_policy: Mu2Policy::Ribbon,
            grid_n: 400,
            twopoint: TwoPointConfig::default(),
        }
    }
}

struct Suite {
    report: VerificationReport,
}

impl Suite {
    fn check<F: FnOnce() -> Result<f64>>(&mut self, name: impl Into<String>, tol: f64, f: F) {
        let name = name.into();
        match f() {
            Ok(err) => self.report.push(name, err, tol),
            Err(_) => self.report.push_failure(name, tol),
        }
    }

    /// A yes/no property recorded as error 0 or 1 against tolerance 0.
    fn holds<F: FnOnce() -> Result<bool>>(&mut self, name: impl Into<String>, f: F) {
        self.check(name, 0.0, || f().map(|ok| if ok { 0.0 } else { 1.0 }))
    }
}

fn max_of<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    it.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

/// Fractional parts of k·(golden ratio): a fixed, well-spread sample.
fn spread(k: usize) -> f64 {
    (k as f64 * 0.618_033_988_749_894_9).fract()
}

const AXIS: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0];

/// Runs every identity check and returns the report.
pub fn verify_all(opts: &VerifyOptions) -> VerificationReport {
    let mut s = Suite {
        report: VerificationReport::new(),
    };
    specfun_checks(&mut s);
    match Coupling::new(opts.lambda, opts.mu2_policy) {
        Ok(c) => {
            model_checks(&mut s, &c);
            fredholm_checks(&mut s, &c, opts.grid_n);
            twopoint_checks(&mut s, &c, &opts.twopoint);
        }
        Err(_) => s.report.push_failure(format!("coupling lambda={}", opts.lambda), 0.0),
    }
    fredholm_fixed_checks(&mut s);
    twopoint_fixed_checks(&mut s, &opts.twopoint);
    perturb_checks(&mut s);
    operator_checks(&mut s);
    s.report
}

fn specfun_checks(s: &mut Suite) {
    for a in [0.5, 1.0, 5.0] {
        s.check(format!("hlog shuffle a={a}"), 1e-9, || {
            let one = hlog(a, &Word::new(vec![-1]))?;
            let two = hlog(a, &Word::new(vec![-1, -1]))?;
            Ok((one * one - 2.0 * two).abs())
        });
    }
    for alpha in [-0.4, 0.1, 0.45] {
        s.check(format!("2F1 Euler transform alpha={alpha}"), 1e-9, || {
            max_of((0..=100).map(|k| {
                let x = k as f64;
                let lhs = (1.0 + x) * hyp2f1_real(1.0 + alpha, 2.0 - alpha, 2.0, -x)?;
                let rhs = hyp2f1_real(alpha, 1.0 - alpha, 2.0, -x)?;
                Ok((lhs - rhs).abs() / rhs.abs())
            }))
        });
    }
    s.check("2F1 derivative rule", 1e-6, || {
        let (a, b, c) = (C64::new(0.3, 0.0), C64::new(0.7, 0.0), C64::new(2.0, 0.0));
        max_of((0..10).map(|k| {
            let z = C64::new(-3.0 + 0.6 * k as f64, 0.2 * spread(k + 1));
            let h = 1e-5;
            let fd = (hyp2f1(a, b, c, z + h)? - hyp2f1(a, b, c, z - h)?) / (2.0 * h);
            Ok((fd - hyp2f1_deriv(a, b, c, z, None)?).norm())
        }))
    });
    for z in [C64::new(0.1, 0.0), C64::new(0.5, 0.3)] {
        s.check(format!("gamma reflection z={z}"), 1e-12, || {
            let lhs = gamma(z)? * gamma(1.0 - z)?;
            let rhs = PI / sin_pi(z);
            Ok((lhs - rhs).norm() / rhs.norm())
        });
    }
}

fn model_checks(s: &mut Suite, c: &Coupling) {
    let l = c.lambda;
    s.check(format!("sine branch lambda={l}"), 1e-12, || {
        Ok((sin_pi(c.alpha) - C64::new(l * PI, 0.0)).norm())
    });
    if !c.is_subcritical() {
        return;
    }
    s.check(format!("intc constant lambda={l}"), 1e-7, || {
        Ok((model::intc_constant(c)? - c.c_lambda).abs())
    });
    s.check(format!("condmu integral lambda={l}"), 1e-7, || {
        Ok((model::condmu_integral(c)? - 0.5 / (c.c_lambda * c.mu2)).abs())
    });
    if c.mu2_policy == Mu2Policy::Ribbon && l != 0.0 {
        s.check(format!("J(-mu^2) = -1 lambda={l}"), 1e-8, || {
            Ok((model::j_real(c, -c.mu2)? + 1.0).abs())
        });
        s.check(format!("J^-1(-1) = -mu^2 lambda={l}"), 1e-8, || {
            Ok((model::j_inverse(c, -1.0)? + c.mu2).abs())
        });
    }
    if l != 0.0 {
        s.check(format!("small-x law lambda={l}"), 1e-6, || {
            Ok((model::small_x_limit(c)? - 0.5 / (c.c_lambda * c.mu2)).abs())
        });
    }
    s.check("lemma bounds 50x20 grid", 0.0, || {
        let mut violations = 0usize;
        for i in 0..50 {
            let x = 100.0 * i as f64 / 49.0;
            for k in 0..20 {
                let alpha = -0.45 + 0.9 * k as f64 / 19.0;
                let b = model::lemma_bounds(alpha, x)?;
                let slack = 1e-12 * b.value.abs();
                if b.value < b.lower - slack || b.value > b.upper + slack {
                    violations += 1;
                }
            }
        }
        Ok(violations as f64)
    });
    s.check(format!("phi ODE residual lambda={l}"), 1e-6, || {
        max_of((0..=50).map(|k| Ok(model::ode_residual(c, k as f64)?.abs() * (1.0 + k as f64))))
    });
    s.holds(format!("J monotone lambda={l}"), || model::j_is_monotone(c, 100.0, 1000));
    let grid = QuadGrid::log_default(400, c.mu2);
    match model::stieltjes_identity_check(c, &[0.5, 1.0, 10.0], &grid) {
        Ok(r) => s.report.extend(r),
        Err(_) => s.report.push_failure(format!("stieltjes lambda={l}"), 1e-7),
    }
    if l != 0.0 {
        s.check(format!("spectral dimension lambda={l}"), 0.01, || {
            let (lo, hi) = model::dimension_fit_window(c);
            let est = model::spectral_dimension_estimate(c, lo, hi, 40)?;
            Ok((est - model::spectral_dimension(c)?).abs())
        });
    }
}

fn fredholm_checks(s: &mut Suite, c: &Coupling, n: usize) {
    let l = c.lambda;
    if !c.is_subcritical() || l <= LAMBDA_CRITICAL + THRESHOLD_MARGIN {
        return;
    }
    let grid = QuadGrid::log_default(n, c.mu2);
    s.check(format!("Nystrom J vs closed form lambda={l} n={n}"), 1e-5, || {
        let sol = solve_j_nystrom(l, c.mu2, &grid)?;
        max_of(
            grid.nodes
                .iter()
                .zip(&sol.values)
                .map(|(&t, &v)| Ok((v - model::j_real(c, t)?).abs() / (1.0 + t))),
        )
    });
    s.check(format!("closed form residual lambda={l} n={n}"), 1e-6, || {
        residual_of_closed_form(c, &grid)
    });
    let phi_grid = QuadGrid::log_default(n, 1.0);
    match solve_phi_nystrom(l, &phi_grid) {
        Ok(p) => {
            s.check(format!("Nystrom c_lambda lambda={l}"), 1e-6, || {
                Ok((p.c_value.unwrap_or(f64::NAN) - c.c_lambda).abs())
            });
            s.check(format!("Nystrom phi(0) = 1 lambda={l}"), 1e-7, || {
                Ok((p.interpolate(0.0) - 1.0).abs())
            });
            s.check(format!("J and phi forms agree lambda={l}"), 1e-6, || {
                let sol = solve_j_nystrom(l, c.mu2, &phi_grid.rescaled(c.mu2))?;
                Ok(p.values
                    .iter()
                    .zip(sol.density())
                    .map(|(a, b)| (a - c.mu2 * b).abs())
                    .fold(0.0, f64::max))
            });
        }
        Err(_) => s.report.push_failure(format!("Nystrom phi lambda={l}"), 1e-6),
    }
}

fn fredholm_fixed_checks(s: &mut Suite) {
    let l = 0.2;
    let c = match Coupling::ribbon(l) {
        Ok(c) => c,
        Err(_) => return,
    };
    s.holds("Nystrom refinement monotone lambda=0.2", || {
        let xs: Vec<f64> = (0..32).map(|k| 10f64.powf(-3.0 + 8.0 * k as f64 / 31.0)).collect();
        let runs = [100, 200, 400, 800]
            .iter()
            .map(|&n| Ok(solve_j_nystrom(l, c.mu2, &build_grid(n, c.mu2))?.interpolate_many(&xs)))
            .collect::<Result<Vec<_>>>()?;
        let d: Vec<f64> = runs
            .windows(2)
            .map(|p| {
                xs.iter()
                    .zip(p[0].iter().zip(&p[1]))
                    .map(|(x, (a, b))| (a - b).abs() / (1.0 + x))
                    .fold(0.0, f64::max)
            })
            .collect();
        Ok(d[0] > d[1] && d[1] > d[2])
    });
    s.check("Nystrom decay t*rho at last node lambda=0.2", 1e-2, || {
        let sol = solve_j_nystrom(l, c.mu2, &QuadGrid::log_default(800, c.mu2))?;
        let t = sol.grid.nodes.last().copied().unwrap_or(0.0);
        Ok(t * sol.density().last().copied().unwrap_or(f64::NAN))
    });
}

fn twopoint_checks(s: &mut Suite, c: &Coupling, cfg: &TwoPointConfig) {
    let l = c.lambda;
    if !c.is_subcritical() {
        return;
    }
    match twopoint::g_grid(c, &AXIS, &AXIS, cfg) {
        Ok(g) => {
            s.report.push(format!("G(0,0) = 1 lambda={l}"), (g[0][0] - 1.0).abs(), 1e-8);
            let mut asym = 0.0f64;
            let mut positive = true;
            for i in 0..AXIS.len() {
                for k in 0..AXIS.len() {
                    asym = asym.max((g[i][k] - g[k][i]).abs());
                    positive &= g[i][k] > 0.0;
                }
            }
            s.report.push(format!("G symmetry 6x6 lambda={l}"), asym, 1e-6);
            s.report.push(format!("G positive lambda={l}"), if positive { 0.0 } else { 1.0 }, 0.0);
        }
        Err(_) => s.report.push_failure(format!("G grid lambda={l}"), 1e-6),
    }
    if l != 0.0 {
        s.check(format!("N integrand parity lambda={l}"), 1e-10, || {
            max_of((1..=20).map(|k| {
                let t = 0.01 + 50.0 * spread(k);
                let x = 10.0 * spread(k + 20);
                let y = 10.0 * spread(k + 40);
                Ok((twopoint::n_integrand(c, t, x, y)? - twopoint::n_integrand(c, -t, x, y)?).abs())
            }))
        });
    }
}

fn twopoint_fixed_checks(s: &mut Suite, cfg: &TwoPointConfig) {
    s.check("G free theory 6x6", 1e-8, || {
        let c = Coupling::ribbon(0.0)?;
        let g = twopoint::g_grid(&c, &AXIS, &AXIS, cfg)?;
        let mut m = 0.0f64;
        for (i, x) in AXIS.iter().enumerate() {
            for (k, y) in AXIS.iter().enumerate() {
                m = m.max((g[i][k] - 1.0 / (1.0 + x + y)).abs());
            }
        }
        Ok(m)
    });
    let small = 1e-4;
    s.check("G first order lambda=1e-4", 0.05, || {
        let c = Coupling::ribbon(small)?;
        max_of([(1.0, 2.0), (0.5, 5.0), (10.0, 0.0)].iter().map(|&(x, y)| {
            let g = twopoint::g_value(&c, x, y, cfg)?;
            let coeff = (g * (1.0 + x + y) - 1.0) / small;
            Ok((coeff / twopoint::g_first_order(x, y) - 1.0).abs())
        }))
    });
    s.check("tau first order lambda=1e-4", 1e-2, || {
        let c = Coupling::ribbon(small)?;
        max_of([0.5, 1.0, 5.0].iter().map(|&p| {
            let t = twopoint::tau(&c, 0.0, p, cfg)?;
            Ok((t / twopoint::tau_first_order(small, 0.0, p) - 1.0).abs())
        }))
    });
    s.check("Im I(p+i0)/(lambda pi p) = 1 lambda=0.1", 1e-6, || {
        let c = Coupling::ribbon(0.1)?;
        let (v, _) = model::i_func_limit(&c, 2.0, &cfg.eps_seq)?;
        Ok((v.im / (0.1 * PI * 2.0) - 1.0).abs())
    });
}

fn perturb_checks(s: &mut Suite) {
    s.check("mu2 order-10 remainder vs next term lambda=0.05", 0.15, || {
        let l: f64 = 0.05;
        let d = perturb::mu2_closed(l) - perturb::mu2_series(l, 10)?;
        Ok((d / (perturb::mu2_coefficient(11) * l.powi(11)) - 1.0).abs())
    });
    let alpha: f64 = 0.2;
    s.check("f partial sum vs closed form", alpha.powi(10) * 10.0, || {
        let (f, _) = perturb::f_g_partial(1.0, alpha, 5)?;
        Ok((f - perturb::f_closed(1.0, alpha)?).abs())
    });
    s.check("g partial sum vs closed form", alpha.powi(10) * 10.0, || {
        let (_, g) = perturb::f_g_partial(1.0, alpha, 5)?;
        Ok((g - perturb::g_closed(1.0, alpha)?).abs())
    });
    s.check("f/g ODE residuals", 1e-8, || {
        max_of([(2.0, 0.3), (0.1, 0.45), (10.0, -0.4), (0.5, 0.0)].iter().map(|&(x, a)| {
            let (rf, rg) = perturb::fg_ode_residual(x, a)?;
            Ok(rf.abs().max(rg.abs()))
        }))
    });
    for p in [1.0, 5.0] {
        s.check(format!("second-order integral p={p}"), 1e-7, || {
            Ok((perturb::second_order_integral(p)? - perturb::second_order_closed(p)?).abs())
        });
    }
    s.check("phi resummation lambda=0.05 x=1", 1e-8, || {
        perturb::phi_alpha_resummation_check(&Coupling::ribbon(0.05)?, 1.0, 4)
    });
    for l in [0.01, 0.1, 0.3] {
        s.check(format!("phi(0) identity lambda={l}"), 1e-10, || {
            Ok((perturb::phi_origin_identity(l)? - 1.0).abs())
        });
    }
}

fn operator_checks(s: &mut Suite) {
    let tops = [100, 200, 400]
        .iter()
        .map(|&n| top_eigenvalue(&build_kernel(0.0, &operator_grid(n))?))
        .collect::<Result<Vec<f64>>>();
    match tops {
        Ok(t) => {
            let outside = if t[2] > PI {
                t[2] - PI
            } else {
                (PI - 0.05 - t[2]).max(0.0)
            };
            s.report.push("top eigenvalue n=400 in [pi-0.05, pi]", outside, 0.0);
            let mono = t[0] <= t[1] && t[1] <= t[2];
            s.report.push("top eigenvalue monotone in n", if mono { 0.0 } else { 1.0 }, 0.0);
            s.check("threshold consistency", 0.0, || {
                let above = 1.0 + (LAMBDA_CRITICAL + 0.01) * t[2] > 0.0;
                let below = 1.0 + (LAMBDA_CRITICAL - 0.01) * t[2] < 0.0;
                Ok(if above && below { 0.0 } else { 1.0 })
            });
        }
        Err(_) => s.report.push_failure("top eigenvalue", 0.05),
    }
    for mu in [0.0, 0.5, 1.0] {
        s.check(format!("spectrum in [0, pi] mu={mu}"), 0.0, || {
            let ev = all_eigenvalues(&build_kernel(mu, &operator_grid(400))?);
            let lo = (-1e-8 - ev[0]).max(0.0);
            let hi = (ev[ev.len() - 1] - PI - 0.01).max(0.0);
            Ok(lo.max(hi))
        });
    }
    s.check("kernel monotone in mu", 0.0, || {
        let g = operator_grid(100);
        let k0 = build_kernel(0.0, &g)?;
        let k1 = build_kernel(1.0, &g)?;
        Ok((&k1.entries - &k0.entries).max().max(0.0))
    });
    s.check("top eigenvalue independent of mu n=800", 1e-3, || {
        let g = operator_grid(800);
        let t = [0.5, 1.0, 2.0]
            .iter()
            .map(|&mu| top_eigenvalue(&build_kernel(mu, &g)?))
            .collect::<Result<Vec<f64>>>()?;
        let hi = t.iter().cloned().fold(f64::MIN, f64::max);
        let lo = t.iter().cloned().fold(f64::MAX, f64::min);
        Ok(hi - lo)
    });
    s.check("cosh integral t_max=50", 1e-10, || Ok((cosh_norm_check(50.0)? - PI).abs()));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_is_in_unit_interval() {
        assert!((1..100).all(|k| (0.0..1.0).contains(&spread(k))));
    }
}
