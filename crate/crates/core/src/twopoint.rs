//! The planar two-point function
//!
//! ```text
//! G(x,y) = μ² exp(N(x,y)) / (μ²+x+y)
//! ```
//!
//! where N(x,y) is a line integral over w = -μ²/2 ± it of logarithms of
//! x - J(w) and y - J(w), with the free-theory combination subtracted. For
//! real parameters J(w̄) is the conjugate of J(w), so the integrand at -t is
//! the conjugate of the one at t and N = 2∫₀^∞ Re b(t) dt.
//!
//! Also the angle function τ_a(p) from the boundary values of I.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{non_convergence, Error, Result};
use crate::model::{i_func_limit, j, j_prime, Coupling};
use crate::quad::{integrate, QuadConfig};

/// Controls the t-integral of N and the ε-limit of τ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPointConfig {
    /// Initial truncation of the t-integral, in units of μ².
    pub t_max: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub eps_seq: Vec<f64>,
}

impl Default for TwoPointConfig {
    fn default() -> Self {
        TwoPointConfig {
            t_max: 1e3,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            eps_seq: vec![1e-4, 1e-5, 1e-6],
        }
    }
}

impl TwoPointConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0 && self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain("t_max and tolerances must be positive".into()));
        }
        if self.eps_seq.is_empty() || self.eps_seq.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::Domain("epsilon sequence must be positive and non-empty".into()));
        }
        Ok(())
    }

    fn quad(&self) -> QuadConfig {
        QuadConfig {
            abs_tol: 0.1 * self.abs_tol,
            rel_tol: self.rel_tol,
            max_intervals: 4000,
        }
    }
}

/// Doublings of the truncation point before giving up.
const MAX_DOUBLINGS: usize = 400;

fn check_real_branch(c: &Coupling) -> Result<()> {
    if !c.is_subcritical() {
        return Err(Error::Domain(format!(
            "two-point function needs |lambda| < 1/pi, got {}",
            c.lambda
        )));
    }
    Ok(())
}

fn check_point(x: f64, y: f64) -> Result<()> {
    if !(x >= 0.0 && y >= 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!("need finite x, y >= 0, got ({x}, {y})")));
    }
    Ok(())
}

/// J and J' on the line w = -μ²/2 + it, shared between the points of a
/// grid sweep. The quadrature nodes of the first adaptive level are the
/// same for every (x, y), so most evaluations are reused.
#[derive(Default)]
struct LineCache {
    values: Mutex<HashMap<u64, (C64, C64)>>,
}

fn j_on_line(c: &Coupling, t: f64, cache: Option<&LineCache>) -> Result<(C64, C64)> {
    if let Some(hit) = cache.and_then(|m| m.values.lock().ok()?.get(&t.to_bits()).copied()) {
        return Ok(hit);
    }
    let wp = C64::new(-0.5 * c.mu2, t);
    let jp = j(c, wp)?;
    let djp = j_prime(c, wp)?;
    if !(jp.is_finite() && djp.is_finite()) {
        return Err(Error::BranchCut(format!("J not evaluable at w = {wp}")));
    }
    if let Some(m) = cache {
        if let Ok(mut map) = m.values.lock() {
            map.insert(t.to_bits(), (jp, djp));
        }
    }
    Ok((jp, djp))
}

/// The full complex integrand b(t) of N at height t.
#[cfg(test)]
fn integrand_complex(c: &Coupling, t: f64, x: f64, y: f64) -> Result<C64> {
    integrand_cached(c, t, x, y, None)
}

fn integrand_cached(c: &Coupling, t: f64, x: f64, y: f64, cache: Option<&LineCache>) -> Result<C64> {
    let i = C64::i();
    let wp = C64::new(-0.5 * c.mu2, t);
    let wm = wp.conj();
    let (jp, djp) = j_on_line(c, t, cache)?;
    let jm = jp.conj();
    // d/dt log(f(w₊)) = i f'(w₊)/f(w₊)
    let d1 = -i * djp / (y - jp);
    let d2 = -i * djp / (-jp);
    let d3 = -i / (y - wp);
    let d4 = -i / (-wp);
    let bracket = (x - jm).ln() * d1 - (-jm).ln() * d2 - (x - wm).ln() * d3 + (-wm).ln() * d4;
    Ok(bracket / (2.0 * PI * i))
}

/// Real part of the N integrand at height t, with J evaluated separately
/// at w₊ = -μ²/2 + it and w₋ = -μ²/2 - it. It is even in t; the
/// imaginary part is odd and cancels between t and -t.
pub fn n_integrand(c: &Coupling, t: f64, x: f64, y: f64) -> Result<f64> {
    check_point(x, y)?;
    if c.lambda == 0.0 || (x == 0.0 && y == 0.0) {
        return Ok(0.0);
    }
    let i = C64::i();
    let wp = C64::new(-0.5 * c.mu2, t);
    let wm = C64::new(-0.5 * c.mu2, -t);
    let jp = j(c, wp)?;
    let jm = j(c, wm)?;
    let djp = j_prime(c, wp)?;
    let bracket = (x - jm).ln() * (-i * djp / (y - jp)) - (-jm).ln() * (-i * djp / (-jp))
        - (x - wm).ln() * (-i / (y - wp))
        + (-wm).ln() * (-i / (-wp));
    Ok((bracket / (2.0 * PI * i)).re)
}

/// Runs an adaptive integral whose integrand may fail, keeping the first
/// error.
fn integrate_fallible<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64> {
    let err: RefCell<Option<Error>> = RefCell::new(None);
    let est = integrate(
        |s| match f(s) {
            Ok(v) => v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        cfg,
    );
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(est?.value)
}

/// N(x,y). The integral runs over t ∈ [0, μ²] directly and beyond that in
/// u = ln t; the truncation point doubles until the last increment and a
/// geometric estimate of the remainder fall below `abs_tol`.
pub fn n_value(c: &Coupling, x: f64, y: f64, cfg: &TwoPointConfig) -> Result<f64> {
    n_value_cached(c, x, y, cfg, None)
}

fn n_value_cached(c: &Coupling, x: f64, y: f64, cfg: &TwoPointConfig, cache: Option<&LineCache>) -> Result<f64> {
    check_real_branch(c)?;
    check_point(x, y)?;
    cfg.validate()?;
    if c.lambda == 0.0 || (x == 0.0 && y == 0.0) {
        return Ok(0.0);
    }
    let q = cfg.quad();
    let f = |t: f64| integrand_cached(c, t, x, y, cache).map(|b| b.re);
    let g = |u: f64| {
        let t = u.exp();
        f(t).map(|v| v * t)
    };
    let t0 = c.mu2;
    let t_max = (cfg.t_max * c.mu2).max(2.0 * t0);
    let mut total = integrate_fallible(f, 0.0, t0, &q)? + integrate_fallible(g, t0.ln(), t_max.ln(), &q)?;
    let mut u = t_max.ln();
    let step = std::f64::consts::LN_2;
    let mut prev: Option<f64> = None;
    for _ in 0..MAX_DOUBLINGS {
        let piece = integrate_fallible(g, u, u + step, &q)?;
        total += piece;
        u += step;
        let tail = match prev {
            Some(p) if p != 0.0 && piece / p > 0.0 && piece / p < 1.0 => {
                let r = piece / p;
                piece * r / (1.0 - r)
            }
            _ => f64::INFINITY,
        };
        let scale = 0.5 * cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if piece.abs() < scale && tail.abs() < scale {
            // both halves of the t-line contribute equally
            return Ok(2.0 * (total + if tail.is_finite() { tail } else { 0.0 }));
        }
        prev = Some(piece);
    }
    Err(Error::TailNonConvergence(format!(
        "N({x}, {y}) not converged at t = {:e}",
        u.exp()
    )))
}

/// G(x,y) = μ² exp(N(x,y))/(μ²+x+y).
pub fn g_value(c: &Coupling, x: f64, y: f64, cfg: &TwoPointConfig) -> Result<f64> {
    let n = n_value(c, x, y, cfg)?;
    Ok(c.mu2 * n.exp() / (c.mu2 + x + y))
}

/// N on the tensor grid xs × ys, evaluated in parallel; row i holds x = xs[i].
pub fn n_grid(c: &Coupling, xs: &[f64], ys: &[f64], cfg: &TwoPointConfig) -> Result<Vec<Vec<f64>>> {
    let cache = LineCache::default();
    let points: Vec<(usize, usize)> = (0..xs.len())
        .flat_map(|i| (0..ys.len()).map(move |k| (i, k)))
        .collect();
    let values: Vec<f64> = points
        .par_iter()
        .map(|&(i, k)| n_value_cached(c, xs[i], ys[k], cfg, Some(&cache)))
        .collect::<Result<_>>()?;
    Ok(values.chunks(ys.len().max(1)).map(|r| r.to_vec()).collect())
}

/// G on the tensor grid xs × ys, evaluated in parallel; row i holds x = xs[i].
pub fn g_grid(c: &Coupling, xs: &[f64], ys: &[f64], cfg: &TwoPointConfig) -> Result<Vec<Vec<f64>>> {
    let n = n_grid(c, xs, ys, cfg)?;
    Ok(n.iter()
        .zip(xs)
        .map(|(row, &x)| {
            row.iter()
                .zip(ys)
                .map(|(&v, &y)| c.mu2 * v.exp() / (c.mu2 + x + y))
                .collect()
        })
        .collect())
}

/// Order-λ coefficient of G(x,y)·(1+x+y):
/// -[(1+x)log(1+x) + (1+y)log(1+y)]/(1+x+y).
pub fn g_first_order(x: f64, y: f64) -> f64 {
    -((1.0 + x) * (1.0 + x).ln() + (1.0 + y) * (1.0 + y).ln()) / (1.0 + x + y)
}

/// τ_a(p) = arccot(Re(a + I(p+i0))/(λπp)) with arccot valued in (0, π).
pub fn tau(c: &Coupling, a: f64, p: f64, cfg: &TwoPointConfig) -> Result<f64> {
    check_real_branch(c)?;
    if c.lambda == 0.0 {
        return Err(Error::Domain("tau is undefined at lambda = 0".into()));
    }
    if !(p > 0.0 && a >= 0.0) {
        return Err(Error::Domain(format!("tau needs a >= 0 and p > 0, got a={a}, p={p}")));
    }
    cfg.validate()?;
    let (limit, change) = i_func_limit(c, p, &cfg.eps_seq)?;
    let tol = 1e-6 * (1.0 + limit.norm());
    if !(change <= tol) {
        return Err(non_convergence(
            "epsilon extrapolation",
            format!("change {change:e} at p = {p}"),
        ));
    }
    let v = (a + limit.re) / (c.lambda * PI * p);
    Ok(arccot(v))
}

/// Inverse cotangent with values in (0, π).
pub fn arccot(v: f64) -> f64 {
    0.5 * PI - v.atan()
}

/// Leading small-λ behaviour pλπ/(1+a+p) of τ_a(p).
pub fn tau_first_order(lambda: f64, a: f64, p: f64) -> f64 {
    p * lambda * PI / (1.0 + a + p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_theory_integrand_vanishes() {
        let c = Coupling::ribbon(0.0).unwrap();
        assert_eq!(n_integrand(&c, 0.7, 2.0, 3.0).unwrap(), 0.0);
        // no shortcut: the terms cancel pairwise because J is the identity
        assert_eq!(integrand_complex(&c, 0.7, 2.0, 3.0).unwrap().re, 0.0);
    }

    #[test]
    fn origin_integrand_vanishes() {
        let c = Coupling::ribbon(0.2).unwrap();
        assert_eq!(integrand_complex(&c, 1.3, 0.0, 0.0).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn derivative_factor_against_finite_differences() {
        let c = Coupling::ribbon(0.1).unwrap();
        let t = 0.5;
        let y = 1.0;
        let lg = |s: f64| (y - j(&c, C64::new(-0.5 * c.mu2, s)).unwrap()).ln();
        let h = 1e-4;
        let fd = (lg(t - 2.0 * h) - 8.0 * lg(t - h) + 8.0 * lg(t + h) - lg(t + 2.0 * h)) / (12.0 * h);
        let wp = C64::new(-0.5 * c.mu2, t);
        let an = -C64::i() * j_prime(&c, wp).unwrap() / (y - j(&c, wp).unwrap());
        assert!((fd - an).norm() < 1e-6);
    }

    #[test]
    fn arccot_range() {
        assert!((arccot(0.0) - 0.5 * PI).abs() < 1e-16);
        assert!(arccot(1e8) > 0.0 && arccot(-1e8) < PI);
    }

    #[test]
    fn config_validation() {
        let cfg = TwoPointConfig { t_max: -1.0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
