//! The closed-form solution: coupling data, the deformed measure J, the
//! rescaled measures φ and ρ̃, the inverse J⁻¹, the function I(z), and the
//! identities that tie them together.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{non_convergence, Error, Result};
use crate::grid::QuadGrid;
use crate::quad::{integrate_half_line, QuadConfig};
use crate::report::VerificationReport;
use crate::specfun::{gamma_real, hyp2f1, hyp2f1_deriv, hyp2f1_side, Side};

type C64 = Complex64;

/// Existence threshold of the Fredholm problem.
pub const LAMBDA_CRITICAL: f64 = -1.0 / PI;

/// How μ² is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mu2Policy {
    /// μ² = α(1-α)/λ.
    #[default]
    Ribbon,
    /// μ² = 1.
    Unit,
    Explicit(f64),
}

impl fmt::Display for Mu2Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mu2Policy::Ribbon => write!(f, "ribbon"),
            Mu2Policy::Unit => write!(f, "unit"),
            Mu2Policy::Explicit(v) => write!(f, "explicit:{v}"),
        }
    }
}

impl FromStr for Mu2Policy {
    type Err = Error;

    /// Accepts `ribbon`, `unit`, `explicit:<value>` or a bare number.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "ribbon" => Ok(Mu2Policy::Ribbon),
            "unit" => Ok(Mu2Policy::Unit),
            _ => {
                let v = t.strip_prefix("explicit:").unwrap_or(&t);
                v.parse::<f64>()
                    .map(Mu2Policy::Explicit)
                    .map_err(|_| Error::Policy(format!("cannot parse '{s}'")))
            }
        }
    }
}

/// The parameter bundle (λ, α_λ, c_λ, μ²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub lambda: f64,
    pub alpha: C64,
    pub c_lambda: f64,
    pub mu2: f64,
    pub mu2_policy: Mu2Policy,
}

/// α_λ: arcsin(λπ)/π for |λπ| ≤ 1, 1/2 + i·arcosh(λπ)/π above.
pub fn alpha_of_lambda(lambda: f64) -> C64 {
    let s = lambda * PI;
    // one ulp of slack so that λ = 1/π lands on the real branch
    if s <= 1.0 + 4.0 * f64::EPSILON {
        C64::new(s.min(1.0).asin() / PI, 0.0)
    } else {
        C64::new(0.5, s.acosh() / PI)
    }
}

/// Builds the coupling bundle; λ = 0 takes the analytic limits α = 0, c = 1.
pub fn coupling_from_lambda(lambda: f64, policy: Mu2Policy) -> Result<Coupling> {
    if !lambda.is_finite() {
        return Err(Error::Domain(format!("coupling must be finite, got {lambda}")));
    }
    if lambda <= LAMBDA_CRITICAL {
        return Err(Error::Threshold(lambda));
    }
    let alpha = alpha_of_lambda(lambda);
    let (c_lambda, ribbon) = if lambda == 0.0 {
        (1.0, 1.0)
    } else {
        let a1a = alpha * (1.0 - alpha);
        ((lambda / a1a).re, (a1a / lambda).re)
    };
    let mu2 = match policy {
        Mu2Policy::Ribbon => ribbon,
        Mu2Policy::Unit => 1.0,
        Mu2Policy::Explicit(v) => {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Policy(format!("explicit mu^2 must be positive, got {v}")));
            }
            v
        }
    };
    Ok(Coupling {
        lambda,
        alpha,
        c_lambda,
        mu2,
        mu2_policy: policy,
    })
}

impl Coupling {
    pub fn new(lambda: f64, policy: Mu2Policy) -> Result<Self> {
        coupling_from_lambda(lambda, policy)
    }

    /// Ribbon normalisation.
    pub fn ribbon(lambda: f64) -> Result<Self> {
        coupling_from_lambda(lambda, Mu2Policy::Ribbon)
    }

    /// |λ| < 1/π, where α is real and J is monotone.
    pub fn is_subcritical(&self) -> bool {
        self.lambda.abs() < 1.0 / PI
    }

    fn require_subcritical(&self, what: &str) -> Result<()> {
        if self.is_subcritical() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} needs |lambda| < 1/pi, got {}", self.lambda)))
        }
    }

    fn params(&self) -> (C64, C64, C64) {
        (self.alpha, 1.0 - self.alpha, C64::new(2.0, 0.0))
    }

    /// λπ/sin(α_λπ), which is 1 on the real branch.
    pub fn sine_ratio(&self) -> f64 {
        if self.lambda == 0.0 {
            return 1.0;
        }
        (self.lambda * PI / crate::specfun::sin_pi(self.alpha)).re
    }
}

/// J(x) = x·₂F₁(α, 1-α; 2; -x/μ²).
pub fn j(c: &Coupling, x: C64) -> Result<C64> {
    let (a, b, cc) = c.params();
    let z = -x / c.mu2;
    Ok(x * hyp2f1(a, b, cc, z)?)
}

/// Boundary value J(x ± i0) for real x, also on the cut x < -μ².
pub fn j_side(c: &Coupling, x: f64, side: Side) -> Result<C64> {
    let (a, b, cc) = c.params();
    // x + i0 maps to z - i0
    let z_side = match side {
        Side::Above => Side::Below,
        Side::Below => Side::Above,
    };
    let z = C64::new(-x / c.mu2, 0.0);
    Ok(x * hyp2f1_side(a, b, cc, z, Some(z_side))?)
}

/// J(x) for real x ≥ -μ².
pub fn j_real(c: &Coupling, x: f64) -> Result<f64> {
    if x < -c.mu2 {
        return Err(Error::BranchCut(format!("J({x}) with mu^2 = {}", c.mu2)));
    }
    j(c, C64::new(x, 0.0)).map(|v| v.re)
}

/// J'(x) = F(z) - (x/μ²)·F'(z), z = -x/μ².
pub fn j_prime(c: &Coupling, x: C64) -> Result<C64> {
    let (a, b, cc) = c.params();
    let z = -x / c.mu2;
    let f = hyp2f1(a, b, cc, z)?;
    let df = hyp2f1_deriv(a, b, cc, z, None)?;
    Ok(f - x / c.mu2 * df)
}

/// φ(x) = ₂F₁(1+α, 2-α; 2; -x), x ≥ 0.
pub fn phi(c: &Coupling, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("phi needs x >= 0, got {x}")));
    }
    phi_ext(c, x)
}

/// φ on x > -1, used by finite-difference stencils that reach below 0.
fn phi_ext(c: &Coupling, x: f64) -> Result<f64> {
    let a = 1.0 + c.alpha;
    let b = 2.0 - c.alpha;
    hyp2f1(a, b, C64::new(2.0, 0.0), C64::new(-x, 0.0)).map(|v| v.re)
}

/// ρ̃(x) = J(x)/(x(μ²+x)); the x → 0 limit 1/μ² is returned at x = 0.
pub fn rho_tilde(c: &Coupling, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("rho_tilde needs x > 0, got {x}")));
    }
    let (a, b, cc) = c.params();
    let f = hyp2f1(a, b, cc, C64::new(-x / c.mu2, 0.0))?;
    Ok(f.re / (c.mu2 + x))
}

/// Real inverse of J on [-1, ∞) by bracketing and safeguarded Newton.
pub fn j_inverse(c: &Coupling, p: f64) -> Result<f64> {
    c.require_subcritical("J_inverse")?;
    if !(p >= -1.0) {
        return Err(Error::Domain(format!("J_inverse needs p >= -1, got {p}")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let f = |x: f64| j_real(c, x).map(|v| v - p);
    let (lo, hi) = if p < 0.0 {
        let at_edge = j_real(c, -c.mu2)?;
        if p <= at_edge {
            if at_edge - p <= 1e-14 {
                return Ok(-c.mu2);
            }
            return Err(Error::Domain(format!(
                "p = {p} lies below J(-mu^2) = {at_edge}"
            )));
        }
        (-c.mu2, 0.0)
    } else {
        let mut lo = 0.0;
        let mut hi = p.max(c.mu2);
        let mut f_prev = 0.0;
        let mut scans = 0;
        loop {
            let fh = j_real(c, hi)?;
            if fh <= f_prev {
                return Err(Error::Monotonicity(format!(
                    "J({hi}) = {fh} does not exceed J({lo}) = {f_prev}"
                )));
            }
            if fh >= p {
                break;
            }
            lo = hi;
            f_prev = fh;
            hi *= 2.0;
            scans += 1;
            if scans > 2000 {
                return Err(non_convergence("J_inverse bracket", format!("p = {p}")));
            }
        }
        (lo, hi)
    };
    safeguarded_newton(c, f, lo, hi, p)
}

fn safeguarded_newton<F: Fn(f64) -> Result<f64>>(c: &Coupling, f: F, mut lo: f64, mut hi: f64, p: f64) -> Result<f64> {
    let mut x = 0.5 * (lo + hi);
    for _ in 0..300 {
        let fx = f(x)?;
        if fx.abs() <= 1e-15 * p.abs().max(1.0) {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            return Ok(0.5 * (lo + hi));
        }
        let d = j_prime(c, C64::new(x, 0.0))?.re;
        let mut xn = x - fx / d;
        if !(d > 0.0) || !(xn > lo && xn < hi) {
            xn = 0.5 * (lo + hi);
        }
        x = xn;
    }
    Err(non_convergence("J_inverse", format!("p = {p}")))
}

/// Complex J⁻¹(z) for Im z > 0, by Newton from the real inverse.
pub fn j_inverse_complex(c: &Coupling, z: C64) -> Result<C64> {
    c.require_subcritical("complex J_inverse")?;
    let x0 = j_inverse(c, z.re.max(-1.0))?;
    let d0 = if x0 > -c.mu2 {
        j_prime(c, C64::new(x0, 0.0))?.re
    } else {
        f64::NAN
    };
    let shift = if d0.is_finite() && d0 > 0.0 { z.im / d0 } else { z.im };
    let mut x = C64::new(x0, shift);
    let tol = 1e-14 * z.norm().max(1.0);
    let mut fx = j(c, x)? - z;
    for _ in 0..80 {
        if fx.norm() <= tol {
            return Ok(x);
        }
        let step = fx / j_prime(c, x)?;
        let mut lambda = 1.0;
        loop {
            let xn = x - step * lambda;
            let fn_ = j(c, xn).map(|v| v - z);
            match fn_ {
                Ok(v) if v.norm() < fx.norm() => {
                    x = xn;
                    fx = v;
                    break;
                }
                _ => {
                    lambda *= 0.5;
                    if lambda < 1e-10 {
                        if fx.norm() <= 1e3 * tol {
                            return Ok(x);
                        }
                        return Err(non_convergence("J_inverse continuation", format!("z = {z}")));
                    }
                }
            }
        }
    }
    if fx.norm() <= 1e3 * tol {
        return Ok(x);
    }
    Err(non_convergence("J_inverse continuation", format!("z = {z}")))
}

/// I(z) = -J(-μ² - J⁻¹(z)) for Im z > 0.
pub fn i_func(c: &Coupling, z: C64) -> Result<C64> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("I(z) needs Im z > 0, got {z}")));
    }
    let x = j_inverse_complex(c, z)?;
    Ok(-j(c, -c.mu2 - x)?)
}

/// Boundary value I(p + i0) from the real inverse and the side limit of J.
pub fn i_func_boundary(c: &Coupling, p: f64) -> Result<C64> {
    let x = j_inverse(c, p)?;
    let w = -c.mu2 - x;
    if w < -c.mu2 {
        // J⁻¹(p + iε) moves up, so w approaches the cut from below
        Ok(-j_side(c, w, Side::Below)?)
    } else {
        Ok(C64::new(-j_real(c, w)?, 0.0))
    }
}

/// Limit ε → 0⁺ of I(p + iε) by polynomial extrapolation in ε over the
/// given sequence. Returns the value and the change against the smallest ε.
pub fn i_func_limit(c: &Coupling, p: f64, eps_seq: &[f64]) -> Result<(C64, f64)> {
    if eps_seq.is_empty() || eps_seq.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Domain("epsilon sequence must be positive and non-empty".into()));
    }
    let values: Vec<C64> = eps_seq
        .iter()
        .map(|&e| i_func(c, C64::new(p, e)))
        .collect::<Result<_>>()?;
    let limit = neville_at_zero(eps_seq, &values);
    let smallest = eps_seq
        .iter()
        .zip(&values)
        .min_by(|a, b| a.0.total_cmp(b.0))
        .map(|(_, v)| *v)
        .expect("non-empty");
    if !limit.is_finite() {
        return Err(non_convergence("epsilon extrapolation", format!("p = {p}")));
    }
    Ok((limit, (limit - smallest).norm()))
}

/// Value at 0 of the polynomial through (xs, ys).
pub(crate) fn neville_at_zero(xs: &[f64], ys: &[C64]) -> C64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// Two envelopes of ₂F₁(α, 1-α; 2; -x) and its value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaBounds {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
}

/// The envelopes (1+x)^(-α) and Γ(1-2α)/(Γ(2-α)Γ(1-α))·(1+x)^(-α).
///
/// For α ≥ 0 these are the lower and upper bounds in that order. For α < 0
/// the ratio ₂F₁·(1+x)^α decreases from 1 to the Γ constant, which is then
/// below 1, so the two envelopes swap roles. They are returned ordered.
pub fn lemma_bounds(alpha: f64, x: f64) -> Result<LemmaBounds> {
    if !(alpha.abs() < 0.5) || !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "lemma bounds need |alpha| < 1/2 and x >= 0 (alpha={alpha}, x={x})"
        )));
    }
    let env = (1.0 + x).powf(-alpha);
    let k = gamma_real(1.0 - 2.0 * alpha)? / (gamma_real(2.0 - alpha)? * gamma_real(1.0 - alpha)?);
    let value = crate::specfun::hyp2f1_real(alpha, 1.0 - alpha, 2.0, -x)?;
    let (e1, e2) = (env, k * env);
    Ok(LemmaBounds {
        lower: e1.min(e2),
        upper: e1.max(e2),
        value,
    })
}

/// D = 4 - 2α_λ.
pub fn spectral_dimension(c: &Coupling) -> Result<f64> {
    c.require_subcritical("spectral dimension")?;
    Ok(4.0 - 2.0 * c.alpha.re)
}

/// RMS residual of the log-log fit above which the estimate is rejected.
pub const FIT_RMS_MAX: f64 = 1e-3;

/// Default window [x_min, 10⁴·x_min] for the slope fit. The leading
/// correction to the power law of J is relatively of order x^(-(1-2α)),
/// so x_min is pushed out until that is about 10⁻⁴.
pub fn dimension_fit_window(c: &Coupling) -> (f64, f64) {
    let gap = (1.0 - 2.0 * c.alpha.re).max(0.05);
    let x_min = 10f64.powf(4.0 / gap).max(1e6);
    (x_min, 1e4 * x_min)
}

/// 2(1 + s) with s the least-squares slope of ln J against ln x on a
/// logarithmic grid of n points in [x_min, x_max].
pub fn spectral_dimension_estimate(c: &Coupling, x_min: f64, x_max: f64, n: usize) -> Result<f64> {
    c.require_subcritical("dimension estimate")?;
    if !(x_min > 0.0 && x_max > x_min) || n < 3 {
        return Err(Error::Domain(format!(
            "need 0 < x_min < x_max and n >= 3 (x_min={x_min}, x_max={x_max}, n={n})"
        )));
    }
    let ratio = (x_max / x_min).ln();
    let mut lx = Vec::with_capacity(n);
    let mut lj = Vec::with_capacity(n);
    for i in 0..n {
        let x = x_min * (ratio * i as f64 / (n - 1) as f64).exp();
        let jx = j_real(c, x)?;
        if !(jx > 0.0) {
            return Err(Error::FitQuality(format!("J({x}) = {jx} is not positive")));
        }
        lx.push(x.ln());
        lj.push(jx.ln());
    }
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = lj.iter().sum::<f64>() / nf;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&lj).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let rms = (lx
        .iter()
        .zip(&lj)
        .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
        .sum::<f64>()
        / nf)
        .sqrt();
    if rms > FIT_RMS_MAX {
        return Err(Error::FitQuality(format!("rms residual {rms:e} of the log-log fit")));
    }
    Ok(2.0 * (1.0 + slope))
}

/// λ∫₀^∞ ρ̃(t)/(x+t+μ²) dt on `grid` against c_λ/(x+μ²) - (λπ/sin απ)·ρ̃(x).
pub fn stieltjes_identity_check(c: &Coupling, x_values: &[f64], grid: &QuadGrid) -> Result<VerificationReport> {
    c.require_subcritical("Stieltjes identity")?;
    let rho: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&t| rho_tilde(c, t))
        .collect::<Result<_>>()?;
    let ratio = c.sine_ratio();
    let mut report = VerificationReport::new();
    for &x in x_values {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("Stieltjes check needs x > 0, got {x}")));
        }
        let lhs: f64 = c.lambda
            * grid
                .nodes
                .iter()
                .zip(&grid.weights)
                .zip(&rho)
                .map(|((&t, &w), &r)| w * r / (x + t + c.mu2))
                .sum::<f64>();
        let rhs = c.c_lambda / (x + c.mu2) - ratio * rho_tilde(c, x)?;
        report.push(format!("stieltjes lambda={} x={x}", c.lambda), (lhs - rhs).abs(), 1e-7);
    }
    Ok(report)
}

fn tight() -> QuadConfig {
    QuadConfig {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        max_intervals: 4000,
    }
}

/// 1 + λμ²∫₀^∞ ρ̃(t)/(μ²+t) dt, which reproduces c_λ.
pub fn intc_constant(c: &Coupling) -> Result<f64> {
    let mut failure = None;
    let est = integrate_half_line(
        |t| match rho_tilde(c, t) {
            Ok(r) => r / (c.mu2 + t),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        c.mu2,
        &tight(),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(1.0 + c.lambda * c.mu2 * est.value)
}

/// ∫₀^∞ J(t)/(μ²+t)³ dt; equals 1/(2c_λμ²), hence 1/2 under Ribbon.
pub fn condmu_integral(c: &Coupling) -> Result<f64> {
    let mut failure = None;
    let est = integrate_half_line(
        |t| match j_real(c, t) {
            Ok(v) => v / (c.mu2 + t).powi(3),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        c.mu2,
        &tight(),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est.value)
}

/// lim_{x→0} (x - J(x))/(λx²), by Richardson extrapolation over three
/// small x. Needs λ ≠ 0.
pub fn small_x_limit(c: &Coupling) -> Result<f64> {
    if c.lambda == 0.0 {
        return Err(Error::Domain("small-x law needs lambda != 0".into()));
    }
    let h = 1e-3 * c.mu2;
    let xs = [h, 0.5 * h, 0.25 * h];
    let vals: Vec<C64> = xs
        .iter()
        .map(|&x| j_real(c, x).map(|jx| C64::new((x - jx) / (c.lambda * x * x), 0.0)))
        .collect::<Result<_>>()?;
    Ok(neville_at_zero(&xs, &vals).re)
}

/// x(1+x)φ″ + (2+4x)φ′ + ((2c+λ)/c)φ by five-point differences.
pub fn ode_residual(c: &Coupling, x: f64) -> Result<f64> {
    let h = 1e-2 * (1.0 + x);
    let f = |t: f64| phi_ext(c, t);
    let (m2, m1, z0, p1, p2) = (f(x - 2.0 * h)?, f(x - h)?, f(x)?, f(x + h)?, f(x + 2.0 * h)?);
    let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
    let d2 = (-p2 + 16.0 * p1 - 30.0 * z0 + 16.0 * m1 - m2) / (12.0 * h * h);
    let k = (2.0 * c.c_lambda + c.lambda) / c.c_lambda;
    Ok(x * (1.0 + x) * d2 + (2.0 + 4.0 * x) * d1 + k * z0)
}

/// Samples J on [0, x_max] and reports whether it is strictly increasing.
pub fn j_is_monotone(c: &Coupling, x_max: f64, samples: usize) -> Result<bool> {
    let mut prev = j_real(c, 0.0)?;
    for i in 1..=samples {
        let x = x_max * i as f64 / samples as f64;
        let v = j_real(c, x)?;
        if v <= prev {
            return Ok(false);
        }
        prev = v;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coupling_limits() {
        let c = Coupling::ribbon(0.0).unwrap();
        assert_eq!(c.alpha, C64::new(0.0, 0.0));
        assert_eq!(c.c_lambda, 1.0);
        assert_eq!(c.mu2, 1.0);
        assert_eq!(j_real(&c, 7.0).unwrap(), 7.0);
        assert!((phi(&c, 4.0).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn critical_point_branch() {
        let c = Coupling::ribbon(1.0 / PI).unwrap();
        assert!((c.alpha.re - 0.5).abs() < 1e-7 && c.alpha.im == 0.0);
        assert!((c.c_lambda - 4.0 / PI).abs() < 1e-7);
        assert!((c.mu2 - PI / 4.0).abs() < 1e-7);
        let c = Coupling::ribbon(2.0 / PI).unwrap();
        assert_eq!(c.alpha.re, 0.5);
        assert!((c.alpha.im - 2f64.acosh() / PI).abs() < 1e-15);
    }

    #[test]
    fn threshold_and_policy_errors() {
        assert!(matches!(Coupling::ribbon(-0.4), Err(Error::Threshold(_))));
        assert!(matches!(Coupling::ribbon(LAMBDA_CRITICAL), Err(Error::Threshold(_))));
        assert!(matches!(
            Coupling::new(0.1, Mu2Policy::Explicit(0.0)),
            Err(Error::Policy(_))
        ));
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("Ribbon".parse::<Mu2Policy>().unwrap(), Mu2Policy::Ribbon);
        assert_eq!("explicit:2.5".parse::<Mu2Policy>().unwrap(), Mu2Policy::Explicit(2.5));
        assert_eq!("3".parse::<Mu2Policy>().unwrap(), Mu2Policy::Explicit(3.0));
        assert!("bogus".parse::<Mu2Policy>().is_err());
    }

    #[test]
    fn boundary_value_of_j() {
        for lambda in [0.05, 0.15, 0.2, 0.25] {
            let c = Coupling::ribbon(lambda).unwrap();
            let v = j_real(&c, -c.mu2).unwrap();
            assert!((v + 1.0).abs() < 1e-13, "lambda={lambda} J(-mu2)={v}");
            let near = j_real(&c, -c.mu2 * (1.0 - 1e-12)).unwrap();
            assert!((near + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let c = Coupling::ribbon(0.1).unwrap();
        let x = j_inverse(&c, j_real(&c, 10.0).unwrap()).unwrap();
        assert!((x - 10.0).abs() < 1e-8);
        assert_eq!(j_inverse(&c, 0.0).unwrap(), 0.0);
        let c = Coupling::ribbon(0.2).unwrap();
        assert!((j_inverse(&c, -1.0).unwrap() + c.mu2).abs() < 1e-8);
        assert!(j_inverse(&c, -1.5).is_err());
    }

    #[test]
    fn rho_tilde_two_routes() {
        let c = Coupling::ribbon(0.25).unwrap();
        let a = rho_tilde(&c, 1.0).unwrap();
        let b = phi(&c, 1.0 / c.mu2).unwrap() / c.mu2;
        let d = j_real(&c, 1.0).unwrap() / (1.0 + c.mu2);
        assert!((a - b).abs() < 1e-10 && (a - d).abs() < 1e-14);
    }

    #[test]
    fn i_func_boundary_matches_limit() {
        let c = Coupling::ribbon(0.1).unwrap();
        let (lim, _) = i_func_limit(&c, 2.0, &[1e-4, 1e-5, 1e-6]).unwrap();
        let b = i_func_boundary(&c, 2.0).unwrap();
        assert!((lim - b).norm() < 1e-9, "{lim} {b}");
        assert!((b.im / (c.lambda * PI * 2.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn neville_recovers_polynomials() {
        let xs = [1.0, 0.5, 0.25];
        let ys: Vec<C64> = xs.iter().map(|&x| C64::new(3.0 - x + 2.0 * x * x, 0.0)).collect();
        assert!((neville_at_zero(&xs, &ys).re - 3.0).abs() < 1e-14);
    }
}
