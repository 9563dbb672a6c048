//! Perturbative layer: the μ²(λ) series and its arcsin resummation, the
//! alternating hyperlogarithm series f and g with their ₂F₁ closed forms,
//! and the second-order angle integral.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{phi, Coupling};
use crate::quad::{integrate_half_line, QuadConfig};
use crate::specfun::{hlog, hlog_suffixes, hyp2f1_deriv, hyp2f1_real, polylog, Word, ZETA2};

/// Highest λ-order of the μ² series.
pub const MU2_MAX_ORDER: usize = 10;

/// Most terms accepted by [`f_g_partial`].
pub const FG_MAX_TERMS: usize = 6;

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Coefficient of λ^k in μ²(λ), including its power of π.
pub fn mu2_coefficient(k: usize) -> f64 {
    let n = (k / 2) as u32;
    let pi2n = PI.powi(2 * n as i32);
    let nf2 = factorial(n).powi(2);
    let four_n = 4f64.powi(n as i32);
    if k.is_multiple_of(2) {
        factorial(2 * n) / (four_n * nf2 * (2 * n + 1) as f64) * pi2n
    } else {
        -2.0 * four_n * nf2 / factorial(2 * n + 2) * pi2n
    }
}

/// Partial sum of μ²(λ) through λ^order.
pub fn mu2_series(lambda: f64, order: usize) -> Result<f64> {
    if order > MU2_MAX_ORDER {
        return Err(Error::Order(order));
    }
    if !(lambda.abs() < 1.0 / PI) {
        return Err(Error::Domain(format!("mu^2 series needs |lambda| < 1/pi, got {lambda}")));
    }
    // Horner from the top
    Ok((0..=order).rev().fold(0.0, |acc, k| acc * lambda + mu2_coefficient(k)))
}

/// arcsin(λπ)/(λπ), equal to 1 at λ = 0.
pub fn arcsin_ratio(lambda: f64) -> f64 {
    let s = lambda * PI;
    if s == 0.0 {
        1.0
    } else {
        s.asin() / s
    }
}

/// Resummed μ² = A - λA² with A = arcsin(λπ)/(λπ).
pub fn mu2_closed(lambda: f64) -> f64 {
    let a = arcsin_ratio(lambda);
    a - lambda * a * a
}

/// Whether the partial sums of orders k and k+2 lie on opposite sides of
/// the resummed value. Reported, not required.
pub fn mu2_series_brackets(lambda: f64, k: usize) -> Result<bool> {
    let closed = mu2_closed(lambda);
    let lo = mu2_series(lambda, k)? - closed;
    let hi = mu2_series(lambda, k + 2)? - closed;
    Ok(lo * hi <= 0.0)
}

/// One term Hlog(x, word)·α^power of an alternating-word series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaTerm {
    pub word: Word,
    pub power_of_alpha: u32,
    pub coefficient_rule: String,
}

/// Truncated series Σ Hlog(x, wₙ)·α^(2n) over alternating words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSeries {
    pub terms: Vec<AlphaTerm>,
    pub truncation_order: usize,
}

impl AlphaSeries {
    /// f = Σ Hlog(x, [0,-1]ⁿ) α^(2n), n < n_terms.
    pub fn f(n_terms: usize) -> Self {
        AlphaSeries {
            terms: (0..n_terms)
                .map(|n| AlphaTerm {
                    word: Word::alternating_f(n),
                    power_of_alpha: 2 * n as u32,
                    coefficient_rule: "f".into(),
                })
                .collect(),
            truncation_order: n_terms,
        }
    }

    /// g = Σ Hlog(x, [-1,(0,-1)ⁿ]) α^(2n), n < n_terms.
    pub fn g(n_terms: usize) -> Self {
        AlphaSeries {
            terms: (0..n_terms)
                .map(|n| AlphaTerm {
                    word: Word::alternating_g(n),
                    power_of_alpha: 2 * n as u32,
                    coefficient_rule: "g".into(),
                })
                .collect(),
            truncation_order: n_terms,
        }
    }

    /// Term-by-term evaluation at x > 0.
    pub fn evaluate(&self, x: f64, alpha: f64) -> Result<f64> {
        self.terms
            .iter()
            .map(|t| Ok(hlog(x, &t.word)? * alpha.powi(t.power_of_alpha as i32)))
            .sum()
    }

    /// True when every word alternates between its letters.
    pub fn alternates(&self) -> bool {
        self.terms.iter().all(|t| t.word.alternates())
    }
}

/// Partial sums (f, g) with n_terms terms each, from a single suffix sweep
/// of the longest g-word.
pub fn f_g_partial(x: f64, alpha: f64, n_terms: usize) -> Result<(f64, f64)> {
    if !(alpha.abs() < 0.5) {
        return Err(Error::Domain(format!("need |alpha| < 1/2, got {alpha}")));
    }
    if n_terms == 0 || n_terms > FG_MAX_TERMS {
        return Err(Error::Domain(format!(
            "n_terms must lie in 1..={FG_MAX_TERMS}, got {n_terms}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("need x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok((1.0, 0.0));
    }
    // suffix 2k is the g-word with n-1-k pairs, suffix 2k+1 the f-word
    let n = n_terms;
    let s = hlog_suffixes(x, &Word::alternating_g(n - 1))?;
    let a2 = alpha * alpha;
    let mut f = 0.0;
    let mut g = 0.0;
    for k in (0..n).rev() {
        let pairs = (n - 1 - k) as i32;
        let w = a2.powi(pairs);
        g += s[2 * k] * w;
        f += s[2 * k + 1] * w;
    }
    Ok((f, g))
}

/// f(x) = ₂F₁(α,-α;1;-x).
pub fn f_closed(x: f64, alpha: f64) -> Result<f64> {
    hyp2f1_real(alpha, -alpha, 1.0, -x)
}

/// g(x) = x·₂F₁(1+α,1-α;2;-x).
pub fn g_closed(x: f64, alpha: f64) -> Result<f64> {
    Ok(x * hyp2f1_real(1.0 + alpha, 1.0 - alpha, 2.0, -x)?)
}

/// F, dF/dz and d²F/dz² at real z, the derivatives from the contiguous
/// relation dF/dz = (ab/c)·F(a+1,b+1;c+1).
fn f_and_derivatives(a: f64, b: f64, c: f64, z: f64) -> Result<(f64, f64, f64)> {
    let cc = |v: f64| C64::new(v, 0.0);
    let zc = cc(z);
    let f = hyp2f1_real(a, b, c, z)?;
    let d1 = hyp2f1_deriv(cc(a), cc(b), cc(c), zc, None)?.re;
    let d2 = a * b / c * hyp2f1_deriv(cc(a + 1.0), cc(b + 1.0), cc(c + 1.0), zc, None)?.re;
    Ok((f, d1, d2))
}

/// Residuals of
/// f'' + f'/x - α²f/((1+x)x) = 0 and g'' + g'/(1+x) - α²g/((1+x)x) = 0
/// for the closed forms.
pub fn fg_ode_residual(x: f64, alpha: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("need x > 0, got {x}")));
    }
    if !(alpha.abs() < 0.5) {
        return Err(Error::Domain(format!("need |alpha| < 1/2, got {alpha}")));
    }
    let a2 = alpha * alpha;
    // f(x) = F(-x)
    let (f, fz, fzz) = f_and_derivatives(alpha, -alpha, 1.0, -x)?;
    let (f1, f2) = (-fz, fzz);
    let rf = f2 + f1 / x - a2 * f / ((1.0 + x) * x);
    // g(x) = x·H(-x)
    let (h, hz, hzz) = f_and_derivatives(1.0 + alpha, 1.0 - alpha, 2.0, -x)?;
    let g = x * h;
    let g1 = h - x * hz;
    let g2 = -2.0 * hz + x * hzz;
    let rg = g2 + g1 / (1.0 + x) - a2 * g / ((1.0 + x) * x);
    Ok((rf, rg))
}

/// h(t) = t·log t - (1+t)·log(1+t), written to stay accurate at large t.
fn entropy_like(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        -t * (1.0 / t).ln_1p() - t.ln_1p()
    }
}

/// ∫₀^∞ t·h(t)·[1/(1+t+p)² - 1/(1+t)²] dt.
pub fn second_order_integral(p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Domain(format!("need p > 0, got {p}")));
    }
    let cfg = QuadConfig {
        abs_tol: 1e-12,
        rel_tol: 1e-11,
        max_intervals: 4000,
    };
    let est = integrate_half_line(
        |t| {
            let u = 1.0 + t;
            // difference of the two squares without cancellation
            let diff = -p * (2.0 * u + p) / ((u + p) * (u + p) * u * u);
            t * entropy_like(t) * diff
        },
        1.0 + p,
        &cfg,
    )?;
    Ok(est.value)
}

/// (1+p)log²(1+p) + (1+2p)Li₂(-p) + 2pζ₂.
pub fn second_order_closed(p: f64) -> Result<f64> {
    let l = p.ln_1p();
    Ok((1.0 + p) * l * l + (1.0 + 2.0 * p) * polylog(2, -p)? + 2.0 * p * ZETA2)
}

/// φ(x) assembled from the alternating-word sums,
///
/// ```text
/// φ(x) = c·A/(1+x)·f(x) - λ·c·A²/x·g(x),   A = arcsin(λπ)/(λπ),
/// ```
///
/// against the closed form; returns the absolute deviation.
pub fn phi_alpha_resummation_check(c: &Coupling, x: f64, n_terms: usize) -> Result<f64> {
    if !c.is_subcritical() {
        return Err(Error::Domain(format!("need |lambda| < 1/pi, got {}", c.lambda)));
    }
    let lambda = c.lambda;
    let alpha = c.alpha.re;
    let a = arcsin_ratio(lambda);
    let cl = c.c_lambda;
    let assembled = if x == 0.0 {
        // only the n = 0 terms survive: Hlog(x,[]) = 1, Hlog(x,[-1])/x → 1
        cl * a - lambda * cl * a * a
    } else {
        let (f, g) = f_g_partial(x, alpha, n_terms)?;
        cl * a / (1.0 + x) * f - lambda * cl * a * a / x * g
    };
    Ok((assembled - phi(c, x)?).abs())
}

/// (c_λ/λ)·α·(1-α), the value of φ(0) from the n = 0 terms; equals 1.
pub fn phi_origin_identity(lambda: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(1.0);
    }
    let c = Coupling::ribbon(lambda)?;
    let alpha = c.alpha.re;
    Ok(c.c_lambda / lambda * alpha * (1.0 - alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_coefficients() {
        let p2 = PI * PI;
        let expect = [
            1.0,
            -1.0,
            p2 / 6.0,
            -p2 / 3.0,
            3.0 / 40.0 * p2 * p2,
            -8.0 / 45.0 * p2 * p2,
            5.0 / 112.0 * p2.powi(3),
            -4.0 / 35.0 * p2.powi(3),
            35.0 / 1152.0 * p2.powi(4),
            -128.0 / 1575.0 * p2.powi(4),
            63.0 / 2816.0 * p2.powi(5),
        ];
        for (k, e) in expect.iter().enumerate() {
            assert!((mu2_coefficient(k) - e).abs() < 1e-13 * e.abs(), "k={k}");
        }
    }

    #[test]
    fn order_two_and_zero() {
        let l = 0.1;
        let v = mu2_series(l, 2).unwrap();
        assert!((v - (1.0 - l + PI * PI * l * l / 6.0)).abs() < 1e-15);
        assert_eq!(mu2_series(0.0, 10).unwrap(), 1.0);
        assert!(matches!(mu2_series(0.1, 11), Err(Error::Order(11))));
    }

    #[test]
    fn single_term_partial_sums() {
        let (f, g) = f_g_partial(3.0, 0.2, 1).unwrap();
        assert_eq!(f, 1.0);
        assert!((g - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn free_ode_residuals_vanish() {
        let (rf, rg) = fg_ode_residual(1.7, 0.0).unwrap();
        assert!(rf.abs() < 1e-15 && rg.abs() < 1e-15);
    }

    #[test]
    fn entropy_like_is_stable() {
        let t: f64 = 1e12;
        // -log t - 1 - 1/(2t) + ...
        assert!((entropy_like(t) - (-t.ln() - 1.0)).abs() < 1e-10);
    }
}
