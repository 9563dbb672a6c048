//! Gauss hypergeometric function ₂F₁(a, b; c; z) with complex parameters.
//!
//! Inside |z| ≤ 1/2 the Gauss series is summed directly, and the Pfaff
//! transform covers the disc |z/(z-1)| ≤ 1/2. Everywhere else the
//! hypergeometric differential equation is continued from the series disc
//! by Taylor steps, each no larger than half the distance to the nearest
//! singular point. This stays uniform at the degenerate parameter sets
//! where c - a - b is an integer, which is exactly where the model lives.
//! The Euler integral is kept as an independent route.

use num_complex::Complex64;

use super::gamma::{gamma, rgamma};
use crate::error::{non_convergence, Error, Result};
use crate::quad::gauss_jacobi;

type C64 = Complex64;

/// Which side of the cut [1, ∞) to take a boundary value from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Above => 1.0,
            Side::Below => -1.0,
        }
    }
}

const SERIES_RADIUS: f64 = 0.5;
const STEP_FRACTION: f64 = 0.5;
const TERM_EPS: f64 = 1e-17;
const MAX_SERIES_TERMS: usize = 3000;
const MAX_TAYLOR_TERMS: usize = 600;
const MAX_STEPS: usize = 20_000;

fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn c64(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// ₂F₁(a, b; c; z) on the principal branch. Fails on the cut z ∈ (1, ∞).
pub fn hyp2f1(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    eval(a, b, c, z, None).map(|(f, _)| f)
}

/// ₂F₁ with an explicit boundary side for z on the cut.
pub fn hyp2f1_side(a: C64, b: C64, c: C64, z: C64, side: Option<Side>) -> Result<C64> {
    eval(a, b, c, z, side).map(|(f, _)| f)
}

/// ₂F₁ together with its z-derivative, both carried by the same evaluation.
pub fn hyp2f1_with_derivative(a: C64, b: C64, c: C64, z: C64, side: Option<Side>) -> Result<(C64, C64)> {
    eval(a, b, c, z, side)
}

/// d/dz ₂F₁(a, b; c; z) through the contiguous family (ab/c)·₂F₁(a+1, b+1; c+1; z).
pub fn hyp2f1_deriv(a: C64, b: C64, c: C64, z: C64, side: Option<Side>) -> Result<C64> {
    if a == c64(0.0) || b == c64(0.0) {
        return Ok(c64(0.0));
    }
    let up = hyp2f1_side(a + 1.0, b + 1.0, c + 1.0, z, side)?;
    Ok(a * b / c * up)
}

/// Real parameters and real argument x ≤ 1.
pub fn hyp2f1_real(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if x > 1.0 {
        return Err(Error::BranchCut(format!("{x}")));
    }
    hyp2f1(c64(a), c64(b), c64(c), c64(x)).map(|v| v.re)
}

fn eval(a: C64, b: C64, c: C64, z: C64, side: Option<Side>) -> Result<(C64, C64)> {
    if is_nonpositive_integer(c) {
        return Err(Error::Pole {
            function: "hyp2f1",
            at: format!("c = {c}"),
        });
    }
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::Domain(format!("non-finite input a={a} b={b} c={c} z={z}")));
    }
    if a == c64(0.0) || b == c64(0.0) {
        return Ok((c64(1.0), c64(0.0)));
    }
    if z == c64(0.0) {
        return Ok((c64(1.0), a * b / c));
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return Ok(terminating(a, b, c, z));
    }
    if z == c64(1.0) {
        return at_unity(a, b, c);
    }
    if z.im == 0.0 && z.re > 1.0 && side.is_none() {
        return Err(Error::BranchCut(format!("{z}")));
    }
    if z.norm() <= SERIES_RADIUS {
        return gauss_series(a, b, c, z);
    }
    let w = z / (z - 1.0);
    if w.norm() <= SERIES_RADIUS {
        // Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1))
        let (h, dh) = gauss_series(a, c - b, c, w)?;
        let one_minus = 1.0 - z;
        let pre = (-a * one_minus.ln()).exp();
        let f = pre * h;
        let df = a * pre / one_minus * h - pre * dh / (one_minus * one_minus);
        return Ok((f, df));
    }
    continuation(a, b, c, z, side)
}

/// Terminating series when a or b is a non-positive integer.
fn terminating(a: C64, b: C64, c: C64, z: C64) -> (C64, C64) {
    let mut coef = c64(1.0);
    let mut zp = c64(1.0);
    let mut f = c64(1.0);
    let mut df = c64(0.0);
    let mut n = 0usize;
    loop {
        let nf = n as f64;
        let next = coef * (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        if next == c64(0.0) {
            break;
        }
        df += next * (nf + 1.0) * zp;
        zp *= z;
        f += next * zp;
        coef = next;
        n += 1;
    }
    (f, df)
}

/// Gauss summation at z = 1, with the derivative where it is finite.
fn at_unity(a: C64, b: C64, c: C64) -> Result<(C64, C64)> {
    let s = c - a - b;
    if s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "2F1 diverges at z = 1 when Re(c-a-b) <= 0 (c-a-b = {s})"
        )));
    }
    let f = gamma(c)? * gamma(s)? * rgamma(c - a) * rgamma(c - b);
    let df = if s.re > 1.0 {
        let c1 = c + 1.0;
        a * b / c * gamma(c1)? * gamma(s - 1.0)? * rgamma(c1 - a - 1.0) * rgamma(c1 - b - 1.0)
    } else {
        C64::new(f64::INFINITY, 0.0)
    };
    Ok((f, df))
}

fn gauss_series(a: C64, b: C64, c: C64, z: C64) -> Result<(C64, C64)> {
    let mut coef = c64(1.0);
    let mut zp = c64(1.0);
    let mut f = c64(1.0);
    let mut df = c64(0.0);
    let mut small = 0;
    for n in 0..MAX_SERIES_TERMS {
        let nf = n as f64;
        coef = coef * (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        let dterm = coef * (nf + 1.0) * zp;
        zp *= z;
        let term = coef * zp;
        f += term;
        df += dterm;
        if term.norm() <= TERM_EPS * f.norm() && dterm.norm() <= TERM_EPS * (df.norm() + f.norm()) {
            small += 1;
            if small >= 2 {
                return Ok((f, df));
            }
        } else {
            small = 0;
        }
    }
    Err(non_convergence("2F1 Gauss series", format!("z = {z}")))
}

/// Continue (F, F') from the series disc to `z` along a path that avoids
/// the cut. Targets beyond 1 near the real axis are approached from the
/// half plane selected by Im z or by `side`.
fn continuation(a: C64, b: C64, c: C64, z: C64, side: Option<Side>) -> Result<(C64, C64)> {
    let sigma = if z.im > 0.0 {
        1.0
    } else if z.im < 0.0 {
        -1.0
    } else {
        side.map_or(1.0, Side::sign)
    };
    let r = 0.45;
    let behind_unity = z.re > 1.0 && (z.im / z.norm()).abs() < 0.5;
    let start = if behind_unity {
        C64::from_polar(r, sigma * std::f64::consts::FRAC_PI_4)
    } else {
        z * (r / z.norm())
    };
    let (mut f, mut df) = gauss_series(a, b, c, start)?;
    let mut zeta = start;
    let mut steps = 0;
    loop {
        let rem = z - zeta;
        if rem == c64(0.0) {
            break;
        }
        let radius = zeta.norm().min((zeta - 1.0).norm());
        let reach = STEP_FRACTION * radius;
        let last = rem.norm() <= reach;
        let h = if last { rem } else { rem * (reach / rem.norm()) };
        let (f1, df1) = taylor_step(a, b, c, zeta, h, f, df)?;
        f = f1;
        df = df1;
        zeta = if last { z } else { zeta + h };
        steps += 1;
        if steps > MAX_STEPS {
            return Err(non_convergence("2F1 continuation", format!("z = {z}")));
        }
    }
    if !(f.is_finite() && df.is_finite()) {
        return Err(non_convergence("2F1 continuation", format!("overflow at z = {z}")));
    }
    Ok((f, df))
}

/// One Taylor step of z(1-z)F'' + [c-(a+b+1)z]F' - abF = 0 from ζ to ζ+h.
fn taylor_step(a: C64, b: C64, c: C64, zeta: C64, h: C64, f0: C64, f1: C64) -> Result<(C64, C64)> {
    let p0 = zeta * (1.0 - zeta);
    let p1 = 1.0 - 2.0 * zeta;
    let q0 = c - (a + b + 1.0) * zeta;
    let q1 = -(a + b + 1.0);
    let r = -a * b;
    let h2 = h * h;
    // g_k = f_k h^k keeps the coefficients of order one
    let mut gk = f0;
    let mut gk1 = f1 * h;
    let mut sum = gk + gk1;
    let mut dsum = gk1;
    let mut small = 0;
    for k in 0..MAX_TAYLOR_TERMS {
        let kf = k as f64;
        let num = (p1 * kf + q0) * (kf + 1.0) * gk1 * h + (-kf * (kf - 1.0) + q1 * kf + r) * gk * h2;
        let gk2 = -num / (p0 * ((kf + 2.0) * (kf + 1.0)));
        sum += gk2;
        dsum += gk2 * (kf + 2.0);
        let scale = sum.norm() + dsum.norm();
        if gk2.norm() * (kf + 2.0) <= TERM_EPS * scale {
            small += 1;
            if small >= 3 {
                return Ok((sum, dsum / h));
            }
        } else {
            small = 0;
        }
        gk = gk1;
        gk1 = gk2;
    }
    Err(non_convergence("2F1 Taylor step", format!("at {zeta} with step {h}")))
}

/// ₂F₁ through the Euler integral
/// ∫₀¹ t^(b-1)(1-t)^(c-b-1)(1-zt)^(-a) dt / B(b, c-b),
/// with the endpoint exponents absorbed into a Gauss–Jacobi weight.
/// Needs Re b > 0 and Re(c-b) > 0; z off [1, ∞).
pub fn hyp2f1_euler(a: C64, b: C64, c: C64, z: C64, nodes: usize) -> Result<C64> {
    let cb = c - b;
    if !(b.re > 0.0 && cb.re > 0.0) {
        return Err(Error::Domain(format!(
            "Euler integral needs Re b > 0 and Re(c-b) > 0 (b={b}, c-b={cb})"
        )));
    }
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::BranchCut(format!("{z}")));
    }
    let (x, w) = gauss_jacobi(nodes, cb.re - 1.0, b.re - 1.0)?;
    let mut acc = c64(0.0);
    for (&xi, &wi) in x.iter().zip(&w) {
        let t = 0.5 * (1.0 + xi);
        let phase = C64::new(0.0, b.im * (1.0 + xi).ln() + cb.im * (1.0 - xi).ln()).exp();
        let kernel = (-a * (1.0 - z * t).ln()).exp();
        acc += wi * phase * kernel;
    }
    let pre = ((1.0 - c) * std::f64::consts::LN_2).exp();
    let beta_inv = gamma(c)? * rgamma(b) * rgamma(cb);
    Ok(pre * acc * beta_inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: C64, y: C64, tol: f64) -> bool {
        (x - y).norm() <= tol * y.norm().max(1e-300)
    }

    #[test]
    fn trivial_values() {
        let z = C64::new(0.3, -2.0);
        assert_eq!(hyp2f1(c64(0.0), c64(1.0), c64(2.0), z).unwrap(), c64(1.0));
        assert_eq!(hyp2f1(c64(0.7), c64(1.3), c64(2.0), c64(0.0)).unwrap(), c64(1.0));
        assert!(hyp2f1(c64(0.5), c64(0.5), c64(-2.0), z).is_err());
        assert!(matches!(
            hyp2f1(c64(0.5), c64(0.5), c64(2.0), c64(3.0)),
            Err(Error::BranchCut(_))
        ));
    }

    #[test]
    fn elementary_closed_forms() {
        // F(1,1;2;z) = -ln(1-z)/z
        for z in [
            C64::new(-0.3, 0.0),
            C64::new(-20.0, 0.0),
            C64::new(0.5, 40.0),
            C64::new(0.9, 0.05),
            C64::new(-3.0, -7.0),
            C64::new(1e6, 1.0),
        ] {
            let f = hyp2f1(c64(1.0), c64(1.0), c64(2.0), z).unwrap();
            let exact = -(1.0 - z).ln() / z;
            assert!(close(f, exact, 1e-13), "z={z} f={f} exact={exact}");
        }
        // F(a,b;b;z) = (1-z)^(-a)
        let a = C64::new(0.3, 0.8);
        for z in [C64::new(0.5, 3.0), C64::new(-50.0, 0.0), C64::new(2.0, 0.5)] {
            let f = hyp2f1(a, c64(1.7), c64(1.7), z).unwrap();
            let exact = (-a * (1.0 - z).ln()).exp();
            assert!(close(f, exact, 1e-12), "z={z}");
        }
    }

    #[test]
    fn side_limits_of_the_cut() {
        // -ln(1-z)/z above the cut at z = 3: ln(1-z) = ln 2 - iπ
        let up = hyp2f1_side(c64(1.0), c64(1.0), c64(2.0), c64(3.0), Some(Side::Above)).unwrap();
        let exact = -C64::new(2f64.ln(), -std::f64::consts::PI) / 3.0;
        assert!(close(up, exact, 1e-13), "{up} vs {exact}");
        let down = hyp2f1_side(c64(1.0), c64(1.0), c64(2.0), c64(3.0), Some(Side::Below)).unwrap();
        assert!(close(down, exact.conj(), 1e-13));
    }

    #[test]
    fn derivative_from_continuation_matches_contiguous() {
        let (a, b, c) = (c64(0.3), c64(0.7), c64(2.0));
        for z in [C64::new(0.5, 3.0), C64::new(-7.0, 0.0), C64::new(0.2, 0.1)] {
            let (_, d) = hyp2f1_with_derivative(a, b, c, z, None).unwrap();
            let dc = hyp2f1_deriv(a, b, c, z, None).unwrap();
            assert!(close(d, dc, 1e-12));
        }
    }

    #[test]
    fn terminating_polynomial() {
        // F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let (b, c, z) = (c64(1.5), c64(2.5), C64::new(4.0, 1.0));
        let f = hyp2f1(c64(-2.0), b, c, z).unwrap();
        let exact = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert!(close(f, exact, 1e-15));
    }

    #[test]
    fn euler_route_agrees() {
        let (a, b, c) = (c64(0.3), c64(0.7), c64(2.0));
        for z in [C64::new(-0.5, 0.0), C64::new(0.5, 2.0), C64::new(-4.0, -1.0)] {
            let f = hyp2f1(a, b, c, z).unwrap();
            let e = hyp2f1_euler(a, b, c, z, 64).unwrap();
            assert!(close(f, e, 1e-12), "z={z} {f} {e}");
        }
    }
}
