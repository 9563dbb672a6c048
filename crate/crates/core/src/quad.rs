//! Quadrature rules: Gauss–Legendre, Gauss–Jacobi and an adaptive
//! Gauss–Kronrod (10, 21) integrator with a half-line variant.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{non_convergence, Error, Result};
use crate::specfun::gamma::ln_gamma_real;

/// Gauss–Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss–Jacobi rule for the weight (1-x)^a (1+x)^b on [-1, 1].
///
/// Golub–Welsch for the starting values, then Newton on the orthonormal
/// recurrence with Christoffel weights.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || !(a > -1.0) || !(b > -1.0) {
        return Err(Error::Domain(format!(
            "Gauss-Jacobi needs n >= 1 and exponents > -1 (n={n}, a={a}, b={b})"
        )));
    }
    let (diag, off) = jacobi_recurrence(n + 1, a, b);
    let ln_mu0 = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma_real(a + 1.0)
        + ln_gamma_real(b + 1.0)
        - ln_gamma_real(a + b + 2.0);
    let mu0 = ln_mu0.exp();

    let mut t = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = diag[i];
        if i + 1 < n {
            t[(i, i + 1)] = off[i + 1];
            t[(i + 1, i)] = off[i + 1];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);

    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let (pn, dpn, _) = orthonormal_eval(n, *x, &diag, &off, mu0);
            if dpn == 0.0 || !dpn.is_finite() {
                break;
            }
            let dx = pn / dpn;
            *x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, _, sumsq) = orthonormal_eval(n, *x, &diag, &off, mu0);
        weights.push(1.0 / sumsq);
    }
    Ok((nodes, weights))
}

fn jacobi_recurrence(m: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut diag = vec![0.0; m];
    let mut off = vec![0.0; m];
    for k in 0..m {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        diag[k] = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k == 1 {
            // the factor (1+a+b)/(s-1) cancels to 1; keeps a+b = -1 finite
            off[k] = (4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0))).sqrt();
        } else if k > 1 {
            let num = 4.0 * kf * (kf + a) * (kf + b) * (kf + a + b);
            let den = s * s * (s + 1.0) * (s - 1.0);
            off[k] = (num / den).sqrt();
        }
    }
    (diag, off)
}

/// Value and derivative of the degree-n orthonormal polynomial plus the
/// Christoffel sum of squares of degrees 0..n-1.
fn orthonormal_eval(n: usize, x: f64, diag: &[f64], off: &[f64], mu0: f64) -> (f64, f64, f64) {
    let mut p_prev = 0.0;
    let mut d_prev = 0.0;
    let mut p = 1.0 / mu0.sqrt();
    let mut d = 0.0;
    let mut sumsq = p * p;
    for k in 0..n {
        let p_next = ((x - diag[k]) * p - off[k] * p_prev) / off[k + 1];
        let d_next = ((x - diag[k]) * d + p - off[k] * d_prev) / off[k + 1];
        p_prev = p;
        d_prev = d;
        p = p_next;
        d = d_next;
        if k + 1 < n {
            sumsq += p * p;
        }
    }
    (p, d, sumsq)
}

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525354646,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One Kronrod-21 panel with the QUADPACK error heuristic.
fn qk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive Gauss–Kronrod integration of `f` over the finite interval [a, b].
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (v, e) = qk21(&mut f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, error: e });
    let mut total = v;
    let mut total_err = e;
    loop {
        if !total.is_finite() {
            return Err(non_convergence("adaptive quadrature", "non-finite integrand value"));
        }
        if total_err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(non_convergence(
                "adaptive quadrature",
                format!("{} intervals, error estimate {total_err:e}", heap.len()),
            ));
        }
        let seg = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // the interval can no longer be split in floating point
            heap.push(seg);
            break;
        }
        let (v1, e1) = qk21(&mut f, seg.a, mid);
        let (v2, e2) = qk21(&mut f, mid, seg.b);
        evaluations += 42;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
    }
    // re-sum to shed the drift of the running totals
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Ok(Estimate {
        value,
        error,
        evaluations,
    })
}

/// Integral of `f` over [0, inf) through t = scale·(s/(1-s))³.
///
/// The cubic map pushes algebraic tails t^(-1-δ) into an integrable endpoint
/// behaviour in s for any δ > -2/3.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(mut f: F, scale: f64, cfg: &QuadConfig) -> Result<Estimate> {
    let g = |s: f64| {
        let r = s / (1.0 - s);
        let t = scale * r * r * r;
        let jac = scale * 3.0 * r * r / ((1.0 - s) * (1.0 - s));
        if !t.is_finite() || jac == 0.0 {
            return 0.0;
        }
        let v = f(t) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, cfg)
}
