//! The positive symmetric operator
//!
//! ```text
//! A_μ(t,u) = ut / ((u+μ²)(u+t+μ²)(t+μ²))
//! ```
//!
//! on L²(ℝ₊), whose norm is π for every μ ≥ 0. In v = ln t the kernel A₀
//! with the √w scaling becomes the convolution kernel 1/(2cosh((v-s)/2)),
//! so the discrete top eigenvalue approaches π as the logarithmic window
//! widens.

use nalgebra::{DMatrix, DVector};

use crate::error::{non_convergence, Error, Result};
use crate::fredholm::symmetric_matrix;
use crate::grid::QuadGrid;
use crate::quad::{integrate, QuadConfig};

/// Symmetrised Nyström matrix √(wᵢwⱼ)·A_μ(tᵢ,tⱼ).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    pub mu: f64,
    pub grid: QuadGrid,
    pub entries: DMatrix<f64>,
}

impl KernelMatrix {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Largest |Mᵢⱼ - Mⱼᵢ|.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.entries;
        (m - m.transpose()).amax()
    }
}

/// The kernel A_μ(t,u); at μ = 0 it reduces to 1/(t+u).
pub fn kernel(mu: f64, t: f64, u: f64) -> f64 {
    let m2 = mu * mu;
    if m2 == 0.0 {
        1.0 / (t + u)
    } else {
        u * t / ((u + m2) * (u + t + m2) * (t + m2))
    }
}

/// Logarithmic grid at scale 1 whose window in ln t has half-width n/4, so
/// the node spacing stays fixed while the window grows with n.
pub fn operator_grid(n: usize) -> QuadGrid {
    let half = n as f64 / 4.0;
    QuadGrid::log_tail(n, 1.0, -half, half)
}

pub fn build_kernel(mu: f64, grid: &QuadGrid) -> Result<KernelMatrix> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::Domain(format!("need finite mu >= 0, got {mu}")));
    }
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    let mut entries = symmetric_matrix(grid, |t, u| kernel(mu, t, u));
    // assembly is exact in symmetric form; enforce bitwise symmetry
    let n = grid.len();
    for j in 0..n {
        for i in j + 1..n {
            entries[(j, i)] = entries[(i, j)];
        }
    }
    Ok(KernelMatrix {
        mu,
        grid: grid.clone(),
        entries,
    })
}

/// Size up to which the full symmetric eigensolver is used.
pub const DENSE_LIMIT: usize = 1000;

/// All eigenvalues in ascending order.
pub fn all_eigenvalues(k: &KernelMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = k.entries.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Largest eigenvalue: dense solve up to [`DENSE_LIMIT`], power iteration
/// beyond.
pub fn top_eigenvalue(k: &KernelMatrix) -> Result<f64> {
    if k.len() <= DENSE_LIMIT {
        return all_eigenvalues(k)
            .last()
            .copied()
            .ok_or_else(|| Error::Domain("empty kernel".into()));
    }
    power_iteration(&k.entries, 1e-10, 100_000)
}

/// Power iteration on a symmetric positive matrix; stops when successive
/// Rayleigh quotients differ by less than `tol`.
pub fn power_iteration(m: &DMatrix<f64>, tol: f64, max_iter: usize) -> Result<f64> {
    let n = m.nrows();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut last = f64::NAN;
    for _ in 0..max_iter {
        let w = m * &v;
        let rq = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        v = w / norm;
        if (rq - last).abs() < tol {
            return Ok(rq);
        }
        last = rq;
    }
    Err(non_convergence("power iteration", format!("n = {n}")))
}

fn half_sech(v: f64) -> f64 {
    let e = (-0.5 * v.abs()).exp();
    e / (1.0 + e * e)
}

/// ∫_{-t_max}^{t_max} dv / (2cosh(v/2)), which tends to π.
pub fn cosh_norm_check(t_max: f64) -> Result<f64> {
    Ok(2.0 * cosh_half_integral(t_max)?)
}

/// ∫_0^{t_max} dv / (2cosh(v/2)).
pub fn cosh_half_integral(t_max: f64) -> Result<f64> {
    if !(t_max > 0.0) {
        return Err(Error::Domain(format!("need t_max > 0, got {t_max}")));
    }
    let cfg = QuadConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-13,
        max_intervals: 4000,
    };
    Ok(integrate(half_sech, 0.0, t_max, &cfg)?.value)
}
