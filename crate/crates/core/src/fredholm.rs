//! Nyström discretisation of the two Fredholm equations
//!
//! ```text
//! J(x) = x - λx² ∫₀^∞ J(t) dt / ((t+μ²)²(t+μ²+x))
//! φ(x) = c/(1+x) - λ ∫₀^∞ φ(t) dt/(1+t+x),   c = 1 + λ ∫₀^∞ φ(t) dt/(1+t)
//! ```
//!
//! Both are solved in symmetric form. With ρ̃ = J/(x(μ²+x)) the first one
//! reads ρ̃ + λAρ̃ = 1/(μ²+x) for the symmetric kernel
//! A(x,t) = xt/((x+μ²)(t+μ²)(x+t+μ²)), and the unknowns are scaled by √w.
//!
//! The kernels are homogeneous of degree -1, so the solutions decay like a
//! power t^(-p) with p = 1 + α_λ. On logarithmic grids the part of the
//! integral beyond the last node is closed with that power law anchored at
//! the last node.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{QuadGrid, Transform};
use crate::model::{alpha_of_lambda, j_real, Coupling, LAMBDA_CRITICAL};
use crate::quad::gauss_legendre;

pub use crate::grid::build_grid;

/// Distance to the threshold -1/π below which no solve is attempted.
pub const THRESHOLD_MARGIN: f64 = 1e-3;

/// Number of off-grid points at which the continuous residual is checked.
pub const CHECK_POINTS: usize = 32;

/// Which equation a solution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NystromKind {
    J { lambda: f64, mu2: f64 },
    Phi { lambda: f64 },
}

/// Power-law continuation beyond the end of a logarithmic grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailClosure {
    /// Truncation point of the grid.
    pub t_end: f64,
    /// Last node, where the continuation is anchored.
    pub t_last: f64,
    /// Decay exponent of the density.
    pub power: f64,
}

/// Sampled solution of one of the two equations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NystromSolution {
    pub grid: QuadGrid,
    /// J(tᵢ) or φ(tᵢ).
    pub values: Vec<f64>,
    /// c_λ when solving for φ.
    pub c_value: Option<f64>,
    /// Largest residual of the continuous equation over the check set,
    /// weighted by 1/(1+x).
    pub residual_max: f64,
    pub kind: NystromKind,
    pub tail: Option<TailClosure>,
    /// ρ̃(tᵢ) for J, φ(tᵢ) for φ.
    density: Vec<f64>,
}

/// Composite Gauss–Legendre rule in u = ln(t/t_end) on [0, U].
struct TailRule {
    t: Vec<f64>,
    // includes the Jacobian dt = t du
    w: Vec<f64>,
}

impl TailRule {
    fn new(t_end: f64, power: f64) -> Self {
        let (x, w) = gauss_legendre(16);
        let span = (40.0 / power).ceil().clamp(1.0, 200.0) as usize;
        let mut tt = Vec::with_capacity(16 * span);
        let mut ww = Vec::with_capacity(16 * span);
        for k in 0..span {
            for (xi, wi) in x.iter().zip(&w) {
                let u = k as f64 + 0.5 * (1.0 + xi);
                let t = t_end * u.exp();
                tt.push(t);
                ww.push(0.5 * wi * t);
            }
        }
        TailRule { t: tt, w: ww }
    }

    fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.t.iter().zip(&self.w).map(|(&t, &w)| w * f(t)).sum()
    }
}

/// Decay exponent p = 1 + α_λ of the density, or None when there is no
/// real power law (|λ| ≥ 1/π).
fn decay_power(lambda: f64) -> Option<f64> {
    if lambda.abs() < 1.0 / std::f64::consts::PI {
        Some(1.0 + alpha_of_lambda(lambda).re)
    } else {
        None
    }
}

fn closure_for(grid: &QuadGrid, lambda: f64) -> Option<TailClosure> {
    match grid.transform {
        Transform::LogTail { scale, v_max, .. } => {
            let power = decay_power(lambda)?;
            Some(TailClosure {
                t_end: scale * v_max.exp(),
                t_last: *grid.nodes.last()?,
                power,
            })
        }
        Transform::Rational { .. } => None,
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be finite, got {lambda}")));
    }
    if lambda <= LAMBDA_CRITICAL + THRESHOLD_MARGIN {
        return Err(Error::Threshold(lambda));
    }
    Ok(())
}

/// The symmetric J kernel A(x,t).
#[inline]
pub fn kernel_a(mu2: f64, x: f64, t: f64) -> f64 {
    x * t / ((x + mu2) * (t + mu2) * (x + t + mu2))
}

#[inline]
fn kernel_phi(x: f64, t: f64) -> f64 {
    1.0 / (1.0 + x + t)
}

/// Symmetric matrix √(wᵢwⱼ)·k(tᵢ,tⱼ), assembled by columns in parallel.
pub(crate) fn symmetric_matrix<K: Fn(f64, f64) -> f64 + Sync>(grid: &QuadGrid, k: K) -> DMatrix<f64> {
    let n = grid.len();
    let sw: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(j, col)| {
        let tj = grid.nodes[j];
        for (i, v) in col.iter_mut().enumerate() {
            *v = sw[i] * sw[j] * k(grid.nodes[i], tj);
        }
    });
    DMatrix::from_vec(n, n, data)
}

fn lu_solve(m: DMatrix<f64>, rhs: DVector<f64>) -> Result<DVector<f64>> {
    let lu = m.lu();
    let u = lu.u();
    let diag = u.diagonal();
    let max = diag.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let min = diag.iter().fold(f64::INFINITY, |a, &b| a.min(b.abs()));
    if !(min > 1e-14 * max) {
        return Err(Error::SingularSystem(format!(
            "pivot ratio {:e}",
            min / max
        )));
    }
    lu.solve(&rhs)
        .ok_or_else(|| Error::SingularSystem("LU solve failed".into()))
}

/// Nyström solve of the J equation on `grid`.
pub fn solve_j_nystrom(lambda: f64, mu2: f64, grid: &QuadGrid) -> Result<NystromSolution> {
    check_lambda(lambda)?;
    if !(mu2 > 0.0) {
        return Err(Error::Domain(format!("mu^2 must be positive, got {mu2}")));
    }
    let n = grid.len();
    let kind = NystromKind::J { lambda, mu2 };
    if lambda == 0.0 {
        let density = grid.nodes.iter().map(|t| 1.0 / (mu2 + t)).collect();
        return Ok(NystromSolution {
            grid: grid.clone(),
            values: grid.nodes.clone(),
            c_value: None,
            residual_max: 0.0,
            kind,
            tail: None,
            density,
        });
    }
    let tail = closure_for(grid, lambda);
    let sw: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
    let mut m = symmetric_matrix(grid, |x, t| kernel_a(mu2, x, t)) * lambda;
    for i in 0..n {
        m[(i, i)] += 1.0;
    }
    if let Some(cl) = tail {
        let rule = TailRule::new(cl.t_end, cl.power);
        for i in 0..n {
            let ti = grid.nodes[i];
            let tau = rule.integrate(|t| (cl.t_last / t).powf(cl.power) * kernel_a(mu2, ti, t));
            m[(i, n - 1)] += lambda * sw[i] * tau / sw[n - 1];
        }
    }
    let rhs = DVector::from_iterator(n, (0..n).map(|i| sw[i] / (mu2 + grid.nodes[i])));
    let psi = lu_solve(m, rhs)?;
    let density: Vec<f64> = (0..n).map(|i| psi[i] / sw[i]).collect();
    let values = grid
        .nodes
        .iter()
        .zip(&density)
        .map(|(&t, &r)| t * (mu2 + t) * r)
        .collect();
    let mut sol = NystromSolution {
        grid: grid.clone(),
        values,
        c_value: None,
        residual_max: 0.0,
        kind,
        tail,
        density,
    };
    sol.residual_max = sol.continuous_residual()?;
    Ok(sol)
}

/// Nyström solve of the φ equation together with the constant c.
pub fn solve_phi_nystrom(lambda: f64, grid: &QuadGrid) -> Result<NystromSolution> {
    check_lambda(lambda)?;
    let n = grid.len();
    let kind = NystromKind::Phi { lambda };
    if lambda == 0.0 {
        let values: Vec<f64> = grid.nodes.iter().map(|t| 1.0 / (1.0 + t)).collect();
        return Ok(NystromSolution {
            grid: grid.clone(),
            density: values.clone(),
            values,
            c_value: Some(1.0),
            residual_max: 0.0,
            kind,
            tail: None,
        });
    }
    let tail = closure_for(grid, lambda);
    let sw: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
    // unknowns (ψ₀ … ψ_{n-1}, c)
    let mut m = DMatrix::<f64>::zeros(n + 1, n + 1);
    let k = symmetric_matrix(grid, kernel_phi);
    m.view_mut((0, 0), (n, n)).copy_from(&(k * lambda));
    for i in 0..n {
        m[(i, i)] += 1.0;
        m[(i, n)] = -sw[i] / (1.0 + grid.nodes[i]);
        m[(n, i)] = -lambda * sw[i] / (1.0 + grid.nodes[i]);
    }
    m[(n, n)] = 1.0;
    if let Some(cl) = tail {
        let rule = TailRule::new(cl.t_end, cl.power);
        let anchor = |t: f64| (cl.t_last / t).powf(cl.power);
        for i in 0..n {
            let ti = grid.nodes[i];
            let tau = rule.integrate(|t| anchor(t) * kernel_phi(ti, t));
            m[(i, n - 1)] += lambda * sw[i] * tau / sw[n - 1];
        }
        let sigma = rule.integrate(|t| anchor(t) / (1.0 + t));
        m[(n, n - 1)] -= lambda * sigma / sw[n - 1];
    }
    let mut rhs = DVector::zeros(n + 1);
    rhs[n] = 1.0;
    let sol = lu_solve(m, rhs)?;
    let values: Vec<f64> = (0..n).map(|i| sol[i] / sw[i]).collect();
    let mut out = NystromSolution {
        grid: grid.clone(),
        density: values.clone(),
        values,
        c_value: Some(sol[n]),
        residual_max: 0.0,
        kind,
        tail,
    };
    out.residual_max = out.continuous_residual()?;
    Ok(out)
}

impl NystromSolution {
    /// ρ̃(tᵢ) for a J solution, φ(tᵢ) for a φ solution.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    fn lambda(&self) -> f64 {
        match self.kind {
            NystromKind::J { lambda, .. } | NystromKind::Phi { lambda } => lambda,
        }
    }

    fn kernel(&self, x: f64, t: f64) -> f64 {
        match self.kind {
            NystromKind::J { mu2, .. } => kernel_a(mu2, x, t),
            NystromKind::Phi { .. } => kernel_phi(x, t),
        }
    }

    fn source(&self, x: f64) -> f64 {
        match self.kind {
            NystromKind::J { mu2, .. } => 1.0 / (mu2 + x),
            NystromKind::Phi { .. } => self.c_value.unwrap_or(1.0) / (1.0 + x),
        }
    }

    /// ∫ k(x,t)·density(t) dt: grid part plus power-law tail.
    fn apply_kernel(&self, x: f64, rule: Option<&TailRule>) -> f64 {
        let grid_part: f64 = self
            .grid
            .nodes
            .iter()
            .zip(&self.grid.weights)
            .zip(&self.density)
            .map(|((&t, &w), &d)| w * self.kernel(x, t) * d)
            .sum();
        let tail_part = match (self.tail, rule) {
            (Some(cl), Some(rule)) => {
                let last = *self.density.last().expect("non-empty grid");
                last * rule.integrate(|t| (cl.t_last / t).powf(cl.power) * self.kernel(x, t))
            }
            _ => 0.0,
        };
        grid_part + tail_part
    }

    fn tail_rule(&self) -> Option<TailRule> {
        self.tail.map(|cl| TailRule::new(cl.t_end, cl.power))
    }

    /// Density at an arbitrary x ≥ 0 from the Nyström interpolation formula.
    fn density_at(&self, x: f64, rule: Option<&TailRule>) -> f64 {
        self.source(x) - self.lambda() * self.apply_kernel(x, rule)
    }

    /// J(x) or φ(x) at an arbitrary x ≥ 0.
    pub fn interpolate(&self, x: f64) -> f64 {
        let rule = self.tail_rule();
        let d = self.density_at(x, rule.as_ref());
        match self.kind {
            NystromKind::J { mu2, .. } => x * (mu2 + x) * d,
            NystromKind::Phi { .. } => d,
        }
    }

    /// Interpolates at many points, reusing the tail rule.
    pub fn interpolate_many(&self, xs: &[f64]) -> Vec<f64> {
        let rule = self.tail_rule();
        xs.par_iter()
            .map(|&x| {
                let d = self.density_at(x, rule.as_ref());
                match self.kind {
                    NystromKind::J { mu2, .. } => x * (mu2 + x) * d,
                    NystromKind::Phi { .. } => d,
                }
            })
            .collect()
    }

    /// Residual of the continuous equation at 32 off-grid points, with the
    /// integral taken on a grid of twice the size over the interpolant.
    fn continuous_residual(&self) -> Result<f64> {
        let n = self.grid.len();
        let fine = match self.grid.transform {
            Transform::Rational { scale } => QuadGrid::rational(2 * n, scale),
            Transform::LogTail { scale, v_min, v_max } => QuadGrid::log_tail(2 * n, scale, v_min, v_max),
        };
        let rule = self.tail_rule();
        let fine_density: Vec<f64> = fine
            .nodes
            .par_iter()
            .map(|&t| self.density_at(t, rule.as_ref()))
            .collect();
        let lo = self.grid.nodes[0];
        let hi = self.grid.nodes[n - 1];
        let ratio = (hi / lo).ln();
        let checks: Vec<f64> = (0..CHECK_POINTS)
            .map(|k| lo * (ratio * (k as f64 + 0.5) / CHECK_POINTS as f64).exp())
            .collect();
        let lambda = self.lambda();
        let last_fine = *fine_density.last().expect("non-empty grid");
        let fine_tail = self.tail.map(|cl| TailClosure {
            t_last: *fine.nodes.last().expect("non-empty grid"),
            ..cl
        });
        let worst = checks
            .par_iter()
            .map(|&x| {
                let d = self.density_at(x, rule.as_ref());
                let mut integral: f64 = fine
                    .nodes
                    .iter()
                    .zip(&fine.weights)
                    .zip(&fine_density)
                    .map(|((&t, &w), &f)| w * self.kernel(x, t) * f)
                    .sum();
                if let (Some(cl), Some(rule)) = (fine_tail, rule.as_ref()) {
                    integral += last_fine * rule.integrate(|t| (cl.t_last / t).powf(cl.power) * self.kernel(x, t));
                }
                let r = d - self.source(x) + lambda * integral;
                let weight = match self.kind {
                    NystromKind::J { mu2, .. } => x * (mu2 + x) / (1.0 + x),
                    NystromKind::Phi { .. } => 1.0,
                };
                (r * weight).abs()
            })
            .reduce(|| 0.0, f64::max);
        Ok(worst)
    }
}

/// Plugs the closed-form J into the discretised J equation and returns
/// maxᵢ |residualᵢ|/(1+tᵢ). On logarithmic grids the integral beyond the
/// grid is taken from the closed form as well.
pub fn residual_of_closed_form(c: &Coupling, grid: &QuadGrid) -> Result<f64> {
    let mu2 = c.mu2;
    let lambda = c.lambda;
    let jv: Vec<f64> = grid
        .nodes
        .par_iter()
        .map(|&t| j_real(c, t))
        .collect::<Result<_>>()?;
    let tail = match grid.transform {
        Transform::LogTail { scale, v_max, .. } => {
            let power = decay_power(lambda).unwrap_or(0.5);
            let rule = TailRule::new(scale * v_max.exp(), power);
            let jt: Vec<f64> = rule.t.par_iter().map(|&t| j_real(c, t)).collect::<Result<_>>()?;
            Some((rule, jt))
        }
        Transform::Rational { .. } => None,
    };
    let worst = grid
        .nodes
        .par_iter()
        .enumerate()
        .map(|(i, &ti)| {
            let mut s: f64 = grid
                .nodes
                .iter()
                .zip(&grid.weights)
                .zip(&jv)
                .map(|((&t, &w), &j)| w * j / ((t + mu2) * (t + mu2) * (t + mu2 + ti)))
                .sum();
            if let Some((rule, jt)) = &tail {
                s += rule
                    .t
                    .iter()
                    .zip(&rule.w)
                    .zip(jt)
                    .map(|((&t, &w), &j)| w * j / ((t + mu2) * (t + mu2) * (t + mu2 + ti)))
                    .sum::<f64>();
            }
            let r = jv[i] - ti + lambda * ti * ti * s;
            r.abs() / (1.0 + ti)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Coupling;

    #[test]
    fn free_solutions_are_exact() {
        let g = QuadGrid::log_default(64, 1.0);
        let s = solve_j_nystrom(0.0, 1.0, &g).unwrap();
        assert_eq!(s.values, g.nodes);
        let p = solve_phi_nystrom(0.0, &g).unwrap();
        assert_eq!(p.c_value, Some(1.0));
        let c = Coupling::ribbon(0.0).unwrap();
        assert_eq!(residual_of_closed_form(&c, &g).unwrap(), 0.0);
    }

    #[test]
    fn threshold_is_rejected() {
        let g = QuadGrid::log_default(32, 1.0);
        assert!(matches!(
            solve_j_nystrom(LAMBDA_CRITICAL + 1e-4, 1.0, &g),
            Err(Error::Threshold(_))
        ));
    }

    #[test]
    fn kernel_is_symmetric() {
        assert_eq!(kernel_a(0.7, 2.0, 5.0), kernel_a(0.7, 5.0, 2.0));
    }

    #[test]
    fn phi_at_origin_by_interpolation() {
        let g = QuadGrid::log_default(200, 1.0);
        let p = solve_phi_nystrom(0.2, &g).unwrap();
        assert!((p.interpolate(0.0) - 1.0).abs() < 1e-12);
    }
}
