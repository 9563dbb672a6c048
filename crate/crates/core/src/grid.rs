//! Quadrature grids on [0, ∞) built from a Gauss–Legendre rule pushed
//! through a compactifying or logarithmic map.

use serde::{Deserialize, Serialize};

use crate::quad::gauss_legendre;

/// The map from the reference variable to t ∈ [0, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Transform {
    /// t = scale·s/(1-s), s ∈ [0, 1].
    Rational { scale: f64 },
    /// t = scale·e^v, v ∈ [v_min, v_max]; the ends are truncated.
    LogTail { scale: f64, v_min: f64, v_max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseRule {
    GaussLegendre(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub transform: Transform,
    pub base_rule: BaseRule,
}

/// Default logarithmic window, in units of the grid scale: e^-25 … e^30.
pub const LOG_V_MIN: f64 = -25.0;
pub const LOG_V_MAX: f64 = 30.0;

impl QuadGrid {
    /// Gauss–Legendre on [0, 1] through t = scale·s/(1-s).
    pub fn rational(n: usize, scale: f64) -> Self {
        assert!(n >= 1 && scale > 0.0);
        let (x, w) = gauss_legendre(n);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (xi, wi) in x.iter().zip(&w) {
            let s = 0.5 * (xi + 1.0);
            let one_minus = 1.0 - s;
            nodes.push(scale * s / one_minus);
            weights.push(0.5 * wi * scale / (one_minus * one_minus));
        }
        QuadGrid {
            nodes,
            weights,
            transform: Transform::Rational { scale },
            base_rule: BaseRule::GaussLegendre(n),
        }
    }

    /// Gauss–Legendre in v = ln(t/scale) over [v_min, v_max].
    pub fn log_tail(n: usize, scale: f64, v_min: f64, v_max: f64) -> Self {
        assert!(n >= 1 && scale > 0.0 && v_max > v_min);
        let (x, w) = gauss_legendre(n);
        let half = 0.5 * (v_max - v_min);
        let mid = 0.5 * (v_max + v_min);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (xi, wi) in x.iter().zip(&w) {
            let t = scale * (mid + half * xi).exp();
            nodes.push(t);
            weights.push(half * wi * t);
        }
        QuadGrid {
            nodes,
            weights,
            transform: Transform::LogTail { scale, v_min, v_max },
            base_rule: BaseRule::GaussLegendre(n),
        }
    }

    /// Logarithmic grid over the default window.
    pub fn log_default(n: usize, scale: f64) -> Self {
        QuadGrid::log_tail(n, scale, LOG_V_MIN, LOG_V_MAX)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn scale(&self) -> f64 {
        match self.transform {
            Transform::Rational { scale } | Transform::LogTail { scale, .. } => scale,
        }
    }

    /// Same rule and window, different scale.
    pub fn rescaled(&self, scale: f64) -> Self {
        let BaseRule::GaussLegendre(n) = self.base_rule;
        match self.transform {
            Transform::Rational { .. } => QuadGrid::rational(n, scale),
            Transform::LogTail { v_min, v_max, .. } => QuadGrid::log_tail(n, scale, v_min, v_max),
        }
    }

    /// Σ wᵢ f(tᵢ).
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }

    /// Error of the grid on ∫₀^∞ dt/(1+t)² = 1.
    pub fn self_test(&self) -> f64 {
        (self.integrate(|t| 1.0 / ((1.0 + t) * (1.0 + t))) - 1.0).abs()
    }
}

/// Gauss–Legendre on [0, 1] pushed through t = scale·s/(1-s).
pub fn build_grid(n: usize, scale: f64) -> QuadGrid {
    QuadGrid::rational(n, scale)
}
