//! Numeric hyperlogarithms
//!
//! Hlog(a, [k₁, …, kₙ]) = ∫₀ᵃ dx₁/(x₁-k₁) ∫₀^{x₁} dx₂/(x₂-k₂) ⋯ ∫₀^{x_{n-1}} dxₙ/(xₙ-kₙ).
//!
//! All inner integrals live on one panel grid over [0, a]. Panels grow
//! geometrically away from the nonzero letters and carry Chebyshev points
//! of the first kind, so every level is a spectral indefinite integral of
//! the level below. Evaluating bottom-up yields all suffixes at once.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter sequence for a hyperlogarithm.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub letters: Vec<i64>,
}

impl Word {
    pub fn new(letters: Vec<i64>) -> Self {
        Word { letters }
    }

    /// n alternations of (0, -1): [0, -1, 0, -1, …].
    pub fn alternating_f(n: usize) -> Self {
        Word::new((0..n).flat_map(|_| [0, -1]).collect())
    }

    /// -1 followed by n alternations of (0, -1).
    pub fn alternating_g(n: usize) -> Self {
        let mut letters = vec![-1];
        letters.extend(Word::alternating_f(n).letters);
        Word::new(letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// True when consecutive letters differ throughout.
    pub fn alternates(&self) -> bool {
        self.letters.windows(2).all(|p| p[0] != p[1])
    }
}

impl From<Vec<i64>> for Word {
    fn from(letters: Vec<i64>) -> Self {
        Word::new(letters)
    }
}

const CHEB_POINTS: usize = 24;
const MAX_PANELS: usize = 20_000;

struct Spectral {
    nodes: [f64; CHEB_POINTS],
    // indefinite integral from -1 to each node, applied to nodal values
    cumulative: Vec<[f64; CHEB_POINTS]>,
    // full integral over [-1, 1]
    total: [f64; CHEB_POINTS],
}

fn spectral() -> &'static Spectral {
    static CELL: OnceLock<Spectral> = OnceLock::new();
    CELL.get_or_init(|| {
        let m = CHEB_POINTS;
        let mut nodes = [0.0; CHEB_POINTS];
        for (j, x) in nodes.iter_mut().enumerate() {
            // ascending order
            *x = -(std::f64::consts::PI * (j as f64 + 0.5) / m as f64).cos();
        }
        // T_k at the nodes
        let t_at = |k: usize, x: f64| -> f64 { (k as f64 * x.acos()).cos() };
        // ∫_{-1}^x T_k
        let int_t = |k: usize, x: f64| -> f64 {
            match k {
                0 => x + 1.0,
                1 => 0.5 * (x * x - 1.0),
                _ => {
                    let kf = k as f64;
                    let at = |y: f64| 0.5 * (t_at(k + 1, y) / (kf + 1.0) - t_at(k - 1, y) / (kf - 1.0));
                    at(x) - at(-1.0)
                }
            }
        };
        let coef_row = |k: usize| -> [f64; CHEB_POINTS] {
            let mut row = [0.0; CHEB_POINTS];
            for (j, r) in row.iter_mut().enumerate() {
                let w = if k == 0 { 1.0 } else { 2.0 };
                *r = w / m as f64 * t_at(k, nodes[j]);
            }
            row
        };
        let rows: Vec<[f64; CHEB_POINTS]> = (0..m).map(coef_row).collect();
        let mut cumulative = vec![[0.0; CHEB_POINTS]; m];
        for (i, out) in cumulative.iter_mut().enumerate() {
            for (k, row) in rows.iter().enumerate() {
                let ik = int_t(k, nodes[i]);
                for j in 0..m {
                    out[j] += ik * row[j];
                }
            }
        }
        let mut total = [0.0; CHEB_POINTS];
        for (k, row) in rows.iter().enumerate() {
            let ik = int_t(k, 1.0);
            for j in 0..m {
                total[j] += ik * row[j];
            }
        }
        Spectral {
            nodes,
            cumulative,
            total,
        }
    })
}

fn panels(a: f64, singular: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let mut l = 0.0;
    while l < a {
        let dist = singular.iter().map(|k| (k - l).abs()).fold(f64::INFINITY, f64::min);
        let width = if dist.is_finite() { 0.5 * dist } else { a };
        let r = if l + width >= a * (1.0 - 1e-15) { a } else { l + width };
        out.push((l, r));
        l = r;
        if out.len() > MAX_PANELS {
            return Err(Error::Divergent(format!(
                "evaluation point {a} too close to a letter"
            )));
        }
    }
    Ok(out)
}

/// Hlog(a, w) for every suffix of `w`: entry i is Hlog(a, w[i..]), and the
/// final entry (the empty word) is 1.
pub fn hlog_suffixes(a: f64, w: &Word) -> Result<Vec<f64>> {
    let n = w.len();
    let mut out = vec![0.0; n + 1];
    out[n] = 1.0;
    if n == 0 {
        return Ok(out);
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("hlog needs a finite a > 0, got {a}")));
    }
    let trailing_zeros = w.letters.iter().rev().take_while(|&&k| k == 0).count();
    if trailing_zeros == n {
        let la = a.ln();
        let mut p = 1.0;
        for j in 1..=n {
            p *= la / j as f64;
            out[n - j] = p;
        }
        return Ok(out);
    }
    if trailing_zeros > 0 {
        return Err(Error::Divergent(format!(
            "word {:?} ends in 0 and diverges at the lower endpoint",
            w.letters
        )));
    }
    if let Some(k) = w.letters.iter().find(|&&k| k > 0 && (k as f64) <= a) {
        return Err(Error::Divergent(format!(
            "letter {k} lies on the integration path [0, {a}]"
        )));
    }

    let singular: Vec<f64> = w.letters.iter().filter(|&&k| k != 0).map(|&k| k as f64).collect();
    let grid = panels(a, &singular)?;
    let sp = spectral();
    let mut ys = Vec::with_capacity(grid.len() * CHEB_POINTS);
    for &(l, r) in &grid {
        for x in sp.nodes.iter() {
            ys.push(0.5 * (l + r) + 0.5 * (r - l) * x);
        }
    }

    // innermost level in closed form
    let kn = w.letters[n - 1] as f64;
    let mut level: Vec<f64> = ys.iter().map(|&y| (-y / kn).ln_1p()).collect();
    out[n - 1] = (-a / kn).ln_1p();

    let mut next = vec![0.0; ys.len()];
    let mut integrand = [0.0; CHEB_POINTS];
    for i in (0..n - 1).rev() {
        let k = w.letters[i] as f64;
        let mut running = 0.0;
        for (p, &(l, r)) in grid.iter().enumerate() {
            let half = 0.5 * (r - l);
            let base = p * CHEB_POINTS;
            for j in 0..CHEB_POINTS {
                integrand[j] = level[base + j] / (ys[base + j] - k);
            }
            for j in 0..CHEB_POINTS {
                let row = &sp.cumulative[j];
                let s: f64 = row.iter().zip(&integrand).map(|(c, f)| c * f).sum();
                next[base + j] = running + half * s;
            }
            let t: f64 = sp.total.iter().zip(&integrand).map(|(c, f)| c * f).sum();
            running += half * t;
        }
        out[i] = running;
        std::mem::swap(&mut level, &mut next);
    }
    Ok(out)
}

/// Hlog(a, w).
pub fn hlog(a: f64, w: &Word) -> Result<f64> {
    hlog_suffixes(a, w).map(|v| v[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::polylog::polylog;

    #[test]
    fn single_letters() {
        assert!((hlog(3.0, &Word::new(vec![-1])).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert!((hlog(3.0, &Word::new(vec![0])).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!((hlog(0.5, &Word::new(vec![2])).unwrap() - 0.75f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn classical_polylogs() {
        for a in [0.3, 1.0, 7.0, 900.0] {
            for n in 1..5usize {
                let mut letters = vec![0; n];
                letters.push(-1);
                let v = hlog(a, &Word::new(letters)).unwrap();
                let exact = -polylog(n as u32 + 1, -a).unwrap();
                assert!((v - exact).abs() < 1e-12 * exact.abs().max(1.0), "a={a} n={n}");
            }
        }
    }

    #[test]
    fn pure_zero_words() {
        let v = hlog(5.0, &Word::new(vec![0, 0, 0])).unwrap();
        assert!((v - 5f64.ln().powi(3) / 6.0).abs() < 1e-14);
    }

    #[test]
    fn ill_posed_words() {
        assert!(matches!(hlog(1.0, &Word::new(vec![-1, 0])), Err(Error::Divergent(_))));
        assert!(matches!(hlog(2.0, &Word::new(vec![1])), Err(Error::Divergent(_))));
        assert!(hlog(0.0, &Word::new(vec![-1])).is_err());
        assert_eq!(hlog(0.7, &Word::new(vec![])).unwrap(), 1.0);
    }

    #[test]
    fn suffixes_match_individual_words() {
        let w = Word::alternating_g(3);
        let all = hlog_suffixes(2.0, &w).unwrap();
        for i in 0..w.len() {
            let sub = Word::new(w.letters[i..].to_vec());
            assert!((all[i] - hlog(2.0, &sub).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn positive_letter_beyond_endpoint() {
        // Hlog(a,[1,1]) = log²(1-a)/2
        let a = 0.999;
        let v = hlog(a, &Word::new(vec![1, 1])).unwrap();
        assert!((v - 0.5 * (1.0f64 - a).ln().powi(2)).abs() < 1e-11);
    }
}
