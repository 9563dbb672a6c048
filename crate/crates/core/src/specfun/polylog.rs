//! Real polylogarithms Li_n(x), x ≤ 1, and ζ at integer arguments.

use crate::error::{Error, Result};

pub const ZETA2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

// B_2, B_4, ..., B_12
const BERNOULLI_EVEN: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// Riemann ζ(s) for integer s ≥ 2 (Euler–Maclaurin after nineteen explicit terms).
pub fn zeta_int(s: u32) -> f64 {
    assert!(s >= 2, "zeta_int needs s >= 2");
    if s > 60 {
        return 1.0 + 2f64.powi(-(s as i32));
    }
    const N: f64 = 20.0;
    let sf = s as f64;
    let mut sum: f64 = (1..20).map(|k| (k as f64).powf(-sf)).sum();
    sum += N.powf(1.0 - sf) / (sf - 1.0) + 0.5 * N.powf(-sf);
    // Σ B_2j/(2j)! · s(s+1)…(s+2j-2) · N^(-s-2j+1)
    let mut rising = sf;
    let mut fact = 2.0;
    let mut npow = N.powf(-sf - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        sum += b / fact * rising * npow;
        let k = 2.0 * (j as f64 + 1.0);
        rising *= (sf + k - 1.0) * (sf + k);
        fact *= (k + 1.0) * (k + 2.0);
        npow /= N * N;
    }
    sum
}

/// ζ at the integers used by the log-series: s ≥ 2 directly, ζ(0) = -1/2 and
/// ζ(1-2j) = -B_2j/(2j) from ζ(2j). Returns 0 at the trivial zeros.
fn zeta_any(s: i64) -> f64 {
    use std::f64::consts::PI;
    if s >= 2 {
        return zeta_int(s as u32);
    }
    if s == 0 {
        return -0.5;
    }
    let m = -s; // ζ(-m)
    if m % 2 == 0 {
        return 0.0;
    }
    let two_j = (m + 1) as i32;
    // B_2j = (-1)^(j+1) 2 (2j)! ζ(2j) / (2π)^(2j)
    let j = two_j / 2;
    let mut ratio = 2.0 * zeta_int(two_j as u32);
    for k in 1..=two_j {
        ratio *= k as f64 / (2.0 * PI);
    }
    let b = if j % 2 == 1 { ratio } else { -ratio };
    -b / two_j as f64
}

/// Li_n(x) for n ≥ 1 and x ≤ 1 (x < 1 for n = 1).
pub fn polylog(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("polylog order must be >= 1".into()));
    }
    if x.is_nan() || x > 1.0 || (n == 1 && x == 1.0) {
        return Err(Error::Domain(format!("Li_{n}({x}) is outside x <= 1")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if n == 1 {
        return Ok(-(-x).ln_1p());
    }
    if x == 1.0 {
        return Ok(zeta_int(n));
    }
    if x.abs() <= 0.5 {
        return Ok(direct_series(n, x));
    }
    if x > 0.5 {
        return Ok(log_series(n, x));
    }
    if x >= -1.0 {
        // duplication: Li_n(-y) = 2^(1-n) Li_n(y²) - Li_n(y)
        let y = -x;
        let sq = if y * y == 1.0 { zeta_int(n) } else { polylog(n, y * y)? };
        let li_y = if y == 1.0 { zeta_int(n) } else { log_series(n, y) };
        return Ok(2f64.powi(1 - n as i32) * sq - li_y);
    }
    // inversion for x < -1
    let y = -x;
    let l = y.ln();
    let mut rhs = -l.powi(n as i32) / factorial(n);
    for k in 1..=(n / 2) {
        let eta = (1.0 - 2f64.powi(1 - 2 * k as i32)) * zeta_int(2 * k);
        rhs -= 2.0 * l.powi((n - 2 * k) as i32) / factorial(n - 2 * k) * eta;
    }
    let inv = polylog(n, -1.0 / y)?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(rhs - sign * inv)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn direct_series(n: u32, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut p = 1.0;
    for k in 1..400 {
        p *= x;
        let term = p / (k as f64).powi(n as i32);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Expansion in μ = ln x around x = 1, valid for |μ| < 2π.
fn log_series(n: u32, x: f64) -> f64 {
    let mu = x.ln();
    let nm1 = n as i64 - 1;
    let harmonic: f64 = (1..=nm1).map(|k| 1.0 / k as f64).sum();
    let mut sum = mu.powi(nm1 as i32) / factorial(nm1 as u32) * (harmonic - (-mu).ln());
    let mut term_pow = 1.0; // μ^k / k!
    for k in 0..200i64 {
        if k > 0 {
            term_pow *= mu / k as f64;
        }
        if k == nm1 {
            continue;
        }
        let t = zeta_any(n as i64 - k) * term_pow;
        sum += t;
        if k > nm1 + 2 && t != 0.0 && t.abs() < 1e-18 {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_known_values() {
        assert!((zeta_int(2) - PI * PI / 6.0).abs() < 1e-15, "{:e}", zeta_int(2) - PI * PI / 6.0);
        assert!((zeta_int(3) - ZETA3).abs() < 1e-15);
        assert!((zeta_int(4) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta_any(-1) + 1.0 / 12.0).abs() < 1e-15);
        assert!((zeta_any(-3) - 1.0 / 120.0).abs() < 1e-15);
    }

    #[test]
    fn special_points() {
        assert_eq!(polylog(3, 0.0).unwrap(), 0.0);
        assert!((polylog(1, -2.0).unwrap() + 3f64.ln()).abs() < 1e-15);
        assert!((polylog(2, -1.0).unwrap() + PI * PI / 12.0).abs() < 1e-14);
        assert!((polylog(2, 0.5).unwrap() - (PI * PI / 12.0 - 0.5 * 2f64.ln().powi(2))).abs() < 1e-14);
        assert!(polylog(2, 1.5).is_err());
        assert!(polylog(1, 1.0).is_err());
    }

    #[test]
    fn regions_are_continuous() {
        for n in 2..6 {
            for x in [0.5, -0.5, -1.0] {
                let lo = polylog(n, x - 1e-12).unwrap();
                let hi = polylog(n, x + 1e-12).unwrap();
                assert!((lo - hi).abs() < 1e-11, "n={n} x={x}");
            }
        }
    }
}
