//! Gamma function on the complex plane (Lanczos, g = 7, nine terms) with
//! reflection for Re z < 1/2.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// sin(πx) with exact argument reduction.
pub(crate) fn sinpi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    if r.abs() <= 0.25 {
        (PI * r).sin()
    } else if r > 0.75 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.75 {
        -(PI * (1.0 + r)).sin()
    } else if r > 0.0 {
        (PI * (0.5 - r)).cos()
    } else {
        -(PI * (0.5 + r)).cos()
    }
}

/// cos(πx) with exact argument reduction.
pub(crate) fn cospi(x: f64) -> f64 {
    sinpi(x + 0.5)
}

/// sin(πz) for complex z.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let y = PI * z.im;
    Complex64::new(sinpi(z.re) * y.cosh(), cospi(z.re) * y.sinh())
}

/// ln Γ(z) for Re z ≥ 1/2 (principal branch of the Lanczos form).
fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + LN_SQRT_2PI + x.ln()
}

/// Γ(z) for complex z.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole {
            function: "gamma",
            at: format!("{z}"),
        });
    }
    if z.re < 0.5 {
        let s = sin_pi(z);
        Ok(PI / (s * ln_gamma_lanczos(1.0 - z).exp()))
    } else {
        Ok(ln_gamma_lanczos(z).exp())
    }
}

/// 1/Γ(z), entire; returns exact zeros at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        sin_pi(z) * ln_gamma_lanczos(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_lanczos(z)).exp()
    }
}

/// Real Γ(x).
pub fn gamma_real(x: f64) -> Result<f64> {
    gamma(Complex64::new(x, 0.0)).map(|v| v.re)
}

/// ln Γ(x) for real x > 0.
pub fn ln_gamma_real(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x keeps the Lanczos form in its comfortable range
        return ln_gamma_lanczos(Complex64::new(x + 1.0, 0.0)).re - x.ln();
    }
    ln_gamma_lanczos(Complex64::new(x, 0.0)).re
}
