//! Special functions: Γ, ₂F₁, polylogarithms and hyperlogarithms.

pub mod gamma;
pub mod hlog;
pub mod hyp2f1;
pub mod polylog;

pub use gamma::{gamma, gamma_real, ln_gamma_real, rgamma, sin_pi};
pub use hlog::{hlog, hlog_suffixes, Word};
pub use hyp2f1::{
    hyp2f1, hyp2f1_deriv, hyp2f1_euler, hyp2f1_real, hyp2f1_side, hyp2f1_with_derivative, Side,
};
pub use polylog::{polylog, zeta_int, ZETA2, ZETA3};
