// negated comparisons deliberately reject NaN; tabulated constants keep
// their published digits; symmetric index loops read better with indices
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop
)]

pub mod error;
pub mod fredholm;
pub mod grid;
pub mod model;
pub mod operator;
pub mod perturb;
pub mod quad;
pub mod report;
pub mod specfun;
pub mod twopoint;
pub mod verify;

pub use error::{Error, Result};
pub use grid::QuadGrid;
pub use model::{Coupling, Mu2Policy};
pub use num_complex::Complex64;
pub use report::VerificationReport;
