//! Two-parameter force fit, residuals, Yukawa exclusion limits and the
//! Planck-scale bound.

mod fit;
mod limits;

pub use fit::*;
pub use limits::*;
