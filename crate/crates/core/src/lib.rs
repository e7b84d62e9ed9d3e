pub mod casimir;
pub mod constants;
pub mod electrostatics;
pub mod error;
pub mod inference;
pub mod permittivity;
pub mod pipeline;
pub mod quadrature;
pub mod stats;
pub mod yukawa;

pub use error::{Error, Result};
