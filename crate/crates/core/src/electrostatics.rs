//! Sphere–plane electrostatics: applied/contact voltage and patch terms,
//! and the `1 + (δ/d)²` fluctuation factor.
//!
//! Forces here follow the electrostatic convention of reporting attraction as
//! a positive number.

use serde::Serialize;

use crate::constants::{CorrectionParams, Geometry, EPS0};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VoltageState {
    /// Applied bias, V.
    pub v: f64,
    /// Minimizing (contact) potential, V.
    pub v_m: f64,
    /// Patch rms amplitude, V.
    v_rms: f64,
}

impl VoltageState {
    pub fn new(v: f64, v_m: f64, v_rms: f64) -> Result<Self> {
        if !(v_rms >= 0.0) {
            return Err(Error::domain("V_rms (V)", v_rms, "must be >= 0"));
        }
        Ok(Self { v, v_m, v_rms })
    }

    pub fn v_rms(&self) -> f64 {
        self.v_rms
    }
}

/// `πε₀R[(V − V_m)² + V_rms²] / d`.
pub fn electrostatic_force(g: &Geometry, v: &VoltageState, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain("separation d (m)", d, "must be > 0"));
    }
    let dv = v.v - v.v_m;
    Ok(std::f64::consts::PI * EPS0 * g.radius() * (dv * dv + v.v_rms * v.v_rms) / d)
}

fn fluctuation_factor(d: f64, c: &CorrectionParams) -> Result<f64> {
    if !(d > c.delta()) {
        return Err(Error::domain("separation d (m)", d, "must exceed the rms fluctuation delta"));
    }
    Ok(1.0 + (c.delta() / d).powi(2))
}

/// Separation from the electrostatic calibration scaled by `1 + (δ/d)²`.
pub fn corrected_separation(d_raw: f64, c: &CorrectionParams) -> Result<f64> {
    Ok(d_raw * fluctuation_factor(d_raw, c)?)
}

/// Patch force `πε₀R V_rms²/d` scaled by `1 + (δ/d)²`.
pub fn corrected_patch_force(g: &Geometry, v_rms: f64, d: f64, c: &CorrectionParams) -> Result<f64> {
    if !(v_rms >= 0.0) {
        return Err(Error::domain("V_rms (V)", v_rms, "must be >= 0"));
    }
    Ok(patch_basis(g, d, c)? * v_rms * v_rms)
}

/// Corrected patch force per unit V_rms², N/V². The fit is linear in this column.
pub fn patch_basis(g: &Geometry, d: f64, c: &CorrectionParams) -> Result<f64> {
    let factor = fluctuation_factor(d, c)?;
    Ok(std::f64::consts::PI * EPS0 * g.radius() * factor / d)
}
