//! Yukawa "new force" between a coated lens and a coated flat.
//!
//! The production path is the sphere–plane closed form
//! `F = 4π² G R α λ³ e^{−d/λ} ρ_eff,1(λ) ρ_eff,2(λ)`, where the effective
//! density weights each layer of a stack by how much of it a force of range
//! λ can see. [`yukawa_force_numeric`] is an independent check: it integrates
//! the exact point–slab Yukawa force over the volume of a homogeneous sphere.
//!
//! Forces are positive when attractive (α > 0).

use serde::Serialize;

use crate::constants::{Geometry, PlateStack, Thickness, G};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YukawaParams {
    pub alpha: f64,
    lambda: f64,
}

impl YukawaParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::domain("lambda (m)", lambda, "must be finite and > 0"));
        }
        if !alpha.is_finite() {
            return Err(Error::domain("alpha", alpha, "must be finite"));
        }
        Ok(Self { alpha, lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// `ρ₁ + Σ_{i≥2} (ρ_i − ρ_{i−1}) e^{−h_{i−1}/λ}` with `h_i` the depth of the
/// bottom of layer `i`.
pub fn effective_density(stack: &PlateStack, lambda: f64) -> f64 {
    let layers = stack.layers();
    let mut rho = layers[0].density;
    let mut depth = 0.0;
    for pair in layers.windows(2) {
        if let Thickness::Finite(t) = pair[0].thickness {
            depth += t;
        }
        rho += (pair[1].density - pair[0].density) * (-depth / lambda).exp();
    }
    rho
}

/// Closed-form sphere–plane force without the range-validity gate.
pub fn yukawa_force_closed_form(radius: f64, s1: &PlateStack, s2: &PlateStack, p: &YukawaParams, d: f64) -> f64 {
    let lam = p.lambda;
    4.0 * std::f64::consts::PI.powi(2) * G * radius * p.alpha * lam.powi(3)
        * (-d / lam).exp()
        * effective_density(s1, lam)
        * effective_density(s2, lam)
}

/// Layered closed form, valid while λ is small against the lens radius.
pub fn yukawa_force_layered(g: &Geometry, s1: &PlateStack, s2: &PlateStack, p: &YukawaParams, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain("separation d (m)", d, "must be > 0"));
    }
    if p.lambda >= g.radius() / 100.0 {
        return Err(Error::YukawaValidity { lambda: p.lambda, radius: g.radius() });
    }
    Ok(yukawa_force_closed_form(g.radius(), s1, s2, p, d))
}

/// Homogeneous sphere of given radius (m) and density (kg/m³).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereBody {
    pub radius: f64,
    pub density: f64,
}

/// Homogeneous disc-shaped slab. `half_width` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabBody {
    pub thickness: f64,
    pub density: f64,
    pub half_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericForce {
    pub value: f64,
    pub est_rel_err: f64,
}

/// Direct volume integration of the Yukawa force between a sphere and a slab
/// whose top face lies a gap `d` below the sphere.
///
/// Each sphere element feels the exact force of an infinite slab,
/// `2πGαρλ (e^{−z/λ} − e^{−(z+t)/λ})` per unit mass, minus (for finite
/// half-width `W`) the pull of the material beyond `W`, evaluated on the axis
/// as a radial integral. The sphere is then integrated in horizontal slices.
pub fn yukawa_force_numeric(sphere: &SphereBody, slab: &SlabBody, p: &YukawaParams, d: f64, tol: f64) -> Result<NumericForce> {
    for (name, v) in [
        ("sphere radius (m)", sphere.radius),
        ("sphere density (kg/m^3)", sphere.density),
        ("slab thickness (m)", slab.thickness),
        ("slab density (kg/m^3)", slab.density),
        ("slab half-width (m)", slab.half_width),
        ("gap d (m)", d),
    ] {
        if !(v > 0.0) {
            return Err(Error::domain(name, v, "must be > 0"));
        }
    }
    if !(1e-6..=1e-2).contains(&tol) {
        return Err(Error::domain("tolerance", tol, "must lie in [1e-6, 1e-2]"));
    }
    if p.alpha == 0.0 {
        return Ok(NumericForce { value: 0.0, est_rel_err: 0.0 });
    }

    // Work in units of λ.
    let lam = p.lambda;
    let big_r = sphere.radius / lam;
    let gap = d / lam;
    let t = slab.thickness / lam;
    let w = slab.half_width / lam;
    let inner_tol = Tolerance::relative(0.1 * tol).with_abs(1e-300);

    let edge_loss = |z: f64| -> Result<f64> {
        if w.is_infinite() {
            return Ok(0.0);
        }
        let f = |s: f64| {
            let r1 = (s * s + z * z).sqrt();
            let r2 = (s * s + (z + t) * (z + t)).sqrt();
            s * ((-r1).exp() / r1 - (-r2).exp() / r2)
        };
        Ok(integrate_to_infinity(f, w, inner_tol)?.value)
    };
    let per_unit_mass = |z: f64| -> Result<f64> {
        let infinite = (-z).exp() - (-(z + t)).exp();
        Ok(infinite - edge_loss(z)?)
    };

    // Errors inside the integrand are surfaced after integration.
    let failure = std::cell::RefCell::new(None);
    let integrand = |x: f64| {
        let area = 2.0 * big_r * x - x * x;
        match per_unit_mass(gap + x) {
            Ok(v) => area * v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let breaks: Vec<f64> = [0.5, 2.0, 6.0, 15.0, 40.0, 100.0].into_iter().filter(|&b| b < 2.0 * big_r).collect();
    let r = integrate(integrand, 0.0, 2.0 * big_r, &breaks, Tolerance::relative(tol).with_abs(1e-300))?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let prefactor = 2.0 * std::f64::consts::PI.powi(2) * G * p.alpha * sphere.density * slab.density * lam.powi(4);
    let est_rel_err = if r.value != 0.0 { r.abs_err / r.value.abs() } else { 0.0 };
    Ok(NumericForce { value: prefactor * r.value, est_rel_err })
}
