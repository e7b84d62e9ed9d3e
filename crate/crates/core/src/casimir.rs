//! Finite-temperature Lifshitz energy between two identical metal
//! half-spaces, the sphere–plane force in the proximity force approximation,
//! and the second-order correction for separation fluctuations.
//!
//! The energy per unit area is the Matsubara sum
//!
//! ```text
//! E(d, T) = (k_B T / 2π) Σ'_{n≥0} ∫₀^∞ k dk Σ_{p=TE,TM} ln[1 − r_p² e^{−2κ_n d}]
//! ```
//!
//! with `ξ_n = 2πn k_B T/ħ`, `κ_n = √(k² + ξ_n²/c²)` and the `n = 0` term
//! halved. The `k` integral is done in `y = 2κd`, where `k dk = y dy / 4d²`.
//! For a Drude metal the static term has `r_TM = 1`, `r_TE = 0` exactly.

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{CorrectionParams, Geometry, C, HBAR, K_B, ZETA3};
use crate::error::{Error, Result};
use crate::permittivity::PermittivityModel;
use crate::quadrature::{integrate, pairwise_sum, Tolerance};

/// Upper end of the `y - y_n` integration range; `y e^{-y}` is far below
/// 1e-16 of its peak there.
const Y_SPAN: f64 = 60.0;
const Y_BREAKS: [f64; 5] = [0.5, 2.0, 6.0, 15.0, 30.0];
const MATSUBARA_BATCH: usize = 32;
const CONSECUTIVE_SMALL_TERMS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LifshitzSettings {
    /// Temperature, K.
    pub temperature: f64,
    /// Relative size below which Matsubara terms stop the sum.
    pub rel_tol: f64,
    pub max_matsubara: usize,
    /// Relative tolerance of each wavevector integral.
    pub quad_rel_tol: f64,
}

impl LifshitzSettings {
    pub fn new(temperature: f64) -> Result<Self> {
        Self { temperature, ..Self::default() }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.temperature > 0.0) || !self.temperature.is_finite() {
            return Err(Error::domain("temperature (K)", self.temperature, "must be finite and > 0"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-3) {
            return Err(Error::domain("rel_tol", self.rel_tol, "must lie in (0, 1e-3)"));
        }
        if self.max_matsubara < 10 {
            return Err(Error::domain("max_matsubara", self.max_matsubara as f64, "must be >= 10"));
        }
        if !(self.quad_rel_tol > 0.0 && self.quad_rel_tol < 1e-3) {
            return Err(Error::domain("quad_rel_tol", self.quad_rel_tol, "must lie in (0, 1e-3)"));
        }
        Ok(self)
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Result<Self> {
        self.rel_tol = rel_tol;
        self.validated()
    }

    /// Matsubara frequency ξ_n in rad/s.
    pub fn matsubara_frequency(&self, n: usize) -> f64 {
        2.0 * std::f64::consts::PI * n as f64 * K_B * self.temperature / HBAR
    }
}

impl Default for LifshitzSettings {
    fn default() -> Self {
        Self { temperature: 300.0, rel_tol: 1e-8, max_matsubara: 10_000, quad_rel_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LifshitzEnergy {
    /// J/m², never positive.
    pub energy_per_area: f64,
    pub terms_used: usize,
    pub est_rel_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CasimirForceResult {
    pub d: f64,
    pub energy_per_area: f64,
    /// Negative means attractive.
    pub force: f64,
    pub terms_used: usize,
    pub est_rel_err: f64,
}

/// Imaginary-frequency Fresnel coefficients `(r_TE, r_TM)` of a vacuum/metal
/// interface at transverse wavevector `k` (1/m).
pub fn fresnel_coeffs(eps: f64, xi: f64, k: f64) -> Result<(f64, f64)> {
    if !(eps >= 1.0) {
        return Err(Error::domain("eps", eps, "must be >= 1"));
    }
    if !(k >= 0.0) {
        return Err(Error::domain("k (1/m)", k, "must be >= 0"));
    }
    if !(xi >= 0.0) {
        return Err(Error::domain("xi (rad/s)", xi, "must be >= 0"));
    }
    if k == 0.0 && xi == 0.0 {
        return Err(Error::invalid("Fresnel coefficients undefined at k = 0 and xi = 0"));
    }
    let q2 = (xi / C).powi(2);
    let kappa = (k * k + q2).sqrt();
    Ok(reflection(eps, q2, kappa))
}

/// Reflection coefficients of a Drude metal at zero frequency.
pub fn drude_static_reflection() -> (f64, f64) {
    (0.0, 1.0)
}

/// Cancellation-free form of the Fresnel coefficients in terms of
/// `q2 = ξ²/c²` and `κ`.
#[inline]
fn reflection(eps: f64, q2: f64, kappa: f64) -> (f64, f64) {
    let em1 = eps - 1.0;
    let kappa_m = (kappa * kappa + em1 * q2).sqrt();
    // (κ − κ_m)/(κ + κ_m) and (εκ − κ_m)/(εκ + κ_m), numerators rationalised.
    let r_te = -em1 * q2 / (kappa + kappa_m).powi(2);
    let r_tm = em1 * ((eps + 1.0) * kappa * kappa - q2) / (eps * kappa + kappa_m).powi(2);
    (r_te, r_tm)
}

/// `∫₀^∞ k dk Σ_p ln(1 − r_p² e^{−2κd})` for Matsubara index `n` (1/m²),
/// with its quadrature error estimate.
pub fn matsubara_term(model: &PermittivityModel, d: f64, n: usize, s: &LifshitzSettings) -> Result<(f64, f64)> {
    let tol = Tolerance::relative(s.quad_rel_tol).with_abs(1e-300);
    let scale = 1.0 / (4.0 * d * d);
    if n == 0 {
        let (r_te, r_tm) = drude_static_reflection();
        let f = |y: f64| {
            let decay = (-y).exp();
            y * ((-(r_te * r_te) * decay).ln_1p() + ln_one_minus(r_tm * r_tm, y))
        };
        let r = integrate(f, 0.0, Y_SPAN, &Y_BREAKS, tol)?;
        return Ok((scale * r.value, scale * r.abs_err));
    }
    let xi = s.matsubara_frequency(n);
    let eps = model.eps_at(xi)?;
    let q = xi / C;
    let q2 = q * q;
    let y0 = 2.0 * q * d;
    let f = |t: f64| {
        let y = y0 + t;
        let kappa = y / (2.0 * d);
        let (r_te, r_tm) = reflection(eps, q2, kappa);
        let decay = (-y).exp();
        y * ((-(r_te * r_te) * decay).ln_1p() + (-(r_tm * r_tm) * decay).ln_1p())
    };
    let r = integrate(f, 0.0, Y_SPAN, &Y_BREAKS, tol)?;
    Ok((scale * r.value, scale * r.abs_err))
}

/// `ln(1 − a e^{−y})`, accurate when `a = 1` and `y → 0`.
#[inline]
fn ln_one_minus(a: f64, y: f64) -> f64 {
    if a == 1.0 {
        (-(-y).exp_m1()).ln()
    } else {
        (-a * (-y).exp()).ln_1p()
    }
}

/// Casimir energy per unit area between two identical half-spaces at separation `d`.
pub fn lifshitz_energy(model: &PermittivityModel, d: f64, s: &LifshitzSettings) -> Result<LifshitzEnergy> {
    if !(d > 0.0) {
        return Err(Error::domain("separation d (m)", d, "must be > 0"));
    }
    if d.is_infinite() {
        return Ok(LifshitzEnergy { energy_per_area: 0.0, terms_used: 0, est_rel_err: 0.0 });
    }
    let prefactor = K_B * s.temperature / (2.0 * std::f64::consts::PI);

    let mut terms: Vec<f64> = Vec::new();
    let mut quad_err = 0.0;
    let mut running = 0.0;
    let mut small_run = 0;
    let mut next = 0;
    while next < s.max_matsubara {
        let end = (next + MATSUBARA_BATCH).min(s.max_matsubara);
        let batch: Vec<Result<(f64, f64)>> =
            (next..end).into_par_iter().map(|n| matsubara_term(model, d, n, s)).collect();
        for (offset, term) in batch.into_iter().enumerate() {
            let n = next + offset;
            let (mut value, mut err) = term?;
            if n == 0 {
                value *= 0.5;
                err *= 0.5;
            }
            terms.push(value);
            quad_err += err;
            running += value;
            // A term counts as small when both it and the geometric estimate
            // of everything after it fall below rel_tol of the running sum.
            let tail = if n > 0 { geometric_tail(terms[n - 1], value) } else { f64::INFINITY };
            let bound = s.rel_tol * running.abs();
            if value.abs() <= bound && tail <= bound {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if small_run >= CONSECUTIVE_SMALL_TERMS {
                let sum = pairwise_sum(&terms);
                let est_rel_err = if sum != 0.0 { (tail + quad_err) / sum.abs() } else { 0.0 };
                return Ok(LifshitzEnergy {
                    energy_per_area: (prefactor * sum).min(0.0),
                    terms_used: terms.len(),
                    est_rel_err,
                });
            }
        }
        next = end;
    }
    Err(Error::MatsubaraNotConverged { terms: terms.len(), partial: prefactor * pairwise_sum(&terms) })
}

/// Sum of the terms after `last`, assuming they keep shrinking by `last/prev`.
fn geometric_tail(prev: f64, last: f64) -> f64 {
    let (prev, last) = (prev.abs(), last.abs());
    if last == 0.0 {
        return 0.0;
    }
    if prev == 0.0 || last >= prev {
        return f64::INFINITY;
    }
    let ratio = last / prev;
    last * ratio / (1.0 - ratio)
}

/// High-temperature (static-term-only) Drude energy, `−k_B T ζ(3) / (16π d²)`.
pub fn static_term_energy(temperature: f64, d: f64) -> f64 {
    -K_B * temperature * ZETA3 / (16.0 * std::f64::consts::PI * d * d)
}

/// Zero-temperature perfect-conductor energy, `−π² ħ c / (720 d³)`.
pub fn ideal_conductor_energy(d: f64) -> f64 {
    -std::f64::consts::PI.powi(2) * HBAR * C / (720.0 * d.powi(3))
}

fn check_pfa(g: &Geometry, d: f64) -> Result<()> {
    if !(d > 0.0) {
        return Err(Error::domain("separation d (m)", d, "must be > 0"));
    }
    if d >= g.radius() / 100.0 {
        return Err(Error::PfaValidity { d, radius: g.radius() });
    }
    Ok(())
}

/// Sphere–plane force `F = 2πR E(d)`.
pub fn pfa_force(g: &Geometry, model: &PermittivityModel, d: f64, s: &LifshitzSettings) -> Result<CasimirForceResult> {
    check_pfa(g, d)?;
    let e = lifshitz_energy(model, d, s)?;
    Ok(CasimirForceResult {
        d,
        energy_per_area: e.energy_per_area,
        force: 2.0 * std::f64::consts::PI * g.radius() * e.energy_per_area,
        terms_used: e.terms_used,
        est_rel_err: e.est_rel_err,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondDerivative {
    pub value: f64,
    /// Richardson estimate from comparing steps `h` and `2h`.
    pub truncation_error: f64,
    pub step: f64,
}

/// Five-point central second difference of `f` at `x` with step `h`.
pub fn central_second_derivative<F>(f: F, x: f64, h: f64) -> Result<SecondDerivative>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(h >= 1e-12) {
        return Err(Error::domain("finite-difference step (m)", h, "must be >= 1e-12"));
    }
    let offsets = [-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0];
    let values = offsets
        .par_iter()
        .map(|&k| f(x + k * h))
        .collect::<Result<Vec<f64>>>()?;
    let [m4, m2, m1, c0, p1, p2, p4] = values[..] else { unreachable!() };
    let stencil = |fm2: f64, fm1: f64, f0: f64, fp1: f64, fp2: f64, step: f64| {
        (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * step * step)
    };
    let fine = stencil(m2, m1, c0, p1, p2, h);
    let coarse = stencil(m4, m2, c0, p2, p4, 2.0 * h);
    Ok(SecondDerivative { value: fine, truncation_error: (coarse - fine).abs() / 15.0, step: h })
}

/// `∂²F/∂d²` of the PFA force with step `h = d/100`.
pub fn force_second_derivative(
    g: &Geometry,
    model: &PermittivityModel,
    d: f64,
    s: &LifshitzSettings,
) -> Result<SecondDerivative> {
    force_second_derivative_with_step(g, model, d, 1e-2 * d, s)
}

pub fn force_second_derivative_with_step(
    g: &Geometry,
    model: &PermittivityModel,
    d: f64,
    h: f64,
    s: &LifshitzSettings,
) -> Result<SecondDerivative> {
    if !(d > 0.0) {
        return Err(Error::domain("separation d (m)", d, "must be > 0"));
    }
    central_second_derivative(|x| pfa_force(g, model, x, s).map(|r| r.force), d, h)
}

/// PFA force plus the fluctuation term `F″ δ² / 2`.
pub fn corrected_casimir_force(
    g: &Geometry,
    model: &PermittivityModel,
    d: f64,
    c: &CorrectionParams,
    s: &LifshitzSettings,
) -> Result<f64> {
    if !(d > c.delta()) {
        return Err(Error::domain("separation d (m)", d, "must exceed the rms fluctuation delta"));
    }
    let force = pfa_force(g, model, d, s)?.force;
    if c.delta() == 0.0 {
        return Ok(force);
    }
    let f2 = force_second_derivative(g, model, d, s)?;
    Ok(force + 0.5 * f2.value * c.delta() * c.delta())
}

/// Geometry, material and numerical settings bundled for repeated evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CasimirCalculator {
    pub geometry: Geometry,
    pub permittivity: PermittivityModel,
    pub settings: LifshitzSettings,
}

impl CasimirCalculator {
    pub fn new(geometry: Geometry, permittivity: PermittivityModel, settings: LifshitzSettings) -> Self {
        Self { geometry, permittivity, settings }
    }

    pub fn energy(&self, d: f64) -> Result<LifshitzEnergy> {
        lifshitz_energy(&self.permittivity, d, &self.settings)
    }

    pub fn force(&self, d: f64) -> Result<CasimirForceResult> {
        pfa_force(&self.geometry, &self.permittivity, d, &self.settings)
    }

    pub fn second_derivative(&self, d: f64) -> Result<SecondDerivative> {
        force_second_derivative(&self.geometry, &self.permittivity, d, &self.settings)
    }

    /// Signed corrected force, negative when attractive.
    pub fn corrected_force(&self, d: f64, c: &CorrectionParams) -> Result<f64> {
        corrected_casimir_force(&self.geometry, &self.permittivity, d, c, &self.settings)
    }

    /// Corrected force magnitude on each separation, evaluated in parallel.
    pub fn attraction_curve(&self, ds: &[f64], c: &CorrectionParams) -> Result<Vec<f64>> {
        ds.par_iter().map(|&d| self.corrected_force(d, c).map(|f| -f)).collect()
    }
}
