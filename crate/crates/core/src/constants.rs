//! Physical constants, unit conversions and the geometry/material types
//! shared by every force model.
//!
//! Everything is SI internally. Electron-volts, micrometres and g/cm³ only
//! appear in the named conversion helpers and at the config boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Newtonian constant of gravitation, m³/(kg·s²).
pub const G: f64 = 6.674_30e-11;
/// Joules per electron-volt.
pub const EV_TO_J: f64 = 1.602_176_634e-19;
/// Planck mass, GeV.
pub const M_PLANCK_GEV: f64 = 1.220_890e19;
/// Nucleon mass, GeV (isospin average).
pub const M_NUCLEON_GEV: f64 = 0.938_918_7;
/// Apéry's constant ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

/// CODATA-2018 constant set bundled as a value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub k_b: f64,
    pub eps0: f64,
    pub g: f64,
    pub ev_to_j: f64,
    pub m_planck_gev: f64,
    pub m_nucleon_gev: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        c: C,
        k_b: K_B,
        eps0: EPS0,
        g: G,
        ev_to_j: EV_TO_J,
        m_planck_gev: M_PLANCK_GEV,
        m_nucleon_gev: M_NUCLEON_GEV,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Converts a photon energy in eV to an angular frequency in rad/s.
pub fn energy_to_angular_frequency(energy_ev: f64) -> Result<f64> {
    if !(energy_ev >= 0.0) || !energy_ev.is_finite() {
        return Err(Error::domain("energy (eV)", energy_ev, "must be finite and >= 0"));
    }
    Ok(energy_ev * EV_TO_J / HBAR)
}

/// Inverse of [`energy_to_angular_frequency`].
pub fn angular_frequency_to_energy(omega: f64) -> f64 {
    omega * HBAR / EV_TO_J
}

/// Which Planck constant links a Compton wavelength to a mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MassConvention {
    /// m = ħc/λ (reduced Compton wavelength).
    HBar,
    /// m = hc/λ = 2πħc/λ.
    #[default]
    PlanckH,
}

/// Mass (eV) of a boson whose Compton wavelength is `lambda` metres.
pub fn lambda_to_mass(lambda: f64, convention: MassConvention) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain("lambda (m)", lambda, "must be > 0"));
    }
    let hbar_c_ev_m = HBAR * C / EV_TO_J;
    Ok(match convention {
        MassConvention::HBar => hbar_c_ev_m / lambda,
        MassConvention::PlanckH => 2.0 * std::f64::consts::PI * hbar_c_ev_m / lambda,
    })
}

/// Sphere-plane geometry: the lens radius of curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Geometry {
    radius: f64,
}

impl Geometry {
    pub const DEFAULT_RADIUS: f64 = 0.156;

    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::domain("lens radius (m)", radius, "must be finite and > 0"));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl Default for Geometry {
    fn default() -> Self {
        Self { radius: Self::DEFAULT_RADIUS }
    }
}

/// Thickness of one layer of a plate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Thickness {
    Finite(f64),
    SemiInfinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Layer {
    pub thickness: Thickness,
    /// kg/m³
    pub density: f64,
}

/// Material layers of one plate, vacuum-facing layer first. The last layer
/// is the semi-infinite substrate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlateStack {
    layers: Vec<Layer>,
}

impl PlateStack {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        let Some((last, coatings)) = layers.split_last() else {
            return Err(Error::invalid("plate stack has no layers"));
        };
        if last.thickness != Thickness::SemiInfinite {
            return Err(Error::invalid("last layer of a plate stack must be semi-infinite"));
        }
        for layer in coatings {
            match layer.thickness {
                Thickness::Finite(t) if t > 0.0 && t.is_finite() => {}
                Thickness::Finite(t) => {
                    return Err(Error::domain("layer thickness (m)", t, "must be finite and > 0"))
                }
                Thickness::SemiInfinite => {
                    return Err(Error::invalid("only the last layer may be semi-infinite"))
                }
            }
        }
        for layer in &layers {
            if !(layer.density > 0.0) || !layer.density.is_finite() {
                return Err(Error::domain("layer density (kg/m^3)", layer.density, "must be > 0"));
            }
        }
        Ok(Self { layers })
    }

    /// Builds a stack from `(thickness_m, density_g_cm3)` pairs for the
    /// coatings plus the substrate density in g/cm³.
    pub fn from_g_cm3(coatings: &[(f64, f64)], substrate_g_cm3: f64) -> Result<Self> {
        let mut layers: Vec<Layer> = coatings
            .iter()
            .map(|&(t, rho)| Layer { thickness: Thickness::Finite(t), density: g_cm3_to_kg_m3(rho) })
            .collect();
        layers.push(Layer {
            thickness: Thickness::SemiInfinite,
            density: g_cm3_to_kg_m3(substrate_g_cm3),
        });
        Self::new(layers)
    }

    /// 700 Å Au on 100 Å Ti on glass.
    pub fn gold_titanium_glass() -> Self {
        Self::from_g_cm3(&[(70e-9, 19.0), (10e-9, 4.5)], 2.6).expect("static stack is valid")
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Mass per unit area of the finite coatings, kg/m².
    pub fn coating_areal_density(&self) -> f64 {
        self.layers
            .iter()
            .filter_map(|l| match l.thickness {
                Thickness::Finite(t) => Some(t * l.density),
                Thickness::SemiInfinite => None,
            })
            .sum()
    }
}

pub fn g_cm3_to_kg_m3(rho: f64) -> f64 {
    rho * 1e3
}

/// RMS fluctuation of the plate separation and its 1σ uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrectionParams {
    delta: f64,
    sigma_delta: f64,
}

impl CorrectionParams {
    pub fn new(delta: f64, sigma_delta: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::domain("delta (m)", delta, "must be finite and >= 0"));
        }
        if !(sigma_delta >= 0.0) || !sigma_delta.is_finite() {
            return Err(Error::domain("sigma_delta (m)", sigma_delta, "must be finite and >= 0"));
        }
        Ok(Self { delta, sigma_delta })
    }

    pub fn none() -> Self {
        Self { delta: 0.0, sigma_delta: 0.0 }
    }

    /// δ = 40 nm ± 20 nm.
    pub fn measured() -> Self {
        Self { delta: 40e-9, sigma_delta: 20e-9 }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn sigma_delta(&self) -> f64 {
        self.sigma_delta
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(delta, self.sigma_delta)
    }
}
