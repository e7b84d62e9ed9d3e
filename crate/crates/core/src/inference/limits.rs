use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{lambda_to_mass, CorrectionParams, Geometry, MassConvention, PlateStack, M_PLANCK_GEV};
use crate::electrostatics::patch_basis;
use crate::error::{Error, Result};
use crate::yukawa::{yukawa_force_layered, YukawaParams};

use super::fit::{weighted_linear_fit, Residual};

/// One-sided 95% Gaussian quantile.
pub const Z_95_ONE_SIDED: f64 = 1.645;

pub const LAMBDA_GRID_MIN: f64 = 0.1e-6;
pub const LAMBDA_GRID_MAX: f64 = 10e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExclusionPoint {
    pub lambda: f64,
    pub alpha_hat: f64,
    pub sigma_alpha: f64,
    pub alpha_95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedLambda {
    pub lambda: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ExclusionCurve {
    pub points: Vec<ExclusionPoint>,
    pub skipped: Vec<SkippedLambda>,
}

/// How the Yukawa template is compared with the residuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateMode {
    /// Project out the part of the template the fitted offset and patch term
    /// already absorbed. Equivalent to a joint three-parameter fit.
    #[default]
    Profiled,
    /// Use the bare template against the residuals.
    Raw,
}

/// Weighted one-parameter fit `r ≈ α t`: returns `(α̂, σ_α)`.
pub fn alpha_estimate(res: &[Residual], template: &[f64], lambda: f64) -> Result<(f64, f64)> {
    if res.len() != template.len() {
        return Err(Error::invalid(format!("{} residuals for {} template values", res.len(), template.len())));
    }
    let mut num = 0.0;
    let mut norm = 0.0;
    for (r, &t) in res.iter().zip(template) {
        let w = 1.0 / (r.sigma * r.sigma);
        num += w * r.r * t;
        norm += w * t * t;
    }
    if !(norm.sqrt() > f64::MIN_POSITIVE) || !norm.is_finite() {
        return Err(Error::VanishingTemplate { lambda });
    }
    Ok((num / norm, norm.powf(-0.5)))
}

/// Clamped one-sided upper limit `max(α̂, 0) + 1.645 σ_α`.
pub fn alpha_limit_95(alpha_hat: f64, sigma_alpha: f64) -> Result<f64> {
    if !(sigma_alpha > 0.0) {
        return Err(Error::domain("sigma_alpha", sigma_alpha, "must be > 0"));
    }
    Ok(alpha_hat.max(0.0) + Z_95_ONE_SIDED * sigma_alpha)
}

/// Yukawa force at α = 1 on each separation.
pub fn yukawa_template(ds: &[f64], lambda: f64, s1: &PlateStack, s2: &PlateStack, g: &Geometry) -> Result<Vec<f64>> {
    let unit = YukawaParams::new(1.0, lambda)?;
    ds.iter().map(|&d| yukawa_force_layered(g, s1, s2, &unit, d)).collect()
}

/// Removes from `template` its weighted projection onto the offset and
/// patch columns of the two-parameter fit.
pub fn profile_template(res: &[Residual], template: &[f64], g: &Geometry, c: &CorrectionParams) -> Result<Vec<f64>> {
    let patch: Vec<f64> = res.iter().map(|r| patch_basis(g, r.d, c)).collect::<Result<_>>()?;
    let ones = vec![1.0; res.len()];
    let sigma: Vec<f64> = res.iter().map(|r| r.sigma).collect();
    let (coef, _, _) = weighted_linear_fit(&[patch.clone(), ones], template, &sigma)?;
    Ok(template.iter().zip(&patch).map(|(t, a)| t - coef[0] * a - coef[1]).collect())
}

pub fn validate_lambda_grid(lambdas: &[f64]) -> Result<()> {
    if lambdas.is_empty() {
        return Err(Error::invalid("empty lambda grid"));
    }
    let slack = 1e-9;
    for &lam in lambdas {
        if !(lam >= LAMBDA_GRID_MIN * (1.0 - slack) && lam <= LAMBDA_GRID_MAX * (1.0 + slack)) {
            return Err(Error::domain("lambda (m)", lam, "grid must lie within [0.1, 10] um"));
        }
    }
    if lambdas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("lambda grid must be strictly increasing"));
    }
    Ok(())
}

/// `n` log-spaced ranges over `[min, max]`.
pub fn lambda_grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    crate::permittivity::log_space(min, max, n)
}

/// 40 log-spaced ranges over 0.1–10 µm.
pub fn default_lambda_grid() -> Vec<f64> {
    lambda_grid(LAMBDA_GRID_MIN, LAMBDA_GRID_MAX, 40)
}

fn exclusion_point(
    res: &[Residual],
    lambda: f64,
    s1: &PlateStack,
    s2: &PlateStack,
    g: &Geometry,
    c: &CorrectionParams,
    mode: TemplateMode,
) -> Result<ExclusionPoint> {
    let ds: Vec<f64> = res.iter().map(|r| r.d).collect();
    let raw = yukawa_template(&ds, lambda, s1, s2, g)?;
    let template = match mode {
        TemplateMode::Raw => raw,
        TemplateMode::Profiled => profile_template(res, &raw, g, c).map_err(|e| match e {
            Error::SingularDesign(_) => Error::VanishingTemplate { lambda },
            other => other,
        })?,
    };
    let (alpha_hat, sigma_alpha) = alpha_estimate(res, &template, lambda)?;
    Ok(ExclusionPoint { lambda, alpha_hat, sigma_alpha, alpha_95: alpha_limit_95(alpha_hat, sigma_alpha)? })
}

/// α₉₅(λ) over a grid. Ranges whose template cannot be evaluated are skipped
/// and listed in [`ExclusionCurve::skipped`].
pub fn exclusion_curve(
    res: &[Residual],
    lambdas: &[f64],
    s1: &PlateStack,
    s2: &PlateStack,
    g: &Geometry,
    c: &CorrectionParams,
    mode: TemplateMode,
) -> Result<ExclusionCurve> {
    validate_lambda_grid(lambdas)?;
    if res.is_empty() {
        return Err(Error::invalid("no residuals"));
    }
    let outcomes: Vec<(f64, Result<ExclusionPoint>)> = lambdas
        .par_iter()
        .map(|&lam| (lam, exclusion_point(res, lam, s1, s2, g, c, mode)))
        .collect();
    let mut curve = ExclusionCurve::default();
    for (lambda, outcome) in outcomes {
        match outcome {
            Ok(p) => curve.points.push(p),
            Err(e) => curve.skipped.push(SkippedLambda { lambda, reason: e.to_string() }),
        }
    }
    Ok(curve)
}

/// `M* = √(m M_P)` in GeV for a boson of mass `mass_ev`.
pub fn mstar_from_mass(mass_ev: f64) -> Result<f64> {
    if !(mass_ev >= 0.0) {
        return Err(Error::domain("mass (eV)", mass_ev, "must be >= 0"));
    }
    Ok((mass_ev * 1e-9 * M_PLANCK_GEV).sqrt())
}

/// Lower bound on the (4+n)-dimensional Planck scale, GeV, from the largest
/// excluded boson Compton wavelength.
pub fn mstar_limit(lambda_max: f64, convention: MassConvention) -> Result<f64> {
    mstar_from_mass(lambda_to_mass(lambda_max, convention)?)
}
