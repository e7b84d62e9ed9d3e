use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::constants::{CorrectionParams, Geometry};
use crate::electrostatics::patch_basis;
use crate::error::{Error, Result};

/// One binned force point. `force` is the attractive force reported as a
/// positive number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementRecord {
    /// Corrected separation, m.
    pub d: f64,
    /// N
    pub force: f64,
    /// 1σ total uncertainty, N.
    pub sigma: f64,
}

impl MeasurementRecord {
    pub fn new(d: f64, force: f64, sigma: f64) -> Result<Self> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::domain("record separation (m)", d, "must be finite and > 0"));
        }
        if !force.is_finite() {
            return Err(Error::domain("record force (N)", force, "must be finite"));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::domain("record sigma (N)", sigma, "must be finite and > 0"));
        }
        Ok(Self { d, force, sigma })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Dataset {
    records: Vec<MeasurementRecord>,
}

impl Dataset {
    pub fn new(records: Vec<MeasurementRecord>) -> Self {
        Self { records }
    }

    pub fn records(&self) -> &[MeasurementRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn distances(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.d).collect()
    }

    pub fn sigmas(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.sigma).collect()
    }
}

impl FromIterator<MeasurementRecord> for Dataset {
    fn from_iter<I: IntoIterator<Item = MeasurementRecord>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Weighted fit of `F = theory + V_rms²·patch(d) + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    /// V²
    pub v_rms_sq: f64,
    /// N
    pub offset: f64,
    /// Covariance of `(v_rms_sq, offset)` in V⁴, V²·N and N².
    pub cov: [[f64; 2]; 2],
    pub chi2: f64,
    pub dof: usize,
    pub reduced_chi2: f64,
    /// Set when the unconstrained optimum has `V_rms² < 0`.
    pub negative_v_rms_sq: bool,
}

impl FitResult {
    /// V_rms in volts, clamped at zero.
    pub fn v_rms(&self) -> f64 {
        self.v_rms_sq.max(0.0).sqrt()
    }

    pub fn sigma_v_rms_sq(&self) -> f64 {
        self.cov[0][0].sqrt()
    }

    pub fn sigma_offset(&self) -> f64 {
        self.cov[1][1].sqrt()
    }

    /// Model force given the theory value and the patch column at one point.
    pub fn predict(&self, theory: f64, patch: f64) -> f64 {
        theory + self.v_rms_sq * patch + self.offset
    }
}

fn check_inputs(data: &Dataset, theory: &[f64]) -> Result<()> {
    if data.len() < 3 {
        return Err(Error::invalid(format!("fit needs at least 3 points, got {}", data.len())));
    }
    if theory.len() != data.len() {
        return Err(Error::invalid(format!("{} theory values for {} data points", theory.len(), data.len())));
    }
    if let Some(t) = theory.iter().find(|t| !t.is_finite()) {
        return Err(Error::domain("theory force (N)", *t, "must be finite"));
    }
    Ok(())
}

pub(crate) fn patch_column(data: &Dataset, g: &Geometry, c: &CorrectionParams) -> Result<Vec<f64>> {
    data.records().iter().map(|r| patch_basis(g, r.d, c)).collect()
}

/// Closed-form weighted least squares for `(V_rms², offset)` given the
/// corrected Casimir attraction `theory[i]` at each point.
pub fn fit_two_param(data: &Dataset, theory: &[f64], g: &Geometry, c: &CorrectionParams) -> Result<FitResult> {
    check_inputs(data, theory)?;
    let patch = patch_column(data, g, c)?;
    let recs = data.records();
    let w: Vec<f64> = recs.iter().map(|r| 1.0 / (r.sigma * r.sigma)).collect();
    let y: Vec<f64> = recs.iter().zip(theory).map(|(r, t)| r.force - t).collect();

    // Centred sums avoid cancellation between the two columns.
    let w_sum: f64 = w.iter().sum();
    let a_mean = w.iter().zip(&patch).map(|(w, a)| w * a).sum::<f64>() / w_sum;
    let y_mean = w.iter().zip(&y).map(|(w, y)| w * y).sum::<f64>() / w_sum;
    let mut s_aa = 0.0;
    let mut s_ay = 0.0;
    let mut scale = 0.0;
    for i in 0..recs.len() {
        let da = patch[i] - a_mean;
        s_aa += w[i] * da * da;
        s_ay += w[i] * da * (y[i] - y_mean);
        scale += w[i] * patch[i] * patch[i];
    }
    if !(s_aa > 1e-12 * scale) {
        return Err(Error::SingularDesign("patch column is constant; all separations equal?".into()));
    }
    let v_rms_sq = s_ay / s_aa;
    let offset = y_mean - v_rms_sq * a_mean;
    let cov = [[1.0 / s_aa, -a_mean / s_aa], [-a_mean / s_aa, 1.0 / w_sum + a_mean * a_mean / s_aa]];
    let chi2: f64 = (0..recs.len())
        .map(|i| {
            let r = y[i] - v_rms_sq * patch[i] - offset;
            w[i] * r * r
        })
        .sum();
    let dof = recs.len() - 2;
    Ok(FitResult {
        v_rms_sq,
        offset,
        cov,
        chi2,
        dof,
        reduced_chi2: chi2 / dof as f64,
        negative_v_rms_sq: v_rms_sq < 0.0,
    })
}

/// Fit residual `F_i − model(d_i)` with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub d: f64,
    pub r: f64,
    pub sigma: f64,
}

pub fn residuals(data: &Dataset, fit: &FitResult, theory: &[f64], g: &Geometry, c: &CorrectionParams) -> Result<Vec<Residual>> {
    if theory.len() != data.len() {
        return Err(Error::invalid(format!("{} theory values for {} data points", theory.len(), data.len())));
    }
    let patch = patch_column(data, g, c)?;
    Ok(data
        .records()
        .iter()
        .zip(theory.iter().zip(&patch))
        .map(|(rec, (&t, &a))| Residual { d: rec.d, r: rec.force - fit.predict(t, a), sigma: rec.sigma })
        .collect())
}

/// Joint fit of `(V_rms², offset, α)` with a fixed Yukawa template.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointFit {
    pub v_rms_sq: f64,
    pub offset: f64,
    pub alpha: f64,
    pub cov: [[f64; 3]; 3],
    pub chi2: f64,
    pub dof: usize,
}

/// General weighted linear least squares; returns parameters and covariance.
pub fn weighted_linear_fit(columns: &[Vec<f64>], y: &[f64], sigma: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>, f64)> {
    let n = y.len();
    let p = columns.len();
    if n <= p {
        return Err(Error::invalid(format!("{n} points cannot constrain {p} parameters")));
    }
    // Columns are rescaled to unit weighted norm so the normal matrix is well conditioned.
    let norms: Vec<f64> = columns
        .iter()
        .map(|col| col.iter().zip(sigma).map(|(x, s)| (x / s).powi(2)).sum::<f64>().sqrt())
        .collect();
    if norms.iter().any(|&nm| !(nm > 0.0) || !nm.is_finite()) {
        return Err(Error::SingularDesign("design column with zero or non-finite norm".into()));
    }
    let design = DMatrix::from_fn(n, p, |i, j| columns[j][i] / sigma[i] / norms[j]);
    let rhs = DVector::from_iterator(n, y.iter().zip(sigma).map(|(y, s)| y / s));
    let normal = design.transpose() * &design;
    let chol = normal
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SingularDesign("normal matrix not positive definite".into()))?;
    let scaled = chol.solve(&(design.transpose() * &rhs));
    let inv = chol.inverse();
    if inv.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularDesign("normal matrix not invertible".into()));
    }
    let params: Vec<f64> = (0..p).map(|j| scaled[j] / norms[j]).collect();
    let cov = DMatrix::from_fn(p, p, |i, j| inv[(i, j)] / (norms[i] * norms[j]));
    let resid = &rhs - &design * &scaled;
    Ok((params, cov, resid.norm_squared()))
}

pub fn fit_joint(
    data: &Dataset,
    theory: &[f64],
    g: &Geometry,
    c: &CorrectionParams,
    template: &[f64],
) -> Result<JointFit> {
    check_inputs(data, theory)?;
    if template.len() != data.len() {
        return Err(Error::invalid("template length differs from the dataset"));
    }
    if data.len() < 4 {
        return Err(Error::invalid("joint fit needs at least 4 points"));
    }
    let patch = patch_column(data, g, c)?;
    let ones = vec![1.0; data.len()];
    let y: Vec<f64> = data.records().iter().zip(theory).map(|(r, t)| r.force - t).collect();
    let (params, cov, chi2) = weighted_linear_fit(&[patch, ones, template.to_vec()], &y, &data.sigmas())?;
    let mut cov3 = [[0.0; 3]; 3];
    for (i, row) in cov3.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = cov[(i, j)];
        }
    }
    Ok(JointFit { v_rms_sq: params[0], offset: params[1], alpha: params[2], cov: cov3, chi2, dof: data.len() - 3 })
}
