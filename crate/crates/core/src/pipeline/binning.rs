use serde::Serialize;

use crate::casimir::CasimirCalculator;
use crate::constants::CorrectionParams;
use crate::electrostatics::corrected_separation;
use crate::error::{Error, Result};
use crate::inference::{Dataset, MeasurementRecord};

use super::io::RawPoint;

/// Contributions to one bin's total error, N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinErrors {
    pub statistical: f64,
    pub delta: f64,
    pub d_shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinnedData {
    pub dataset: Dataset,
    pub errors: Vec<BinErrors>,
    pub counts: Vec<usize>,
    /// One message per dropped bin.
    pub warnings: Vec<String>,
}

/// Sources of correction uncertainty folded into the bin errors.
#[derive(Debug, Clone, Copy)]
pub struct CorrectionErrors<'a> {
    /// Prior model for the force at a given separation.
    pub model: &'a CasimirCalculator,
    /// Half-width of the separation uncertainty, m.
    pub d_shift: f64,
}

/// Groups raw points by raw separation into `[edges[i], edges[i+1])` and
/// forms inverse-variance means of force and corrected separation.
pub fn bin_dataset(
    raw: &[RawPoint],
    edges: &[f64],
    c: &CorrectionParams,
    corrections: Option<CorrectionErrors<'_>>,
) -> Result<BinnedData> {
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("bin edges must be strictly increasing"));
    }
    let mut sums = vec![(0.0, 0.0, 0.0, 0.0, 0usize); edges.len() - 1];
    for p in raw {
        let Some(i) = bin_index(edges, p.d_raw) else { continue };
        let w = 1.0 / (p.sigma * p.sigma);
        let d = corrected_separation(p.d_raw, c)?;
        let s = &mut sums[i];
        s.0 += w;
        s.1 += w * p.force;
        s.2 += w * d;
        s.3 += w * p.d_raw;
        s.4 += 1;
    }

    let mut records = Vec::new();
    let mut errors = Vec::new();
    let mut counts = Vec::new();
    let mut warnings = Vec::new();
    for (i, &(w, wf, wd, wd_raw, n)) in sums.iter().enumerate() {
        if n == 0 {
            warnings.push(format!("bin [{:.5}, {:.5}) um is empty and was dropped", edges[i] * 1e6, edges[i + 1] * 1e6));
            continue;
        }
        let stat = w.powf(-0.5);
        let d = wd / w;
        let (delta, d_shift) = match corrections {
            Some(ce) => correction_errors(ce, wd_raw / w, d, c)?,
            None => (0.0, 0.0),
        };
        let sigma = (stat * stat + delta * delta + d_shift * d_shift).sqrt();
        records.push(MeasurementRecord::new(d, wf / w, sigma)?);
        errors.push(BinErrors { statistical: stat, delta, d_shift });
        counts.push(n);
    }
    Ok(BinnedData { dataset: Dataset::new(records), errors, counts, warnings })
}

fn bin_index(edges: &[f64], x: f64) -> Option<usize> {
    if x < edges[0] || x >= edges[edges.len() - 1] {
        return None;
    }
    Some(edges.partition_point(|&e| e <= x) - 1)
}

/// Half the model change for δ ± σ_δ and for d ± shift.
fn correction_errors(ce: CorrectionErrors<'_>, d_raw: f64, d: f64, c: &CorrectionParams) -> Result<(f64, f64)> {
    let model = |d_raw: f64, c: &CorrectionParams| -> Result<f64> {
        ce.model.corrected_force(corrected_separation(d_raw, c)?, c)
    };
    let delta = if c.sigma_delta() > 0.0 {
        let hi = c.with_delta(c.delta() + c.sigma_delta())?;
        let lo = c.with_delta((c.delta() - c.sigma_delta()).max(0.0))?;
        0.5 * (model(d_raw, &hi)? - model(d_raw, &lo)?).abs()
    } else {
        0.0
    };
    let d_shift = if ce.d_shift > 0.0 {
        let f = |x: f64| ce.model.corrected_force(x, c);
        0.5 * (f(d + ce.d_shift)? - f(d - ce.d_shift)?).abs()
    } else {
        0.0
    };
    Ok((delta, d_shift))
}

/// `n` bins whose geometric centres are the points of `log_space(lo, hi, n)`.
pub fn centred_log_edges(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = if n > 1 { (hi / lo).powf(1.0 / (n - 1) as f64) } else { 2.0 };
    let half = ratio.sqrt();
    (0..=n).map(|i| lo / half * ratio.powi(i as i32)).collect()
}
