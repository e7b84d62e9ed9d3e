use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::inference::{exclusion_curve, fit_two_param, residuals, ExclusionCurve, FitResult, Residual};

use super::binning::{bin_dataset, BinnedData, CorrectionErrors};
use super::config::{file_sha256, AnalysisConfig};
use super::io::{csv_document, fmt_sig, load_raw_csv, pn, round_sig, um, AtomicOutputs, RawPoint};
use super::synth::SyntheticModel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config_sha256: String,
    /// `None` for synthetic data.
    pub input_sha256: Option<String>,
    pub seed: u64,
    pub version: &'static str,
}

impl Provenance {
    pub fn new(config: &AnalysisConfig, input_sha256: Option<String>) -> Self {
        Self { config_sha256: config.sha256(), input_sha256, seed: config.seed, version: env!("CARGO_PKG_VERSION") }
    }

    pub fn comments(&self) -> Vec<(String, String)> {
        vec![
            ("config_sha256".into(), self.config_sha256.clone()),
            ("input_sha256".into(), self.input_sha256.clone().unwrap_or_else(|| "synthetic".into())),
            ("seed".into(), self.seed.to_string()),
            ("version".into(), self.version.into()),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoryPoint {
    pub d: f64,
    /// Corrected Casimir attraction, N.
    pub casimir: f64,
    /// Casimir plus the fitted patch force, N.
    pub casimir_patch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub provenance: Provenance,
    pub binned: BinnedData,
    /// Corrected Casimir attraction at each bin.
    pub theory: Vec<f64>,
    pub fit: FitResult,
    pub residuals: Vec<Residual>,
    pub exclusion: Option<ExclusionCurve>,
    pub theory_curve: Vec<TheoryPoint>,
}

pub const GRAVITY_NOTE: &str =
    "Newtonian attraction of the lens to the plate (about 20 pN, nearly constant) is absorbed by the fitted offset";

/// Reads `config.input`, or draws synthetic data from `config.seed` when no
/// input is configured. Returns the data and the input file hash.
pub fn load_or_synthesize(config: &AnalysisConfig) -> Result<(Vec<RawPoint>, Option<String>)> {
    match &config.input {
        Some(path) => Ok((load_raw_csv(path)?, Some(file_sha256(path)?))),
        None => {
            let model = SyntheticModel::build(config, &config.calculator()?)?;
            Ok((model.draw(config.seed), None))
        }
    }
}

/// Bins, fits and optionally derives the exclusion curve, without touching disk.
pub fn analyze(config: &AnalysisConfig, raw: &[RawPoint], input_sha256: Option<String>, with_exclusion: bool) -> Result<Report> {
    config.validate()?;
    let calc = config.calculator()?;
    let c = config.correction()?;
    let g = calc.geometry;
    let corrections = config
        .include_correction_errors
        .then_some(CorrectionErrors { model: &calc, d_shift: config.d_shift_nm * 1e-9 });
    let binned = bin_dataset(raw, &config.bins.edges()?, &c, corrections)?;
    if binned.dataset.is_empty() {
        return Err(Error::invalid("no data falls inside the bin edges"));
    }
    let theory = calc.attraction_curve(&binned.dataset.distances(), &c)?;
    let fit = fit_two_param(&binned.dataset, &theory, &g, &c)?;
    let res = residuals(&binned.dataset, &fit, &theory, &g, &c)?;
    let exclusion = if with_exclusion {
        let (s1, s2) = config.stacks()?;
        Some(exclusion_curve(&res, &config.lambdas()?, &s1, &s2, &g, &c, config.template_mode)?)
    } else {
        None
    };
    let ds = config.theory_distances()?;
    let casimir = calc.attraction_curve(&ds, &c)?;
    let theory_curve = ds
        .iter()
        .zip(&casimir)
        .map(|(&d, &f)| {
            let patch = crate::electrostatics::patch_basis(&g, d, &c)?;
            Ok(TheoryPoint { d, casimir: f, casimir_patch: f + fit.v_rms_sq * patch })
        })
        .collect::<Result<_>>()?;
    Ok(Report {
        provenance: Provenance::new(config, input_sha256),
        binned,
        theory,
        fit,
        residuals: res,
        exclusion,
        theory_curve,
    })
}

impl Report {
    pub fn fit_json(&self) -> Result<Vec<u8>> {
        let f = &self.fit;
        let v2_mv2 = f.v_rms_sq * 1e6;
        let sigma_v_mv = if f.v_rms_sq > 0.0 { 0.5 * f.sigma_v_rms_sq() / f.v_rms_sq.sqrt() * 1e3 } else { f64::NAN };
        let cov = [
            [f.cov[0][0] * 1e12, f.cov[0][1] * 1e18],
            [f.cov[1][0] * 1e18, f.cov[1][1] * 1e24],
        ];
        let r6 = |x: f64| if x.is_finite() { json!(round_sig(x, 6)) } else { json!(null) };
        let doc = json!({
            "v_rms_mV": r6(f.v_rms() * 1e3),
            "sigma_v_rms_mV": r6(sigma_v_mv),
            "v_rms_sq_mV2": r6(v2_mv2),
            "negative_v_rms_sq": f.negative_v_rms_sq,
            "offset_pN": r6(f.offset * 1e12),
            "sigma_offset_pN": r6(f.sigma_offset() * 1e12),
            "cov": cov.iter().map(|row| row.iter().map(|&x| r6(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "cov_parameters": ["v_rms_sq_mV2", "offset_pN"],
            "chi2": r6(f.chi2),
            "dof": f.dof,
            "reduced_chi2": r6(f.reduced_chi2),
            "bins": self.binned.dataset.len(),
            "warnings": self.binned.warnings,
            "gravity": GRAVITY_NOTE,
            "provenance": self.provenance,
        });
        let mut out = serde_json::to_vec_pretty(&doc)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn residuals_csv(&self) -> Result<Vec<u8>> {
        let rows: Vec<Vec<String>> = self.residuals.iter().map(|r| vec![um(r.d), pn(r.r), pn(r.sigma)]).collect();
        csv_document(&self.provenance.comments(), &["d_um", "residual_pN", "sigma_pN"], &rows)
    }

    pub fn theory_curve_csv(&self) -> Result<Vec<u8>> {
        let rows: Vec<Vec<String>> =
            self.theory_curve.iter().map(|t| vec![um(t.d), pn(t.casimir), pn(t.casimir_patch)]).collect();
        csv_document(&self.provenance.comments(), &["d_um", "casimir_pN", "casimir_patch_pN"], &rows)
    }

    pub fn exclusion_csv(&self) -> Result<Option<Vec<u8>>> {
        let Some(curve) = &self.exclusion else { return Ok(None) };
        let mut comments = self.provenance.comments();
        for s in &curve.skipped {
            comments.push(("skipped_lambda_um".into(), format!("{} ({})", um(s.lambda), s.reason)));
        }
        let rows: Vec<Vec<String>> = curve
            .points
            .iter()
            .map(|p| vec![um(p.lambda), fmt_sig(p.alpha_hat, 6), fmt_sig(p.sigma_alpha, 6), fmt_sig(p.alpha_95, 6)])
            .collect();
        csv_document(&comments, &["lambda_um", "alpha_hat", "sigma_alpha", "alpha_95"], &rows).map(Some)
    }

    /// Writes all report files into `dir`. Nothing is left behind on failure.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut out = AtomicOutputs::new(dir)?;
        out.write("fit.json", &self.fit_json()?)?;
        out.write("residuals.csv", &self.residuals_csv()?)?;
        out.write("theory_curve.csv", &self.theory_curve_csv()?)?;
        if let Some(doc) = self.exclusion_csv()? {
            out.write("exclusion.csv", &doc)?;
        }
        Ok(out.commit())
    }
}

/// Full analysis: load or synthesize, bin, fit, exclusion curve, write.
pub fn run_analysis(config: &AnalysisConfig) -> Result<(Report, Vec<PathBuf>)> {
    config.validate()?;
    let (raw, sha) = load_or_synthesize(config)?;
    let report = analyze(config, &raw, sha, true)?;
    let files = report.write(&config.output_dir)?;
    Ok((report, files))
}
