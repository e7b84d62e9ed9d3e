#![allow(dead_code)]

use shortrange::casimir::CasimirCalculator;
use shortrange::constants::{CorrectionParams, Geometry, PlateStack};
use shortrange::inference::{
    exclusion_curve, fit_two_param, residuals, yukawa_template, ExclusionPoint, FitResult, Residual, TemplateMode,
};
use shortrange::pipeline::config::SyntheticConfig;
use shortrange::pipeline::{bin_dataset, centred_log_edges, AnalysisConfig, SyntheticModel};

pub const V_RMS: f64 = 15e-3;
pub const OFFSET: f64 = 30e-12;

/// Closed loop with one synthetic point per bin and statistical errors only.
pub struct ClosedLoop {
    pub config: AnalysisConfig,
    pub model: SyntheticModel,
    pub edges: Vec<f64>,
    pub theory: Vec<f64>,
    pub geometry: Geometry,
    pub correction: CorrectionParams,
    pub stack: PlateStack,
}

pub struct Trial {
    pub fit: FitResult,
    pub residuals: Vec<Residual>,
}

impl ClosedLoop {
    pub fn new(bins: usize) -> Self {
        let config = AnalysisConfig {
            synthetic: SyntheticConfig { points: bins, noise_floor_pn: 5.0, ..Default::default() },
            include_correction_errors: false,
            ..Default::default()
        };
        let calc: CasimirCalculator = config.calculator().unwrap();
        let model = SyntheticModel::build(&config, &calc).unwrap();
        let edges = centred_log_edges(model.d_raw[0], model.d_raw[bins - 1], bins);
        let correction = config.correction().unwrap();
        let binned = bin_dataset(&model.noiseless(), &edges, &correction, None).unwrap();
        assert_eq!(binned.dataset.len(), bins);
        let theory = calc.attraction_curve(&binned.dataset.distances(), &correction).unwrap();
        Self {
            geometry: calc.geometry,
            model,
            edges,
            theory,
            correction,
            stack: config.stacks().unwrap().0,
            config,
        }
    }

    pub fn with_yukawa(mut self, alpha: f64, lambda: f64) -> Self {
        let t = yukawa_template(&self.model.d, lambda, &self.stack, &self.stack, &self.geometry).unwrap();
        self.model.yukawa = t.iter().map(|x| alpha * x).collect();
        self
    }

    pub fn trial(&self, seed: u64) -> Trial {
        let raw = self.model.draw(seed);
        let binned = bin_dataset(&raw, &self.edges, &self.correction, None).unwrap();
        let fit = fit_two_param(&binned.dataset, &self.theory, &self.geometry, &self.correction).unwrap();
        let residuals = residuals(&binned.dataset, &fit, &self.theory, &self.geometry, &self.correction).unwrap();
        Trial { fit, residuals }
    }

    pub fn limit(&self, trial: &Trial, lambda: f64, mode: TemplateMode) -> ExclusionPoint {
        let curve = exclusion_curve(
            &trial.residuals,
            &[lambda],
            &self.stack,
            &self.stack,
            &self.geometry,
            &self.correction,
            mode,
        )
        .unwrap();
        curve.points[0]
    }
}
