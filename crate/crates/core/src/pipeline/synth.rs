use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::casimir::CasimirCalculator;
use crate::constants::{CorrectionParams, PlateStack};
use crate::electrostatics::{corrected_separation, patch_basis};
use crate::error::Result;
use crate::permittivity::log_space;
use crate::yukawa::{yukawa_force_layered, YukawaParams};

use super::config::AnalysisConfig;
use super::io::{round_sig, RawPoint};

/// Noise-free synthetic force curve. Building it is the expensive step;
/// [`SyntheticModel::draw`] only adds noise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntheticModel {
    pub d_raw: Vec<f64>,
    /// Separation after the fluctuation correction, m.
    pub d: Vec<f64>,
    pub casimir: Vec<f64>,
    pub patch: Vec<f64>,
    pub yukawa: Vec<f64>,
    pub offset: f64,
    pub sigma: Vec<f64>,
}

impl SyntheticModel {
    /// Attractive force on a log grid of raw separations rounded to the
    /// precision they are written with.
    pub fn build(config: &AnalysisConfig, calc: &CasimirCalculator) -> Result<Self> {
        let s = &config.synthetic;
        let d_raw: Vec<f64> = log_space(s.d_min_um * 1e-6, s.d_max_um * 1e-6, s.points)
            .into_iter()
            .map(|d| round_sig(d * 1e6, 5) * 1e-6)
            .collect();
        let (s1, s2) = config.stacks()?;
        Self::on_grid(d_raw, config, calc, &s1, &s2)
    }

    pub fn on_grid(
        d_raw: Vec<f64>,
        config: &AnalysisConfig,
        calc: &CasimirCalculator,
        s1: &PlateStack,
        s2: &PlateStack,
    ) -> Result<Self> {
        let s = &config.synthetic;
        let c: CorrectionParams = config.correction()?;
        let g = calc.geometry;
        let d: Vec<f64> = d_raw.iter().map(|&x| corrected_separation(x, &c)).collect::<Result<_>>()?;
        let casimir = calc.attraction_curve(&d, &c)?;
        let v2 = (s.v_rms_mv * 1e-3).powi(2);
        let patch: Vec<f64> = d.iter().map(|&x| patch_basis(&g, x, &c).map(|p| v2 * p)).collect::<Result<_>>()?;
        let yukawa = match &s.inject {
            Some(inj) => {
                let p = YukawaParams::new(inj.alpha, inj.lambda_um * 1e-6)?;
                d.iter().map(|&x| yukawa_force_layered(&g, s1, s2, &p, x)).collect::<Result<_>>()?
            }
            None => vec![0.0; d.len()],
        };
        let floor = s.noise_floor_pn * 1e-12;
        let sigma = casimir.iter().map(|f| floor.hypot(s.noise_relative * f.abs())).collect();
        Ok(Self { d_raw, d, casimir, patch, yukawa, offset: s.offset_pn * 1e-12, sigma })
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn mean_force(&self, i: usize) -> f64 {
        self.casimir[i] + self.patch[i] + self.yukawa[i] + self.offset
    }

    /// Gaussian draw; identical seeds give identical data.
    pub fn draw(&self, seed: u64) -> Vec<RawPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.len())
            .map(|i| {
                let z: f64 = StandardNormal.sample(&mut rng);
                RawPoint { d_raw: self.d_raw[i], force: self.mean_force(i) + self.sigma[i] * z, sigma: self.sigma[i], v_m: None }
            })
            .collect()
    }

    pub fn noiseless(&self) -> Vec<RawPoint> {
        (0..self.len())
            .map(|i| RawPoint { d_raw: self.d_raw[i], force: self.mean_force(i), sigma: self.sigma[i], v_m: None })
            .collect()
    }
}

/// Builds the model from `config` and draws one noisy dataset.
pub fn synthesize(config: &AnalysisConfig, seed: u64) -> Result<Vec<RawPoint>> {
    Ok(SyntheticModel::build(config, &config.calculator()?)?.draw(seed))
}
