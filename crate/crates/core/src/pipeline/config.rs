use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::casimir::{CasimirCalculator, LifshitzSettings};
use crate::constants::{CorrectionParams, Geometry, MassConvention, PlateStack};
use crate::error::{Error, Result};
use crate::inference::{lambda_grid, validate_lambda_grid, TemplateMode};
use crate::permittivity::{log_space, DrudeParams, OpticalTable, PermittivityModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoatingConfig {
    pub thickness_nm: f64,
    pub density_g_cm3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackConfig {
    /// Vacuum-facing coating first.
    pub coatings: Vec<CoatingConfig>,
    pub substrate_density_g_cm3: f64,
}

impl Default for StackConfig {
    fn default() -> Self {
        Self {
            coatings: vec![
                CoatingConfig { thickness_nm: 70.0, density_g_cm3: 19.0 },
                CoatingConfig { thickness_nm: 10.0, density_g_cm3: 4.5 },
            ],
            substrate_density_g_cm3: 2.6,
        }
    }
}

impl StackConfig {
    pub fn build(&self) -> Result<PlateStack> {
        let coatings: Vec<(f64, f64)> = self.coatings.iter().map(|c| (c.thickness_nm * 1e-9, c.density_g_cm3)).collect();
        PlateStack::from_g_cm3(&coatings, self.substrate_density_g_cm3)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrudeConfig {
    pub omega_p_ev: f64,
    pub gamma_ev: f64,
}

impl Default for DrudeConfig {
    fn default() -> Self {
        Self { omega_p_ev: 7.54, gamma_ev: 0.051 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct PermittivityConfig {
    /// Pure Drude model, or the low-frequency tail when a table is given.
    pub drude: DrudeConfig,
    /// CSV of `omega_rad_s,eps_imag`.
    pub optical_table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrectionConfig {
    pub delta_nm: f64,
    pub sigma_delta_nm: f64,
}

impl Default for CorrectionConfig {
    fn default() -> Self {
        Self { delta_nm: 40.0, sigma_delta_nm: 20.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogGridConfig {
    pub min_um: f64,
    pub max_um: f64,
    pub count: usize,
}

impl LogGridConfig {
    fn metres(&self, what: &str) -> Result<Vec<f64>> {
        if !(self.min_um > 0.0 && self.max_um > self.min_um) || self.count < 2 {
            return Err(Error::Config(format!("{what}: need 0 < min_um < max_um and count >= 2")));
        }
        Ok(log_space(self.min_um * 1e-6, self.max_um * 1e-6, self.count))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BinConfig {
    /// Explicit raw-separation bin edges; overrides `log_spaced`.
    pub edges_um: Option<Vec<f64>>,
    /// `count` bins, so `count + 1` edges.
    pub log_spaced: LogGridConfig,
}

impl Default for BinConfig {
    fn default() -> Self {
        Self { edges_um: None, log_spaced: LogGridConfig { min_um: 0.7, max_um: 7.0, count: 20 } }
    }
}

impl BinConfig {
    pub fn edges(&self) -> Result<Vec<f64>> {
        let edges = match &self.edges_um {
            Some(e) => e.iter().map(|x| x * 1e-6).collect(),
            None => {
                let g = &self.log_spaced;
                LogGridConfig { count: g.count + 1, ..g.clone() }.metres("bins.log_spaced")?
            }
        };
        if edges.len() < 2 || edges[0] <= 0.0 || edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("bin edges must be positive and strictly increasing".into()));
        }
        Ok(edges)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InjectionConfig {
    pub alpha: f64,
    pub lambda_um: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SyntheticConfig {
    pub v_rms_mv: f64,
    pub offset_pn: f64,
    /// Noise σ = √(floor² + (relative·|F_Casimir|)²).
    pub noise_floor_pn: f64,
    pub noise_relative: f64,
    pub points: usize,
    pub d_min_um: f64,
    pub d_max_um: f64,
    pub inject: Option<InjectionConfig>,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            v_rms_mv: 15.0,
            offset_pn: 30.0,
            noise_floor_pn: 5.0,
            noise_relative: 0.0,
            points: 1000,
            d_min_um: 0.7,
            d_max_um: 7.0,
            inject: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    pub radius_m: f64,
    pub sphere_stack: StackConfig,
    pub plate_stack: StackConfig,
    pub permittivity: PermittivityConfig,
    pub temperature_k: f64,
    pub correction: CorrectionConfig,
    pub bins: BinConfig,
    pub lambda_grid: LogGridConfig,
    /// Grid for `theory_curve.csv` and the `casimir` table.
    pub theory_grid: LogGridConfig,
    /// Raw data CSV; synthetic data is generated when absent.
    pub input: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub synthetic: SyntheticConfig,
    pub template_mode: TemplateMode,
    /// Add the δ and d-shift components to bin errors.
    pub include_correction_errors: bool,
    pub d_shift_nm: f64,
    pub mass_convention: MassConvention,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            radius_m: Geometry::DEFAULT_RADIUS,
            sphere_stack: StackConfig::default(),
            plate_stack: StackConfig::default(),
            permittivity: PermittivityConfig::default(),
            temperature_k: 300.0,
            correction: CorrectionConfig::default(),
            bins: BinConfig::default(),
            lambda_grid: LogGridConfig { min_um: 0.1, max_um: 10.0, count: 40 },
            theory_grid: LogGridConfig { min_um: 0.7, max_um: 7.0, count: 60 },
            input: None,
            output_dir: PathBuf::from("out"),
            seed: 0,
            synthetic: SyntheticConfig::default(),
            template_mode: TemplateMode::default(),
            include_correction_errors: true,
            d_shift_nm: 10.0,
            mass_convention: MassConvention::default(),
        }
    }
}

impl AnalysisConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks ranges and that referenced files exist.
    pub fn validate(&self) -> Result<()> {
        self.geometry()?;
        self.correction()?;
        self.stacks()?;
        self.settings()?;
        self.bins.edges()?;
        self.theory_grid.metres("theory_grid")?;
        validate_lambda_grid(&self.lambdas()?).map_err(|e| Error::Config(e.to_string()))?;
        for path in self.permittivity.optical_table.iter().chain(self.input.iter()) {
            if !path.is_file() {
                return Err(Error::Config(format!("file not found: {}", path.display())));
            }
        }
        if !(self.d_shift_nm >= 0.0) {
            return Err(Error::Config("d_shift_nm must be >= 0".into()));
        }
        let s = &self.synthetic;
        if s.points < 3 || !(s.d_min_um > 0.0 && s.d_max_um > s.d_min_um) {
            return Err(Error::Config("synthetic: need points >= 3 and 0 < d_min_um < d_max_um".into()));
        }
        if !(s.noise_floor_pn >= 0.0 && s.noise_relative >= 0.0) || s.noise_floor_pn + s.noise_relative == 0.0 {
            return Err(Error::Config("synthetic: noise must be >= 0 and not identically zero".into()));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<Geometry> {
        Geometry::new(self.radius_m)
    }

    pub fn correction(&self) -> Result<CorrectionParams> {
        CorrectionParams::new(self.correction.delta_nm * 1e-9, self.correction.sigma_delta_nm * 1e-9)
    }

    pub fn stacks(&self) -> Result<(PlateStack, PlateStack)> {
        Ok((self.sphere_stack.build()?, self.plate_stack.build()?))
    }

    pub fn settings(&self) -> Result<LifshitzSettings> {
        LifshitzSettings::new(self.temperature_k)
    }

    pub fn permittivity_model(&self) -> Result<PermittivityModel> {
        let drude = DrudeParams::from_ev(self.permittivity.drude.omega_p_ev, self.permittivity.drude.gamma_ev)?;
        Ok(match &self.permittivity.optical_table {
            None => PermittivityModel::Drude(drude),
            Some(path) => PermittivityModel::Tabulated { table: OpticalTable::load(path)?, tail: drude },
        })
    }

    pub fn calculator(&self) -> Result<CasimirCalculator> {
        Ok(CasimirCalculator::new(self.geometry()?, self.permittivity_model()?, self.settings()?))
    }

    pub fn lambdas(&self) -> Result<Vec<f64>> {
        let g = &self.lambda_grid;
        g.metres("lambda_grid")?;
        Ok(lambda_grid(g.min_um * 1e-6, g.max_um * 1e-6, g.count))
    }

    pub fn theory_distances(&self) -> Result<Vec<f64>> {
        self.theory_grid.metres("theory_grid")
    }

    /// SHA-256 of the canonical JSON, ignoring where the data comes from
    /// and where results go.
    pub fn sha256(&self) -> String {
        let mut canon = self.clone();
        canon.input = None;
        canon.output_dir = PathBuf::new();
        let json = serde_json::to_vec(&canon).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }
}

pub fn file_sha256(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(std::fs::read(path)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = AnalysisConfig::default();
        c.validate().unwrap();
        assert_eq!(c.bins.edges().unwrap().len(), 21);
        assert_eq!(c.lambdas().unwrap().len(), 40);
        let (s1, _) = c.stacks().unwrap();
        assert_eq!(s1, PlateStack::gold_titanium_glass());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(AnalysisConfig::from_json(r#"{"temperature_k": 290}"#).is_ok());
        assert!(AnalysisConfig::from_json(r#"{"temprature_k": 290}"#).is_err());
        assert!(AnalysisConfig::from_json(r#"{"correction": {"delta_nm": 1, "sigma_delta_nm": 1, "x": 0}}"#).is_err());
    }

    #[test]
    fn round_trip_json() {
        let c = AnalysisConfig { seed: 42, ..Default::default() };
        let back = AnalysisConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn hash_ignores_paths_but_not_physics() {
        let a = AnalysisConfig::default();
        let b = AnalysisConfig { output_dir: "elsewhere".into(), input: Some("x.csv".into()), ..a.clone() };
        assert_eq!(a.sha256(), b.sha256());
        let c = AnalysisConfig { seed: 1, ..a.clone() };
        assert_ne!(a.sha256(), c.sha256());
        assert_eq!(a.sha256().len(), 64);
    }

    #[test]
    fn invalid_settings_are_reported() {
        let bad_t = AnalysisConfig { temperature_k: 0.0, ..Default::default() };
        assert!(bad_t.validate().is_err());
        let bad_edges = AnalysisConfig {
            bins: BinConfig { edges_um: Some(vec![1.0, 0.9]), ..Default::default() },
            ..Default::default()
        };
        assert!(bad_edges.validate().is_err());
        let missing = AnalysisConfig { input: Some("/nonexistent/data.csv".into()), ..Default::default() };
        assert!(matches!(missing.validate(), Err(Error::Config(_))));
        let wide = AnalysisConfig {
            lambda_grid: LogGridConfig { min_um: 0.01, max_um: 10.0, count: 5 },
            ..Default::default()
        };
        assert!(wide.validate().is_err());
    }
}
