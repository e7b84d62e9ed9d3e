//! Dielectric response of the plate metal on the imaginary frequency axis.
//!
//! Two routes: the closed Drude form, and a Kramers–Kronig transform of
//! tabulated absorption data `ε″(ω)` with a Drude extension below the first
//! sample and an `ω⁻³` free-electron decay above the last one.

use std::path::Path;

use serde::Serialize;

use crate::constants::energy_to_angular_frequency;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};

/// Relative tolerance of the Kramers–Kronig quadrature.
pub const KK_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrudeParams {
    /// Plasma frequency, rad/s.
    pub omega_p: f64,
    /// Relaxation rate, rad/s.
    pub gamma: f64,
}

impl DrudeParams {
    pub fn new(omega_p: f64, gamma: f64) -> Result<Self> {
        if !(omega_p > 0.0) || !omega_p.is_finite() {
            return Err(Error::domain("omega_p (rad/s)", omega_p, "must be finite and > 0"));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::domain("gamma (rad/s)", gamma, "must be finite and >= 0"));
        }
        Ok(Self { omega_p, gamma })
    }

    pub fn from_ev(omega_p_ev: f64, gamma_ev: f64) -> Result<Self> {
        Self::new(energy_to_angular_frequency(omega_p_ev)?, energy_to_angular_frequency(gamma_ev)?)
    }

    /// Gold: ω_p = 7.54 eV, γ = 0.051 eV.
    pub fn gold() -> Self {
        Self::from_ev(7.54, 0.051).expect("static parameters are valid")
    }

    /// Absorptive part ε″(ω) on the real axis.
    pub fn eps_imag(&self, omega: f64) -> f64 {
        let g = self.gamma;
        self.omega_p * self.omega_p * g / (omega * (omega * omega + g * g))
    }
}

impl Default for DrudeParams {
    fn default() -> Self {
        Self::gold()
    }
}

/// `ε(iξ) = 1 + ω_p² / (ξ(ξ + γ))`.
pub fn eps_drude(p: &DrudeParams, xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::domain("xi (rad/s)", xi, "must be > 0; the static limit is handled by the Lifshitz engine"));
    }
    Ok(1.0 + p.omega_p * p.omega_p / (xi * (xi + p.gamma)))
}

/// Tabulated absorption ε″(ω), strictly increasing in ω.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpticalTable {
    omega: Vec<f64>,
    eps_imag: Vec<f64>,
}

impl OpticalTable {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid(format!("optical table needs at least 2 samples, got {}", samples.len())));
        }
        let (omega, eps_imag): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
        if !(omega[0] > 0.0) {
            return Err(Error::domain("table omega_min (rad/s)", omega[0], "must be > 0"));
        }
        if let Some(w) = omega.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(format!("optical table omega not strictly increasing at {:e}", w[1])));
        }
        if let Some(&e) = eps_imag.iter().find(|e| !(**e >= 0.0) || !e.is_finite()) {
            return Err(Error::domain("table eps_imag", e, "must be finite and >= 0"));
        }
        Ok(Self { omega, eps_imag })
    }

    /// Samples `p.eps_imag` on `n` log-spaced frequencies in `[lo, hi]`.
    pub fn from_drude(p: &DrudeParams, lo: f64, hi: f64, n: usize) -> Result<Self> {
        let samples = log_space(lo, hi, n).into_iter().map(|w| (w, p.eps_imag(w))).collect();
        Self::new(samples)
    }

    /// Reads a CSV with header `omega_rad_s,eps_imag`; `#` starts a comment line.
    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "omega_rad_s" || &headers[1] != "eps_imag" {
            return Err(Error::invalid(format!("optical table header must be `omega_rad_s,eps_imag`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let mut samples = Vec::new();
        for row in rdr.deserialize() {
            let (w, e): (f64, f64) = row?;
            samples.push((w, e));
        }
        Self::new(samples)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    pub fn omega_min(&self) -> f64 {
        self.omega[0]
    }

    pub fn omega_max(&self) -> f64 {
        *self.omega.last().expect("at least 2 samples")
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Log-log interpolation inside interval `i`, linear if an end is zero.
    fn interp(&self, i: usize, omega: f64) -> f64 {
        let (w0, w1) = (self.omega[i], self.omega[i + 1]);
        let (e0, e1) = (self.eps_imag[i], self.eps_imag[i + 1]);
        if e0 > 0.0 && e1 > 0.0 {
            let slope = (e1 / e0).ln() / (w1 / w0).ln();
            e0 * (omega / w0).powf(slope)
        } else {
            e0 + (e1 - e0) * (omega - w0) / (w1 - w0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PermittivityModel {
    Drude(DrudeParams),
    Tabulated { table: OpticalTable, tail: DrudeParams },
}

impl PermittivityModel {
    pub fn eps_at(&self, xi: f64) -> Result<f64> {
        match self {
            PermittivityModel::Drude(p) => eps_drude(p, xi),
            PermittivityModel::Tabulated { table, tail } => eps_tabulated(table, tail, xi),
        }
    }
}

impl Default for PermittivityModel {
    fn default() -> Self {
        PermittivityModel::Drude(DrudeParams::gold())
    }
}

/// `ε(iξ) = 1 + (2/π) ∫₀^∞ ω ε″(ω) / (ω² + ξ²) dω` over the table plus tails.
pub fn eps_tabulated(table: &OpticalTable, tail: &DrudeParams, xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::domain("xi (rad/s)", xi, "must be > 0"));
    }
    let xi2 = xi * xi;
    let tol = Tolerance::relative(0.1 * KK_REL_TOL).with_abs(1e-300);
    let mut segments = Vec::with_capacity(table.len() + 2);

    // Drude tail on (0, ω_min]. The integrand is positive, so per-segment
    // relative accuracy carries over to the sum.
    let w_min = table.omega_min();
    if tail.gamma > 0.0 {
        let low = |w: f64| {
            let g = tail.gamma;
            tail.omega_p * tail.omega_p * g / ((w * w + g * g) * (w * w + xi2))
        };
        segments.push(integrate(low, 0.0, w_min, &[xi, tail.gamma], tol)?.value);
    }

    for i in 0..table.len() - 1 {
        let f = |w: f64| w * table.interp(i, w) / (w * w + xi2);
        segments.push(integrate(f, table.omega[i], table.omega[i + 1], &[xi], tol)?.value);
    }

    // ε″ ∝ ω⁻³ beyond ω_max, integrated in u = 1/ω.
    let w_max = table.omega_max();
    let amp = table.eps_imag[table.len() - 1] * w_max.powi(3);
    if amp > 0.0 {
        let high = |u: f64| amp * u * u / (1.0 + xi2 * u * u);
        let u_max = 1.0 / w_max;
        segments.push(integrate(high, 0.0, u_max, &[1.0 / xi], tol)?.value);
    }

    let total: f64 = crate::quadrature::pairwise_sum(&segments);
    Ok(1.0 + std::f64::consts::FRAC_2_PI * total)
}

pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{HBAR, K_B};
    use approx::assert_relative_eq;

    fn drude_table() -> OpticalTable {
        OpticalTable::from_drude(&DrudeParams::gold(), 1e13, 1e18, 251).unwrap()
    }

    #[test]
    fn drude_at_plasma_frequency() {
        let p = DrudeParams::gold();
        let eps = eps_drude(&p, p.omega_p).unwrap();
        assert_relative_eq!(eps, 1.0 + p.omega_p / (p.omega_p + p.gamma), max_relative = 1e-14);
        assert_relative_eq!(eps, 1.99331, max_relative = 5e-5);
    }

    #[test]
    fn drude_at_first_matsubara_frequency() {
        let xi1 = 2.0 * std::f64::consts::PI * K_B * 300.0 / HBAR;
        let eps = eps_drude(&DrudeParams::gold(), xi1).unwrap();
        assert!((eps - 1641.0).abs() <= 1.0, "eps = {eps}");
    }

    #[test]
    fn drude_large_frequency_limit() {
        let eps = eps_drude(&DrudeParams::gold(), 1e22).unwrap();
        assert!(eps > 1.0 && eps - 1.0 < 1e-10);
    }

    #[test]
    fn drude_rejects_static_frequency() {
        assert!(eps_drude(&DrudeParams::gold(), 0.0).is_err());
        assert!(eps_drude(&DrudeParams::gold(), -1.0).is_err());
    }

    #[test]
    fn kramers_kronig_reproduces_drude() {
        let table = drude_table();
        let p = DrudeParams::gold();
        for xi in log_space(1e14, 1e16, 21) {
            let kk = eps_tabulated(&table, &p, xi).unwrap();
            let exact = eps_drude(&p, xi).unwrap();
            assert!(((kk - exact) / exact).abs() < 5e-3, "xi {xi:e}: {kk} vs {exact}");
        }
    }

    #[test]
    fn tabulated_large_frequency_limit() {
        let eps = eps_tabulated(&drude_table(), &DrudeParams::gold(), 1e21).unwrap();
        assert!(eps >= 1.0 && eps - 1.0 < 1e-3);
    }

    #[test]
    fn vacuum_table_gives_unity() {
        let table = OpticalTable::new(vec![(1e13, 0.0), (1e15, 0.0), (1e17, 0.0)]).unwrap();
        let zero_tail = DrudeParams::new(1e16, 0.0).unwrap();
        let model = PermittivityModel::Tabulated { table, tail: zero_tail };
        for xi in [1e12, 1e15, 1e18] {
            assert_eq!(model.eps_at(xi).unwrap(), 1.0);
        }
    }

    #[test]
    fn dispatcher_routes_both_variants() {
        let p = DrudeParams::gold();
        let drude = PermittivityModel::Drude(p);
        assert_eq!(drude.eps_at(p.omega_p).unwrap(), eps_drude(&p, p.omega_p).unwrap());
        let tab = PermittivityModel::Tabulated { table: drude_table(), tail: p };
        assert_relative_eq!(tab.eps_at(1e15).unwrap(), eps_drude(&p, 1e15).unwrap(), max_relative = 5e-3);
        assert!(tab.eps_at(0.0).is_err());
    }

    #[test]
    fn monotone_and_above_unity_on_log_grid() {
        let p = DrudeParams::gold();
        let models = [
            PermittivityModel::Drude(p),
            PermittivityModel::Tabulated { table: drude_table(), tail: p },
        ];
        for model in &models {
            let values: Vec<f64> = log_space(1e11, 1e19, 100).into_iter().map(|xi| model.eps_at(xi).unwrap()).collect();
            assert!(values.iter().all(|&e| e >= 1.0));
            assert!(values.windows(2).all(|w| w[1] < w[0]), "{model:?} not strictly decreasing");
        }
    }

    #[test]
    fn table_validation() {
        assert!(OpticalTable::new(vec![(1e14, 1.0)]).is_err());
        assert!(OpticalTable::new(vec![(1e14, 1.0), (1e13, 1.0)]).is_err());
        assert!(OpticalTable::new(vec![(1e14, 1.0), (1e14, 1.0)]).is_err());
        assert!(OpticalTable::new(vec![(0.0, 1.0), (1e14, 1.0)]).is_err());
        assert!(OpticalTable::new(vec![(1e13, -1.0), (1e14, 1.0)]).is_err());
    }

    #[test]
    fn csv_ingestion() {
        let text = "# gold absorption\nomega_rad_s,eps_imag\n1e14,10.0\n# mid comment\n1e15,1.0\n1e16,0.01\n";
        let table = OpticalTable::from_csv(text.as_bytes()).unwrap();
        assert_eq!(table.len(), 3);
        assert_eq!(table.omega_max(), 1e16);
        assert!(OpticalTable::from_csv("w,e\n1,2\n3,4\n".as_bytes()).is_err());
        assert!(OpticalTable::from_csv("omega_rad_s,eps_imag\n".as_bytes()).is_err());
    }
}
