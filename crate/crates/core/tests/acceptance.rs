//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria 6 and 8 ask for a 95% pass rate on quantities whose exact
//! sampling probability is about 86%, so they are reported as failures
//! without failing the run. Any other failure exits non-zero.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use shortrange::casimir::{
    corrected_casimir_force, lifshitz_energy, pfa_force, static_term_energy, LifshitzSettings,
};
use shortrange::constants::{
    energy_to_angular_frequency, lambda_to_mass, CorrectionParams, Geometry, Layer, MassConvention, PlateStack,
    Thickness,
};
use shortrange::inference::{mstar_from_mass, TemplateMode};
use shortrange::permittivity::{eps_drude, eps_tabulated, log_space, DrudeParams, OpticalTable, PermittivityModel};
use shortrange::stats::{chi2_interval_probability, ks_standard_normal};
use shortrange::yukawa::{yukawa_force_closed_form, yukawa_force_numeric, SlabBody, SphereBody, YukawaParams};

use common::{ClosedLoop, OFFSET, V_RMS};

const UNATTAINABLE: [u32; 2] = [6, 8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn near_ideal() -> PermittivityModel {
    PermittivityModel::Drude(DrudeParams::new(energy_to_angular_frequency(1000.0).unwrap(), 0.0).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c1_ideal_conductor() -> Outcome {
    let t = Instant::now();
    let g = Geometry::new(0.156).unwrap();
    let f = pfa_force(&g, &near_ideal(), 1e-6, &LifshitzSettings::new(1.0).unwrap()).unwrap().force;
    let exact = -std::f64::consts::PI.powi(3) * shortrange::constants::HBAR * shortrange::constants::C * 0.156
        / (360.0 * 1e-18);
    let elapsed = t.elapsed();
    let pass = rel(f, exact) < 0.01 && rel(exact, -4.25e-10) < 0.01 && elapsed < Duration::from_secs(10);
    Outcome { pass, detail: format!("F = {f:.5e} N vs {exact:.5e} N (rel {:.2e}), {elapsed:.2?}", rel(f, exact)) }
}

fn c2_high_temperature() -> Outcome {
    let t = Instant::now();
    let d = 20e-6;
    let e = lifshitz_energy(&PermittivityModel::default(), d, &LifshitzSettings::new(300.0).unwrap()).unwrap();
    let limit = static_term_energy(300.0, d);
    let elapsed = t.elapsed();
    let pass = rel(e.energy_per_area, limit) < 0.01 && rel(limit, -2.476e-13) < 0.01 && elapsed < Duration::from_secs(10);
    Outcome {
        pass,
        detail: format!("E = {:.5e} J/m^2 vs {limit:.5e} (rel {:.2e}), {elapsed:.2?}", e.energy_per_area, rel(e.energy_per_area, limit)),
    }
}

fn c3_kramers_kronig() -> Outcome {
    let p = DrudeParams::gold();
    let table = OpticalTable::from_drude(&p, 1e13, 1e18, 251).unwrap();
    let worst = log_space(1e14, 1e16, 41)
        .into_iter()
        .map(|xi| rel(eps_tabulated(&table, &p, xi).unwrap(), eps_drude(&p, xi).unwrap()))
        .fold(0.0, f64::max);
    Outcome { pass: worst < 5e-3, detail: format!("max relative deviation {worst:.2e} over 41 frequencies") }
}

fn c4_yukawa_oracle() -> Outcome {
    let t = Instant::now();
    let (rho_s, rho_p) = (19_000.0, 2_600.0);
    let homogeneous = |rho: f64| PlateStack::new(vec![Layer { thickness: Thickness::SemiInfinite, density: rho }]).unwrap();
    let (s1, s2) = (homogeneous(rho_s), homogeneous(rho_p));
    let slab = SlabBody { thickness: f64::INFINITY, density: rho_p, half_width: f64::INFINITY };
    let deviation = |lambda: f64, ratio: f64| {
        let p = YukawaParams::new(1.0, lambda).unwrap();
        let r = ratio * lambda;
        let num = yukawa_force_numeric(&SphereBody { radius: r, density: rho_s }, &slab, &p, lambda, 1e-6).unwrap().value;
        rel(yukawa_force_closed_form(r, &s1, &s2, &p, lambda), num)
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for lambda in [0.3e-6, 1e-6, 3e-6] {
        let devs: Vec<f64> = [25.0, 50.0, 100.0, 200.0].iter().map(|&k| deviation(lambda, k)).collect();
        let at_100 = devs[2];
        let monotone = devs.windows(2).all(|w| w[1] < w[0]);
        pass &= at_100 < 0.02 && monotone;
        parts.push(format!("{:.1}um: {:.2e}{}", lambda * 1e6, at_100, if monotone { "" } else { " (not monotone)" }));
    }
    let elapsed = t.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    Outcome { pass, detail: format!("deviation at R = 100 lambda: {}; {elapsed:.2?}", parts.join(", ")) }
}

fn c5_fluctuation_scaling() -> Outcome {
    let g = Geometry::default();
    let s = LifshitzSettings::new(1.0).unwrap();
    let (d, delta) = (1e-6, 40e-9);
    let bare = pfa_force(&g, &near_ideal(), d, &s).unwrap().force;
    let corrected = corrected_casimir_force(&g, &near_ideal(), d, &CorrectionParams::new(delta, 0.0).unwrap(), &s).unwrap();
    let term = corrected - bare;
    let expected = 6.0 * (delta / d).powi(2) * bare.abs();
    Outcome {
        pass: rel(term.abs(), expected) < 5e-3,
        detail: format!("|F''| delta^2/2 = {:.5e} N vs {expected:.5e} N (rel {:.2e})", term.abs(), rel(term.abs(), expected)),
    }
}

fn c6_closed_loop() -> Outcome {
    let t = Instant::now();
    let cl = ClosedLoop::new(50);
    let seeds = 200;
    let (mut both, mut v_ok, mut o_ok, mut chi_ok) = (0, 0, 0, 0);
    for seed in 0..seeds {
        let f = cl.trial(seed).fit;
        let v = (f.v_rms_sq - V_RMS * V_RMS).abs() <= 2.0 * f.sigma_v_rms_sq();
        let o = (f.offset - OFFSET).abs() <= 2.0 * f.sigma_offset();
        let c = (0.7..=1.3).contains(&f.reduced_chi2);
        v_ok += v as u32;
        o_ok += o as u32;
        chi_ok += c as u32;
        both += (v && o && c) as u32;
    }
    let elapsed = t.elapsed();
    let frac = |n: u32| n as f64 / seeds as f64;
    let expected_chi = chi2_interval_probability(48, 0.7 * 48.0, 1.3 * 48.0);
    Outcome {
        pass: frac(both) >= 0.95 && elapsed < Duration::from_secs(300),
        detail: format!(
            "all three {:.3}; V_rms^2 {:.3}, offset {:.3}, chi2 band {:.3} (exact probability {expected_chi:.3}); {elapsed:.2?}",
            frac(both),
            frac(v_ok),
            frac(o_ok),
            frac(chi_ok)
        ),
    }
}

fn c7_calibration() -> Outcome {
    let cl = ClosedLoop::new(50);
    let seeds = 500;
    let trials: Vec<_> = (0..seeds).map(|s| cl.trial(10_000 + s)).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for lambda in [0.3e-6, 1e-6, 3e-6] {
        let points: Vec<_> = trials.iter().map(|t| cl.limit(t, lambda, TemplateMode::Profiled)).collect();
        let z: Vec<f64> = points.iter().map(|p| p.alpha_hat / p.sigma_alpha).collect();
        let ks = ks_standard_normal(&z);
        let covered = points.iter().filter(|p| 0.0 < p.alpha_95).count() as f64 / seeds as f64;
        pass &= ks.p_value > 0.01 && covered >= 0.93;
        parts.push(format!("{:.1}um: KS p {:.3}, coverage {covered:.3}", lambda * 1e6, ks.p_value));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn c8_injection() -> Outcome {
    let lambda = 1e-6;
    let probe = ClosedLoop::new(50);
    let sigma_alpha = probe.limit(&probe.trial(0), lambda, TemplateMode::Profiled).sigma_alpha;
    let cl = ClosedLoop::new(50).with_yukawa(5.0 * sigma_alpha, lambda);
    let seeds = 500;
    let ratios: Vec<f64> = (0..seeds)
        .map(|s| {
            let p = cl.limit(&cl.trial(20_000 + s), lambda, TemplateMode::Profiled);
            p.alpha_hat / p.sigma_alpha
        })
        .collect();
    let inside = ratios.iter().filter(|r| (3.5..=6.5).contains(*r)).count() as f64 / seeds as f64;
    let mean = ratios.iter().sum::<f64>() / seeds as f64;
    let exact = 2.0 * shortrange::stats::standard_normal_cdf(1.5) - 1.0;
    Outcome {
        pass: inside >= 0.95,
        detail: format!(
            "alpha_inj = {:.3e}; fraction in [3.5, 6.5] sigma {inside:.3} (exact probability {exact:.3}), mean {mean:.3} sigma",
            5.0 * sigma_alpha
        ),
    }
}

fn c9_planck_scale() -> Outcome {
    let mstar_tev = mstar_from_mass(0.5).unwrap() * 1e-3;
    let mass = lambda_to_mass(2e-6, MassConvention::PlanckH).unwrap();
    let quoted = 70.0;
    let pass = quoted <= mstar_tev && quoted >= 0.8 * mstar_tev && rel(mass, 0.62) < 0.01;
    Outcome { pass, detail: format!("M* = {mstar_tev:.2} TeV from 0.5 eV; m(2 um) = {mass:.4} eV") }
}

fn c10_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_shortrange");
    let run = |dir: &std::path::Path| -> Vec<(String, Vec<u8>)> {
        let data = dir.join("synthetic.csv");
        let steps: [&[&str]; 3] = [&["synth"], &["fit", "--input", data.to_str().unwrap()], &["exclude", "--input", data.to_str().unwrap()]];
        for args in steps {
            let status = Command::new(exe)
                .args(args)
                .args(["--seed", "1234", "--out", dir.to_str().unwrap()])
                .output()
                .expect("binary runs");
            assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        }
        let mut files: Vec<_> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run(a.path());
    let second = run(b.path());
    let names: Vec<&str> = first.iter().map(|(n, _)| n.as_str()).collect();
    let pass = first == second && names == ["exclusion.csv", "fit.json", "residuals.csv", "synthetic.csv", "theory_curve.csv"];
    Outcome { pass, detail: format!("{} files compared: {}", names.len(), names.join(", ")) }
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "ideal-conductor PFA force", c1_ideal_conductor),
        (2, "high-temperature Drude energy", c2_high_temperature),
        (3, "Kramers-Kronig round trip", c3_kramers_kronig),
        (4, "Yukawa volume-integration oracle", c4_yukawa_oracle),
        (5, "fluctuation-correction scaling", c5_fluctuation_scaling),
        (6, "closed-loop two-parameter fit", c6_closed_loop),
        (7, "limit calibration", c7_calibration),
        (8, "injection recovery", c8_injection),
        (9, "Planck-scale bound", c9_planck_scale),
        (10, "CLI determinism", c10_determinism),
    ];
    let mut unexpected = 0;
    for (n, name, check) in criteria {
        let outcome = check();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        let note = if !outcome.pass && UNATTAINABLE.contains(&n) { " [unattainable at this threshold]" } else { "" };
        println!("criterion {n:>2} {status} {name}: {}{note}", outcome.detail);
        if !outcome.pass && !UNATTAINABLE.contains(&n) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
