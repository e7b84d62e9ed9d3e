use std::path::Path;

use shortrange::inference::TemplateMode;
use shortrange::pipeline::config::{InjectionConfig, SyntheticConfig};
use shortrange::pipeline::run::{analyze, run_analysis};
use shortrange::pipeline::{bin_dataset, centred_log_edges, AnalysisConfig, SyntheticModel};

fn quick_config(dir: &Path) -> AnalysisConfig {
    AnalysisConfig {
        output_dir: dir.to_path_buf(),
        synthetic: SyntheticConfig { points: 300, ..Default::default() },
        ..Default::default()
    }
}

#[test]
fn run_writes_all_outputs_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let config = quick_config(dir.path());
    let (report, files) = run_analysis(&config).unwrap();
    assert_eq!(files.len(), 4);
    let hash = config.sha256();
    for name in ["residuals.csv", "exclusion.csv", "theory_curve.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(text.starts_with(&format!("# config_sha256={hash}\n")), "{name}");
    }
    let fit: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("fit.json")).unwrap()).unwrap();
    for key in ["v_rms_mV", "offset_pN", "cov", "chi2", "dof", "reduced_chi2"] {
        assert!(fit.get(key).is_some(), "{key}");
    }
    assert_eq!(fit["provenance"]["config_sha256"], hash.as_str());
    assert_eq!(fit["dof"], report.binned.dataset.len() - 2);
    let header = std::fs::read_to_string(dir.path().join("exclusion.csv")).unwrap();
    assert!(header.lines().any(|l| l == "lambda_um,alpha_hat,sigma_alpha,alpha_95"));
    let header = std::fs::read_to_string(dir.path().join("residuals.csv")).unwrap();
    assert!(header.lines().any(|l| l == "d_um,residual_pN,sigma_pN"));
    assert!((report.fit.v_rms() - 15e-3).abs() < 3.0 * 0.5 * report.fit.sigma_v_rms_sq() / 15e-3);
}

#[test]
fn model_plus_residual_reproduces_binned_force() {
    let config = AnalysisConfig { synthetic: SyntheticConfig { points: 200, ..Default::default() }, ..Default::default() };
    let raw = shortrange::pipeline::synthesize(&config, 11).unwrap();
    let report = analyze(&config, &raw, None, false).unwrap();
    let g = config.geometry().unwrap();
    let c = config.correction().unwrap();
    for ((rec, res), theory) in report.binned.dataset.records().iter().zip(&report.residuals).zip(&report.theory) {
        let patch = shortrange::electrostatics::patch_basis(&g, rec.d, &c).unwrap();
        let rebuilt = report.fit.predict(*theory, patch) + res.r;
        assert!((rebuilt - rec.force).abs() <= 1e-14 * rec.force.abs());
    }
}

#[test]
fn noiseless_closed_loop_is_exact() {
    let config = AnalysisConfig {
        synthetic: SyntheticConfig { points: 30, ..Default::default() },
        include_correction_errors: false,
        ..Default::default()
    };
    let calc = config.calculator().unwrap();
    let model = SyntheticModel::build(&config, &calc).unwrap();
    let c = config.correction().unwrap();
    let edges = centred_log_edges(model.d_raw[0], model.d_raw[29], 30);
    let binned = bin_dataset(&model.noiseless(), &edges, &c, None).unwrap();
    let theory = calc.attraction_curve(&binned.dataset.distances(), &c).unwrap();
    let fit = shortrange::inference::fit_two_param(&binned.dataset, &theory, &calc.geometry, &c).unwrap();
    assert!(((fit.v_rms_sq - 15e-3f64.powi(2)) / 15e-3f64.powi(2)).abs() < 1e-10);
    assert!(((fit.offset - 30e-12) / 30e-12).abs() < 1e-10);
    assert!(fit.chi2 < 1e-18);
}

#[test]
fn bin_statistical_error_scales_with_count() {
    let config = AnalysisConfig::default();
    let raw = shortrange::pipeline::synthesize(&config, 5).unwrap();
    assert_eq!(raw.len(), 1000);
    let binned = bin_dataset(&raw, &config.bins.edges().unwrap(), &config.correction().unwrap(), None).unwrap();
    assert_eq!(binned.dataset.len(), 20);
    for (e, &n) in binned.errors.iter().zip(&binned.counts) {
        let scaled = e.statistical * (n as f64).sqrt();
        assert!((scaled / 5e-12 - 1.0).abs() < 0.2);
    }
}

#[test]
fn injected_signal_raises_the_limit() {
    let lambda_um = 1.0;
    let base = AnalysisConfig {
        synthetic: SyntheticConfig { points: 300, ..Default::default() },
        lambda_grid: shortrange::pipeline::config::LogGridConfig { min_um: 0.5, max_um: 2.0, count: 3 },
        template_mode: TemplateMode::Profiled,
        ..Default::default()
    };
    let limit_at = |config: &AnalysisConfig| {
        let raw = shortrange::pipeline::synthesize(config, 21).unwrap();
        let report = analyze(config, &raw, None, true).unwrap();
        let curve = report.exclusion.unwrap();
        curve.points.iter().find(|p| (p.lambda - lambda_um * 1e-6).abs() < 1e-12).unwrap().alpha_95
    };
    let noise_only = limit_at(&base);
    let injected = AnalysisConfig {
        synthetic: SyntheticConfig {
            inject: Some(InjectionConfig { alpha: 5.0 * noise_only, lambda_um }),
            ..base.synthetic.clone()
        },
        ..base.clone()
    };
    assert!(limit_at(&injected) >= 2.5 * noise_only);
}

#[test]
fn empty_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.csv");
    std::fs::write(&input, "d_um,force_pN,sigma_pN\n").unwrap();
    let out = dir.path().join("out");
    let config = AnalysisConfig { input: Some(input), output_dir: out.clone(), ..Default::default() };
    assert!(run_analysis(&config).is_err());
    assert!(!out.exists() || std::fs::read_dir(&out).unwrap().next().is_none());
}

#[test]
fn file_input_matches_in_memory_synthesis() {
    let dir = tempfile::tempdir().unwrap();
    let config = quick_config(dir.path());
    let raw = shortrange::pipeline::synthesize(&config, config.seed).unwrap();
    let doc = shortrange::pipeline::io::raw_csv_document(&[], &raw).unwrap();
    let input = dir.path().join("data.csv");
    std::fs::write(&input, &doc).unwrap();
    let from_file = analyze(&AnalysisConfig { input: Some(input.clone()), ..config.clone() }, &shortrange::pipeline::load_raw_csv(&input).unwrap(), None, false).unwrap();
    let in_memory = analyze(&config, &raw, None, false).unwrap();
    // Forces are written to 6 significant digits.
    assert!((from_file.fit.v_rms_sq / in_memory.fit.v_rms_sq - 1.0).abs() < 1e-4);
}

#[test]
fn shipped_config_matches_defaults() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json");
    assert_eq!(AnalysisConfig::load(&path).unwrap(), AnalysisConfig::default());
}
