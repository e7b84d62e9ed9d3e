//! 95% upper limits on the Yukawa strength from noise-only synthetic data,
//! and the same data with a signal injected at 1 um.

use shortrange::inference::{alpha_limit_95, ExclusionCurve};
use shortrange::pipeline::config::{InjectionConfig, SyntheticConfig};
use shortrange::pipeline::{analyze, synthesize, AnalysisConfig};

fn curve(config: &AnalysisConfig) -> shortrange::Result<ExclusionCurve> {
    let raw = synthesize(config, 3)?;
    Ok(analyze(config, &raw, None, true)?.exclusion.expect("requested"))
}

fn main() -> shortrange::Result<()> {
    let quiet = AnalysisConfig::default();
    let noise_only = curve(&quiet)?;
    let at_1um = noise_only.points.iter().min_by(|a, b| (a.lambda - 1e-6).abs().total_cmp(&(b.lambda - 1e-6).abs())).unwrap();
    let alpha = 10.0 * alpha_limit_95(0.0, at_1um.sigma_alpha)?;
    let loud = AnalysisConfig {
        synthetic: SyntheticConfig { inject: Some(InjectionConfig { alpha, lambda_um: at_1um.lambda * 1e6 }), ..Default::default() },
        ..quiet.clone()
    };
    let injected = curve(&loud)?;

    println!("injected alpha = {alpha:.3e} at lambda = {:.3} um", at_1um.lambda * 1e6);
    println!("{:>10} {:>14} {:>14} {:>10}", "lambda", "alpha_95", "with signal", "signif");
    for (a, b) in noise_only.points.iter().zip(&injected.points).step_by(3) {
        println!(
            "{:>8.3}um {:>14.4e} {:>14.4e} {:>10.2}",
            a.lambda * 1e6,
            a.alpha_95,
            b.alpha_95,
            b.alpha_hat / b.sigma_alpha
        );
    }
    Ok(())
}
