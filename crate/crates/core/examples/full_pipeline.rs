//! Config-driven run that writes the report files into a directory.
//!
//! `cargo run --example full_pipeline -- [config.json] [out_dir]`

use std::path::PathBuf;

use shortrange::pipeline::{run_analysis, AnalysisConfig};

fn main() -> shortrange::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut config = match args.next() {
        Some(path) => AnalysisConfig::load(path.as_ref())?,
        None => AnalysisConfig::default(),
    };
    config.output_dir = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("shortrange-report"));

    let (report, files) = run_analysis(&config)?;
    println!("config sha256 {}", report.provenance.config_sha256);
    println!("reduced chi2 {:.3} with {} dof", report.fit.reduced_chi2, report.fit.dof);
    if let Some(best) = report.exclusion.as_ref().and_then(|c| c.points.last()) {
        println!("alpha_95 = {:.3e} at lambda = {:.2} um", best.alpha_95, best.lambda * 1e6);
    }
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
