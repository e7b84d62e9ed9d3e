//! Synthetic data drawn from the force model, binned and fitted for the
//! patch amplitude and offset.

use shortrange::inference::{fit_two_param, residuals};
use shortrange::pipeline::{bin_dataset, AnalysisConfig, CorrectionErrors, SyntheticModel};

fn main() -> shortrange::Result<()> {
    let config = AnalysisConfig::default();
    let calc = config.calculator()?;
    let c = config.correction()?;
    let model = SyntheticModel::build(&config, &calc)?;
    let raw = model.draw(7);

    let errors = CorrectionErrors { model: &calc, d_shift: config.d_shift_nm * 1e-9 };
    let binned = bin_dataset(&raw, &config.bins.edges()?, &c, Some(errors))?;
    let theory = calc.attraction_curve(&binned.dataset.distances(), &c)?;
    let fit = fit_two_param(&binned.dataset, &theory, &calc.geometry, &c)?;

    println!("{} points in {} bins", raw.len(), binned.dataset.len());
    println!("V_rms  = {:.3} mV (true {})", fit.v_rms() * 1e3, config.synthetic.v_rms_mv);
    println!("offset = {:.2} +- {:.2} pN (true {})", fit.offset * 1e12, fit.sigma_offset() * 1e12, config.synthetic.offset_pn);
    println!("chi2/dof = {:.3} / {}", fit.chi2, fit.dof);
    println!("\n{:>8} {:>10} {:>9} {:>9} {:>9}", "d (um)", "res (pN)", "stat", "delta", "d shift");
    for (r, e) in residuals(&binned.dataset, &fit, &theory, &calc.geometry, &c)?.iter().zip(&binned.errors) {
        println!(
            "{:>8.4} {:>10.3} {:>9.3} {:>9.3} {:>9.3}",
            r.d * 1e6,
            r.r * 1e12,
            e.statistical * 1e12,
            e.delta * 1e12,
            e.d_shift * 1e12
        );
    }
    Ok(())
}
