//! Boson mass and (4+n)-dimensional Planck scale for a range of excluded
//! Compton wavelengths.

use shortrange::constants::{lambda_to_mass, MassConvention};
use shortrange::inference::mstar_limit;

fn main() -> shortrange::Result<()> {
    println!("{:>10} {:>12} {:>12} {:>12}", "lambda", "m (eV)", "M* (TeV)", "M* hbar conv");
    for lambda_um in [0.5, 1.0, 2.0, 2.5, 4.0, 10.0] {
        let lambda = lambda_um * 1e-6;
        println!(
            "{:>8.1}um {:>12.4} {:>12.2} {:>12.2}",
            lambda_um,
            lambda_to_mass(lambda, MassConvention::PlanckH)?,
            mstar_limit(lambda, MassConvention::PlanckH)? * 1e-3,
            mstar_limit(lambda, MassConvention::HBar)? * 1e-3
        );
    }
    Ok(())
}
