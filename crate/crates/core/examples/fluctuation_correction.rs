//! Size of the surface-roughness corrections: the curvature term added to
//! the Casimir force and the rescaled separation.

use shortrange::casimir::{CasimirCalculator, LifshitzSettings};
use shortrange::constants::{CorrectionParams, Geometry};
use shortrange::electrostatics::corrected_separation;
use shortrange::permittivity::PermittivityModel;

fn main() -> shortrange::Result<()> {
    let calc = CasimirCalculator::new(Geometry::default(), PermittivityModel::default(), LifshitzSettings::default());
    let c = CorrectionParams::measured();

    println!("delta = {} nm", c.delta() * 1e9);
    println!("{:>8} {:>10} {:>12} {:>14} {:>12}", "d (um)", "d' (um)", "F (pN)", "F'' (N/m^2)", "shift (%)");
    for d in [0.7e-6, 1e-6, 2e-6, 4e-6, 7e-6] {
        let f = calc.force(d)?.force;
        let f2 = calc.second_derivative(d)?;
        let corrected = calc.corrected_force(d, &c)?;
        println!(
            "{:>8.3} {:>10.5} {:>12.4} {:>14.4e} {:>12.4}",
            d * 1e6,
            corrected_separation(d, &c)? * 1e6,
            f * 1e12,
            f2.value,
            100.0 * (corrected - f) / f
        );
    }
    Ok(())
}
