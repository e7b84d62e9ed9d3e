//! Casimir energy and sphere-plane force for Drude gold at room
//! temperature, compared with the ideal-conductor and classical limits.

use shortrange::casimir::{ideal_conductor_energy, static_term_energy, CasimirCalculator, LifshitzSettings};
use shortrange::constants::Geometry;
use shortrange::permittivity::{log_space, PermittivityModel};

fn main() -> shortrange::Result<()> {
    let calc = CasimirCalculator::new(Geometry::default(), PermittivityModel::default(), LifshitzSettings::new(300.0)?);

    println!("{:>8} {:>14} {:>8} {:>8} {:>12} {:>6}", "d (um)", "E (J/m^2)", "E/E_id", "E/E_cl", "F (pN)", "terms");
    for d in log_space(0.5e-6, 20e-6, 12) {
        let f = calc.force(d)?;
        println!(
            "{:>8.3} {:>14.5e} {:>8.4} {:>8.4} {:>12.4} {:>6}",
            d * 1e6,
            f.energy_per_area,
            f.energy_per_area / ideal_conductor_energy(d),
            f.energy_per_area / static_term_energy(300.0, d),
            f.force * 1e12,
            f.terms_used
        );
    }
    Ok(())
}
