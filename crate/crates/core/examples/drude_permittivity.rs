//! Drude permittivity on the imaginary axis, directly and through a
//! Kramers–Kronig transform of sampled absorption data.

use shortrange::casimir::LifshitzSettings;
use shortrange::permittivity::{eps_drude, eps_tabulated, DrudeParams, OpticalTable};

fn main() -> shortrange::Result<()> {
    let gold = DrudeParams::gold();
    let table = OpticalTable::from_drude(&gold, 1e13, 1e18, 251)?;
    let settings = LifshitzSettings::default();

    println!("{:>4} {:>12} {:>14} {:>14} {:>10}", "n", "xi (rad/s)", "eps Drude", "eps via KK", "rel diff");
    for n in [1, 2, 5, 10, 20, 50, 100] {
        let xi = settings.matsubara_frequency(n);
        let direct = eps_drude(&gold, xi)?;
        let kk = eps_tabulated(&table, &gold, xi)?;
        println!("{n:>4} {xi:>12.4e} {direct:>14.6} {kk:>14.6} {:>10.2e}", (kk - direct).abs() / direct);
    }
    Ok(())
}
