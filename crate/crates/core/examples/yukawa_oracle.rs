//! Layered Yukawa force between the coated plates, and the proximity
//! formula checked against direct volume integration for a small sphere.

use shortrange::constants::{Geometry, Layer, PlateStack, Thickness};
use shortrange::yukawa::{
    effective_density, yukawa_force_closed_form, yukawa_force_layered, yukawa_force_numeric, SlabBody, SphereBody,
    YukawaParams,
};

fn main() -> shortrange::Result<()> {
    let stack = PlateStack::gold_titanium_glass();
    let g = Geometry::default();
    println!("{:>8} {:>14} {:>16}", "lambda", "rho_eff", "F(d = lambda)");
    for lambda in [0.1e-6, 0.3e-6, 1e-6, 3e-6, 10e-6] {
        let p = YukawaParams::new(1e10, lambda)?;
        println!(
            "{:>6.1}um {:>10.1} kg/m^3 {:>13.4} pN",
            lambda * 1e6,
            effective_density(&stack, lambda),
            yukawa_force_layered(&g, &stack, &stack, &p, lambda)? * 1e12
        );
    }

    let (rho_s, rho_p) = (19_000.0, 2_600.0);
    let half_space = |rho| PlateStack::new(vec![Layer { thickness: Thickness::SemiInfinite, density: rho }]);
    let (s1, s2) = (half_space(rho_s)?, half_space(rho_p)?);
    let slab = SlabBody { thickness: f64::INFINITY, density: rho_p, half_width: f64::INFINITY };
    let p = YukawaParams::new(1.0, 1e-6)?;
    println!("\nsphere radius R, d = lambda = 1 um");
    for ratio in [10.0, 30.0, 100.0, 300.0] {
        let r = ratio * 1e-6;
        let numeric = yukawa_force_numeric(&SphereBody { radius: r, density: rho_s }, &slab, &p, 1e-6, 1e-6)?;
        let closed = yukawa_force_closed_form(r, &s1, &s2, &p, 1e-6);
        println!("  R/lambda = {ratio:>5}  deviation {:.3e}", (closed - numeric.value).abs() / numeric.value);
    }
    Ok(())
}
