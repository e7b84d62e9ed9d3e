//! Electrostatic sphere-plane force: minimizing-potential scan and the
//! patch term that survives at V = V_m.

use shortrange::constants::{CorrectionParams, Geometry};
use shortrange::electrostatics::{corrected_patch_force, electrostatic_force, VoltageState};

fn main() -> shortrange::Result<()> {
    let g = Geometry::default();
    let d = 1e-6;
    let v_m = 0.020;

    println!("bias scan at d = 1 um, V_m = 20 mV, V_rms = 10 mV");
    for mv in (0..=40).step_by(5) {
        let v = VoltageState::new(mv as f64 * 1e-3, v_m, 0.010)?;
        println!("  V = {mv:>2} mV  F = {:>9.3} pN", electrostatic_force(&g, &v, d)? * 1e12);
    }

    println!("\npatch force for V_rms = 15 mV");
    for d_um in [0.7, 1.0, 2.0, 5.0] {
        let d = d_um * 1e-6;
        let bare = corrected_patch_force(&g, 0.015, d, &CorrectionParams::none())?;
        let corrected = corrected_patch_force(&g, 0.015, d, &CorrectionParams::measured())?;
        println!("  d = {d_um:>4} um  {:>9.3} pN  corrected {:>9.3} pN", bare * 1e12, corrected * 1e12);
    }
    Ok(())
}
