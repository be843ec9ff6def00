// Group velocities of signal and pump in an NV ensemble.

use eit_bleach::analytic::{group_velocity_pump, group_velocity_signal, group_velocity_signal_decoherence_limit};
use eit_bleach::cli::presets::nv_diamond;
use eit_bleach::params::DriveParams;

/// Returns (v_signal, v_pump) at equal weak drives [m/s].
pub fn run_example() -> eit_bleach::Result<(f64, f64)> {
    let preset = nv_diamond();
    let (atom, medium) = (preset.atom, preset.medium);
    for omega in [1e5, 1e7, 1e8, 1e9] {
        let d = DriveParams::resonant(omega, omega)?;
        let vp = group_velocity_pump(&atom, &d, &medium)?.v_g;
        match group_velocity_signal(&atom, &d, &medium) {
            Ok(s) => println!("Omega = {omega:.0e}  v_s = {:.4e}  v_p = {vp:.4e}", s.v_g),
            // anomalous dispersion: no positive group velocity
            Err(e) => println!("Omega = {omega:.0e}  v_s: {e}  v_p = {vp:.4e}"),
        }
    }
    println!("decoherence limit {:.4e}", group_velocity_signal_decoherence_limit(&atom, &medium)?);
    let d = DriveParams::resonant(1e5, 1e5)?;
    Ok((
        group_velocity_signal(&atom, &d, &medium)?.v_g,
        group_velocity_pump(&atom, &d, &medium)?.v_g,
    ))
}

fn main() -> eit_bleach::Result<()> {
    run_example().map(|_| ())
}
