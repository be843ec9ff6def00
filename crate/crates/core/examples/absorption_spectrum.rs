// Signal absorption versus two-photon detuning and the Autler–Townes peaks.

use eit_bleach::analytic::peak_positions;
use eit_bleach::cli::presets::nv_diamond;
use eit_bleach::params::{alpha0, compute_xi, AtomParams, DriveParams};
use eit_bleach::steady_state::{absorption_spectrum, Levels};

/// Returns (numerical peak, closed-form peak) in units of Γ.
pub fn run_example() -> eit_bleach::Result<(f64, f64)> {
    let medium = nv_diamond().medium;
    let atom = AtomParams::new(1.0, 0.1)?;
    let drive = DriveParams::resonant(1.0, 1.0)?;
    let a0 = alpha0(&atom, compute_xi(&medium)?)?;

    let deltas: Vec<f64> = (0..=800).map(|k| -4.0 + k as f64 * 0.01).collect();
    let spectrum = absorption_spectrum(&atom, &drive, &medium, Levels::Three, &deltas)?;
    for p in spectrum.iter().step_by(80) {
        println!("delta = {:+.2}  alpha/alpha0 = {:.4}", p.delta, p.response.alpha / a0);
    }
    let peak = spectrum
        .iter()
        .filter(|p| p.delta > 0.0)
        .max_by(|a, b| a.response.alpha.total_cmp(&b.response.alpha))
        .map(|p| p.delta)
        .unwrap_or(0.0);
    let closed = peak_positions(&atom, &drive)?.delta_plus;
    println!("peak at {peak:.3}, closed form {closed:.3}");
    Ok((peak, closed))
}

fn main() -> eit_bleach::Result<()> {
    run_example().map(|_| ())
}
