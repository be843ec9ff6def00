// Material constants and medium lengths for the built-in presets.

use eit_bleach::cli::presets::{design_report, nv_diamond, rb_vapour};
use eit_bleach::propagation::Arrangement;

/// Returns the NV uniform-pump length [m].
pub fn run_example() -> eit_bleach::Result<f64> {
    let nv = nv_diamond();
    let uniform = design_report(&nv, 0.01, Arrangement::UniformPump, 0.01)?;
    println!(
        "NV: xi {:.3e}  alpha0 {:.1} /m  I_sat {:.2e}  I_coh {:.2e} W/m^2  l = {:.2} cm",
        uniform.xi,
        uniform.alpha0,
        uniform.i_sat,
        uniform.i_coh,
        100.0 * uniform.length
    );
    for ratio in [0.01, 0.1, 1.0, 10.0] {
        let r = design_report(&nv, 0.01, Arrangement::Copropagating, ratio)?;
        println!("  copropagating, I_p/I_sat = {ratio:>5}: l = {:.1} cm", 100.0 * r.length);
    }
    let rb = design_report(&rb_vapour(), 0.01, Arrangement::UniformPump, 0.01)?;
    println!("Rb: alpha0 {:.2e} /m  I_sat {:.0} W/m^2  l = {:.2e} m", rb.alpha0, rb.i_sat, rb.length);
    for p in &uniform.provenance {
        println!("  {}: {}", p.field, p.note);
    }
    Ok(uniform.length)
}

fn main() -> eit_bleach::Result<()> {
    run_example().map(|_| ())
}
