// Transmittance against input intensity: integration and implicit laws.

use eit_bleach::analytic::AbsorberModel;
use eit_bleach::propagation::{transmittance_two_state, transmittance_uniform, Arrangement, PropagationConfig};

/// Returns the largest gap between integration and the rederived law.
pub fn run_example() -> eit_bleach::Result<f64> {
    let model = AbsorberModel::new(1.0, 1.0, 1.0)?;
    let t0: f64 = 0.01;
    let mut worst = 0.0f64;
    for ip in [0.01, 0.1, 1.0, 10.0] {
        println!("I_p = {ip}");
        for k in -4..=3 {
            let i0 = 10f64.powi(k);
            let cfg = PropagationConfig::new(-t0.ln(), i0, ip, Arrangement::UniformPump)?;
            let c = transmittance_uniform(&cfg, &model)?;
            worst = worst.max((c.ode / c.rederived - 1.0).abs());
            println!(
                "  I0 = 1e{k:+}  ode {:.4}  rederived {:.4}  printed {:.4}  two-state {:.4}",
                c.ode,
                c.rederived,
                c.printed,
                transmittance_two_state(t0, i0, 0.72)?
            );
        }
    }
    println!("max |ode/rederived - 1| = {worst:.1e}");
    Ok(worst)
}

fn main() -> eit_bleach::Result<()> {
    run_example().map(|_| ())
}
