// Signal and pump entering together: the weaker field is depleted first.

use eit_bleach::analytic::AbsorberModel;
use eit_bleach::propagation::{integrate, Arrangement, PropagationConfig};

/// Returns (signal, pump) transmittance for each input pair.
pub fn run_example() -> eit_bleach::Result<Vec<(f64, f64)>> {
    let model = AbsorberModel::new(1.0, 1.0, 1.0)?;
    let ip = 1.0;
    let mut out = Vec::new();
    for i0 in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let p = integrate(&PropagationConfig::new(12.0, i0, ip, Arrangement::Copropagating)?, &model)?;
        println!(
            "I0 = {i0:>4}  T = {:.3e}  T_pump = {:.3e}",
            p.transmittance, p.pump_transmittance
        );
        out.push((p.transmittance, p.pump_transmittance));
    }
    Ok(out)
}

fn main() -> eit_bleach::Result<()> {
    run_example().map(|_| ())
}
