// Signal decay through a medium under a uniform pump.

use eit_bleach::analytic::AbsorberModel;
use eit_bleach::propagation::{classify_decay_regime, integrate, Arrangement, PropagationConfig};

/// Returns the transmittance of each run.
pub fn run_example() -> eit_bleach::Result<Vec<f64>> {
    let model = AbsorberModel::new(1.0, 1.0, 1.0)?;
    let mut out = Vec::new();
    for (i0, ip) in [(8.0, 0.5), (10.0, 1.0), (8.0, 4.0), (2.0, 1.0), (0.2, 1.0)] {
        let cfg = PropagationConfig::new(30.0, i0, ip, Arrangement::UniformPump)?;
        let p = integrate(&cfg, &model)?;
        println!(
            "I0 = {i0:>4}  Ip = {ip:>3}  entry {:?}  I(5) = {:.4}  T = {:.3e}",
            classify_decay_regime(i0, ip, &model),
            p.intensity_at(5.0),
            p.transmittance
        );
        out.push(p.transmittance);
    }
    Ok(out)
}

fn main() -> eit_bleach::Result<()> {
    run_example().map(|_| ())
}
