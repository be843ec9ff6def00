// Normalised absorption of a pumped Λ medium as the signal grows.

use eit_bleach::analytic::AbsorberModel;
use eit_bleach::fit::decade_slope;

/// Returns the fitted log-log slopes (pump-bleached, quadratic).
pub fn run_example() -> eit_bleach::Result<(f64, f64)> {
    let model = AbsorberModel::new(1.0, 1.0, 50.0)?;
    let ip = 0.1;
    for k in -3..=4 {
        let i = 10f64.powi(k);
        println!("I/I_sat = 1e{k:+}  alpha/alpha0 = {:.3e}", model.alpha_signal(i, ip)?);
    }
    let thr = model.quadratic_threshold(ip).eq13;
    let linear = decade_slope(1.0, 40, |i| model.alpha_signal(i, ip).unwrap_or(f64::NAN))?;
    let quad = decade_slope(10.0 * thr, 40, |i| model.alpha_signal(i, ip).unwrap_or(f64::NAN))?;
    println!("slope {linear:.3} above I_p, {quad:.3} above the quadratic threshold {thr:.1}");
    Ok((linear, quad))
}

fn main() -> eit_bleach::Result<()> {
    run_example().map(|_| ())
}
