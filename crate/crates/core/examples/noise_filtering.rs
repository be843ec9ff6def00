// A noisy pulse through a pumped medium: high frequencies lose more.

use eit_bleach::maxwell_bloch::{run_filtration, AmplitudeConvention, MbGrid, NoisySignalSpec, ThreeLevelResponse};
use eit_bleach::params::AtomParams;

/// Returns (main-lobe dB, top-decade dB).
pub fn run_example() -> eit_bleach::Result<(f64, f64)> {
    let atom = AtomParams::new(1e7, 1e7)?;
    let response = ThreeLevelResponse::new(atom, 1e7, 1e11, 1.0)?;
    let grid = MbGrid::new(1024, 50, 40e-6, 1e-3)?;
    let mut signal = NoisySignalSpec::new(2e7, 20e-6, 3e-6, 42);
    signal.noise_bins = 128;
    let rep = run_filtration(&signal, &grid, &response, AmplitudeConvention::Quarter, 2)?;
    println!("energy {:.3e} -> {:.3e}", rep.energy_in, rep.energy_out);
    println!(
        "main lobe {:.2} dB, top decade {:.2} dB, filters noise: {}",
        rep.main_lobe.db,
        rep.top_decade.db,
        rep.filters_noise()
    );
    Ok((rep.main_lobe.db, rep.top_decade.db))
}

fn main() -> eit_bleach::Result<()> {
    run_example().map(|_| ())
}
