//! Space-marching Maxwell–Bloch propagation of a noisy signal envelope.
//!
//! Each space step solves the trapezoidal-in-z, central-in-t discretisation
//!
//! ```text
//! (2/Δz)Ω_{j+1}ⁿ + (Ω_{j+1}ⁿ⁺¹ − Ω_{j+1}ⁿ⁻¹)/(2vΔt) + κα Ω_{j+1}ⁿ
//!     = (2/Δz)Ω_jⁿ − (Ω_jⁿ⁺¹ − Ω_jⁿ⁻¹)/(2vΔt) − κα Ω_jⁿ
//! ```
//!
//! with κ = 1/4 ([`AmplitudeConvention::Quarter`]) or 1/2. The first
//! and last time rows use one-sided differences. α and v at column j + 1
//! depend on the unknown column, so the tridiagonal system is re-solved
//! until the column stops changing.

mod signal;
mod tridiag;

use serde::{Deserialize, Serialize};

pub use signal::{pink_noise, psd, synthesize_signal, NoisySignalSpec, Psd};
pub use tridiag::solve_tridiagonal;

use crate::analytic::{alpha_signal, signal_dispersion_slope};
use crate::error::{Error, Result};
use crate::params::{compute_xi, AtomParams, DriveParams, MediumParams, C_LIGHT};

/// Column convergence threshold on max|ΔΩ|/max|Ω|.
pub const FIXED_POINT_TOL: f64 = 1e-8;
pub const FIXED_POINT_MAX_ITER: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MbGrid {
    /// Number of time samples N.
    pub n_time: usize,
    /// Number of space steps J.
    pub n_space: usize,
    /// Simulation time T [s].
    pub duration: f64,
    /// Medium length l [m].
    pub length: f64,
}

impl MbGrid {
    pub fn new(n_time: usize, n_space: usize, duration: f64, length: f64) -> Result<Self> {
        let g = Self {
            n_time,
            n_space,
            duration,
            length,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_time < 3 {
            return Err(Error::config("n_time", "needs at least 3 time steps"));
        }
        if self.n_space < 1 {
            return Err(Error::config("n_space", "needs at least 1 space step"));
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::config("duration", "must be > 0"));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::config("length", "must be > 0"));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.duration / self.n_time as f64
    }

    pub fn dz(&self) -> f64 {
        self.length / self.n_space as f64
    }

    /// Same domain with Δt and Δz halved.
    pub fn refined(&self) -> Self {
        Self {
            n_time: 2 * self.n_time,
            n_space: 2 * self.n_space,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeConvention {
    /// Amplitude damping α/4, as in the discretised equation.
    #[default]
    Quarter,
    /// Amplitude damping α/2, so that Ω² decays at the intensity rate α.
    Half,
}

impl AmplitudeConvention {
    pub fn factor(self) -> f64 {
        match self {
            AmplitudeConvention::Quarter => 0.25,
            AmplitudeConvention::Half => 0.5,
        }
    }
}

/// Local absorption and group velocity as functions of the signal Rabi
/// frequency.
pub trait QuasiStaticResponse {
    fn alpha(&self, omega: f64) -> Result<f64>;
    fn group_velocity(&self, omega: f64) -> Result<f64>;
}

/// Uniform medium with fixed α and v.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantResponse {
    pub alpha: f64,
    pub v_g: f64,
}

impl QuasiStaticResponse for ConstantResponse {
    fn alpha(&self, _omega: f64) -> Result<f64> {
        Ok(self.alpha)
    }

    fn group_velocity(&self, _omega: f64) -> Result<f64> {
        Ok(self.v_g)
    }
}

/// Steady-state three-level response at Δ = δ = 0 under a fixed pump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeLevelResponse {
    pub atom: AtomParams,
    pub omega_p: f64,
    pub xi: f64,
    pub bulk_index: f64,
}

impl ThreeLevelResponse {
    pub fn new(atom: AtomParams, omega_p: f64, xi: f64, bulk_index: f64) -> Result<Self> {
        if !(omega_p > 0.0) {
            return Err(Error::config("omega_p", "pump Rabi frequency must be > 0"));
        }
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::config("xi", "must be finite and >= 0"));
        }
        if !(bulk_index > 0.0) {
            return Err(Error::config("bulk_index", "must be > 0"));
        }
        Ok(Self {
            atom,
            omega_p,
            xi,
            bulk_index,
        })
    }

    pub fn from_medium(atom: AtomParams, drive: &DriveParams, medium: &MediumParams) -> Result<Self> {
        Self::new(atom, drive.omega_p(), compute_xi(medium)?, medium.bulk_index)
    }
}

impl QuasiStaticResponse for ThreeLevelResponse {
    fn alpha(&self, omega: f64) -> Result<f64> {
        let drive = DriveParams::resonant(omega.abs(), self.omega_p)?;
        alpha_signal(&self.atom, &drive, self.xi)
    }

    /// c/(n + (ω_s/2)∂Re[χ]/∂δ); the prefactor of χ times ω_s equals ξnc.
    fn group_velocity(&self, omega: f64) -> Result<f64> {
        let slope = signal_dispersion_slope(&self.atom, omega.abs(), self.omega_p)?;
        let n = self.bulk_index;
        let group_index = n * (1.0 + 0.5 * self.xi * C_LIGHT * slope);
        if !(group_index > 0.0) {
            return Err(Error::domain(format!("non-positive group index {group_index:e}")));
        }
        Ok(C_LIGHT / group_index)
    }
}

struct Coefficients {
    damping: Vec<f64>,
    inv_v: Vec<f64>,
}

fn coefficients(omega: &[f64], response: &dyn QuasiStaticResponse, kappa: f64) -> Result<Coefficients> {
    let mut damping = Vec::with_capacity(omega.len());
    let mut inv_v = Vec::with_capacity(omega.len());
    for &w in omega {
        damping.push(kappa * response.alpha(w)?);
        inv_v.push(1.0 / response.group_velocity(w)?);
    }
    Ok(Coefficients { damping, inv_v })
}

/// (1/v)∂Ω/∂t at every time row, one-sided at the ends.
fn time_term(omega: &[f64], inv_v: &[f64], dt: f64) -> Vec<f64> {
    let n = omega.len();
    (0..n)
        .map(|k| {
            let diff = if k == 0 {
                (omega[1] - omega[0]) / dt
            } else if k == n - 1 {
                (omega[n - 1] - omega[n - 2]) / dt
            } else {
                (omega[k + 1] - omega[k - 1]) / (2.0 * dt)
            };
            inv_v[k] * diff
        })
        .collect()
}

/// Result of one space step.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceStep {
    pub omega: Vec<f64>,
    /// max|ΔΩ|/max|Ω| after each fixed-point iteration.
    pub trace: Vec<f64>,
}

/// Advances the envelope from column `column` to `column + 1`.
pub fn step_space(
    grid: &MbGrid,
    column: usize,
    omega_j: &[f64],
    response: &dyn QuasiStaticResponse,
    convention: AmplitudeConvention,
) -> Result<SpaceStep> {
    grid.validate()?;
    if omega_j.len() != grid.n_time {
        return Err(Error::domain("column length differs from n_time"));
    }
    let kappa = convention.factor();
    let here = coefficients(omega_j, response, kappa)?;
    step_with(grid, column, omega_j, &here, response, kappa)
}

fn step_with(
    grid: &MbGrid,
    column: usize,
    omega_j: &[f64],
    here: &Coefficients,
    response: &dyn QuasiStaticResponse,
    kappa: f64,
) -> Result<SpaceStep> {
    let n = grid.n_time;
    let (dt, dz) = (grid.dt(), grid.dz());
    let two_dz = 2.0 / dz;
    let tt = time_term(omega_j, &here.inv_v, dt);
    let rhs: Vec<f64> = (0..n)
        .map(|k| (two_dz - here.damping[k]) * omega_j[k] - tt[k])
        .collect();

    let mut trial = omega_j.to_vec();
    let mut trace = Vec::new();
    for _ in 0..FIXED_POINT_MAX_ITER {
        let next = coefficients(&trial, response, kappa)?;
        let mut d = vec![0.0; n];
        let mut du = vec![0.0; n - 1];
        let mut dl = vec![0.0; n - 1];
        for k in 0..n {
            d[k] = two_dz + next.damping[k];
            let iv = next.inv_v[k];
            if k == 0 {
                d[k] -= iv / dt;
                du[k] = iv / dt;
            } else if k == n - 1 {
                d[k] += iv / dt;
                dl[k - 1] = -iv / dt;
            } else {
                du[k] = iv / (2.0 * dt);
                dl[k - 1] = -iv / (2.0 * dt);
            }
        }
        let mut sol = rhs.clone();
        solve_tridiagonal(&mut dl, &mut d, &mut du, &mut sol)?;
        let scale = sol.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let change = sol
            .iter()
            .zip(&trial)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let rel = if scale > 0.0 { change / scale } else { 0.0 };
        trace.push(rel);
        trial = sol;
        if rel < FIXED_POINT_TOL {
            return Ok(SpaceStep { omega: trial, trace });
        }
    }
    Err(Error::NonConvergence { column, trace })
}

/// Envelope after marching through the whole medium.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Propagated {
    pub output: Vec<f64>,
    /// Positions of the stored columns [m].
    pub snapshot_z: Vec<f64>,
    /// Stored columns Ω(z, ·), first is the input.
    pub snapshots: Vec<Vec<f64>>,
    pub max_iterations: usize,
    pub mean_iterations: f64,
}

/// Marches `input` = Ω(0, t_n) across all J space steps, keeping
/// `n_snapshots` evenly spaced columns (at least input and output).
pub fn propagate_envelope(
    grid: &MbGrid,
    input: &[f64],
    response: &dyn QuasiStaticResponse,
    convention: AmplitudeConvention,
    n_snapshots: usize,
) -> Result<Propagated> {
    grid.validate()?;
    if input.len() != grid.n_time {
        return Err(Error::domain("input length differs from n_time"));
    }
    if input.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("input envelope must be finite"));
    }
    let kappa = convention.factor();
    let j_total = grid.n_space;
    let keep = n_snapshots.max(2).min(j_total + 1);
    let keep_at: Vec<usize> = (0..keep)
        .map(|s| ((s as f64) * j_total as f64 / (keep - 1) as f64).round() as usize)
        .collect();

    let mut snapshot_z = vec![0.0];
    let mut snapshots = vec![input.to_vec()];
    let mut column = input.to_vec();
    let mut coeffs = coefficients(&column, response, kappa)?;
    let (mut max_it, mut sum_it) = (0usize, 0usize);
    for j in 0..j_total {
        let step = step_with(grid, j, &column, &coeffs, response, kappa)?;
        max_it = max_it.max(step.trace.len());
        sum_it += step.trace.len();
        column = step.omega;
        coeffs = coefficients(&column, response, kappa)?;
        if keep_at[1..].contains(&(j + 1)) {
            snapshot_z.push((j + 1) as f64 * grid.dz());
            snapshots.push(column.clone());
        }
    }
    Ok(Propagated {
        output: column,
        snapshot_z,
        snapshots,
        max_iterations: max_it,
        mean_iterations: sum_it as f64 / j_total as f64,
    })
}

/// ∑Ω²Δt.
pub fn pulse_energy(series: &[f64], dt: f64) -> f64 {
    series.iter().map(|v| v * v).sum::<f64>() * dt
}

/// Output/input PSD ratio over a band of bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandRatio {
    pub f_lo: f64,
    pub f_hi: f64,
    /// Band-summed output power over band-summed input power.
    pub ratio: f64,
    pub db: f64,
}

fn band_ratio(input: &Psd, output: &Psd, lo: usize, hi: usize) -> BandRatio {
    let hi = hi.min(input.power.len() - 1);
    let lo = lo.clamp(1, hi);
    let p_in: f64 = input.power[lo..=hi].iter().sum();
    let p_out: f64 = output.power[lo..=hi].iter().sum();
    let ratio = p_out / p_in;
    BandRatio {
        f_lo: input.freq[lo],
        f_hi: input.freq[hi],
        ratio,
        db: 10.0 * ratio.log10(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiltrationReport {
    pub grid: MbGrid,
    pub convention: AmplitudeConvention,
    pub dt: f64,
    pub input: Vec<f64>,
    pub propagated: Propagated,
    pub input_psd: Psd,
    pub output_psd: Psd,
    pub energy_in: f64,
    pub energy_out: f64,
    /// Bins up to 1/(πσ), the Gaussian's main lobe.
    pub main_lobe: BandRatio,
    /// The highest decade of the noise band.
    pub top_decade: BandRatio,
}

impl FiltrationReport {
    pub fn output(&self) -> &[f64] {
        &self.propagated.output
    }

    /// High frequencies are attenuated more strongly than the main lobe.
    pub fn filters_noise(&self) -> bool {
        self.top_decade.ratio < self.main_lobe.ratio
    }
}

/// Synthesises the noisy input, propagates it and compares spectra.
pub fn run_filtration(
    spec: &NoisySignalSpec,
    grid: &MbGrid,
    response: &dyn QuasiStaticResponse,
    convention: AmplitudeConvention,
    n_snapshots: usize,
) -> Result<FiltrationReport> {
    let input = synthesize_signal(spec, grid)?;
    let propagated = propagate_envelope(grid, &input, response, convention, n_snapshots)?;
    let dt = grid.dt();
    let input_psd = psd(&input, dt)?;
    let output_psd = psd(&propagated.output, dt)?;
    let lobe_hi = ((1.0 / (std::f64::consts::PI * spec.width)) / input_psd.df).floor() as usize;
    let k = spec.noise_bins.min(grid.n_time / 2);
    let main_lobe = band_ratio(&input_psd, &output_psd, 1, lobe_hi.max(1));
    let top_decade = band_ratio(&input_psd, &output_psd, k.div_ceil(10), k);
    Ok(FiltrationReport {
        grid: *grid,
        convention,
        dt,
        energy_in: pulse_energy(&input, dt),
        energy_out: pulse_energy(&propagated.output, dt),
        input,
        propagated,
        input_psd,
        output_psd,
        main_lobe,
        top_decade,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(grid: &MbGrid, center: f64, width: f64) -> Vec<f64> {
        (0..grid.n_time)
            .map(|n| {
                let t = n as f64 * grid.dt() - center;
                (-0.5 * t * t / (width * width)).exp()
            })
            .collect()
    }

    #[test]
    fn grid_validation() {
        assert!(MbGrid::new(2, 10, 1.0, 1.0).is_err());
        assert!(MbGrid::new(8, 0, 1.0, 1.0).is_err());
        assert!(MbGrid::new(8, 1, 0.0, 1.0).is_err());
        let g = MbGrid::new(8, 4, 2.0, 1.0).unwrap();
        assert_eq!((g.dt(), g.dz()), (0.25, 0.25));
        assert_eq!(g.refined().n_time, 16);
    }

    #[test]
    fn free_propagation_conserves_energy() {
        let grid = MbGrid::new(2048, 50, 1.0, C_LIGHT * 0.2).unwrap();
        let input = gaussian(&grid, 0.3, 0.03);
        let r = ConstantResponse { alpha: 0.0, v_g: C_LIGHT };
        let out = propagate_envelope(&grid, &input, &r, AmplitudeConvention::Quarter, 2).unwrap();
        let (e0, e1) = (pulse_energy(&input, grid.dt()), pulse_energy(&out.output, grid.dt()));
        assert!((e1 / e0 - 1.0).abs() < 1e-3, "{}", e1 / e0);
        // The pulse moved by l/c = 0.2 time units.
        let peak = out.output.iter().enumerate().fold((0, 0.0), |a, (i, &v)| if v > a.1 { (i, v) } else { a }).0;
        assert!((peak as f64 * grid.dt() - 0.5).abs() <= 4.0 * grid.dt());
    }

    #[test]
    fn cw_amplitude_law() {
        let grid = MbGrid::new(64, 100, 1e-6, 1e-3).unwrap();
        let alpha = 2000.0;
        let r = ConstantResponse { alpha, v_g: 1e5 };
        for (conv, k) in [(AmplitudeConvention::Quarter, 0.25), (AmplitudeConvention::Half, 0.5)] {
            let out = propagate_envelope(&grid, &vec![3.0; 64], &r, conv, 2).unwrap();
            let expect = (-k * alpha * grid.length).exp();
            for v in &out.output {
                assert!((v / 3.0 / expect - 1.0).abs() < 5e-3);
            }
        }
    }

    #[test]
    fn passivity_with_nonlinear_response() {
        let atom = AtomParams::new(1e7, 1e7).unwrap();
        let r = ThreeLevelResponse::new(atom, 1e7, 1e11, 1.0).unwrap();
        let grid = MbGrid::new(256, 20, 4e-6, 2e-4).unwrap();
        let mut input = gaussian(&grid, 2e-6, 0.3e-6);
        input.iter_mut().for_each(|v| *v *= 2e7);
        let out = propagate_envelope(&grid, &input, &r, AmplitudeConvention::Quarter, 3).unwrap();
        assert!(pulse_energy(&out.output, 1.0) <= pulse_energy(&input, 1.0));
        assert_eq!(out.snapshots.len(), 3);
        assert_eq!(out.snapshot_z[2], grid.length);
        assert!(out.max_iterations <= FIXED_POINT_MAX_ITER);
    }

    #[test]
    fn nonconvergence_carries_trace() {
        // Absorption switching at Ω = 0.25 makes the column oscillate
        // between 0.2 and 0.3.
        struct Flip;
        impl QuasiStaticResponse for Flip {
            fn alpha(&self, omega: f64) -> Result<f64> {
                Ok(if omega > 0.25 { 4000.0 } else { 0.0 })
            }
            fn group_velocity(&self, _: f64) -> Result<f64> {
                Ok(1e8)
            }
        }
        let grid = MbGrid::new(8, 1, 1e-6, 1e-3).unwrap();
        let input = vec![0.6; 8];
        match step_space(&grid, 0, &input, &Flip, AmplitudeConvention::Quarter) {
            Err(Error::NonConvergence { column, trace }) => {
                assert_eq!(column, 0);
                assert_eq!(trace.len(), FIXED_POINT_MAX_ITER);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn clean_pulse_stays_in_band() {
        let atom = AtomParams::new(1e7, 1e7).unwrap();
        let r = ThreeLevelResponse::new(atom, 1e7, 1e11, 1.0).unwrap();
        let grid = MbGrid::new(512, 20, 4e-6, 2e-4).unwrap();
        let mut spec = NoisySignalSpec::new(2e7, 2e-6, 0.3e-6, 0);
        spec.rms_fraction = 0.0;
        let rep = run_filtration(&spec, &grid, &r, AmplitudeConvention::Quarter, 2).unwrap();
        let total: f64 = rep.output_psd.power.iter().sum();
        let high: f64 = rep.output_psd.power[64..].iter().sum();
        assert!(high / total < 1e-12);
        assert!(rep.energy_out < rep.energy_in);
    }
}
