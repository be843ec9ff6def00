//! Exact steady state of the two- and three-level master equation.
//!
//! Basis order is |a⟩, |b⟩, |c⟩ (indices 0, 1, 2); the two-level model keeps
//! |a⟩ and |b⟩. Density matrices are vectorised row-major, so the superoperator
//! of ρ ↦ AρB is A ⊗ Bᵀ.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{AtomParams, DriveParams, MediumParams, C_LIGHT};

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

/// Kernel detection threshold, relative to the largest singular value.
pub const KERNEL_RTOL: f64 = 1e-12;

/// Linear-response probe as a fraction of max(Γ, Ω_p).
pub const PROBE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Levels {
    Two,
    Three,
}

impl Levels {
    pub fn dim(self) -> usize {
        match self {
            Levels::Two => 2,
            Levels::Three => 3,
        }
    }
}

/// Generator L of dρ/dt = L·vec(ρ).
#[derive(Debug, Clone)]
pub struct Liouvillian {
    matrix: DMatrix<Complex64>,
    levels: Levels,
    atom: AtomParams,
    drive: DriveParams,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn projector(dim: usize, i: usize, j: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(dim, dim);
    m[(i, j)] = c(1.0);
    m
}

/// Superoperator of ρ ↦ AρB.
fn sandwich(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(&b.transpose())
}

fn dissipator(op: &DMatrix<Complex64>, rate: f64) -> DMatrix<Complex64> {
    let dim = op.nrows();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let dag = op.adjoint();
    let dag_op = &dag * op;
    (sandwich(op, &dag) - (sandwich(&dag_op, &id) + sandwich(&id, &dag_op)) * c(0.5)) * c(rate)
}

/// Hamiltonian H/ħ in rad/s.
pub fn hamiltonian(drive: &DriveParams, levels: Levels) -> DMatrix<Complex64> {
    let dim = levels.dim();
    let mut h = DMatrix::zeros(dim, dim);
    match levels {
        Levels::Three => {
            h[(B, B)] = c(drive.delta_one());
            h[(A, A)] = c(drive.delta_two());
            h[(C, B)] = c(drive.omega_p());
            h[(B, C)] = c(drive.omega_p());
            h[(A, B)] = c(drive.omega_s());
            h[(B, A)] = c(drive.omega_s());
        }
        Levels::Two => {
            h[(B, B)] = c(drive.delta_two());
            h[(A, B)] = c(drive.omega_s());
            h[(B, A)] = c(drive.omega_s());
        }
    }
    h
}

/// Assemble L for the chosen level structure.
///
/// Three levels: spontaneous decay |b⟩→|a⟩ and |b⟩→|c⟩ at Γ each plus
/// dephasing γ𝓛[σ_aa − σ_cc]. Two levels: decay |b⟩→|a⟩ at Γ only.
pub fn build_liouvillian(atom: &AtomParams, drive: &DriveParams, levels: Levels) -> Liouvillian {
    let dim = levels.dim();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let h = hamiltonian(drive, levels);
    let i = Complex64::i();
    let mut l = (sandwich(&h, &id) - sandwich(&id, &h)) * (-i);
    l += dissipator(&projector(dim, A, B), atom.gamma_sp());
    if levels == Levels::Three {
        l += dissipator(&projector(dim, C, B), atom.gamma_sp());
        let mut deph = DMatrix::zeros(dim, dim);
        deph[(A, A)] = c(1.0);
        deph[(C, C)] = c(-1.0);
        l += dissipator(&deph, atom.gamma_deph());
    }
    Liouvillian {
        matrix: l,
        levels,
        atom: *atom,
        drive: *drive,
    }
}

impl Liouvillian {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn levels(&self) -> Levels {
        self.levels
    }

    pub fn atom(&self) -> &AtomParams {
        &self.atom
    }

    pub fn drive(&self) -> &DriveParams {
        &self.drive
    }

    /// Largest |Σ_i L[(ii), k]| over columns k; zero for a trace-preserving
    /// generator.
    pub fn trace_row_residual(&self) -> f64 {
        let dim = self.levels.dim();
        (0..dim * dim)
            .map(|k| {
                (0..dim)
                    .map(|i| self.matrix[(i * dim + i, k)])
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    /// Singular values in ascending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self.matrix.clone().singular_values().iter().copied().collect();
        sv.sort_by(|a, b| a.total_cmp(b));
        sv
    }

    /// Orthonormal basis of the numerical kernel, each vector reshaped into a
    /// matrix.
    pub fn kernel(&self) -> Vec<DMatrix<Complex64>> {
        let dim = self.levels.dim();
        let svd = self.matrix.clone().svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        svd.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= KERNEL_RTOL * smax || smax == 0.0)
            .map(|(k, _)| {
                let row = v_t.row(k);
                DMatrix::from_fn(dim, dim, |i, j| row[i * dim + j].conj())
            })
            .collect()
    }
}

/// Hermitian, unit-trace density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// ρ_ij = ⟨i|ρ|j⟩.
    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.rho[(i, j)]
    }

    pub fn population(&self, i: usize) -> f64 {
        self.rho[(i, i)].re
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    /// max |ρ − ρ†|.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.rho + self.rho.adjoint()) * c(0.5);
        herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Steady state by replacing the |a⟩⟨a| row of L with the trace constraint.
///
/// Fails when the kernel of L is not one-dimensional (for instance Γ = γ = 0,
/// or no drive so that ground-state populations are all stationary).
pub fn solve_steady_state(liou: &Liouvillian) -> Result<DensityMatrix> {
    let dim = liou.levels.dim();
    let n = dim * dim;
    let mut sv = liou.singular_values();
    let smax = sv.last().copied().unwrap_or(0.0);
    let kernel_dim = sv.iter().filter(|&&s| s <= KERNEL_RTOL * smax || smax == 0.0).count();
    if kernel_dim != 1 {
        sv.truncate(3);
        return Err(Error::NoUniqueSteadyState {
            kernel_dim,
            smallest: sv,
        });
    }

    let mut m = liou.matrix.clone();
    let mut rhs = DVector::<Complex64>::zeros(n);
    for k in 0..n {
        m[(0, k)] = c(0.0);
    }
    for i in 0..dim {
        m[(0, i * dim + i)] = c(1.0);
    }
    rhs[0] = c(1.0);
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("trace-augmented Liouvillian".into()))?;
    let rho = DMatrix::from_fn(dim, dim, |i, j| x[i * dim + j]);
    // Remove the antihermitian round-off so downstream code sees an exact
    // Hermitian matrix.
    let rho = (&rho + rho.adjoint()) * c(0.5);
    Ok(DensityMatrix { rho })
}

/// Complex susceptibility with the derived absorption and index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpticalResponse {
    /// χ_ab (dimensionless); real and imaginary parts.
    #[serde(serialize_with = "ser_complex")]
    pub chi: Complex64,
    /// Absorption coefficient α = (ω_s/(n c))·Im χ with the bulk index n [m⁻¹].
    pub alpha: f64,
    /// n from n² = 1 + Re χ; exactly 1 at Δ = δ = 0.
    pub refr_index: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// The signal Rabi frequency used for the linear-response limit.
pub fn probe_floor(atom: &AtomParams, drive: &DriveParams) -> f64 {
    PROBE_FLOOR * atom.gamma_sp().max(drive.omega_p())
}

/// Numerical response of the signal transition.
///
/// A signal Rabi frequency below [`probe_floor`] (including zero) is replaced
/// by the floor, so the division in χ ∝ ρ_ab/Ω_s is always well defined.
pub fn numeric_response(
    atom: &AtomParams,
    drive: &DriveParams,
    medium: &MediumParams,
    levels: Levels,
) -> Result<OpticalResponse> {
    let floor = probe_floor(atom, drive);
    let drive = if drive.omega_s() < floor {
        drive.with_omega_s(floor)?
    } else {
        *drive
    };
    numeric_response_at(atom, &drive, medium, levels)
}

/// As [`numeric_response`] but evaluated at an explicit probe Rabi frequency.
pub fn numeric_response_with_probe(
    atom: &AtomParams,
    drive: &DriveParams,
    medium: &MediumParams,
    levels: Levels,
    probe: f64,
) -> Result<OpticalResponse> {
    if !(probe > 0.0) {
        return Err(Error::domain("probe Rabi frequency must be > 0"));
    }
    numeric_response_at(atom, &drive.with_omega_s(probe)?, medium, levels)
}

fn numeric_response_at(
    atom: &AtomParams,
    drive: &DriveParams,
    medium: &MediumParams,
    levels: Levels,
) -> Result<OpticalResponse> {
    medium.validate()?;
    if drive.omega_s() <= 0.0 {
        return Err(Error::domain("signal Rabi frequency is zero and no probe floor applies (Γ = Ω_p = 0)"));
    }
    let rho = solve_steady_state(&build_liouvillian(atom, drive, levels))?;
    let chi = rho.element(A, B) * (medium.chi_prefactor_s() / drive.omega_s());
    let alpha = medium.omega_trans_s / (medium.bulk_index * C_LIGHT) * chi.im;
    let on_resonance = drive.delta_two() == 0.0 && (levels == Levels::Two || drive.delta_one() == 0.0);
    let refr_index = if on_resonance { 1.0 } else { (1.0 + chi.re).sqrt() };
    Ok(OpticalResponse {
        chi,
        alpha,
        refr_index,
    })
}

/// Numerical response of the pump transition, χ_bc ∝ ρ_cb/Ω_p, with the pump
/// frequency in α.
pub fn numeric_pump_response(
    atom: &AtomParams,
    drive: &DriveParams,
    medium: &MediumParams,
) -> Result<OpticalResponse> {
    medium.validate()?;
    if drive.omega_p() <= 0.0 {
        return Err(Error::domain("pump response needs Ω_p > 0"));
    }
    let rho = solve_steady_state(&build_liouvillian(atom, drive, Levels::Three))?;
    let chi = rho.element(C, B) * (medium.chi_prefactor_p() / drive.omega_p());
    let alpha = medium.omega_trans_p / (medium.bulk_index * C_LIGHT) * chi.im;
    let on_resonance = drive.delta_two() == 0.0 && drive.delta_one() == 0.0;
    let refr_index = if on_resonance { 1.0 } else { (1.0 + chi.re).sqrt() };
    Ok(OpticalResponse {
        chi,
        alpha,
        refr_index,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub delta: f64,
    pub response: OpticalResponse,
}

/// Sweep the two-photon detuning δ with everything else fixed.
pub fn absorption_spectrum(
    atom: &AtomParams,
    drive: &DriveParams,
    medium: &MediumParams,
    levels: Levels,
    deltas: &[f64],
) -> Result<Vec<SpectrumPoint>> {
    deltas
        .iter()
        .map(|&delta| {
            if !delta.is_finite() {
                return Err(Error::domain("detuning grid must be finite"));
            }
            let d = drive.with_delta_two(delta);
            numeric_response(atom, &d, medium, levels).map(|response| SpectrumPoint { delta, response })
        })
        .collect()
}
