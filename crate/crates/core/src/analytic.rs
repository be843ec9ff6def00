//! Closed-form absorption, peak, bandwidth and group-velocity expressions.
//!
//! Rate-form functions take [`AtomParams`]/[`DriveParams`] and work in rad/s.
//! The intensity form lives on [`AbsorberModel`], which only needs α₀, I_sat
//! and I_coh and is what the propagation code uses.
//!
//! Approximate formulas check their stated validity regime and return
//! [`Error::Domain`] outside it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{alpha0, AtomParams, DriveParams, IntensityScales, MediumParams, C_LIGHT};

/// Two-state absorption at δ = 0: α⁽²⁾ = (2ξ/Γ)/(1 + 8Ω_s²/Γ²).
pub fn alpha_two_state(atom: &AtomParams, drive: &DriveParams, xi: f64) -> Result<f64> {
    let g = atom.gamma_sp();
    if g <= 0.0 {
        return Err(Error::domain("two-state absorption needs Γ > 0"));
    }
    let os = drive.omega_s();
    Ok((2.0 * xi / g) / (1.0 + 8.0 * os * os / (g * g)))
}

/// γΓ′ times the denominator of the three-state signal absorption, in rate
/// units. Finite at γ = 0, where the denominator itself diverges.
fn scaled_denominator(gamma_sp: f64, gamma_deph: f64, os: f64, op: f64) -> f64 {
    let gt = gamma_deph + 2.0 * gamma_sp;
    let (os2, op2) = (os * os, op * op);
    gamma_deph * gt * (1.0 + os2 / op2 + 12.0 * os2 / (gamma_sp * gt)) + (op2 + os2).powi(2) / op2
}

/// α_s/α₀ in rate form (Δ = δ = 0).
fn signal_ratio(atom: &AtomParams, os: f64, op: f64) -> f64 {
    let gd = atom.gamma_deph();
    if gd == 0.0 {
        return 0.0;
    }
    let gt = atom.gamma_total();
    let (os2, op2) = (os * os, op * op);
    1.0 / (1.0 + os2 / op2 + 12.0 * os2 / (atom.gamma_sp() * gt) + (op2 + os2).powi(2) / (op2 * gd * gt))
}

fn check_signal_domain(atom: &AtomParams, op: f64) -> Result<()> {
    if op <= 0.0 {
        return Err(Error::domain(
            "three-state absorption needs Ω_p > 0; use the two-state model without a pump",
        ));
    }
    if atom.gamma_sp() <= 0.0 {
        return Err(Error::domain("three-state absorption needs Γ > 0"));
    }
    Ok(())
}

/// Three-state signal absorption at Δ = δ = 0 in rate form.
///
/// Zero when γ = 0 (perfect EIT).
pub fn alpha_signal(atom: &AtomParams, drive: &DriveParams, xi: f64) -> Result<f64> {
    check_signal_domain(atom, drive.omega_p())?;
    Ok(alpha0(atom, xi)? * signal_ratio(atom, drive.omega_s(), drive.omega_p()))
}

/// Pump absorption in rate form: the signal expression with the two Rabi
/// frequencies exchanged.
pub fn alpha_pump(atom: &AtomParams, drive: &DriveParams, xi: f64) -> Result<f64> {
    if drive.omega_s() <= 0.0 {
        return Err(Error::domain("pump absorption needs a non-zero signal (I > 0)"));
    }
    if atom.gamma_sp() <= 0.0 {
        return Err(Error::domain("pump absorption needs Γ > 0"));
    }
    Ok(alpha0(atom, xi)? * signal_ratio(atom, drive.omega_p(), drive.omega_s()))
}

/// Intensity-form absorber: α₀, I_sat (three-state) and I_coh.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsorberModel {
    pub alpha0: f64,
    pub i_sat: f64,
    pub i_coh: f64,
}

/// Both onset intensities for quadratic bleaching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticThreshold {
    /// (I_pI_coh + I_satI_coh + 2I_pI_sat)/I_sat.
    pub eq13: f64,
    /// I_coh + 2I_p.
    pub simple: f64,
}

impl AbsorberModel {
    pub fn new(alpha0: f64, i_sat: f64, i_coh: f64) -> Result<Self> {
        if !(alpha0 >= 0.0 && alpha0.is_finite()) {
            return Err(Error::domain("alpha0 must be finite and >= 0"));
        }
        if !(i_sat > 0.0) {
            return Err(Error::domain("i_sat must be > 0"));
        }
        if !(i_coh >= 0.0) {
            return Err(Error::domain("i_coh must be >= 0"));
        }
        Ok(Self { alpha0, i_sat, i_coh })
    }

    /// The equal-dipole model for the given atom, intensity scales and ξ.
    pub fn from_params(atom: &AtomParams, scales: &IntensityScales, xi: f64) -> Result<Self> {
        Self::new(alpha0(atom, xi)?, scales.i_sat3, scales.i_coh)
    }

    /// 1 + I(1/I_p + 1/I_sat + 2/I_coh) + I_p/I_coh + I²/(I_pI_coh).
    pub fn denominator(&self, i: f64, ip: f64) -> f64 {
        1.0 + i * (1.0 / ip + 1.0 / self.i_sat + 2.0 / self.i_coh)
            + ip / self.i_coh
            + i * i / (ip * self.i_coh)
    }

    /// Signal absorption α_s(I; I_p).
    pub fn alpha_signal(&self, i: f64, ip: f64) -> Result<f64> {
        if !(ip > 0.0) {
            return Err(Error::domain(
                "three-state absorption needs I_p > 0; use the two-state model without a pump",
            ));
        }
        if !(i >= 0.0) {
            return Err(Error::domain("signal intensity must be >= 0"));
        }
        Ok(self.alpha_signal_limit(i, ip))
    }

    /// Pump absorption α_p(I; I_p): α_s with I and I_p exchanged.
    pub fn alpha_pump(&self, i: f64, ip: f64) -> Result<f64> {
        if !(i > 0.0) {
            return Err(Error::domain("pump absorption needs I > 0"));
        }
        if !(ip >= 0.0) {
            return Err(Error::domain("pump intensity must be >= 0"));
        }
        Ok(self.alpha_signal_limit(ip, i))
    }

    /// α_s with the limiting values filled in: zero for I_coh = 0 and for
    /// I_p = 0 with I > 0; α₀ for I = I_p = 0 is not physical and gives 0.
    pub(crate) fn alpha_signal_limit(&self, i: f64, ip: f64) -> f64 {
        if self.i_coh == 0.0 || ip <= 0.0 {
            return 0.0;
        }
        let i = i.max(0.0);
        self.alpha0 / self.denominator(i, ip)
    }

    /// Equal-field reference model α₀/(1 + 3I/I_sat + I/I_coh), verbatim.
    ///
    /// Setting I_p = I in [`Self::alpha_signal`] gives a different
    /// denominator (2 + I/I_sat + 4I/I_coh); both are kept.
    pub fn alpha_equal_fields(&self, i: f64) -> f64 {
        let coh = if self.i_coh == 0.0 { f64::INFINITY } else { i / self.i_coh };
        self.alpha0 / (1.0 + 3.0 * i / self.i_sat + coh)
    }

    pub fn quadratic_threshold(&self, ip: f64) -> QuadraticThreshold {
        QuadraticThreshold {
            eq13: (ip * self.i_coh + self.i_sat * self.i_coh + 2.0 * ip * self.i_sat) / self.i_sat,
            simple: self.i_coh + 2.0 * ip,
        }
    }

    /// min(I_p, I_sat, I_coh), the onset of linear decay.
    pub fn i_bar(&self, ip: f64) -> f64 {
        ip.min(self.i_sat).min(self.i_coh)
    }
}

/// Quadratic-bleaching thresholds for the pump intensity in `scales`.
pub fn quadratic_threshold(scales: &IntensityScales) -> QuadraticThreshold {
    let (ip, is, ic) = (scales.i_pump, scales.i_sat3, scales.i_coh);
    QuadraticThreshold {
        eq13: (ip * ic + is * ic + 2.0 * ip * is) / is,
        simple: ic + 2.0 * ip,
    }
}

/// Autler–Townes peak positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakAnalysis {
    pub delta_plus: f64,
    pub delta_minus: f64,
    /// A = (γΓ′ + Ω_p² + Ω_s²)^(1/2).
    pub aux_a: f64,
    /// The radicand is negative: a single peak at δ = 0.
    pub merged: bool,
}

/// Peak maxima of the signal absorption in δ (Δ = 0), including dephasing.
pub fn peak_positions(atom: &AtomParams, drive: &DriveParams) -> Result<PeakAnalysis> {
    let (os, op) = (drive.omega_s(), drive.omega_p());
    if op <= 0.0 {
        return Err(Error::domain("peak positions need Ω_p > 0"));
    }
    let (g, gd, gt) = (atom.gamma_sp(), atom.gamma_deph(), atom.gamma_total());
    if gt <= 0.0 {
        return Err(Error::domain("peak positions need Γ′ > 0"));
    }
    let a = (gd * gt + op * op + os * os).sqrt();
    let radicand = a * (op * (5.0 * gd + 2.0 * g) / gt + os * os / op) - 4.0 * gd * a * a / gt;
    if radicand < 0.0 {
        return Ok(PeakAnalysis {
            delta_plus: 0.0,
            delta_minus: 0.0,
            aux_a: a,
            merged: true,
        });
    }
    let d = radicand.sqrt();
    Ok(PeakAnalysis {
        delta_plus: d,
        delta_minus: -d,
        aux_a: a,
        merged: false,
    })
}

/// |δ±⁰| = (Ω_p² + Ω_s²)^(3/4)/√Ω_p, the dephasing-free peak position.
pub fn peak_position_ideal(drive: &DriveParams) -> Result<f64> {
    let (os, op) = (drive.omega_s(), drive.omega_p());
    if op <= 0.0 {
        return Err(Error::domain("peak positions need Ω_p > 0"));
    }
    Ok((op * op + os * os).powf(0.75) / op.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandwidthRegime {
    /// Expansion of the half peak separation for γ ≪ Γ, Ω_p, Ω_s.
    ThreeStateSmallGamma,
    /// Two-state FWHM Γ√(1 + I/I_sat).
    TwoState,
    /// Single Lorentzian of FWHM Γ′ once dephasing merges the peaks.
    DephasingDominated,
}

/// Operating bandwidth Δω [rad/s] in the selected regime.
pub fn bandwidth(atom: &AtomParams, drive: &DriveParams, regime: BandwidthRegime) -> Result<f64> {
    let (g, gd) = (atom.gamma_sp(), atom.gamma_deph());
    let (os, op) = (drive.omega_s(), drive.omega_p());
    match regime {
        BandwidthRegime::ThreeStateSmallGamma => {
            if g <= 0.0 {
                return Err(Error::domain("bandwidth expansion needs Γ > 0"));
            }
            if gd > g.min(op).min(os) {
                return Err(Error::domain(format!(
                    "small-γ bandwidth needs γ ≤ min(Γ, Ω_p, Ω_s); γ = {gd:e}"
                )));
            }
            let base = peak_position_ideal(drive)?;
            let sum = op * op + os * os;
            let bracket = 1.0 + gd * (g * g + 2.0 * op * (op - sum.sqrt())) / (2.0 * g * sum);
            Ok(base * bracket)
        }
        BandwidthRegime::TwoState => {
            if g <= 0.0 {
                return Err(Error::domain("two-state bandwidth needs Γ > 0"));
            }
            // I/I_sat2 = 8Ω_s²/Γ²
            Ok(g * (1.0 + 8.0 * os * os / (g * g)).sqrt())
        }
        BandwidthRegime::DephasingDominated => {
            let peaks = peak_positions(atom, drive)?;
            if !peaks.merged {
                return Err(Error::domain(
                    "dephasing-dominated bandwidth needs a single merged absorption peak",
                ));
            }
            Ok(atom.gamma_total())
        }
    }
}

/// Group velocity and the dispersion slope it was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupVelocityResult {
    pub v_g: f64,
    /// ∂Re[χ]/∂(detuning) [s].
    pub dchi_ddetuning: f64,
}

/// ∂Re[χ_ab]/∂δ divided by the susceptibility prefactor 2𝒩d²/(ħε₀ε_r), in
/// rate units [s²]. Algebraically the signal dispersion slope at Δ = δ = 0
/// rearranged so that γ = 0 stays finite.
pub fn signal_dispersion_slope(atom: &AtomParams, omega_s: f64, omega_p: f64) -> Result<f64> {
    check_signal_domain(atom, omega_p)?;
    let (gd, gt) = (atom.gamma_deph(), atom.gamma_total());
    let (i, ip, icoh) = (omega_s * omega_s, omega_p * omega_p, gd * gt);
    let e = scaled_denominator(atom.gamma_sp(), gd, omega_s, omega_p);
    // α_s/α₀ = γΓ′/E and (α_s/α₀)/(γΓ′) = 1/E.
    let numerator = (icoh / e) * 4.0 * (icoh + i) / (gt * gt) - (ip + i) / e;
    Ok(numerator / (icoh + i + ip))
}

/// ∂Re[χ_bc]/∂Δ divided by the prefactor, in rate units [s²]. Never negative.
pub fn pump_dispersion_slope(atom: &AtomParams, omega_s: f64, omega_p: f64) -> Result<f64> {
    if omega_s <= 0.0 {
        return Err(Error::domain("pump dispersion needs I > 0"));
    }
    if atom.gamma_sp() <= 0.0 {
        return Err(Error::domain("pump dispersion needs Γ > 0"));
    }
    let (gd, gt) = (atom.gamma_deph(), atom.gamma_total());
    let (i, ip, icoh) = (omega_s * omega_s, omega_p * omega_p, gd * gt);
    let ratio = signal_ratio(atom, omega_p, omega_s);
    Ok(ratio * 4.0 * (icoh + 2.0 * ip) / (gt * gt) / (icoh + i + ip))
}

fn velocity(bulk_index: f64, omega: f64, slope: f64) -> Result<f64> {
    let group_index = bulk_index + 0.5 * omega * slope;
    if !(group_index > 0.0) || !group_index.is_finite() {
        return Err(Error::domain(format!("non-positive group index {group_index:e}")));
    }
    Ok(C_LIGHT / group_index)
}

fn check_velocity_domain(drive: &DriveParams, medium: &MediumParams) -> Result<()> {
    medium.validate()?;
    if !medium.is_equal_dipole() {
        return Err(Error::domain("closed-form group velocities assume equal dipole moments"));
    }
    if drive.delta_one() != 0.0 || drive.delta_two() != 0.0 {
        return Err(Error::domain("closed-form group velocities hold at Δ = δ = 0"));
    }
    Ok(())
}

/// Signal group velocity v = c/(n + (ω_s/2)∂Re[χ_ab]/∂δ).
///
/// The slope can be negative, so v may exceed c/n.
pub fn group_velocity_signal(
    atom: &AtomParams,
    drive: &DriveParams,
    medium: &MediumParams,
) -> Result<GroupVelocityResult> {
    check_velocity_domain(drive, medium)?;
    let slope = medium.chi_prefactor_s() * signal_dispersion_slope(atom, drive.omega_s(), drive.omega_p())?;
    Ok(GroupVelocityResult {
        v_g: velocity(medium.bulk_index, medium.omega_trans_s, slope)?,
        dchi_ddetuning: slope,
    })
}

/// Pump group velocity v = c/(n + (ω_p/2)∂Re[χ_bc]/∂Δ). Never above c/n.
pub fn group_velocity_pump(
    atom: &AtomParams,
    drive: &DriveParams,
    medium: &MediumParams,
) -> Result<GroupVelocityResult> {
    check_velocity_domain(drive, medium)?;
    let slope = medium.chi_prefactor_p() * pump_dispersion_slope(atom, drive.omega_s(), drive.omega_p())?;
    Ok(GroupVelocityResult {
        v_g: velocity(medium.bulk_index, medium.omega_trans_p, slope)?,
        dchi_ddetuning: slope,
    })
}

/// Decoherence-limited signal velocity c/(n + 2𝒩d²ω_s/(ħε₀ε_rΓ′²)), valid
/// for I, I_p ≪ I_sat, I_coh.
pub fn group_velocity_signal_decoherence_limit(atom: &AtomParams, medium: &MediumParams) -> Result<f64> {
    medium.validate()?;
    let gt = atom.gamma_total();
    if gt <= 0.0 {
        return Err(Error::domain("decoherence limit needs Γ′ > 0"));
    }
    let excess = medium.chi_prefactor_s() * medium.omega_trans_s / (gt * gt);
    Ok(C_LIGHT / (medium.bulk_index + excess))
}

/// Small-dephasing signal velocity
/// c/(n + 2𝒩d²ω_s/(ħε₀ε_rΩ_s²)·1/(2 + I_p/I + I/I_p)).
pub fn group_velocity_signal_small_dephasing(drive: &DriveParams, medium: &MediumParams) -> Result<f64> {
    medium.validate()?;
    let (os, op) = (drive.omega_s(), drive.omega_p());
    if os <= 0.0 || op <= 0.0 {
        return Err(Error::domain("small-dephasing velocity needs Ω_s, Ω_p > 0"));
    }
    let r = (op * op) / (os * os);
    let excess = medium.chi_prefactor_s() * medium.omega_trans_s / (os * os) / (2.0 + r + 1.0 / r);
    Ok(C_LIGHT / (medium.bulk_index + excess))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenetrationRegime {
    Linear,
    PumpBleached,
    Coherent,
    Saturated,
    Quadratic,
}

/// Characteristic penetration depth estimate [m].
pub fn penetration_depth(regime: PenetrationRegime, model: &AbsorberModel, i0: f64, ip: f64) -> f64 {
    let a0 = model.alpha0;
    match regime {
        PenetrationRegime::Linear => 1.0 / a0,
        PenetrationRegime::PumpBleached => i0 / (a0 * ip),
        PenetrationRegime::Coherent => i0 / (a0 * model.i_coh),
        PenetrationRegime::Saturated => i0 / (a0 * model.i_sat),
        PenetrationRegime::Quadratic => i0 * i0 / (a0 * ip * model.i_coh),
    }
}

/// Normalised dark-state amplitudes (c_a, c_c) of (Ω_p|a⟩ − Ω_s|c⟩).
pub fn dark_state(drive: &DriveParams) -> Result<(f64, f64)> {
    let (os, op) = (drive.omega_s(), drive.omega_p());
    let norm = (os * os + op * op).sqrt();
    if norm == 0.0 {
        return Err(Error::domain("dark state undefined with both drives off"));
    }
    Ok((op / norm, -os / norm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(g: f64, gd: f64) -> AtomParams {
        AtomParams::new(g, gd).unwrap()
    }

    fn drive(os: f64, op: f64) -> DriveParams {
        DriveParams::resonant(os, op).unwrap()
    }

    #[test]
    fn two_state_limits() {
        let a = atom(2.0, 0.0);
        let xi = 3.0;
        let a0 = 2.0 * xi / 2.0;
        assert_eq!(alpha_two_state(&a, &drive(0.0, 0.0), xi).unwrap(), a0);
        let half = alpha_two_state(&a, &drive(2.0 / 8f64.sqrt(), 0.0), xi).unwrap();
        assert!((half - a0 / 2.0).abs() < 1e-14);
        // I/I_sat2 = 8Ω²/Γ² = 100
        let os = (100.0 * 4.0 / 8.0f64).sqrt();
        let v = alpha_two_state(&a, &drive(os, 0.0), xi).unwrap();
        assert!((v / a0 - 1.0 / 101.0).abs() < 1e-14);
        assert!(alpha_two_state(&atom(0.0, 1.0), &drive(1.0, 0.0), xi).is_err());
    }

    #[test]
    fn signal_absorption_domain_and_limits() {
        assert!(alpha_signal(&atom(1.0, 0.5), &drive(1.0, 0.0), 1.0).is_err());
        assert_eq!(alpha_signal(&atom(1.0, 0.0), &drive(1.0, 1.0), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn equal_scales_give_one_seventh() {
        let m = AbsorberModel::new(5.0, 2.0, 2.0).unwrap();
        let v = m.alpha_signal(2.0, 2.0).unwrap();
        assert!((v - 5.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn equal_field_reference_model() {
        let m = AbsorberModel::new(1.0, 1.0, 1e300).unwrap();
        assert_eq!(m.alpha_equal_fields(0.0), 1.0);
        assert!((m.alpha_equal_fields(1.0) - 0.25).abs() < 1e-12);
        let m = AbsorberModel::new(1.0, 1e300, 3.0).unwrap();
        assert!((m.alpha_equal_fields(3.0) - 0.5).abs() < 1e-12);
        // The two equal-field routes differ: Eq-11 with I_p = I has 2 + I/I_sat + 4I/I_coh.
        let m = AbsorberModel::new(1.0, 1.0, 1.0).unwrap();
        let via_general = m.alpha_signal(0.5, 0.5).unwrap();
        assert!((via_general - 1.0 / (2.0 + 0.5 + 2.0)).abs() < 1e-15);
        assert!((m.alpha_equal_fields(0.5) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pump_absorption_mirrors_signal() {
        let m = AbsorberModel::new(1.0, 0.7, 1.3).unwrap();
        for &(i, ip) in &[(0.1, 2.0), (3.0, 0.2), (1.0, 1.0)] {
            assert_eq!(m.alpha_pump(i, ip).unwrap(), m.alpha_signal(ip, i).unwrap());
            let ratio = m.alpha_signal(i, ip).unwrap() / m.alpha_pump(i, ip).unwrap();
            assert!((ratio / (ip / i) - 1.0).abs() < 1e-12);
        }
        assert!(m.alpha_pump(0.0, 1.0).is_err());
        assert_eq!(m.alpha_pump(1.0, 1.0).unwrap(), m.alpha_signal(1.0, 1.0).unwrap());
    }

    #[test]
    fn threshold_values() {
        let m = AbsorberModel::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(m.quadratic_threshold(1.0).eq13, 4.0);
        let m = AbsorberModel::new(1.0, 1e200, 2.0).unwrap();
        let t = m.quadratic_threshold(0.5);
        assert!((t.eq13 - t.simple).abs() < 1e-12);
    }

    #[test]
    fn ideal_peaks_from_dephasing_formula() {
        for &(g, os, op) in &[(1.0, 1.0, 1.0), (0.3, 2.0, 0.5), (7.0, 0.1, 3.0)] {
            let p = peak_positions(&atom(g, 0.0), &drive(os, op)).unwrap();
            let ideal = peak_position_ideal(&drive(os, op)).unwrap();
            assert!((p.delta_plus / ideal - 1.0).abs() < 1e-12);
            assert_eq!(p.delta_plus, -p.delta_minus);
        }
        let p = peak_position_ideal(&drive(1.0, 1.0)).unwrap();
        assert!((p - 2f64.powf(0.75)).abs() < 1e-14);
    }

    #[test]
    fn perturbative_peak_separation() {
        let d = peak_position_ideal(&drive(1e-4, 2.0)).unwrap();
        assert!((2.0 * d / 4.0 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn strong_dephasing_merges_peaks() {
        let p = peak_positions(&atom(1.0, 5.0), &drive(0.2, 0.2)).unwrap();
        assert!(p.merged);
        let bw = bandwidth(&atom(1.0, 5.0), &drive(0.2, 0.2), BandwidthRegime::DephasingDominated).unwrap();
        assert_eq!(bw, 7.0);
        assert!(bandwidth(&atom(1.0, 0.01), &drive(1.0, 1.0), BandwidthRegime::DephasingDominated).is_err());
    }

    #[test]
    fn bandwidth_limits() {
        let d = drive(0.8, 1.3);
        let bw = bandwidth(&atom(1.0, 0.0), &d, BandwidthRegime::ThreeStateSmallGamma).unwrap();
        assert_eq!(bw, peak_position_ideal(&d).unwrap());
        assert_eq!(bandwidth(&atom(2.5, 0.0), &drive(0.0, 1.0), BandwidthRegime::TwoState).unwrap(), 2.5);
        assert!(bandwidth(&atom(1.0, 0.9), &d, BandwidthRegime::ThreeStateSmallGamma).is_err());
    }

    #[test]
    fn bandwidth_growth_with_signal() {
        // I = 2I_p versus I = I_p at γ → 0: the printed expansion gives
        // (3/2)^(3/4) since |δ±⁰| = Ω_p (1 + I/I_p)^(3/4).
        let op = 1.0;
        let a = atom(1.0, 1e-6);
        let r = bandwidth(&a, &drive(2f64.sqrt(), op), BandwidthRegime::ThreeStateSmallGamma).unwrap()
            / bandwidth(&a, &drive(1.0, op), BandwidthRegime::ThreeStateSmallGamma).unwrap();
        assert!((r - 1.5f64.powf(0.75)).abs() < 1e-5, "ratio {r}");
    }

    #[test]
    fn penetration_estimates() {
        let m = AbsorberModel::new(2.0, 1.0, 3.0).unwrap();
        assert_eq!(penetration_depth(PenetrationRegime::Linear, &m, 1.0, 1.0), 0.5);
        assert!((penetration_depth(PenetrationRegime::PumpBleached, &m, 10.0, 1.0) - 10.0 / 2.0).abs() < 1e-15);
        let (ip, ic) = (0.5, m.i_coh);
        let i0 = (100.0 * ip * ic).sqrt();
        assert!((penetration_depth(PenetrationRegime::Quadratic, &m, i0, ip) - 100.0 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn dark_state_amplitudes() {
        assert_eq!(dark_state(&drive(0.0, 2.0)).unwrap(), (1.0, 0.0));
        let (a, c) = dark_state(&drive(1.5, 1.5)).unwrap();
        assert!((a - 0.5f64.sqrt()).abs() < 1e-15 && (c + 0.5f64.sqrt()).abs() < 1e-15);
        assert!(dark_state(&drive(0.0, 0.0)).is_err());
    }

    #[test]
    fn pump_slope_is_non_negative() {
        for &(g, gd, os, op) in &[(1.0, 0.0, 1.0, 1.0), (1.0, 3.0, 0.1, 4.0), (0.2, 0.01, 5.0, 0.3)] {
            assert!(pump_dispersion_slope(&atom(g, gd), os, op).unwrap() >= 0.0);
        }
    }

    #[test]
    fn slope_finite_at_zero_dephasing() {
        // Limit γ → 0: −Ω_p²/(Ω_p² + Ω_s²)².
        let s = signal_dispersion_slope(&atom(1.0, 0.0), 0.5, 1.5).unwrap();
        assert!((s + 2.25 / (2.5f64).powi(2)).abs() < 1e-14);
        let near = signal_dispersion_slope(&atom(1.0, 1e-9), 0.5, 1.5).unwrap();
        assert!((near / s - 1.0).abs() < 1e-6);
    }

    proptest::proptest! {
        #[test]
        fn rate_and_intensity_forms_agree(
            lg in -2.0f64..2.0, lgd in -2.0f64..2.0, los in -2.0f64..2.0, lop in -2.0f64..2.0,
        ) {
            let (g, gd, os, op) = (10f64.powf(lg), 10f64.powf(lgd), 10f64.powf(los), 10f64.powf(lop));
            let a = atom(g, gd);
            let xi = 1.7;
            let zeta = 3.1;
            let gt = a.gamma_total();
            let m = AbsorberModel::new(2.0 * xi / gt, zeta * g * gt / 12.0, zeta * gd * gt).unwrap();
            let rate = alpha_signal(&a, &drive(os, op), xi).unwrap();
            let inten = m.alpha_signal(zeta * os * os, zeta * op * op).unwrap();
            proptest::prop_assert!((rate / inten - 1.0).abs() < 1e-12);
        }

        #[test]
        fn absorption_decreases_with_signal(
            i in 1e-3f64..1e3, ip in 1e-3f64..1e3, is in 1e-2f64..1e2, ic in 1e-2f64..1e2,
        ) {
            let m = AbsorberModel::new(1.0, is, ic).unwrap();
            let h = 1e-6 * i;
            proptest::prop_assert!(m.alpha_signal(i + h, ip).unwrap() < m.alpha_signal(i, ip).unwrap());
        }
    }
}
