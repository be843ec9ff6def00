//! Physical parameters and unit conversions.
//!
//! Everything is SI with angular frequencies in rad/s. Rabi frequencies are
//! real and non-negative; field phases are not tracked.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant [J·s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum [m/s].
pub const C_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity [F/m].
pub const EPS0: f64 = 8.854_187_812_8e-12;

fn check_nonneg(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and >= 0, got {value}")))
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {value}")))
    }
}

/// Decay and dephasing rates of one Λ atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomParams {
    gamma_sp: f64,
    gamma_deph: f64,
    gamma_total: f64,
}

impl AtomParams {
    /// `gamma_sp` is the spontaneous rate Γ into each ground state,
    /// `gamma_deph` the ground-state dephasing rate γ.
    pub fn new(gamma_sp: f64, gamma_deph: f64) -> Result<Self> {
        check_nonneg("gamma_sp", gamma_sp)?;
        check_nonneg("gamma_deph", gamma_deph)?;
        Ok(Self {
            gamma_sp,
            gamma_deph,
            gamma_total: gamma_deph + 2.0 * gamma_sp,
        })
    }

    pub fn gamma_sp(&self) -> f64 {
        self.gamma_sp
    }

    pub fn gamma_deph(&self) -> f64 {
        self.gamma_deph
    }

    /// Γ′ = γ + 2Γ.
    pub fn gamma_total(&self) -> f64 {
        self.gamma_total
    }
}

/// Rabi frequencies and detunings.
///
/// `delta_one` is the one-photon detuning Δ of the pump transition and
/// `delta_two` the two-photon detuning δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveParams {
    omega_s: f64,
    omega_p: f64,
    delta_one: f64,
    delta_two: f64,
}

impl DriveParams {
    pub fn new(omega_s: f64, omega_p: f64, delta_one: f64, delta_two: f64) -> Result<Self> {
        check_nonneg("omega_s", omega_s)?;
        check_nonneg("omega_p", omega_p)?;
        if !delta_one.is_finite() || !delta_two.is_finite() {
            return Err(Error::domain("detunings must be finite"));
        }
        Ok(Self {
            omega_s,
            omega_p,
            delta_one,
            delta_two,
        })
    }

    /// Both fields on one- and two-photon resonance.
    pub fn resonant(omega_s: f64, omega_p: f64) -> Result<Self> {
        Self::new(omega_s, omega_p, 0.0, 0.0)
    }

    pub fn omega_s(&self) -> f64 {
        self.omega_s
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    pub fn delta_one(&self) -> f64 {
        self.delta_one
    }

    pub fn delta_two(&self) -> f64 {
        self.delta_two
    }

    pub fn with_omega_s(mut self, omega_s: f64) -> Result<Self> {
        check_nonneg("omega_s", omega_s)?;
        self.omega_s = omega_s;
        Ok(self)
    }

    pub fn with_omega_p(mut self, omega_p: f64) -> Result<Self> {
        check_nonneg("omega_p", omega_p)?;
        self.omega_p = omega_p;
        Ok(self)
    }

    pub fn with_delta_one(mut self, delta_one: f64) -> Self {
        self.delta_one = delta_one;
        self
    }

    pub fn with_delta_two(mut self, delta_two: f64) -> Self {
        self.delta_two = delta_two;
        self
    }

    /// The same drive with signal and pump Rabi frequencies exchanged.
    pub fn swapped(self) -> Self {
        Self {
            omega_s: self.omega_p,
            omega_p: self.omega_s,
            ..self
        }
    }
}

/// Ensemble and material quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumParams {
    /// Number density 𝒩 [m⁻³]. Zero is allowed and describes an empty medium.
    pub density: f64,
    /// Dipole moment of the signal transition |a⟩–|b⟩ [C·m].
    pub dipole_ab: f64,
    /// Dipole moment of the pump transition |b⟩–|c⟩ [C·m].
    pub dipole_bc: f64,
    pub eps_r: f64,
    pub bulk_index: f64,
    /// Signal optical angular frequency ω_s [rad/s].
    pub omega_trans_s: f64,
    /// Pump optical angular frequency ω_p [rad/s].
    pub omega_trans_p: f64,
}

impl MediumParams {
    pub fn validate(&self) -> Result<()> {
        check_nonneg("density", self.density)?;
        check_positive("dipole_ab", self.dipole_ab)?;
        check_positive("dipole_bc", self.dipole_bc)?;
        check_positive("eps_r", self.eps_r)?;
        check_positive("bulk_index", self.bulk_index)?;
        check_positive("omega_trans_s", self.omega_trans_s)?;
        check_positive("omega_trans_p", self.omega_trans_p)?;
        Ok(())
    }

    /// Equal-dipole medium with both fields at vacuum wavelength `wavelength`.
    pub fn equal_dipole(
        density: f64,
        dipole: f64,
        eps_r: f64,
        bulk_index: f64,
        wavelength: f64,
    ) -> Result<Self> {
        check_positive("wavelength", wavelength)?;
        let omega = wavelength_to_angular(wavelength);
        let medium = Self {
            density,
            dipole_ab: dipole,
            dipole_bc: dipole,
            eps_r,
            bulk_index,
            omega_trans_s: omega,
            omega_trans_p: omega,
        };
        medium.validate()?;
        Ok(medium)
    }

    pub fn is_equal_dipole(&self) -> bool {
        self.dipole_ab == self.dipole_bc
    }

    /// Prefactor 2𝒩d_ab²/(ħε_rε₀) of the signal susceptibility [s⁻¹].
    pub fn chi_prefactor_s(&self) -> f64 {
        2.0 * self.density * self.dipole_ab * self.dipole_ab / (HBAR * self.eps_r * EPS0)
    }

    /// Same prefactor for the pump transition.
    pub fn chi_prefactor_p(&self) -> f64 {
        2.0 * self.density * self.dipole_bc * self.dipole_bc / (HBAR * self.eps_r * EPS0)
    }
}

/// Angular optical frequency for a vacuum wavelength.
pub fn wavelength_to_angular(wavelength: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_LIGHT / wavelength
}

/// Saturation, coherence and pump intensities derived from ζ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensityScales {
    /// Three-state saturation intensity ζΓΓ′/12 [W/m²].
    pub i_sat3: f64,
    /// Two-state saturation intensity ζΓ²/8 [W/m²].
    pub i_sat2: f64,
    /// Coherence intensity ζγΓ′ [W/m²].
    pub i_coh: f64,
    /// Pump intensity ζΩ_p² [W/m²].
    pub i_pump: f64,
    /// ζ = ħ²cε₀ε_r/(2d²) [W·s²/m²].
    pub zeta: f64,
}

/// ζ for a given dipole moment and relative permittivity.
pub fn zeta_from_dipole(dipole: f64, eps_r: f64) -> Result<f64> {
    check_positive("dipole", dipole)?;
    check_positive("eps_r", eps_r)?;
    Ok(HBAR * HBAR * C_LIGHT * EPS0 * eps_r / (2.0 * dipole * dipole))
}

/// ζ of the signal transition, so that I = ζΩ_s².
pub fn compute_zeta(medium: &MediumParams) -> Result<f64> {
    zeta_from_dipole(medium.dipole_ab, medium.eps_r)
}

/// ξ = 2𝒩d_ab²ω_s/(ħε_rε₀nc) [m⁻¹·s⁻¹].
pub fn compute_xi(medium: &MediumParams) -> Result<f64> {
    medium.validate()?;
    Ok(medium.chi_prefactor_s() * medium.omega_trans_s / (medium.bulk_index * C_LIGHT))
}

/// Small-signal absorption α₀ = 2ξ/Γ′.
pub fn alpha0(atom: &AtomParams, xi: f64) -> Result<f64> {
    check_positive("gamma_total", atom.gamma_total())?;
    Ok(2.0 * xi / atom.gamma_total())
}

/// Dipole moment from the radiative rate, d² = 3πħε₀ε_rc³Γ/(ω³η).
pub fn dipole_from_decay(gamma_sp: f64, omega_trans: f64, eps_r: f64, eta: f64) -> Result<f64> {
    check_positive("gamma_sp", gamma_sp)?;
    check_positive("omega_trans", omega_trans)?;
    check_positive("eps_r", eps_r)?;
    check_positive("eta", eta)?;
    let d2 = 3.0 * std::f64::consts::PI * HBAR * EPS0 * eps_r * C_LIGHT.powi(3) * gamma_sp
        / (omega_trans.powi(3) * eta);
    Ok(d2.sqrt())
}

pub fn rabi_to_intensity(omega: f64, zeta: f64) -> f64 {
    zeta * omega * omega
}

pub fn intensity_to_rabi(intensity: f64, zeta: f64) -> f64 {
    (intensity / zeta).sqrt()
}

/// Populate all intensity scales consistently from ζ.
///
/// `i_pump` uses the pump transition's own ζ, which coincides with the
/// signal's in the equal-dipole case.
pub fn compute_intensity_scales(
    atom: &AtomParams,
    drive: &DriveParams,
    medium: &MediumParams,
) -> Result<IntensityScales> {
    medium.validate()?;
    let zeta = compute_zeta(medium)?;
    let zeta_p = zeta_from_dipole(medium.dipole_bc, medium.eps_r)?;
    let g = atom.gamma_sp();
    let gt = atom.gamma_total();
    Ok(IntensityScales {
        i_sat3: zeta * g * gt / 12.0,
        i_sat2: zeta * g * g / 8.0,
        i_coh: zeta * atom.gamma_deph() * gt,
        i_pump: rabi_to_intensity(drive.omega_p(), zeta_p),
        zeta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nv() -> MediumParams {
        MediumParams::equal_dipole(1e20, 1e-30, 10.0, 10f64.sqrt(), 638e-9).unwrap()
    }

    #[test]
    fn gamma_total_is_exact() {
        let atom = AtomParams::new(3.0, 0.25).unwrap();
        assert_eq!(atom.gamma_total(), 0.25 + 6.0);
        assert!(AtomParams::new(-1.0, 0.0).is_err());
        assert!(AtomParams::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn zeta_scales_inverse_square_in_dipole() {
        let z1 = zeta_from_dipole(1e-30, 10.0).unwrap();
        let z2 = zeta_from_dipole(2e-30, 10.0).unwrap();
        assert!((z1 / z2 - 4.0).abs() < 1e-12);
        assert!(zeta_from_dipole(0.0, 10.0).is_err());
        assert!(zeta_from_dipole(-1e-30, 10.0).is_err());
    }

    #[test]
    fn zeta_nv_hand_value() {
        // ħ² c ε₀ ε_r / (2 d²), evaluated term by term.
        let hbar2 = 1.054_571_817e-34_f64 * 1.054_571_817e-34;
        let expected = hbar2 * 299_792_458.0 * 8.854_187_812_8e-12 * 10.0 / (2.0 * 1e-60);
        let z = compute_zeta(&nv()).unwrap();
        assert!((z / expected - 1.0).abs() < 1e-14);
        // ≈ 1.4762e-10 W s² m⁻²
        assert!((z - 1.4762e-10).abs() < 1e-13);
    }

    #[test]
    fn xi_of_empty_medium_is_zero() {
        let mut m = nv();
        m.density = 0.0;
        assert_eq!(compute_xi(&m).unwrap(), 0.0);
    }

    #[test]
    fn xi_nv_matches_quoted_value() {
        let xi = compute_xi(&nv()).unwrap();
        assert!((xi / 7e10 - 1.0).abs() < 0.2, "xi = {xi:e}");
    }

    #[test]
    fn dipole_scalings() {
        let d1 = dipole_from_decay(1e8, 2e15, 1.0, 1.0).unwrap();
        let d2 = dipole_from_decay(2e8, 2e15, 1.0, 1.0).unwrap();
        assert!((d2 / d1 - 2f64.sqrt()).abs() < 1e-12);
        let d3 = dipole_from_decay(1e8, 4e15, 1.0, 1.0).unwrap();
        assert!((d1 / d3 - 2f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn rb_dipole_order_of_magnitude() {
        let gamma = std::f64::consts::PI * 37e6;
        let d = dipole_from_decay(gamma, wavelength_to_angular(795e-9), 1.0, 1.0).unwrap();
        assert!(d > 1e-30 && d < 1e-28, "d = {d:e}");
    }

    #[test]
    fn intensity_scales_hand_values() {
        let g = 2.0e7;
        let atom = AtomParams::new(g, 2.0 * g).unwrap();
        let drive = DriveParams::resonant(1e7, 0.0).unwrap();
        let s = compute_intensity_scales(&atom, &drive, &nv()).unwrap();
        // Γ′ = 4Γ
        assert!((s.i_sat3 / (s.zeta * g * g / 3.0) - 1.0).abs() < 1e-14);
        assert!((s.i_coh / (8.0 * s.zeta * g * g) - 1.0).abs() < 1e-14);
        assert_eq!(s.i_pump, 0.0);
        assert!((s.i_sat2 / s.i_sat3 - 1.5 * g / atom.gamma_total()).abs() < 1e-14);

        let atom0 = AtomParams::new(g, 0.0).unwrap();
        let s0 = compute_intensity_scales(&atom0, &drive, &nv()).unwrap();
        assert_eq!(s0.i_coh, 0.0);
    }

    #[test]
    fn alpha0_two_routes_agree() {
        let m = nv();
        let atom = AtomParams::new(std::f64::consts::PI * 86e6, 2.0 * std::f64::consts::PI * 1e6)
            .unwrap();
        let via_xi = alpha0(&atom, compute_xi(&m).unwrap()).unwrap();
        let direct = 4.0 * m.density * m.dipole_ab.powi(2) * m.omega_trans_s
            / (HBAR * m.eps_r * EPS0 * m.bulk_index * C_LIGHT * atom.gamma_total());
        assert!((via_xi / direct - 1.0).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn rabi_intensity_round_trip(omega in 0.0f64..1e12, logd in -31.0f64..-28.0) {
            let zeta = zeta_from_dipole(10f64.powf(logd), 10.0).unwrap();
            let back = intensity_to_rabi(rabi_to_intensity(omega, zeta), zeta);
            proptest::prop_assert!((back - omega).abs() <= 4.0 * f64::EPSILON * omega.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn saturation_ratio_identity(g in 1e-3f64..1e9, gd in 0.0f64..1e9) {
            let atom = AtomParams::new(g, gd).unwrap();
            let drive = DriveParams::resonant(0.0, 1.0).unwrap();
            let s = compute_intensity_scales(&atom, &drive, &nv()).unwrap();
            let expected = 1.5 * g / atom.gamma_total();
            proptest::prop_assert!((s.i_sat2 / s.i_sat3 / expected - 1.0).abs() < 1e-12);
        }
    }
}
