//! Material presets and the design calculator.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{alpha0, compute_xi, compute_zeta, AtomParams, MediumParams};
use crate::propagation::Arrangement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    #[serde(alias = "nv")]
    #[value(name = "nv", alias = "nv_diamond")]
    NvDiamond,
    #[serde(alias = "rb")]
    #[value(name = "rb", alias = "rb_vapour")]
    RbVapour,
    /// User-supplied parameters.
    #[value(skip)]
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub field: &'static str,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialPreset {
    pub name: PresetName,
    pub atom: AtomParams,
    pub medium: MediumParams,
    pub wavelength: f64,
    pub provenance: Vec<Provenance>,
}

/// Parameters of a `custom` material; both transitions share one dipole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomMaterial {
    /// Γ [rad/s].
    pub gamma_sp: f64,
    /// γ [rad/s].
    pub gamma_deph: f64,
    /// 𝒩 [m⁻³].
    pub density: f64,
    /// d [C·m].
    pub dipole: f64,
    pub eps_r: f64,
    pub bulk_index: f64,
    /// Vacuum wavelength [m].
    pub wavelength: f64,
}

impl MaterialPreset {
    /// Built-in preset; `Custom` has no built-in values.
    pub fn get(name: PresetName) -> Result<Self> {
        match name {
            PresetName::NvDiamond => Ok(nv_diamond()),
            PresetName::RbVapour => Ok(rb_vapour()),
            PresetName::Custom => Err(Error::config("preset", "custom material needs a `custom` block")),
        }
    }

    pub fn custom(m: &CustomMaterial) -> Result<Self> {
        Ok(Self {
            name: PresetName::Custom,
            atom: AtomParams::new(m.gamma_sp, m.gamma_deph)?,
            medium: MediumParams::equal_dipole(m.density, m.dipole, m.eps_r, m.bulk_index, m.wavelength)?,
            wavelength: m.wavelength,
            provenance: vec![Provenance { field: "*", note: "user supplied" }],
        })
    }
}

/// Negatively charged NV centre in diamond at the 638 nm zero-phonon line.
pub fn nv_diamond() -> MaterialPreset {
    let wavelength = 638e-9;
    MaterialPreset {
        name: PresetName::NvDiamond,
        atom: AtomParams::new(PI * 86e6, 2.0 * PI * 1e6).expect("valid NV rates"),
        medium: MediumParams::equal_dipole(1e20, 1e-30, 10.0, 10f64.sqrt(), wavelength).expect("valid NV medium"),
        wavelength,
        provenance: vec![
            Provenance { field: "gamma_sp", note: "radiative lifetime 11.6 ns, Γ/π = 86 MHz" },
            Provenance { field: "gamma_deph", note: "1 μs dephasing lifetime read as γ/2π = 1 MHz" },
            Provenance { field: "density", note: "one centre per 250 nm in a 200 × 200 nm² guide, 𝒩 ≤ 10²⁰ m⁻³" },
            Provenance { field: "dipole", note: "d ~ 10⁻³⁰ C·m on both transitions" },
            Provenance { field: "eps_r", note: "ε_r = 10" },
            Provenance { field: "bulk_index", note: "n = √ε_r" },
            Provenance { field: "wavelength", note: "zero-phonon line λ = 638 nm" },
        ],
    }
}

/// ⁸⁷Rb D1 line Zeeman sublevels in a vapour cell.
pub fn rb_vapour() -> MaterialPreset {
    let wavelength = 795e-9;
    MaterialPreset {
        name: PresetName::RbVapour,
        atom: AtomParams::new(PI * 37e6, 2.0 * PI * 117.0).expect("valid Rb rates"),
        medium: MediumParams::equal_dipole(1e21, 1e-29, 1.0, 1.0, wavelength).expect("valid Rb medium"),
        wavelength,
        provenance: vec![
            Provenance { field: "gamma_sp", note: "Γ/π = 37 MHz into the ground states" },
            Provenance { field: "gamma_deph", note: "γ/2π = 117 Hz ground-state dephasing" },
            Provenance { field: "density", note: "𝒩 = 10²¹ m⁻³" },
            Provenance { field: "dipole", note: "d ~ 10⁻²⁹ C·m" },
            Provenance { field: "eps_r", note: "dilute vapour, ε_r = 1" },
            Provenance { field: "bulk_index", note: "dilute vapour, n = 1" },
            Provenance { field: "wavelength", note: "D1 line λ = 795 nm" },
        ],
    }
}

/// α₀l needed in the copropagating arrangement for a given I_p/I_sat.
pub fn copropagating_optical_depth(pump_ratio: f64) -> Option<f64> {
    const TABLE: [(f64, f64); 4] = [(0.01, 5.0), (0.1, 7.0), (1.0, 12.0), (10.0, 70.0)];
    TABLE
        .iter()
        .find(|(r, _)| (r / pump_ratio - 1.0).abs() < 1e-9)
        .map(|&(_, d)| d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport {
    pub preset: PresetName,
    pub arrangement: Arrangement,
    pub zeta: f64,
    pub xi: f64,
    pub alpha0: f64,
    pub i_sat: f64,
    pub i_sat2: f64,
    pub i_coh: f64,
    /// Target small-signal transmission (uniform pump).
    pub t0: Option<f64>,
    /// I_p/I_sat the copropagating design is sized for.
    pub pump_ratio: Option<f64>,
    /// α₀l of the design.
    pub optical_depth: f64,
    /// Required medium length [m].
    pub length: f64,
    pub provenance: Vec<Provenance>,
}

/// Sizes a filter for the preset: uniform pump uses l = −ln(T₀)/α₀, the
/// copropagating arrangement the optical depth tabulated for `pump_ratio`.
pub fn design_report(
    preset: &MaterialPreset,
    t0: f64,
    arrangement: Arrangement,
    pump_ratio: f64,
) -> Result<DesignReport> {
    let zeta = compute_zeta(&preset.medium)?;
    let xi = compute_xi(&preset.medium)?;
    let a0 = alpha0(&preset.atom, xi)?;
    let (g, gt) = (preset.atom.gamma_sp(), preset.atom.gamma_total());
    let (optical_depth, t0_out, ratio_out) = match arrangement {
        Arrangement::UniformPump => {
            if !(t0 > 0.0 && t0 < 1.0) {
                return Err(Error::config("t0", "must lie in (0, 1)"));
            }
            (-t0.ln(), Some(t0), None)
        }
        Arrangement::Copropagating => {
            let depth = copropagating_optical_depth(pump_ratio).ok_or_else(|| {
                Error::config("pump_ratio", "copropagating designs exist for I_p/I_sat ∈ {0.01, 0.1, 1, 10}")
            })?;
            (depth, None, Some(pump_ratio))
        }
    };
    Ok(DesignReport {
        preset: preset.name,
        arrangement,
        zeta,
        xi,
        alpha0: a0,
        i_sat: zeta * g * gt / 12.0,
        i_sat2: zeta * g * g / 8.0,
        i_coh: zeta * preset.atom.gamma_deph() * gt,
        t0: t0_out,
        pump_ratio: ratio_out,
        optical_depth,
        length: optical_depth / a0,
        provenance: preset.provenance.clone(),
    })
}
