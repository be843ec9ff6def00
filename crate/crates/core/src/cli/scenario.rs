//! Scenario configs and their execution into output artifacts.

use serde::{Deserialize, Serialize};

use super::output::{csv_artifact, csv_table, json_artifact, Artifact};
use super::presets::{copropagating_optical_depth, design_report, CustomMaterial, MaterialPreset, PresetName};
use crate::analytic::AbsorberModel;
use crate::error::{Error, Result};
use crate::maxwell_bloch::{
    run_filtration, AmplitudeConvention, BandRatio, MbGrid, NoisySignalSpec, ThreeLevelResponse,
};
use crate::params::{alpha0, compute_xi, AtomParams, DriveParams, MediumParams};
use crate::propagation::{
    classify_decay_regime, integrate, integrate_sparse, solve_transmittance, transmittance_two_state,
    Arrangement, DecayRegime, OdeTolerances, PropagationConfig, PropagationProfile, TransferLaw,
};
use crate::steady_state::{absorption_spectrum, Levels};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// An evenly spaced sweep, linear or logarithmic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub log: bool,
}

impl Sweep {
    pub fn linear(start: f64, stop: f64, points: usize) -> Self {
        Self { start, stop, points, log: false }
    }

    pub fn log(start: f64, stop: f64, points: usize) -> Self {
        Self { start, stop, points, log: true }
    }

    fn validate(&self, field: &str) -> Result<()> {
        if self.points < 2 {
            return Err(Error::config(field, "needs at least 2 points"));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::config(field, "bounds must be finite"));
        }
        if self.log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::config(field, "log sweep bounds must be > 0"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.log {
            crate::fit::logspace(self.start, self.stop, self.points)
        } else {
            crate::fit::linspace(self.start, self.stop, self.points)
        }
    }
}

/// One parameter block per command, tagged by `"command"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Scenario {
    Spectrum(SpectrumScenario),
    BleachCurve(BleachCurveScenario),
    Propagate(PropagateScenario),
    Transmittance(TransmittanceScenario),
    MbFilter(MbFilterScenario),
    Design(DesignScenario),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Spectrum,
    BleachCurve,
    Propagate,
    Transmittance,
    MbFilter,
    Design,
}

impl Command {
    pub fn tag(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::BleachCurve => "bleach_curve",
            Command::Propagate => "propagate",
            Command::Transmittance => "transmittance",
            Command::MbFilter => "mb_filter",
            Command::Design => "design",
        }
    }
}

impl Scenario {
    pub fn command(&self) -> Command {
        match self {
            Scenario::Spectrum(_) => Command::Spectrum,
            Scenario::BleachCurve(_) => Command::BleachCurve,
            Scenario::Propagate(_) => Command::Propagate,
            Scenario::Transmittance(_) => Command::Transmittance,
            Scenario::MbFilter(_) => Command::MbFilter,
            Scenario::Design(_) => Command::Design,
        }
    }

    /// The figure-reproducing defaults for a command.
    pub fn default_for(command: Command) -> Self {
        match command {
            Command::Spectrum => Scenario::Spectrum(SpectrumScenario::default()),
            Command::BleachCurve => Scenario::BleachCurve(BleachCurveScenario::default()),
            Command::Propagate => Scenario::Propagate(PropagateScenario::default()),
            Command::Transmittance => Scenario::Transmittance(TransmittanceScenario::default()),
            Command::MbFilter => Scenario::MbFilter(MbFilterScenario::default()),
            Command::Design => Scenario::Design(DesignScenario::default()),
        }
    }

    /// Checks every field without running any solver.
    pub fn validate(&self) -> Result<()> {
        match self {
            Scenario::Spectrum(s) => s.validate(),
            Scenario::BleachCurve(s) => s.validate(),
            Scenario::Propagate(s) => s.validate(),
            Scenario::Transmittance(s) => s.validate(),
            Scenario::MbFilter(s) => s.validate(),
            Scenario::Design(s) => s.validate(),
        }
    }

    /// Runs the scenario; nothing is written.
    pub fn execute(&self, hash: &str, format: OutputFormat) -> Result<Vec<Artifact>> {
        self.validate()?;
        match self {
            Scenario::Spectrum(s) => s.execute(hash, format),
            Scenario::BleachCurve(s) => s.execute(hash, format),
            Scenario::Propagate(s) => s.execute(hash, format),
            Scenario::Transmittance(s) => s.execute(hash, format),
            Scenario::MbFilter(s) => s.execute(hash, format),
            Scenario::Design(s) => s.execute(hash, format),
        }
    }
}

fn check_labels<'a>(labels: impl Iterator<Item = &'a str>, field: &str) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    let mut any = false;
    for l in labels {
        any = true;
        if l.is_empty() {
            return Err(Error::config(field, "labels must be non-empty"));
        }
        if !seen.insert(l) {
            return Err(Error::config(field, format!("duplicate label {l:?}")));
        }
    }
    if !any {
        return Err(Error::config(field, "needs at least one entry"));
    }
    Ok(())
}

fn check_field(field: &str, v: f64, ok: bool, what: &str) -> Result<()> {
    if v.is_finite() && ok {
        Ok(())
    } else {
        Err(Error::config(field, format!("{what}, got {v}")))
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    check_field(field, v, v > 0.0, "must be finite and > 0")
}

fn nonneg(field: &str, v: f64) -> Result<()> {
    check_field(field, v, v >= 0.0, "must be finite and >= 0")
}

/// Turns domain errors raised while building parameters into field errors.
fn as_config<T>(field: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config { .. } => e,
        other => Error::config(field, other.to_string()),
    })
}

// ---------------------------------------------------------------- spectrum

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSeries {
    pub label: String,
    pub gamma_sp: f64,
    pub gamma_deph: f64,
    pub omega_s: f64,
    pub omega_p: f64,
    #[serde(default)]
    pub delta_one: f64,
}

fn default_levels() -> Levels {
    Levels::Three
}

fn nv_medium() -> MediumParams {
    super::presets::nv_diamond().medium
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumScenario {
    #[serde(default = "default_levels")]
    pub levels: Levels,
    #[serde(default = "nv_medium")]
    pub medium: MediumParams,
    /// Two-photon detuning δ [rad/s].
    pub delta: Sweep,
    pub series: Vec<SpectrumSeries>,
}

impl Default for SpectrumScenario {
    /// Ω_p = Ω_s = Γ with γ/Γ ∈ {0, 0.5, 1, 5}, rates in units of Γ.
    fn default() -> Self {
        let series = [0.0, 0.5, 1.0, 5.0]
            .iter()
            .map(|&g| SpectrumSeries {
                label: format!("gamma={g}"),
                gamma_sp: 1.0,
                gamma_deph: g,
                omega_s: 1.0,
                omega_p: 1.0,
                delta_one: 0.0,
            })
            .collect();
        Self {
            levels: Levels::Three,
            medium: nv_medium(),
            delta: Sweep::linear(-4.0, 4.0, 1601),
            series,
        }
    }
}

#[derive(Debug, Serialize)]
struct SpectrumRow<'a> {
    label: &'a str,
    delta: f64,
    alpha: f64,
    alpha_over_alpha0: f64,
    chi_re: f64,
    chi_im: f64,
    refr_index: f64,
}

impl SpectrumScenario {
    fn validate(&self) -> Result<()> {
        self.delta.validate("delta")?;
        as_config("medium", self.medium.validate())?;
        check_labels(self.series.iter().map(|s| s.label.as_str()), "series")?;
        for s in &self.series {
            positive("series.gamma_sp", s.gamma_sp)?;
            nonneg("series.gamma_deph", s.gamma_deph)?;
            nonneg("series.omega_s", s.omega_s)?;
            nonneg("series.omega_p", s.omega_p)?;
            check_field("series.delta_one", s.delta_one, true, "must be finite")?;
        }
        Ok(())
    }

    fn execute(&self, hash: &str, format: OutputFormat) -> Result<Vec<Artifact>> {
        let xi = compute_xi(&self.medium)?;
        let deltas = self.delta.values();
        let mut curves = Vec::with_capacity(self.series.len());
        for s in &self.series {
            let atom = AtomParams::new(s.gamma_sp, s.gamma_deph)?;
            let drive = DriveParams::new(s.omega_s, s.omega_p, s.delta_one, 0.0)?;
            let a0 = match self.levels {
                Levels::Two => 2.0 * xi / s.gamma_sp,
                Levels::Three => alpha0(&atom, xi)?,
            };
            let points = absorption_spectrum(&atom, &drive, &self.medium, self.levels, &deltas)?;
            curves.push((s.label.as_str(), a0, points));
        }
        let rows: Vec<SpectrumRow> = curves
            .iter()
            .flat_map(|(label, a0, pts)| {
                pts.iter().map(move |p| SpectrumRow {
                    label,
                    delta: p.delta,
                    alpha: p.response.alpha,
                    alpha_over_alpha0: p.response.alpha / a0,
                    chi_re: p.response.chi.re,
                    chi_im: p.response.chi.im,
                    refr_index: p.response.refr_index,
                })
            })
            .collect();
        match format {
            OutputFormat::Csv => Ok(vec![csv_artifact("spectrum.csv", hash, &rows)?]),
            OutputFormat::Json => Ok(vec![json_artifact("spectrum.json", hash, &rows)?]),
        }
    }
}

// ------------------------------------------------------------ bleach curve

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BleachSeries {
    pub label: String,
    pub i_sat: f64,
    pub i_coh: f64,
    pub i_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoStateReference {
    pub label: String,
    pub i_sat2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BleachCurveScenario {
    /// Signal intensity I.
    pub intensity: Sweep,
    pub series: Vec<BleachSeries>,
    #[serde(default)]
    pub two_state: Option<TwoStateReference>,
}

impl Default for BleachCurveScenario {
    /// Intensities in units of I_sat: the dashed pair I_coh = 50, I_p = 0.1
    /// and the solid pair I_coh = I_p = 1.
    fn default() -> Self {
        Self {
            intensity: Sweep::log(1e-3, 1e4, 351),
            series: vec![
                BleachSeries { label: "dashed".into(), i_sat: 1.0, i_coh: 50.0, i_p: 0.1 },
                BleachSeries { label: "solid".into(), i_sat: 1.0, i_coh: 1.0, i_p: 1.0 },
            ],
            two_state: Some(TwoStateReference { label: "two_state".into(), i_sat2: 1.0 }),
        }
    }
}

#[derive(Debug, Serialize)]
struct BleachRow<'a> {
    label: &'a str,
    #[serde(rename = "I")]
    i: f64,
    alpha_over_alpha0: f64,
}

impl BleachCurveScenario {
    fn validate(&self) -> Result<()> {
        self.intensity.validate("intensity")?;
        if self.intensity.start < 0.0 || self.intensity.stop < 0.0 {
            return Err(Error::config("intensity", "intensities must be >= 0"));
        }
        let labels = self
            .series
            .iter()
            .map(|s| s.label.as_str())
            .chain(self.two_state.iter().map(|t| t.label.as_str()));
        check_labels(labels, "series")?;
        for s in &self.series {
            positive("series.i_sat", s.i_sat)?;
            nonneg("series.i_coh", s.i_coh)?;
            positive("series.i_p", s.i_p)?;
        }
        if let Some(t) = &self.two_state {
            positive("two_state.i_sat2", t.i_sat2)?;
        }
        Ok(())
    }

    fn execute(&self, hash: &str, format: OutputFormat) -> Result<Vec<Artifact>> {
        let xs = self.intensity.values();
        let mut rows = Vec::new();
        for s in &self.series {
            let model = AbsorberModel::new(1.0, s.i_sat, s.i_coh)?;
            for &i in &xs {
                rows.push(BleachRow { label: &s.label, i, alpha_over_alpha0: model.alpha_signal(i, s.i_p)? });
            }
        }
        if let Some(t) = &self.two_state {
            for &i in &xs {
                rows.push(BleachRow { label: &t.label, i, alpha_over_alpha0: 1.0 / (1.0 + i / t.i_sat2) });
            }
        }
        match format {
            OutputFormat::Csv => Ok(vec![csv_artifact("bleach_curve.csv", hash, &rows)?]),
            OutputFormat::Json => Ok(vec![json_artifact("bleach_curve.json", hash, &rows)?]),
        }
    }
}

// --------------------------------------------------------------- propagate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationRun {
    pub label: String,
    pub i0: f64,
    pub ip0: f64,
}

fn default_alpha0() -> f64 {
    1.0
}

fn default_profile_points() -> usize {
    401
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagateScenario {
    pub arrangement: Arrangement,
    #[serde(default = "default_alpha0")]
    pub alpha0: f64,
    pub i_sat: f64,
    pub i_coh: f64,
    /// Medium length l.
    pub length: f64,
    /// Evenly spaced output samples per profile.
    #[serde(default = "default_profile_points")]
    pub points: usize,
    #[serde(default)]
    pub tolerances: OdeTolerances,
    pub runs: Vec<PropagationRun>,
}

impl Default for PropagateScenario {
    /// Intensities in units of I_sat = I_coh, lengths in units of 1/α₀.
    fn default() -> Self {
        let run = |label: &str, i0: f64, ip0: f64| PropagationRun { label: label.into(), i0, ip0 };
        Self {
            arrangement: Arrangement::UniformPump,
            alpha0: 1.0,
            i_sat: 1.0,
            i_coh: 1.0,
            length: 30.0,
            points: default_profile_points(),
            tolerances: OdeTolerances::default(),
            runs: vec![
                run("dotted", 8.0, 0.5),
                run("bold", 10.0, 1.0),
                run("solid", 8.0, 4.0),
                run("dash_dot", 2.0, 1.0),
                run("dashed", 0.2, 1.0),
            ],
        }
    }
}

#[derive(Debug, Serialize)]
struct ProfileRow<'a> {
    label: &'a str,
    z: f64,
    #[serde(rename = "I")]
    i: f64,
    #[serde(rename = "I_p")]
    ip: f64,
    alpha_s: f64,
    alpha_p: f64,
}

#[derive(Debug, Serialize)]
struct RunSummary<'a> {
    label: &'a str,
    i0: f64,
    ip0: f64,
    transmittance: f64,
    pump_transmittance: f64,
    t0: f64,
    entry_regime: DecayRegime,
}

#[derive(Debug, Serialize)]
struct PropagateJson<'a> {
    summary: Vec<RunSummary<'a>>,
    profiles: Vec<ProfileRow<'a>>,
}

fn resample<'a>(
    label: &'a str,
    profile: &PropagationProfile,
    model: &AbsorberModel,
    length: f64,
    points: usize,
) -> Vec<ProfileRow<'a>> {
    crate::fit::linspace(0.0, length, points)
        .into_iter()
        .map(|z| {
            let (i, ip) = (profile.intensity_at(z), profile.pump_at(z));
            ProfileRow {
                label,
                z,
                i,
                ip,
                alpha_s: model.alpha_signal_limit(i, ip),
                alpha_p: model.alpha_signal_limit(ip, i),
            }
        })
        .collect()
}

impl PropagateScenario {
    fn validate(&self) -> Result<()> {
        nonneg("alpha0", self.alpha0)?;
        positive("i_sat", self.i_sat)?;
        nonneg("i_coh", self.i_coh)?;
        positive("length", self.length)?;
        if self.points < 2 {
            return Err(Error::config("points", "needs at least 2 points"));
        }
        check_labels(self.runs.iter().map(|r| r.label.as_str()), "runs")?;
        for r in &self.runs {
            nonneg("runs.i0", r.i0)?;
            positive("runs.ip0", r.ip0)?;
            PropagationConfig::new(self.length, r.i0, r.ip0, self.arrangement)?.with_tolerances(self.tolerances)?;
        }
        Ok(())
    }

    fn execute(&self, hash: &str, format: OutputFormat) -> Result<Vec<Artifact>> {
        let model = AbsorberModel::new(self.alpha0, self.i_sat, self.i_coh)?;
        let mut summary = Vec::new();
        let mut profiles = Vec::new();
        for r in &self.runs {
            let cfg = PropagationConfig::new(self.length, r.i0, r.ip0, self.arrangement)?
                .with_tolerances(self.tolerances)?;
            let p = integrate(&cfg, &model)?;
            profiles.extend(resample(&r.label, &p, &model, self.length, self.points));
            summary.push(RunSummary {
                label: &r.label,
                i0: r.i0,
                ip0: r.ip0,
                transmittance: p.transmittance,
                pump_transmittance: p.pump_transmittance,
                t0: p.t0,
                entry_regime: classify_decay_regime(r.i0, r.ip0, &model),
            });
        }
        match format {
            OutputFormat::Csv => Ok(vec![
                csv_artifact("profiles.csv", hash, &profiles)?,
                json_artifact("summary.json", hash, &summary)?,
            ]),
            OutputFormat::Json => Ok(vec![json_artifact("propagate.json", hash, &PropagateJson { summary, profiles })?]),
        }
    }
}

// ----------------------------------------------------------- transmittance

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmittanceCurve {
    pub label: String,
    pub ip: f64,
    /// α₀l; defaults to −ln T₀ (uniform) or the tabulated copropagating depth.
    #[serde(default)]
    pub alpha0_l: Option<f64>,
}

fn default_t0() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmittanceScenario {
    pub arrangement: Arrangement,
    pub i_sat: f64,
    pub i_coh: f64,
    #[serde(default = "default_t0")]
    pub t0: f64,
    pub i0: Sweep,
    pub curves: Vec<TransmittanceCurve>,
    #[serde(default)]
    pub two_state: Option<TwoStateReference>,
    #[serde(default)]
    pub tolerances: OdeTolerances,
}

impl Default for TransmittanceScenario {
    /// T₀ = 0.01, I_p/I_sat ∈ {0.01, 0.1, 1, 10}, I_coh = I_sat. The
    /// two-state scale follows from I_coh = I_sat, i.e. γ = Γ/12.
    fn default() -> Self {
        Self {
            arrangement: Arrangement::UniformPump,
            i_sat: 1.0,
            i_coh: 1.0,
            t0: 0.01,
            i0: Sweep::log(1e-4, 1e4, 161),
            curves: [0.01, 0.1, 1.0, 10.0]
                .iter()
                .map(|&ip| TransmittanceCurve { label: format!("ip={ip}"), ip, alpha0_l: None })
                .collect(),
            two_state: Some(TwoStateReference { label: "two_state".into(), i_sat2: 0.72 }),
            tolerances: OdeTolerances::default(),
        }
    }
}

#[derive(Debug, Serialize)]
struct UniformRow<'a> {
    label: &'a str,
    #[serde(rename = "I0")]
    i0: f64,
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "T_printed")]
    printed: f64,
    #[serde(rename = "T_rederived")]
    rederived: f64,
}

#[derive(Debug, Serialize)]
struct TwoStateRow<'a> {
    label: &'a str,
    #[serde(rename = "I0")]
    i0: f64,
    #[serde(rename = "T")]
    t: f64,
}

#[derive(Debug, Serialize)]
struct CopropRow<'a> {
    label: &'a str,
    #[serde(rename = "I0")]
    i0: f64,
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "T_pump")]
    t_pump: f64,
}

impl TransmittanceScenario {
    fn depth(&self, c: &TransmittanceCurve) -> Result<f64> {
        if let Some(d) = c.alpha0_l {
            return Ok(d);
        }
        match self.arrangement {
            Arrangement::UniformPump => Ok(-self.t0.ln()),
            Arrangement::Copropagating => copropagating_optical_depth(c.ip / self.i_sat).ok_or_else(|| {
                Error::config("curves.alpha0_l", format!("no tabulated depth for I_p/I_sat = {}", c.ip / self.i_sat))
            }),
        }
    }

    fn validate(&self) -> Result<()> {
        positive("i_sat", self.i_sat)?;
        nonneg("i_coh", self.i_coh)?;
        check_field("t0", self.t0, self.t0 > 0.0 && self.t0 < 1.0, "must lie in (0, 1)")?;
        self.i0.validate("i0")?;
        if self.i0.start < 0.0 || self.i0.stop < 0.0 {
            return Err(Error::config("i0", "intensities must be >= 0"));
        }
        let labels = self
            .curves
            .iter()
            .map(|c| c.label.as_str())
            .chain(self.two_state.iter().map(|t| t.label.as_str()));
        check_labels(labels, "curves")?;
        for c in &self.curves {
            positive("curves.ip", c.ip)?;
            positive("curves.alpha0_l", self.depth(c)?)?;
        }
        if let Some(t) = &self.two_state {
            positive("two_state.i_sat2", t.i_sat2)?;
        }
        Ok(())
    }

    fn execute(&self, hash: &str, format: OutputFormat) -> Result<Vec<Artifact>> {
        let model = AbsorberModel::new(1.0, self.i_sat, self.i_coh)?;
        let i0s = self.i0.values();
        let mut uniform = Vec::new();
        let mut coprop = Vec::new();
        for c in &self.curves {
            let depth = self.depth(c)?;
            let t0 = (-depth).exp();
            for &i0 in &i0s {
                let cfg = PropagationConfig::new(depth, i0, c.ip, self.arrangement)?.with_tolerances(self.tolerances)?;
                let p = integrate_sparse(&cfg, &model)?;
                match self.arrangement {
                    Arrangement::UniformPump => {
                        let (printed, rederived) = if i0 == 0.0 {
                            (t0, p.transmittance)
                        } else {
                            (
                                solve_transmittance(TransferLaw::Printed, t0, i0, c.ip, &model)?,
                                solve_transmittance(TransferLaw::Rederived, t0, i0, c.ip, &model)?,
                            )
                        };
                        uniform.push(UniformRow { label: &c.label, i0, t: p.transmittance, printed, rederived });
                    }
                    Arrangement::Copropagating => coprop.push(CopropRow {
                        label: &c.label,
                        i0,
                        t: p.transmittance,
                        t_pump: p.pump_transmittance,
                    }),
                }
            }
        }
        let mut reference = Vec::new();
        if let Some(ts) = &self.two_state {
            for &i0 in &i0s {
                let t = transmittance_two_state(self.t0, i0, ts.i_sat2)?;
                reference.push(TwoStateRow { label: &ts.label, i0, t });
            }
        }
        match format {
            OutputFormat::Csv => {
                let mut out = vec![match self.arrangement {
                    Arrangement::UniformPump => csv_artifact("transmittance.csv", hash, &uniform)?,
                    Arrangement::Copropagating => csv_artifact("transmittance.csv", hash, &coprop)?,
                }];
                if !reference.is_empty() {
                    out.push(csv_artifact("two_state.csv", hash, &reference)?);
                }
                Ok(out)
            }
            OutputFormat::Json => {
                let data = match self.arrangement {
                    Arrangement::UniformPump => serde_json::json!({ "curves": uniform, "two_state": reference }),
                    Arrangement::Copropagating => serde_json::json!({ "curves": coprop, "two_state": reference }),
                };
                Ok(vec![json_artifact("transmittance.json", hash, &data)?])
            }
        }
    }
}

// ---------------------------------------------------------------- mb filter

fn default_bulk_index() -> f64 {
    1.0
}

fn default_snapshots() -> usize {
    11
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MbFilterScenario {
    pub gamma_sp: f64,
    pub gamma_deph: f64,
    pub omega_p: f64,
    /// ξ [m⁻¹s⁻¹].
    pub xi: f64,
    #[serde(default = "default_bulk_index")]
    pub bulk_index: f64,
    pub grid: MbGrid,
    pub signal: NoisySignalSpec,
    #[serde(default)]
    pub convention: AmplitudeConvention,
    /// Stored columns Ω(z, ·), including input and output.
    #[serde(default = "default_snapshots")]
    pub snapshots: usize,
}

impl Default for MbFilterScenario {
    /// Γ = γ = Ω_p = 10⁷ s⁻¹, ξ = 10¹¹ m⁻¹s⁻¹. Grid, length and pulse shape
    /// are chosen for grid convergence.
    fn default() -> Self {
        let mut signal = NoisySignalSpec::new(2e7, 20e-6, 3e-6, 42);
        signal.noise_bins = 128;
        Self {
            gamma_sp: 1e7,
            gamma_deph: 1e7,
            omega_p: 1e7,
            xi: 1e11,
            bulk_index: 1.0,
            grid: MbGrid { n_time: 4096, n_space: 200, duration: 40e-6, length: 1e-3 },
            signal,
            convention: AmplitudeConvention::Quarter,
            snapshots: default_snapshots(),
        }
    }
}

#[derive(Debug, Serialize)]
struct MbSummary {
    energy_in: f64,
    energy_out: f64,
    main_lobe: BandRatio,
    top_decade: BandRatio,
    filters_noise: bool,
    max_iterations: usize,
    mean_iterations: f64,
}

impl MbFilterScenario {
    fn response(&self) -> Result<ThreeLevelResponse> {
        let atom = as_config("gamma", AtomParams::new(self.gamma_sp, self.gamma_deph))?;
        as_config("response", ThreeLevelResponse::new(atom, self.omega_p, self.xi, self.bulk_index))
    }

    fn validate(&self) -> Result<()> {
        positive("gamma_sp", self.gamma_sp)?;
        nonneg("gamma_deph", self.gamma_deph)?;
        positive("omega_p", self.omega_p)?;
        nonneg("xi", self.xi)?;
        positive("bulk_index", self.bulk_index)?;
        self.grid.validate()?;
        self.signal.validate(&self.grid)?;
        if self.snapshots < 2 {
            return Err(Error::config("snapshots", "needs at least 2"));
        }
        self.response()?;
        Ok(())
    }

    fn execute(&self, hash: &str, format: OutputFormat) -> Result<Vec<Artifact>> {
        let response = self.response()?;
        let rep = run_filtration(&self.signal, &self.grid, &response, self.convention, self.snapshots)?;
        let summary = MbSummary {
            energy_in: rep.energy_in,
            energy_out: rep.energy_out,
            main_lobe: rep.main_lobe,
            top_decade: rep.top_decade,
            filters_noise: rep.filters_noise(),
            max_iterations: rep.propagated.max_iterations,
            mean_iterations: rep.propagated.mean_iterations,
        };
        match format {
            OutputFormat::Csv => {
                let snaps = &rep.propagated;
                let mut columns = vec!["t".to_string()];
                columns.extend(snaps.snapshot_z.iter().map(|z| format!("z={z}")));
                let field: Vec<Vec<f64>> = (0..self.grid.n_time)
                    .map(|n| {
                        let mut row = vec![n as f64 * rep.dt];
                        row.extend(snaps.snapshots.iter().map(|c| c[n]));
                        row
                    })
                    .collect();
                let psd: Vec<Vec<f64>> = (0..rep.input_psd.freq.len())
                    .map(|k| vec![rep.input_psd.freq[k], rep.input_psd.power[k], rep.output_psd.power[k]])
                    .collect();
                let psd_cols = ["f", "psd_in", "psd_out"].map(String::from);
                Ok(vec![
                    csv_table("field.csv", hash, &columns, &field)?,
                    csv_table("psd.csv", hash, &psd_cols, &psd)?,
                    json_artifact("summary.json", hash, &summary)?,
                ])
            }
            OutputFormat::Json => {
                let data = serde_json::json!({ "summary": summary, "report": rep });
                Ok(vec![json_artifact("mb_filter.json", hash, &data)?])
            }
        }
    }
}

// ------------------------------------------------------------------ design

fn default_pump_ratio() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignScenario {
    pub preset: PresetName,
    #[serde(default)]
    pub custom: Option<CustomMaterial>,
    #[serde(default = "default_t0")]
    pub t0: f64,
    pub arrangement: Arrangement,
    /// I_p/I_sat for copropagating designs.
    #[serde(default = "default_pump_ratio")]
    pub pump_ratio: f64,
}

impl Default for DesignScenario {
    fn default() -> Self {
        Self {
            preset: PresetName::NvDiamond,
            custom: None,
            t0: 0.01,
            arrangement: Arrangement::UniformPump,
            pump_ratio: default_pump_ratio(),
        }
    }
}

#[derive(Debug, Serialize)]
struct QuantityRow {
    quantity: &'static str,
    value: f64,
    unit: &'static str,
}

impl DesignScenario {
    fn material(&self) -> Result<MaterialPreset> {
        match (self.preset, &self.custom) {
            (PresetName::Custom, Some(c)) => as_config("custom", MaterialPreset::custom(c)),
            (PresetName::Custom, None) => Err(Error::config("custom", "required when preset is custom")),
            (_, Some(_)) => Err(Error::config("custom", "only allowed when preset is custom")),
            (name, None) => MaterialPreset::get(name),
        }
    }

    fn validate(&self) -> Result<()> {
        self.material()?;
        check_field("t0", self.t0, self.t0 > 0.0 && self.t0 < 1.0, "must lie in (0, 1)")?;
        positive("pump_ratio", self.pump_ratio)?;
        if self.arrangement == Arrangement::Copropagating && copropagating_optical_depth(self.pump_ratio).is_none() {
            return Err(Error::config("pump_ratio", "copropagating designs exist for I_p/I_sat ∈ {0.01, 0.1, 1, 10}"));
        }
        Ok(())
    }

    fn execute(&self, hash: &str, format: OutputFormat) -> Result<Vec<Artifact>> {
        let r = design_report(&self.material()?, self.t0, self.arrangement, self.pump_ratio)?;
        match format {
            OutputFormat::Csv => {
                let q = |quantity, value, unit| QuantityRow { quantity, value, unit };
                let rows = vec![
                    q("zeta", r.zeta, "W m^-2 s^2"),
                    q("xi", r.xi, "m^-1 s^-1"),
                    q("alpha0", r.alpha0, "m^-1"),
                    q("i_sat", r.i_sat, "W m^-2"),
                    q("i_sat2", r.i_sat2, "W m^-2"),
                    q("i_coh", r.i_coh, "W m^-2"),
                    q("optical_depth", r.optical_depth, "1"),
                    q("length", r.length, "m"),
                ];
                Ok(vec![
                    csv_artifact("design.csv", hash, &rows)?,
                    csv_artifact("provenance.csv", hash, &r.provenance)?,
                ])
            }
            OutputFormat::Json => Ok(vec![json_artifact("design.json", hash, &r)?]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Command; 6] = [
        Command::Spectrum,
        Command::BleachCurve,
        Command::Propagate,
        Command::Transmittance,
        Command::MbFilter,
        Command::Design,
    ];

    #[test]
    fn defaults_validate_and_round_trip() {
        for c in ALL {
            let s = Scenario::default_for(c);
            s.validate().unwrap();
            let text = serde_json::to_string(&s).unwrap();
            assert!(text.contains(&format!("\"command\":\"{}\"", c.tag())));
            let back: Scenario = serde_json::from_str(&text).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = r#"{"command":"design","preset":"nv","arrangement":"uniform_pump","lenght":1}"#;
        assert!(serde_json::from_str::<Scenario>(bad).is_err());
    }

    #[test]
    fn log_sweep_endpoints() {
        let v = Sweep::log(1e-2, 1e2, 5).values();
        assert!((v[0] - 1e-2).abs() < 1e-15 && (v[4] - 1e2).abs() < 1e-12);
        assert!(Sweep::log(0.0, 1.0, 5).validate("x").is_err());
    }

    #[test]
    fn spectrum_has_four_series() {
        let s = SpectrumScenario { delta: Sweep::linear(-2.0, 2.0, 11), ..Default::default() };
        let arts = s.execute("00", OutputFormat::Csv).unwrap();
        let text = String::from_utf8(arts[0].bytes.clone()).unwrap();
        let labels: std::collections::BTreeSet<&str> =
            text.lines().skip(2).map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(labels.len(), 4);
    }

    #[test]
    fn custom_design_needs_block() {
        let mut d = DesignScenario { preset: PresetName::Custom, ..Default::default() };
        assert!(d.validate().is_err());
        d.custom = Some(CustomMaterial {
            gamma_sp: 1e8,
            gamma_deph: 1e6,
            density: 1e20,
            dipole: 1e-30,
            eps_r: 1.0,
            bulk_index: 1.0,
            wavelength: 700e-9,
        });
        d.validate().unwrap();
    }
}
