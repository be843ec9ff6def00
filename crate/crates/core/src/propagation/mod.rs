//! Beer–Lambert propagation through an optically thick medium.
//!
//! Intensities are integrated as ln I, so profiles stay positive and
//! monotone for any α ≥ 0. The absolute tolerance therefore bounds the
//! relative intensity error.

mod ode;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::analytic::AbsorberModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arrangement {
    UniformPump,
    Copropagating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeTolerances {
    pub rtol: f64,
    /// Absolute tolerance on ln I.
    pub atol: f64,
}

impl Default for OdeTolerances {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationConfig {
    /// Medium length l [m].
    pub length_l: f64,
    /// Input signal intensity I₀.
    pub i0: f64,
    /// Input (or uniform) pump intensity.
    pub ip0: f64,
    pub arrangement: Arrangement,
    #[serde(default)]
    pub tolerances: OdeTolerances,
}

impl PropagationConfig {
    pub fn new(length_l: f64, i0: f64, ip0: f64, arrangement: Arrangement) -> Result<Self> {
        let cfg = Self {
            length_l,
            i0,
            ip0,
            arrangement,
            tolerances: OdeTolerances::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tolerances(mut self, tolerances: OdeTolerances) -> Result<Self> {
        self.tolerances = tolerances;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_l > 0.0 && self.length_l.is_finite()) {
            return Err(Error::config("length_l", "must be finite and > 0"));
        }
        if !(self.i0 >= 0.0 && self.i0.is_finite()) {
            return Err(Error::config("i0", "must be finite and >= 0"));
        }
        if !(self.ip0 >= 0.0 && self.ip0.is_finite()) {
            return Err(Error::config("ip0", "must be finite and >= 0"));
        }
        let t = self.tolerances;
        if !(t.rtol > 0.0 && t.atol > 0.0) {
            return Err(Error::config("tolerances", "rtol and atol must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub z: f64,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "I_p")]
    pub ip: f64,
    pub alpha_s: f64,
    pub alpha_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropagationProfile {
    pub samples: Vec<ProfileSample>,
    /// I(l)/I₀.
    pub transmittance: f64,
    /// I_p(l)/I_p(0).
    pub pump_transmittance: f64,
    /// Small-signal transmission exp(−α₀l).
    pub t0: f64,
}

impl PropagationProfile {
    /// Signal intensity at z by linear interpolation between samples.
    pub fn intensity_at(&self, z: f64) -> f64 {
        self.interpolate(z, |s| s.i)
    }

    pub fn pump_at(&self, z: f64) -> f64 {
        self.interpolate(z, |s| s.ip)
    }

    fn interpolate(&self, z: f64, field: impl Fn(&ProfileSample) -> f64) -> f64 {
        let s = &self.samples;
        let k = s.partition_point(|p| p.z < z);
        if k == 0 {
            return field(&s[0]);
        }
        if k == s.len() {
            return field(&s[s.len() - 1]);
        }
        let (a, b) = (&s[k - 1], &s[k]);
        let w = (z - a.z) / (b.z - a.z);
        field(a) + w * (field(b) - field(a))
    }

    /// Writes `z,I,I_p,alpha_s,alpha_p` rows with a header line.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for s in &self.samples {
            w.serialize(s)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

fn ode_settings(cfg: &PropagationConfig, dense: bool) -> ode::Settings {
    ode::Settings {
        rtol: cfg.tolerances.rtol,
        atol: cfg.tolerances.atol,
        sample_rtol: if dense { cfg.tolerances.rtol } else { f64::INFINITY },
    }
}

/// Signal propagation under a pump of constant intensity I_p.
pub fn integrate_uniform(cfg: &PropagationConfig, model: &AbsorberModel) -> Result<PropagationProfile> {
    uniform(cfg, model, true)
}

fn uniform(cfg: &PropagationConfig, model: &AbsorberModel, dense: bool) -> Result<PropagationProfile> {
    cfg.validate()?;
    if cfg.arrangement != Arrangement::UniformPump {
        return Err(Error::config("arrangement", "integrate_uniform needs uniform_pump"));
    }
    if !(cfg.ip0 > 0.0) {
        return Err(Error::config("ip0", "three-state propagation needs a pump intensity > 0"));
    }
    let ip = cfg.ip0;
    let t0 = (-model.alpha0 * cfg.length_l).exp();
    let sample = |z: f64, i: f64| ProfileSample {
        z,
        i,
        ip,
        alpha_s: model.alpha_signal_limit(i, ip),
        alpha_p: model.alpha_signal_limit(ip, i),
    };
    if cfg.i0 == 0.0 {
        return Ok(PropagationProfile {
            samples: vec![sample(0.0, 0.0), sample(cfg.length_l, 0.0)],
            transmittance: (-model.alpha_signal_limit(0.0, ip) * cfg.length_l).exp(),
            pump_transmittance: 1.0,
            t0,
        });
    }
    let traj = ode::integrate(
        |_, u: &[f64; 1]| [-model.alpha_signal_limit(u[0].exp(), ip)],
        |u| [u[0].exp()],
        0.0,
        cfg.length_l,
        [cfg.i0.ln()],
        ode_settings(cfg, dense),
    )?;
    let mut samples: Vec<ProfileSample> = traj.t.iter().zip(&traj.y).map(|(&z, y)| sample(z, y[0])).collect();
    samples[0].i = cfg.i0;
    let transmittance = samples.last().map(|s| s.i).unwrap_or(cfg.i0) / cfg.i0;
    Ok(PropagationProfile {
        samples,
        transmittance,
        pump_transmittance: 1.0,
        t0,
    })
}

/// Signal and pump entering together and absorbed jointly.
///
/// Both fields are assumed to travel at the same group velocity.
pub fn integrate_copropagating(cfg: &PropagationConfig, model: &AbsorberModel) -> Result<PropagationProfile> {
    copropagating(cfg, model, true)
}

fn copropagating(cfg: &PropagationConfig, model: &AbsorberModel, dense: bool) -> Result<PropagationProfile> {
    cfg.validate()?;
    if cfg.arrangement != Arrangement::Copropagating {
        return Err(Error::config("arrangement", "integrate_copropagating needs copropagating"));
    }
    if !(cfg.ip0 > 0.0) {
        return Err(Error::config("ip0", "copropagating pump must be > 0"));
    }
    let t0 = (-model.alpha0 * cfg.length_l).exp();
    let sample = |z: f64, i: f64, ip: f64| ProfileSample {
        z,
        i,
        ip,
        alpha_s: model.alpha_signal_limit(i, ip),
        alpha_p: model.alpha_signal_limit(ip, i),
    };
    if cfg.i0 == 0.0 {
        // A pump alone ends up pumping everything into the signal ground
        // state and is not absorbed.
        return Ok(PropagationProfile {
            samples: vec![sample(0.0, 0.0, cfg.ip0), sample(cfg.length_l, 0.0, cfg.ip0)],
            transmittance: (-model.alpha_signal_limit(0.0, cfg.ip0) * cfg.length_l).exp(),
            pump_transmittance: 1.0,
            t0,
        });
    }
    let traj = ode::integrate(
        |_, u: &[f64; 2]| {
            let (i, ip) = (u[0].exp(), u[1].exp());
            [-model.alpha_signal_limit(i, ip), -model.alpha_signal_limit(ip, i)]
        },
        |u| [u[0].exp(), u[1].exp()],
        0.0,
        cfg.length_l,
        [cfg.i0.ln(), cfg.ip0.ln()],
        ode_settings(cfg, dense),
    )?;
    let mut samples: Vec<ProfileSample> =
        traj.t.iter().zip(&traj.y).map(|(&z, y)| sample(z, y[0], y[1])).collect();
    samples[0].i = cfg.i0;
    samples[0].ip = cfg.ip0;
    let last = *samples.last().expect("trajectory has samples");
    Ok(PropagationProfile {
        samples,
        transmittance: last.i / cfg.i0,
        pump_transmittance: last.ip / cfg.ip0,
        t0,
    })
}

/// Dispatches on `cfg.arrangement`.
pub fn integrate(cfg: &PropagationConfig, model: &AbsorberModel) -> Result<PropagationProfile> {
    match cfg.arrangement {
        Arrangement::UniformPump => integrate_uniform(cfg, model),
        Arrangement::Copropagating => integrate_copropagating(cfg, model),
    }
}

/// Like [`integrate`] but keeps only the accepted ODE steps, which is
/// enough when only the end-point transmittances are wanted.
pub fn integrate_sparse(cfg: &PropagationConfig, model: &AbsorberModel) -> Result<PropagationProfile> {
    match cfg.arrangement {
        Arrangement::UniformPump => uniform(cfg, model, false),
        Arrangement::Copropagating => copropagating(cfg, model, false),
    }
}

/// Which implicit transfer law to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferLaw {
    /// Quadratic term (I₀² − I²)/(I_pI_coh); the transmittance form also
    /// drops the (1 + I_p/I_coh) factor on the logarithm.
    Printed,
    /// Exact separation of variables: the quadratic term carries ½ and the
    /// logarithm keeps its (1 + I_p/I_coh) factor in both forms.
    Rederived,
}

fn linear_sum(model: &AbsorberModel, ip: f64) -> f64 {
    1.0 / ip + 1.0 / model.i_sat + 2.0 / model.i_coh
}

fn quad_factor(law: TransferLaw) -> f64 {
    match law {
        TransferLaw::Printed => 1.0,
        TransferLaw::Rederived => 0.5,
    }
}

fn check_law_domain(model: &AbsorberModel, ip: f64) -> Result<()> {
    if !(ip > 0.0) {
        return Err(Error::domain("transfer laws need I_p > 0"));
    }
    if !(model.i_coh > 0.0) {
        return Err(Error::domain("transfer laws need I_coh > 0"));
    }
    Ok(())
}

/// Right-hand side minus α₀z of the intensity transfer law at depth `z`.
///
/// Zero at the true I(z); decreasing in `i`.
pub fn transfer_law_residual(law: TransferLaw, z: f64, i: f64, i0: f64, ip: f64, model: &AbsorberModel) -> f64 {
    let ic = model.i_coh;
    (1.0 + ip / ic) * (i0 / i).ln()
        + quad_factor(law) * (i0 * i0 - i * i) / (ip * ic)
        + (i0 - i) * linear_sum(model, ip)
        - model.alpha0 * z
}

/// Bracketed bisection in ln I, then one Newton step.
fn solve_decreasing(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, rtol: f64) -> Result<f64> {
    let (f_lo, f_hi) = (f(lo), f(hi));
    if f_lo < 0.0 || f_hi > 0.0 {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    for _ in 0..400 {
        let mid = (lo * hi).sqrt();
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rtol * hi {
            break;
        }
    }
    let x = (lo * hi).sqrt();
    let d = df(x);
    let polished = if d != 0.0 && d.is_finite() { x - f(x) / d } else { x };
    Ok(if polished >= lo && polished <= hi { polished } else { x })
}

/// I(z) from the implicit transfer law.
pub fn solve_transfer_law(law: TransferLaw, z: f64, i0: f64, ip: f64, model: &AbsorberModel) -> Result<f64> {
    check_law_domain(model, ip)?;
    if !(i0 > 0.0) {
        return Err(Error::domain("transfer law needs I₀ > 0"));
    }
    let f = |i: f64| transfer_law_residual(law, z, i, i0, ip, model);
    let df = |i: f64| {
        -(1.0 + ip / model.i_coh) / i - 2.0 * quad_factor(law) * i / (ip * model.i_coh) - linear_sum(model, ip)
    };
    let mut lo = i0;
    while f(lo) <= 0.0 {
        lo *= 1e-3;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::NoBracket { lo, hi: i0, f_lo: f(lo), f_hi: f(i0) });
        }
    }
    solve_decreasing(lo, i0, f, df, 1e-14)
}

/// Transmittance-law residual for T at input I₀ and small-signal T₀.
///
/// Decreasing in T; root in (T₀, 1].
pub fn transmittance_residual(law: TransferLaw, t: f64, t0: f64, i0: f64, ip: f64, model: &AbsorberModel) -> f64 {
    let ic = model.i_coh;
    let log_factor = match law {
        TransferLaw::Printed => 1.0,
        TransferLaw::Rederived => 1.0 + ip / ic,
    };
    t0.ln() - log_factor * t.ln()
        + i0 * (1.0 - t) * linear_sum(model, ip)
        + quad_factor(law) * (1.0 - t * t) * i0 * i0 / (ip * ic)
}

/// T from the implicit transmittance law, bisection to 1e-10.
pub fn solve_transmittance(law: TransferLaw, t0: f64, i0: f64, ip: f64, model: &AbsorberModel) -> Result<f64> {
    if !(t0 > 0.0 && t0 < 1.0) {
        return Err(Error::domain("small-signal transmission must lie in (0, 1)"));
    }
    if !(i0 >= 0.0) {
        return Err(Error::domain("I₀ must be >= 0"));
    }
    if !(ip > 0.0) {
        return Err(Error::domain("transfer laws need I_p > 0"));
    }
    if model.i_coh == 0.0 {
        return Ok(1.0);
    }
    let f = |t: f64| transmittance_residual(law, t, t0, i0, ip, model);
    let log_factor = match law {
        TransferLaw::Printed => 1.0,
        TransferLaw::Rederived => 1.0 + ip / model.i_coh,
    };
    let df = |t: f64| {
        -log_factor / t - i0 * linear_sum(model, ip) - 2.0 * quad_factor(law) * t * i0 * i0 / (ip * model.i_coh)
    };
    let (mut lo, mut hi) = (t0, 1.0);
    let (f_lo, f_hi) = (f(lo), f(hi));
    if f_lo < 0.0 || f_hi > 0.0 {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let d = df(x);
    let polished = x - f(x) / d;
    Ok(if polished >= lo && polished <= hi { polished } else { x })
}

/// Two-state transmittance: root of ln(T₀/T) + (I₀/I_sat2)(1 − T) = 0.
pub fn transmittance_two_state(t0: f64, i0: f64, i_sat2: f64) -> Result<f64> {
    if !(t0 > 0.0 && t0 < 1.0) {
        return Err(Error::domain("small-signal transmission must lie in (0, 1)"));
    }
    if !(i_sat2 > 0.0) || !(i0 >= 0.0) {
        return Err(Error::domain("two-state transmittance needs I_sat2 > 0 and I₀ >= 0"));
    }
    let s = i0 / i_sat2;
    let f = |t: f64| (t0 / t).ln() + s * (1.0 - t);
    let (mut lo, mut hi) = (t0, 1.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Uniform-pump transmittance three ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmittanceComparison {
    pub t0: f64,
    pub printed: f64,
    pub rederived: f64,
    pub ode: f64,
}

pub fn transmittance_uniform(cfg: &PropagationConfig, model: &AbsorberModel) -> Result<TransmittanceComparison> {
    let profile = uniform(cfg, model, false)?;
    let t0 = profile.t0;
    let (printed, rederived) = if cfg.i0 == 0.0 {
        (t0, profile.transmittance)
    } else {
        (
            solve_transmittance(TransferLaw::Printed, t0, cfg.i0, cfg.ip0, model)?,
            solve_transmittance(TransferLaw::Rederived, t0, cfg.i0, cfg.ip0, model)?,
        )
    };
    Ok(TransmittanceComparison {
        t0,
        printed,
        rederived,
        ode: profile.transmittance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayRegime {
    /// I ≪ Ī = min(I_p, I_sat, I_coh).
    Exponential,
    /// Ī ≪ I below the quadratic-bleaching threshold.
    Linear,
    /// Above the quadratic-bleaching threshold.
    Sqrt,
    /// Within a factor 3 of a regime boundary.
    Transition,
}

/// Regime of the local decay at intensity `i`.
pub fn classify_decay_regime(i: f64, ip: f64, model: &AbsorberModel) -> DecayRegime {
    let i_bar = model.i_bar(ip);
    let thr = model.quadratic_threshold(ip).eq13;
    let near = |b: f64| i > b / 3.0 && i < 3.0 * b;
    if near(i_bar) || near(thr) {
        DecayRegime::Transition
    } else if i <= i_bar {
        DecayRegime::Exponential
    } else if i <= thr {
        DecayRegime::Linear
    } else {
        DecayRegime::Sqrt
    }
}

/// Leading-order closed-form profiles of the three decay regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticProfile {
    /// I₀e^(−α₀z).
    Exponential,
    /// I₀ − α₀Īz.
    Linear,
    /// I₀√(1 − α₀I_pI_coh z/I₀²).
    SqrtPrinted,
    /// I₀√(1 − 2α₀I_pI_coh z/I₀²), the exact solution of the quadratic-only law.
    SqrtRederived,
}

/// Evaluates an asymptotic profile; clamps at zero past its end point.
pub fn asymptotic_profile(kind: AsymptoticProfile, z: f64, i0: f64, ip: f64, model: &AbsorberModel) -> f64 {
    let a0 = model.alpha0;
    match kind {
        AsymptoticProfile::Exponential => i0 * (-a0 * z).exp(),
        AsymptoticProfile::Linear => (i0 - a0 * model.i_bar(ip) * z).max(0.0),
        AsymptoticProfile::SqrtPrinted => i0 * (1.0 - a0 * ip * model.i_coh * z / (i0 * i0)).max(0.0).sqrt(),
        AsymptoticProfile::SqrtRederived => {
            i0 * (1.0 - 2.0 * a0 * ip * model.i_coh * z / (i0 * i0)).max(0.0).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(a0: f64, is: f64, ic: f64) -> AbsorberModel {
        AbsorberModel::new(a0, is, ic).unwrap()
    }

    fn uniform(l: f64, i0: f64, ip: f64) -> PropagationConfig {
        PropagationConfig::new(l, i0, ip, Arrangement::UniformPump).unwrap()
    }

    fn copro(l: f64, i0: f64, ip: f64) -> PropagationConfig {
        PropagationConfig::new(l, i0, ip, Arrangement::Copropagating).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(PropagationConfig::new(0.0, 1.0, 1.0, Arrangement::UniformPump).is_err());
        assert!(PropagationConfig::new(1.0, -1.0, 1.0, Arrangement::UniformPump).is_err());
        let bad = OdeTolerances { rtol: 0.0, atol: 1e-9 };
        assert!(uniform(1.0, 1.0, 1.0).with_tolerances(bad).is_err());
        assert!(integrate_uniform(&copro(1.0, 1.0, 1.0), &model(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn weak_signal_decays_exponentially() {
        let m = model(2.0, 1.0, 1.0);
        let p = integrate_uniform(&uniform(2.0, 1e-9, 1e-4), &m).unwrap();
        for s in &p.samples {
            assert!((s.i / (1e-9 * (-2.0 * s.z).exp()) - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn profile_is_monotone_and_pump_constant() {
        let m = model(3.0, 1.0, 1.0);
        let p = integrate_uniform(&uniform(1.0, 5.0, 0.5), &m).unwrap();
        assert!(p.samples.windows(2).all(|w| w[1].i <= w[0].i && w[1].z > w[0].z));
        assert!(p.samples.iter().all(|s| s.ip == 0.5));
        assert_eq!(p.samples.last().unwrap().z, 1.0);
    }

    #[test]
    fn zero_input_gives_small_signal_transmission() {
        let m = model(3.0, 1.0, 1.0);
        let c = transmittance_uniform(&uniform(1.0, 0.0, 1e-9), &m).unwrap();
        assert!((c.ode / (-3f64).exp() - 1.0).abs() < 1e-8);
        assert_eq!(c.printed, c.t0);
    }

    #[test]
    fn transfer_residual_vanishes_at_entrance() {
        let m = model(1.0, 0.3, 2.0);
        for law in [TransferLaw::Printed, TransferLaw::Rederived] {
            assert_eq!(transfer_law_residual(law, 0.0, 1.7, 1.7, 0.4, &m), 0.0);
        }
    }

    #[test]
    fn rederived_law_matches_integration() {
        let m = model(4.0, 0.7, 1.3);
        let (i0, ip) = (3.0, 0.5);
        let p = integrate_uniform(&uniform(2.0, i0, ip), &m).unwrap();
        for s in p.samples.iter().step_by(p.samples.len() / 10 + 1) {
            let root = solve_transfer_law(TransferLaw::Rederived, s.z, i0, ip, &m).unwrap();
            assert!((root / s.i - 1.0).abs() < 1e-7, "z {} root {root} ode {}", s.z, s.i);
        }
        let t = solve_transmittance(TransferLaw::Rederived, p.t0, i0, ip, &m).unwrap();
        assert!((t / p.transmittance - 1.0).abs() < 1e-7);
    }

    #[test]
    fn transmittance_limits() {
        let m = model(1.0, 1.0, 1.0);
        let t0 = 0.01;
        // With I_p = I_coh the weak-signal absorption is α₀/2.
        let weak = solve_transmittance(TransferLaw::Rederived, t0, 1e-12, 1.0, &m).unwrap();
        assert!((weak - t0.sqrt()).abs() < 1e-9);
        assert!((solve_transmittance(TransferLaw::Printed, t0, 1e-12, 1.0, &m).unwrap() - t0).abs() < 1e-9);
        for law in [TransferLaw::Printed, TransferLaw::Rederived] {
            assert!(solve_transmittance(law, t0, 1e6, 1.0, &m).unwrap() > 1.0 - 1e-6);
        }
        assert!((transmittance_two_state(t0, 1e-12, 1.0).unwrap() - t0).abs() < 1e-9);
        assert!(transmittance_two_state(t0, 1e6, 1.0).unwrap() > 0.999);
    }

    #[test]
    fn copropagating_difference_is_conserved() {
        let m = model(5.0, 1.0, 1.0);
        let p = integrate_copropagating(&copro(1.0, 0.3, 0.8), &m).unwrap();
        for s in &p.samples {
            assert!(((s.i - s.ip) - (0.3 - 0.8)).abs() < 1e-7);
            assert!((s.alpha_s * s.i - s.alpha_p * s.ip).abs() <= 1e-12 * s.alpha_s.max(s.alpha_p));
        }
    }

    #[test]
    fn copropagating_swap_is_exact() {
        let m = model(7.0, 0.1, 0.1);
        let a = integrate_copropagating(&copro(1.0, 0.02, 0.3), &m).unwrap();
        let b = integrate_copropagating(&copro(1.0, 0.3, 0.02), &m).unwrap();
        assert_eq!(a.samples.len(), b.samples.len());
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert_eq!((x.z, x.i, x.ip), (y.z, y.ip, y.i));
        }
    }

    #[test]
    fn regime_classification() {
        let m = model(1.0, 1.0, 1.0);
        let ip = 1e-4;
        assert_eq!(classify_decay_regime(1e-7, ip, &m), DecayRegime::Exponential);
        assert_eq!(classify_decay_regime(1e-2, ip, &m), DecayRegime::Linear);
        assert_eq!(classify_decay_regime(1e2, ip, &m), DecayRegime::Sqrt);
        assert_eq!(classify_decay_regime(2e-4, ip, &m), DecayRegime::Transition);
    }

    #[test]
    fn csv_export_has_header() {
        let m = model(1.0, 1.0, 1.0);
        let p = integrate_uniform(&uniform(0.1, 1.0, 1.0), &m).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("z,I,I_p,alpha_s,alpha_p\n"));
        assert_eq!(text.lines().count(), p.samples.len() + 1);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn ode_matches_rederived_transmittance(
            li0 in -2.0f64..2.0, lip in -2.0f64..2.0, lis in -1.0f64..1.0, a0l in 0.5f64..6.0,
        ) {
            let m = model(a0l, 10f64.powf(lis), 1.0);
            let (i0, ip) = (10f64.powf(li0), 10f64.powf(lip));
            let c = transmittance_uniform(&uniform(1.0, i0, ip), &m).unwrap();
            proptest::prop_assert!((c.ode / c.rederived - 1.0).abs() < 1e-6);
            proptest::prop_assert!(c.rederived >= c.t0 && c.rederived <= 1.0);
        }
    }
}
