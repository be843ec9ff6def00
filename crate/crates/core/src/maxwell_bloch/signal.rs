//! Noisy input pulses and periodogram spectra.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::MbGrid;
use crate::error::{Error, Result};

fn default_rms_fraction() -> f64 {
    0.2
}

fn default_noise_bins() -> usize {
    512
}

/// Gaussian pulse of Rabi frequency corrupted by 1/f noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoisySignalSpec {
    /// Peak Rabi frequency [rad/s].
    pub peak: f64,
    /// Pulse centre [s].
    pub center: f64,
    /// Gaussian standard deviation in time [s].
    pub width: f64,
    /// Noise RMS as a fraction of `peak`.
    #[serde(default = "default_rms_fraction")]
    pub rms_fraction: f64,
    /// Noise occupies the lowest `noise_bins` harmonics of 1/T.
    #[serde(default = "default_noise_bins")]
    pub noise_bins: usize,
    pub seed: u64,
}

impl NoisySignalSpec {
    pub fn new(peak: f64, center: f64, width: f64, seed: u64) -> Self {
        Self {
            peak,
            center,
            width,
            rms_fraction: default_rms_fraction(),
            noise_bins: default_noise_bins(),
            seed,
        }
    }

    pub fn validate(&self, grid: &MbGrid) -> Result<()> {
        if !(self.peak >= 0.0 && self.peak.is_finite()) {
            return Err(Error::config("peak", "must be finite and >= 0"));
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::config("width", "must be > 0"));
        }
        if !self.center.is_finite() {
            return Err(Error::config("center", "must be finite"));
        }
        if !(self.rms_fraction >= 0.0 && self.rms_fraction.is_finite()) {
            return Err(Error::config("rms_fraction", "must be >= 0"));
        }
        if self.rms_fraction > 0.0 && (self.noise_bins == 0 || 2 * self.noise_bins >= grid.n_time) {
            return Err(Error::config(
                "noise_bins",
                format!("must lie in 1..{} for {} time steps", grid.n_time / 2, grid.n_time),
            ));
        }
        Ok(())
    }
}

/// Zero-mean 1/f noise with unit RMS on the grid.
///
/// Harmonic k of 1/T gets amplitude k^(−1/2) times a pair of standard
/// normals drawn in bin order, so the series is the same trigonometric
/// polynomial on every grid that resolves it.
pub fn pink_noise(bins: usize, seed: u64, n_time: usize) -> Result<Vec<f64>> {
    if bins == 0 || 2 * bins >= n_time {
        return Err(Error::domain("pink noise needs 0 < bins < n_time/2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = vec![Complex64::new(0.0, 0.0); n_time];
    for k in 1..=bins {
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        let amp = (k as f64).powf(-0.5);
        // a cos(2πkn/N) + b sin(2πkn/N)
        spec[k] = Complex64::new(a, -b) * (0.5 * amp);
        spec[n_time - k] = spec[k].conj();
    }
    FftPlanner::new().plan_fft_inverse(n_time).process(&mut spec);
    let x: Vec<f64> = spec.iter().map(|c| c.re).collect();
    let rms = (x.iter().map(|v| v * v).sum::<f64>() / n_time as f64).sqrt();
    Ok(x.into_iter().map(|v| v / rms).collect())
}

/// Input envelope Ω(0, t_n): Gaussian plus scaled pink noise, clamped at 0.
pub fn synthesize_signal(spec: &NoisySignalSpec, grid: &MbGrid) -> Result<Vec<f64>> {
    spec.validate(grid)?;
    let dt = grid.dt();
    let mut out: Vec<f64> = (0..grid.n_time)
        .map(|n| {
            let t = n as f64 * dt - spec.center;
            spec.peak * (-0.5 * t * t / (spec.width * spec.width)).exp()
        })
        .collect();
    if spec.rms_fraction > 0.0 {
        let noise = pink_noise(spec.noise_bins, spec.seed, grid.n_time)?;
        let scale = spec.rms_fraction * spec.peak;
        for (o, w) in out.iter_mut().zip(noise) {
            *o += scale * w;
        }
    }
    for o in &mut out {
        *o = o.max(0.0);
    }
    Ok(out)
}

/// One-sided power spectral density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Psd {
    /// Bin frequencies k/(NΔt) [Hz], k = 0..=N/2.
    pub freq: Vec<f64>,
    pub power: Vec<f64>,
    pub df: f64,
}

/// Mean-removed rectangular-window periodogram; Σ power·df equals the
/// series variance.
pub fn psd(series: &[f64], dt: f64) -> Result<Psd> {
    let n = series.len();
    if n < 8 {
        return Err(Error::domain("PSD needs at least 8 samples"));
    }
    if !(dt > 0.0) {
        return Err(Error::domain("PSD needs dt > 0"));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = series.iter().map(|&v| Complex64::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let df = 1.0 / (n as f64 * dt);
    let half = n / 2;
    let norm = dt / n as f64;
    let power = (0..=half)
        .map(|k| {
            let p = buf[k].norm_sqr() * norm;
            if k == 0 || (n.is_multiple_of(2) && k == half) {
                p
            } else {
                2.0 * p
            }
        })
        .collect();
    Ok(Psd {
        freq: (0..=half).map(|k| k as f64 * df).collect(),
        power,
        df,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::linear_fit;

    fn grid(n: usize) -> MbGrid {
        MbGrid::new(n, 10, 1e-6, 1e-3).unwrap()
    }

    #[test]
    fn sinusoid_has_one_dominant_bin() {
        let n = 256;
        let x: Vec<f64> = (0..n).map(|i| (2.0 * std::f64::consts::PI * 17.0 * i as f64 / n as f64).sin()).collect();
        let p = psd(&x, 1e-3).unwrap();
        let total: f64 = p.power.iter().sum();
        assert!(p.power[17] / total > 0.99);
    }

    #[test]
    fn parseval_holds() {
        let x: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 97) as f64 - 3.0 * (i as f64).sqrt()).collect();
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / x.len() as f64;
        let p = psd(&x, 0.37).unwrap();
        let total: f64 = p.power.iter().sum::<f64>() * p.df;
        assert!((total / var - 1.0).abs() < 1e-10);
        let odd = psd(&x[..999], 0.37).unwrap();
        let mean = x[..999].iter().sum::<f64>() / 999.0;
        let var = x[..999].iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 999.0;
        assert!((odd.power.iter().sum::<f64>() * odd.df / var - 1.0).abs() < 1e-10);
        assert!(psd(&x[..7], 1.0).is_err());
    }

    #[test]
    fn pink_noise_slope() {
        let n = 8192;
        let x = pink_noise(2000, 7, n).unwrap();
        let p = psd(&x, 1.0).unwrap();
        let (lx, ly): (Vec<f64>, Vec<f64>) = (10..=1000).map(|k| (p.freq[k].ln(), p.power[k].ln())).unzip();
        let (slope, _) = linear_fit(&lx, &ly).unwrap();
        assert!((-1.3..=-0.7).contains(&slope), "slope {slope}");
    }

    #[test]
    fn noise_is_deterministic_and_grid_independent() {
        let a = pink_noise(64, 3, 512).unwrap();
        assert_eq!(a, pink_noise(64, 3, 512).unwrap());
        let fine = pink_noise(64, 3, 1024).unwrap();
        for (i, v) in a.iter().enumerate() {
            assert!((v - fine[2 * i]).abs() < 1e-12);
        }
        assert_ne!(a, pink_noise(64, 4, 512).unwrap());
    }

    #[test]
    fn clean_pulse_is_gaussian() {
        let g = grid(512);
        let mut spec = NoisySignalSpec::new(2.0, 0.5e-6, 0.05e-6, 1);
        spec.rms_fraction = 0.0;
        let s = synthesize_signal(&spec, &g).unwrap();
        assert_eq!(s[256], 2.0);
        assert!(s.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn noisy_pulse_is_nonnegative() {
        let g = grid(2048);
        let spec = NoisySignalSpec::new(1.0, 0.5e-6, 0.05e-6, 9);
        let s = synthesize_signal(&spec, &g).unwrap();
        assert!(s.iter().all(|&v| v >= 0.0));
        let mut bad = spec.clone();
        bad.noise_bins = 1024;
        assert!(synthesize_signal(&bad, &g).is_err());
    }
}
