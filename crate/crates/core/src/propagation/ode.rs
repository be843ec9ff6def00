//! Dormand–Prince 5(4) with step-size control and dense-output sampling.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Settings {
    pub rtol: f64,
    pub atol: f64,
    /// Relative error allowed when the output is linearly interpolated
    /// between consecutive samples.
    pub sample_rtol: f64,
}

/// Continuous-extension weights for the fourth-order dense output.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Samples of the mapped output `g(y)` along the trajectory.
pub(crate) struct Trajectory<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
}

/// Fourth-order dense output inside a step of length `h` from `y0`.
struct Dense<const N: usize> {
    y0: [f64; N],
    diff: [f64; N],
    bspl: [f64; N],
    c4: [f64; N],
    c5: [f64; N],
}

impl<const N: usize> Dense<N> {
    fn new(h: f64, y0: &[f64; N], y1: &[f64; N], k: &[[f64; N]; 7]) -> Self {
        let mut d = Dense {
            y0: *y0,
            diff: [0.0; N],
            bspl: [0.0; N],
            c4: [0.0; N],
            c5: [0.0; N],
        };
        for i in 0..N {
            d.diff[i] = y1[i] - y0[i];
            d.bspl[i] = h * k[0][i] - d.diff[i];
            d.c4[i] = d.diff[i] - h * k[6][i] - d.bspl[i];
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate() {
                acc += D[j] * kj[i];
            }
            d.c5[i] = h * acc;
        }
        d
    }

    fn at(&self, s: f64) -> [f64; N] {
        let r = 1.0 - s;
        std::array::from_fn(|i| {
            self.y0[i] + s * (self.diff[i] + r * (self.bspl[i] + s * (self.c4[i] + r * self.c5[i])))
        })
    }
}

fn norm_max<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Integrates `y' = f(t, y)` from `t0` to `t1` and records `g(y)`.
///
/// The error norm is a max norm, so permuting the components of a
/// permutation-symmetric system permutes the result bit for bit.
pub(crate) fn integrate<const N: usize, F, G>(
    f: F,
    g: G,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    settings: Settings,
) -> Result<Trajectory<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    G: Fn(&[f64; N]) -> [f64; N],
{
    let span = t1 - t0;
    let mut traj = Trajectory {
        t: vec![t0],
        y: vec![g(&y0)],
    };
    if span == 0.0 {
        return Ok(traj);
    }
    let (rtol, atol) = (settings.rtol, settings.atol);
    let scale = |a: &[f64; N], b: &[f64; N], i: usize| atol + rtol * a[i].abs().max(b[i].abs());

    let mut t = t0;
    let mut y = y0;
    let mut fy = f(t, &y);

    // Initial step from the size of the derivative.
    let d0 = norm_max::<N>(&std::array::from_fn(|i| y[i] / scale(&y, &y, i)));
    let d1 = norm_max::<N>(&std::array::from_fn(|i| fy[i] / scale(&y, &y, i)));
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span } else { 0.01 * d0 / d1 };
    h = h.min(span).max(1e-12 * span);

    let mut steps = 0usize;
    while t < t1 {
        if steps >= MAX_STEPS {
            return Err(Error::Integration {
                z: t,
                step: h,
                steps,
                reason: "step limit reached".into(),
            });
        }
        steps += 1;
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        let mut k = [[0.0; N]; 7];
        k[0] = fy;
        for s in 1..7 {
            let mut ys = y;
            for i in 0..N {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                ys[i] += h * acc;
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut y_new = y;
        for i in 0..N {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(6) {
                acc += A[6][j] * kj[i];
            }
            y_new[i] += h * acc;
        }
        let mut err = 0.0f64;
        for i in 0..N {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            err = err.max((h * e).abs() / scale(&y, &y_new, i));
        }
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            h *= 0.2;
            if h < 1e-14 * span {
                return Err(Error::Integration {
                    z: t,
                    step: h,
                    steps,
                    reason: "non-finite state".into(),
                });
            }
            continue;
        }
        if err <= 1.0 {
            let dense = Dense::new(h, &y, &y_new, &k);
            insert_samples(&g, &mut traj, t, h, &dense, &y_new, settings.sample_rtol);
            t = if last { t1 } else { t + h };
            y = y_new;
            fy = k[6];
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        let factor = if err > 1.0 { factor.min(1.0) } else { factor };
        h *= factor;
        if h < 1e-14 * span.abs() && t < t1 {
            return Err(Error::Integration {
                z: t,
                step: h,
                steps,
                reason: "step size underflow".into(),
            });
        }
    }
    Ok(traj)
}

/// Appends samples inside (t, t + h] so that linear interpolation of `g`
/// between them stays within `sample_rtol`.
fn insert_samples<const N: usize, G: Fn(&[f64; N]) -> [f64; N]>(
    g: &G,
    traj: &mut Trajectory<N>,
    t: f64,
    h: f64,
    dense: &Dense<N>,
    y1: &[f64; N],
    sample_rtol: f64,
) {
    let g0 = g(&dense.y0);
    let g1 = g(y1);
    let gm = g(&dense.at(0.5));
    let mut worst = 0.0f64;
    for i in 0..N {
        let dev = (gm[i] - 0.5 * (g0[i] + g1[i])).abs();
        let tol = sample_rtol * gm[i].abs();
        if dev > 0.0 {
            worst = worst.max(if tol > 0.0 { dev / tol } else { f64::INFINITY });
        }
    }
    // Interpolation error scales as the square of the spacing.
    let pieces = if worst <= 1.0 {
        1
    } else if worst.is_finite() {
        (worst.sqrt().ceil() as usize).clamp(2, 100_000)
    } else {
        1
    };
    for p in 1..pieces {
        let s = p as f64 / pieces as f64;
        traj.t.push(t + s * h);
        traj.y.push(g(&dense.at(s)));
    }
    traj.t.push(t + h);
    traj.y.push(g1);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(rtol: f64) -> Settings {
        Settings {
            rtol,
            atol: rtol,
            sample_rtol: rtol,
        }
    }

    #[test]
    fn exponential_decay_is_accurate() {
        let tr = integrate(|_, y: &[f64; 1]| [-y[0]], |y| *y, 0.0, 5.0, [1.0], settings(1e-10)).unwrap();
        let end = tr.y.last().unwrap()[0];
        assert!((end / (-5f64).exp() - 1.0).abs() < 1e-8);
        assert_eq!(*tr.t.last().unwrap(), 5.0);
    }

    #[test]
    fn samples_make_linear_interpolation_accurate() {
        let tr = integrate(|_, _: &[f64; 1]| [-1.0], |y| [y[0].exp()], 0.0, 3.0, [0.0], settings(1e-6)).unwrap();
        for w in tr.t.windows(2).zip(tr.y.windows(2)) {
            let ((a, b), (ya, yb)) = ((w.0[0], w.0[1]), (w.1[0][0], w.1[1][0]));
            let mid = 0.5 * (a + b);
            let exact = (-mid).exp();
            assert!(((0.5 * (ya + yb)) / exact - 1.0).abs() < 2e-6);
        }
    }

    #[test]
    fn oscillator_two_components() {
        let tr = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            |y| *y,
            0.0,
            10.0,
            [1.0, 0.0],
            settings(1e-10),
        )
        .unwrap();
        let end = tr.y.last().unwrap();
        assert!((end[0] - 10f64.cos()).abs() < 1e-8);
        assert!((end[1] + 10f64.sin()).abs() < 1e-8);
    }
}
