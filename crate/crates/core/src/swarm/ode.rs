//! Dormand–Prince 5(4) integrator with PI step-size control.
//!
//! Solutions are reported only at caller-supplied sample times. Between two
//! accepted steps the state is reconstructed by cubic Hermite interpolation
//! from the endpoint values and derivatives (the derivative at the right end
//! is the FSAL stage, so dense output costs no extra evaluations).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub atol: f64,
    pub rtol: f64,
    /// Hard cap on attempted steps.
    pub max_steps: usize,
    /// Upper bound on any step; `f64::INFINITY` means unbounded.
    pub max_step: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            atol: 1e-8,
            rtol: 1e-6,
            max_steps: 5_000_000,
            max_step: f64::INFINITY,
        }
    }
}

// Butcher tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Error coefficients: 5th-order weights minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const PI_BETA: f64 = 0.04;
const PI_ALPHA: f64 = 0.2 - PI_BETA * 0.75;

/// Integrates `y' = f(t, y)` from `t0` with state `y0` and returns the state
/// at each entry of `sample_times` (which must be nondecreasing and `>= t0`).
pub fn integrate<F>(
    f: F,
    t0: f64,
    y0: &[f64],
    sample_times: &[f64],
    opts: &IntegratorOptions,
) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    integrate_monitored(f, t0, y0, sample_times, opts, |_, _| true)
}

/// Like [`integrate`], but calls `keep_going(t, y)` on every sampled state and
/// stops early (returning the samples produced so far) once it returns false.
/// Stepping is identical to [`integrate`], so the samples that are produced
/// match it bit for bit.
pub fn integrate_monitored<F, M>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    sample_times: &[f64],
    opts: &IntegratorOptions,
    mut keep_going: M,
) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    M: FnMut(f64, &[f64]) -> bool,
{
    if sample_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::arg("sample times must be nondecreasing"));
    }
    if sample_times.first().is_some_and(|&s| s < t0) {
        return Err(Error::arg("sample times must not precede the initial time"));
    }
    let n = y0.len();
    let mut out = Vec::with_capacity(sample_times.len());
    let mut next = 0;
    while next < sample_times.len() && sample_times[next] == t0 {
        out.push(y0.to_vec());
        next += 1;
        if !keep_going(t0, y0) {
            return Ok(out);
        }
    }
    let Some(&t_end) = sample_times.last() else {
        return Ok(out);
    };
    if next == sample_times.len() {
        return Ok(out);
    }

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    f(t, &y, &mut k1);
    let mut h = initial_step(&mut f, t, &y, &k1, t_end - t0, opts);
    let mut err_old: f64 = 1e-4;
    let mut rejected_last = false;

    for _ in 0..opts.max_steps {
        let remaining = t_end - t;
        if h >= remaining {
            h = remaining;
        }
        let h_floor = 16.0 * f64::EPSILON * t.abs().max(1.0);
        if h < h_floor {
            return Err(Error::Integration {
                last_good_time: t,
                reason: format!("step size underflow (h = {h:e})"),
            });
        }

        for i in 0..n {
            stage[i] = y[i] + h * A21 * k1[i];
        }
        f(t + C2 * h, &stage, &mut k2);
        for i in 0..n {
            stage[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * h, &stage, &mut k3);
        for i in 0..n {
            stage[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * h, &stage, &mut k4);
        for i in 0..n {
            stage[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * h, &stage, &mut k5);
        for i in 0..n {
            stage[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(t + h, &stage, &mut k6);
        for i in 0..n {
            y_new[i] = y[i]
                + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        f(t + h, &y_new, &mut k7);

        let mut err_sq = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale).powi(2);
        }
        let err = (err_sq / n.max(1) as f64).sqrt();

        if !err.is_finite() {
            h *= FAC_MIN;
            rejected_last = true;
            continue;
        }

        if err <= 1.0 {
            let t_new = if h == remaining { t_end } else { t + h };
            while next < sample_times.len() && sample_times[next] <= t_new {
                let s = sample_times[next];
                let sample = hermite(t, t_new, &y, &y_new, &k1, &k7, s);
                let go_on = keep_going(s, &sample);
                out.push(sample);
                next += 1;
                if !go_on {
                    return Ok(out);
                }
            }
            if next == sample_times.len() {
                return Ok(out);
            }
            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);

            let err_c = err.max(1e-10);
            let mut fac = SAFETY * err_c.powf(-PI_ALPHA) * err_old.powf(PI_BETA);
            fac = fac.clamp(FAC_MIN, FAC_MAX);
            if rejected_last {
                fac = fac.min(1.0);
            }
            err_old = err_c;
            h = (h * fac).min(opts.max_step);
            rejected_last = false;
        } else {
            let fac = (SAFETY * err.powf(-PI_ALPHA)).max(FAC_MIN);
            h *= fac;
            rejected_last = true;
        }
    }

    Err(Error::Integration {
        last_good_time: t,
        reason: format!("exceeded {} steps", opts.max_steps),
    })
}

fn initial_step<F>(
    f: &mut F,
    t: f64,
    y: &[f64],
    dy: &[f64],
    span: f64,
    opts: &IntegratorOptions,
) -> f64
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y.len().max(1) as f64;
    let scale = |v: f64| opts.atol + opts.rtol * v.abs();
    let d0 = (y.iter().map(|&v| (v / scale(v)).powi(2)).sum::<f64>() / n).sqrt();
    let d1 = (y
        .iter()
        .zip(dy)
        .map(|(&v, &d)| (d / scale(v)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span).min(opts.max_step);
    let probe: Vec<f64> = y.iter().zip(dy).map(|(&v, &d)| v + h0 * d).collect();
    let mut dy1 = vec![0.0; y.len()];
    f(t + h0, &probe, &mut dy1);
    let d2 = (y
        .iter()
        .zip(dy.iter().zip(&dy1))
        .map(|(&v, (&a, &b))| ((b - a) / scale(v)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    (100.0 * h0).min(h1).min(span).min(opts.max_step)
}

fn hermite(t0: f64, t1: f64, y0: &[f64], y1: &[f64], f0: &[f64], f1: &[f64], s: f64) -> Vec<f64> {
    if s == t1 {
        return y1.to_vec();
    }
    let h = t1 - t0;
    let th = (s - t0) / h;
    let th2 = th * th;
    let th3 = th2 * th;
    let h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
    let h10 = th3 - 2.0 * th2 + th;
    let h01 = -2.0 * th3 + 3.0 * th2;
    let h11 = th3 - th2;
    (0..y0.len())
        .map(|i| h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_matches_closed_form() {
        let times: Vec<f64> = (0..=10).map(|k| k as f64 * 0.5).collect();
        let sol = integrate(
            |_, y, dy| dy[0] = -y[0],
            0.0,
            &[1.0],
            &times,
            &IntegratorOptions::default(),
        )
        .unwrap();
        for (t, y) in times.iter().zip(&sol) {
            // Cubic interpolation between steps dominates the error here.
            assert!((y[0] - (-t).exp()).abs() < 1e-5, "t={t} y={}", y[0]);
        }
    }

    #[test]
    fn harmonic_oscillator_dense_output() {
        let times: Vec<f64> = (0..200).map(|k| k as f64 * 0.0731).collect();
        let opts = IntegratorOptions {
            atol: 1e-10,
            rtol: 1e-10,
            ..Default::default()
        };
        let sol = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[0.0, 1.0],
            &times,
            &opts,
        )
        .unwrap();
        for (t, y) in times.iter().zip(&sol) {
            assert!((y[0] - t.sin()).abs() < 1e-6);
            assert!((y[1] - t.cos()).abs() < 1e-6);
        }
    }

    #[test]
    fn finite_time_blowup_reports_last_good_time() {
        // y' = y^2, y(0) = 1 blows up at t = 1.
        let err = integrate(
            |_, y, dy| dy[0] = y[0] * y[0],
            0.0,
            &[1.0],
            &[2.0],
            &IntegratorOptions::default(),
        )
        .unwrap_err();
        match err {
            Error::Integration { last_good_time, .. } => {
                assert!(last_good_time > 0.9 && last_good_time < 1.0 + 1e-6, "{last_good_time}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn samples_at_initial_time_return_initial_state() {
        let sol = integrate(
            |_, _, dy| dy[0] = 1.0,
            0.0,
            &[3.0],
            &[0.0, 0.0, 1.0],
            &IntegratorOptions::default(),
        )
        .unwrap();
        assert_eq!(sol[0], vec![3.0]);
        assert_eq!(sol[1], vec![3.0]);
        assert!((sol[2][0] - 4.0).abs() < 1e-12);
    }
}
