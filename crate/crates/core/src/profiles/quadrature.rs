//! Fourier integrals `int exp(-i delta (tau - tau0)) h(tau) dtau`.
//!
//! The oscillatory factor is always integrated exactly: sinusoids and constants
//! through their antiderivatives, polynomial pieces of `h` through the moments
//! `int_{-1}^{1} x^k exp(-i theta x) dx` (Filon's idea), so `delta` times the
//! panel width may be arbitrarily large.

use num_complex::Complex64;

use super::{AccelerationProfile, Segment};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Absolute tolerance on the integral.
    pub tolerance: f64,
    /// Budget of profile evaluations for the adaptive rule.
    pub max_evaluations: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_evaluations: 2_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryIntegralResult {
    pub value: Complex64,
    /// Estimated absolute error, never negative.
    pub abs_error: f64,
    /// Profile evaluations (or closed-form terms) used.
    pub evaluations: usize,
}

const EPS: f64 = f64::EPSILON;

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `int_0^t exp(-i kappa s) ds`, written so that small `kappa t` does not cancel.
fn exp_window(kappa: f64, t: f64) -> Complex64 {
    let half = 0.5 * kappa * t;
    Complex64::from_polar(t * sinc(half), -half)
}

/// `M_k(theta) = int_{-1}^{1} x^k exp(-i theta x) dx` for `k = 0, 1, 2`.
fn moments(theta: f64) -> [Complex64; 3] {
    if theta.abs() <= 1.0 {
        // power series; int_{-1}^{1} x^q dx = 2/(q+1) for even q, 0 for odd q
        let mut out = [Complex64::new(0.0, 0.0); 3];
        let mut term = Complex64::new(1.0, 0.0); // (-i theta)^j / j!
        for j in 0..30u32 {
            for (k, slot) in out.iter_mut().enumerate() {
                let q = j + k as u32;
                if q.is_multiple_of(2) {
                    *slot += term * (2.0 / (q as f64 + 1.0));
                }
            }
            term *= Complex64::new(0.0, -theta) / (j as f64 + 1.0);
        }
        out
    } else {
        let (s, c) = theta.sin_cos();
        let t2 = theta * theta;
        [
            Complex64::new(2.0 * s / theta, 0.0),
            Complex64::new(0.0, -2.0 * (s - theta * c) / t2),
            Complex64::new(2.0 * (s / theta + 2.0 * c / t2 - 2.0 * s / (t2 * theta)), 0.0),
        ]
    }
}

/// Panel `[a, b]` with `h` linear between `ha` and `hb`.
fn panel_linear(delta: f64, tau0: f64, a: f64, b: f64, ha: f64, hb: f64) -> Complex64 {
    let c = 0.5 * (a + b);
    let w = 0.5 * (b - a);
    let [m0, m1, _] = moments(delta * w);
    let phase = Complex64::from_polar(w, -delta * (c - tau0));
    phase * (m0 * (0.5 * (ha + hb)) + m1 * (0.5 * (hb - ha)))
}

/// Panel `[a, b]` with `h` the quadratic through `(a, ha)`, midpoint, `(b, hb)`.
fn panel_quadratic(delta: f64, tau0: f64, a: f64, b: f64, h: [f64; 3]) -> Complex64 {
    let [ha, hm, hb] = h;
    let c = 0.5 * (a + b);
    let w = 0.5 * (b - a);
    let [m0, m1, m2] = moments(delta * w);
    let phase = Complex64::from_polar(w, -delta * (c - tau0));
    phase * (m0 * hm + m1 * (0.5 * (hb - ha)) + m2 * (0.5 * (ha + hb) - hm))
}

/// Rounding estimate for a sum of closed-form terms, including the phase error
/// of `exp(-i delta s)` for large arguments.
fn rounding_error(terms: &[(Complex64, f64)]) -> f64 {
    let n = terms.len().max(1) as f64;
    terms.iter().map(|(z, arg)| z.norm() * EPS * (16.0 + arg.abs())).sum::<f64>() * n.sqrt()
}

pub(super) fn sinusoid(
    amplitude: f64,
    omega_c: f64,
    phase: f64,
    duration: f64,
    delta: f64,
) -> OscillatoryIntegralResult {
    // cos(w t + phi) = (e^{i(w t + phi)} + e^{-i(w t + phi)}) / 2
    let lower = Complex64::from_polar(0.5 * amplitude, phase) * exp_window(delta - omega_c, duration);
    let upper = Complex64::from_polar(0.5 * amplitude, -phase) * exp_window(delta + omega_c, duration);
    let terms = [(lower, (delta - omega_c) * duration), (upper, (delta + omega_c) * duration)];
    OscillatoryIntegralResult { value: lower + upper, abs_error: rounding_error(&terms), evaluations: 2 }
}

pub(super) fn piecewise_constant(segments: &[Segment], delta: f64) -> OscillatoryIntegralResult {
    let mut offset = 0.0;
    let mut terms = Vec::with_capacity(segments.len());
    for s in segments {
        let z = Complex64::from_polar(s.value, -delta * offset) * exp_window(delta, s.duration);
        terms.push((z, delta * (offset + s.duration)));
        offset += s.duration;
    }
    let value = terms.iter().map(|(z, _)| z).sum();
    OscillatoryIntegralResult { value, abs_error: rounding_error(&terms), evaluations: segments.len() }
}

pub(super) fn piecewise_linear(times: &[f64], values: &[f64], tau0: f64, delta: f64) -> OscillatoryIntegralResult {
    let terms: Vec<(Complex64, f64)> = times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| (panel_linear(delta, tau0, t[0], t[1], v[0], v[1]), delta * (t[1] - tau0)))
        .collect();
    let value = terms.iter().map(|(z, _)| z).sum();
    OscillatoryIntegralResult { value, abs_error: rounding_error(&terms), evaluations: times.len() }
}

struct Panel {
    a: f64,
    b: f64,
    h: [f64; 3],
    estimate: Complex64,
    depth: u32,
}

const MAX_DEPTH: u32 = 48;

/// Adaptive Filon quadrature. A carrier `cos(omega_c (tau - tau0) + phase)` is
/// moved into the kernel, so only the envelope is interpolated.
pub(super) fn adaptive_filon(
    profile: &AccelerationProfile,
    delta: f64,
    config: &QuadratureConfig,
) -> Result<OscillatoryIntegralResult> {
    let Some((omega_c, phase)) = profile.carrier() else {
        return filon_envelope(profile, delta, config);
    };
    let lower = filon_envelope(profile, delta - omega_c, config)?;
    let remaining =
        QuadratureConfig { max_evaluations: config.max_evaluations.saturating_sub(lower.evaluations), ..*config };
    let upper = filon_envelope(profile, delta + omega_c, &remaining)?;
    Ok(OscillatoryIntegralResult {
        value: Complex64::from_polar(0.5, phase) * lower.value + Complex64::from_polar(0.5, -phase) * upper.value,
        abs_error: 0.5 * (lower.abs_error + upper.abs_error),
        evaluations: lower.evaluations + upper.evaluations,
    })
}

/// Adaptive bisection with quadratic Filon panels on the envelope. For smooth
/// envelopes the panel error falls by 16 per halving, so the error of the
/// refined pair is taken as `|refined - coarse| / 15` and compared with the
/// panel's share of the tolerance.
fn filon_envelope(
    profile: &AccelerationProfile,
    delta: f64,
    config: &QuadratureConfig,
) -> Result<OscillatoryIntegralResult> {
    let (tau0, tauf) = (profile.tau0(), profile.tauf());
    let total = tauf - tau0;
    let resolve = profile.resolve_frequency();
    let f = |tau: f64, from_right: bool| profile.envelope_side(tau, from_right);

    let mut nodes = vec![tau0];
    nodes.extend(profile.breakpoints());
    nodes.push(tauf);

    let mut evaluations = 0usize;
    let mut stack = Vec::new();
    for w in nodes.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        // a quarter period of the envelope's own variation per initial panel
        let n = ((hi - lo) * resolve / (0.5 * std::f64::consts::PI)).ceil().max(2.0);
        if 2.0 * n + 1.0 + evaluations as f64 > config.max_evaluations as f64 {
            return Err(Error::Quadrature(format!(
                "initial partition alone needs {n} panels, above the evaluation budget {}",
                config.max_evaluations
            )));
        }
        let n = n as usize;
        for k in 0..n {
            let a = lo + (hi - lo) * k as f64 / n as f64;
            let b = if k + 1 == n { hi } else { lo + (hi - lo) * (k + 1) as f64 / n as f64 };
            let h = [f(a, true), f(0.5 * (a + b), true), f(b, false)];
            evaluations += 3;
            stack.push(Panel { a, b, h, estimate: panel_quadratic(delta, tau0, a, b, h), depth: 0 });
        }
    }

    let mut value = Complex64::new(0.0, 0.0);
    let mut abs_error = 0.0;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let q1 = f(0.5 * (p.a + m), true);
        let q3 = f(0.5 * (m + p.b), true);
        evaluations += 2;
        if evaluations > config.max_evaluations {
            return Err(Error::Quadrature(format!(
                "evaluation budget {} exhausted at tolerance {:.3e}",
                config.max_evaluations, config.tolerance
            )));
        }
        let left_h = [p.h[0], q1, p.h[1]];
        let right_h = [p.h[1], q3, p.h[2]];
        let left = panel_quadratic(delta, tau0, p.a, m, left_h);
        let right = panel_quadratic(delta, tau0, m, p.b, right_h);
        let refined = left + right;
        let err = (refined - p.estimate).norm() / 15.0;
        let local_tol = config.tolerance * (p.b - p.a) / total;
        if err <= local_tol || p.depth >= MAX_DEPTH {
            value += refined;
            abs_error += err;
        } else {
            stack.push(Panel { a: p.a, b: m, h: left_h, estimate: left, depth: p.depth + 1 });
            stack.push(Panel { a: m, b: p.b, h: right_h, estimate: right, depth: p.depth + 1 });
        }
    }

    if abs_error > config.tolerance {
        return Err(Error::Quadrature(format!(
            "tolerance {:.3e} unattainable: estimated error {:.3e} at maximum refinement",
            config.tolerance, abs_error
        )));
    }
    Ok(OscillatoryIntegralResult { value, abs_error, evaluations })
}
#[cfg(test)]
mod tests {
    use super::*;

    /// Direct quadrature of the moment integrals with composite Simpson.
    fn simpson_moment(k: i32, theta: f64) -> Complex64 {
        let n = 20_000;
        let h = 2.0 / n as f64;
        let f = |x: f64| Complex64::from_polar(x.powi(k), -theta * x);
        let mut s = f(-1.0) + f(1.0);
        for j in 1..n {
            let x = -1.0 + j as f64 * h;
            s += f(x) * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * (h / 3.0)
    }

    #[test]
    fn moments_match_direct_quadrature_across_series_switch() {
        for &theta in &[0.0, 1e-6, 0.3, 0.999, 1.0, 1.001, 2.5, 17.0, -4.0] {
            let m = moments(theta);
            for k in 0..3 {
                let oracle = simpson_moment(k as i32, theta);
                assert!((m[k] - oracle).norm() < 1e-12, "theta={theta} k={k}: {} vs {oracle}", m[k]);
            }
        }
    }

    #[test]
    fn exp_window_limits() {
        assert!((exp_window(0.0, 3.0) - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        let k = 2.0;
        let t = 1.3;
        let closed = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -k * t)) / Complex64::new(0.0, k);
        assert!((exp_window(k, t) - closed).norm() < 1e-15);
    }

    #[test]
    fn quadratic_panel_is_exact_for_quadratics() {
        // h = 1 + 2 tau - tau^2 on [0.5, 2.0], delta = 3
        let h = |t: f64| 1.0 + 2.0 * t - t * t;
        let (a, b, delta) = (0.5, 2.0, 3.0);
        let filon = panel_quadratic(delta, 0.0, a, b, [h(a), h(0.5 * (a + b)), h(b)]);
        let n = 20_000;
        let step = (b - a) / n as f64;
        let f = |t: f64| Complex64::from_polar(h(t), -delta * t);
        let mut s = f(a) + f(b);
        for j in 1..n {
            s += f(a + j as f64 * step) * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        assert!((filon - s * (step / 3.0)).norm() < 1e-12);
    }
}
