//! Dimensionless acceleration profiles `h(tau) = a(tau) L` and their Fourier
//! integrals over the acceleration segment.

mod quadrature;

use std::f64::consts::PI;

use thiserror::Error;

use crate::error::{Error, Result};

pub use quadrature::{OscillatoryIntegralResult, QuadratureConfig};

/// A rigid cavity of proper length `L` needs `|a| L < 2`.
pub const RIGIDITY_BOUND: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub value: f64,
}

impl Segment {
    pub fn new(duration: f64, value: f64) -> Self {
        Self { duration, value }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileShape {
    /// `amplitude * cos(omega_c (tau - tau0) + phase)`.
    Sinusoidal {
        amplitude: f64,
        omega_c: f64,
        phase: f64,
    },
    PiecewiseConstant {
        segments: Vec<Segment>,
    },
    /// Linear rise from 0 to `amplitude`, plateau, and symmetric linear fall.
    Ramp {
        amplitude: f64,
        ramp_time: f64,
        hold_time: f64,
    },
    /// Linear interpolation between samples.
    Sampled {
        times: Vec<f64>,
        values: Vec<f64>,
    },
    /// Sinusoid under a raised-cosine switch-on/off envelope. The window edges
    /// are absolute times so that splitting a profile keeps the envelope intact.
    RaisedCosine {
        amplitude: f64,
        omega_c: f64,
        phase: f64,
        rise_time: f64,
        window_start: f64,
        window_end: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccelerationProfile {
    shape: ProfileShape,
    tau0: f64,
    tauf: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("rigidity bound |h| < 2 violated: |h({tau})| = {value}")]
pub struct RigidityViolation {
    pub tau: f64,
    pub value: f64,
}

/// Supremum of `|h|` over the acceleration interval and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidityReport {
    pub sup_abs: f64,
    pub tau_at_sup: f64,
}

impl RigidityReport {
    pub fn is_rigid(&self) -> bool {
        self.sup_abs < RIGIDITY_BOUND
    }
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidProfile(format!("{name} must be finite, got {x}")))
    }
}

fn check_interval(tau0: f64, tauf: f64) -> Result<()> {
    check_finite("tau0", tau0)?;
    check_finite("tauf", tauf)?;
    if tauf <= tau0 {
        return Err(Error::InvalidProfile(format!("tauf ({tauf}) must exceed tau0 ({tau0})")));
    }
    Ok(())
}

impl AccelerationProfile {
    pub fn sinusoidal(amplitude: f64, omega_c: f64, phase: f64, tau0: f64, tauf: f64) -> Result<Self> {
        check_interval(tau0, tauf)?;
        check_finite("amplitude", amplitude)?;
        check_finite("phase", phase)?;
        if !(omega_c.is_finite() && omega_c >= 0.0) {
            return Err(Error::InvalidProfile(format!("omega_c must be non-negative, got {omega_c}")));
        }
        Ok(Self { shape: ProfileShape::Sinusoidal { amplitude, omega_c, phase }, tau0, tauf })
    }

    /// `h = 0` on `[tau0, tauf]`.
    pub fn zero(tau0: f64, tauf: f64) -> Result<Self> {
        check_interval(tau0, tauf)?;
        Self::piecewise_constant(tau0, vec![Segment::new(tauf - tau0, 0.0)])
    }

    pub fn piecewise_constant(tau0: f64, segments: Vec<Segment>) -> Result<Self> {
        check_finite("tau0", tau0)?;
        if segments.is_empty() {
            return Err(Error::InvalidProfile("piecewise-constant profile needs at least one segment".into()));
        }
        for (k, s) in segments.iter().enumerate() {
            if !(s.duration.is_finite() && s.duration > 0.0) {
                return Err(Error::InvalidProfile(format!(
                    "segment {k}: duration must be positive, got {}",
                    s.duration
                )));
            }
            check_finite("segment value", s.value)?;
        }
        let tauf = tau0 + segments.iter().map(|s| s.duration).sum::<f64>();
        Ok(Self { shape: ProfileShape::PiecewiseConstant { segments }, tau0, tauf })
    }

    pub fn ramp(amplitude: f64, ramp_time: f64, hold_time: f64, tau0: f64) -> Result<Self> {
        check_finite("tau0", tau0)?;
        check_finite("amplitude", amplitude)?;
        if !(ramp_time.is_finite() && ramp_time > 0.0) {
            return Err(Error::InvalidProfile(format!("ramp_time must be positive, got {ramp_time}")));
        }
        if !(hold_time.is_finite() && hold_time >= 0.0) {
            return Err(Error::InvalidProfile(format!("hold_time must be non-negative, got {hold_time}")));
        }
        let tauf = tau0 + 2.0 * ramp_time + hold_time;
        Ok(Self { shape: ProfileShape::Ramp { amplitude, ramp_time, hold_time }, tau0, tauf })
    }

    pub fn sampled(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidProfile(format!("{} sample times but {} values", times.len(), values.len())));
        }
        if times.len() < 2 {
            return Err(Error::InvalidProfile("sampled profile needs at least two samples".into()));
        }
        for (&t, &v) in times.iter().zip(&values) {
            check_finite("sample time", t)?;
            check_finite("sample value", v)?;
        }
        if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile(format!(
                "sample times must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let (tau0, tauf) = (times[0], times[times.len() - 1]);
        Ok(Self { shape: ProfileShape::Sampled { times, values }, tau0, tauf })
    }

    /// Samples on the uniform grid `tau0 + k dt`.
    pub fn sampled_uniform(tau0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidProfile(format!("dt must be positive, got {dt}")));
        }
        let times = (0..values.len()).map(|k| tau0 + k as f64 * dt).collect();
        Self::sampled(times, values)
    }

    pub fn raised_cosine(
        amplitude: f64,
        omega_c: f64,
        phase: f64,
        rise_time: f64,
        tau0: f64,
        tauf: f64,
    ) -> Result<Self> {
        let base = Self::sinusoidal(amplitude, omega_c, phase, tau0, tauf)?;
        if !(rise_time.is_finite() && rise_time > 0.0 && 2.0 * rise_time <= tauf - tau0) {
            return Err(Error::InvalidProfile(format!(
                "rise_time must be positive and fit twice into the interval, got {rise_time}"
            )));
        }
        Ok(Self {
            shape: ProfileShape::RaisedCosine {
                amplitude,
                omega_c,
                phase,
                rise_time,
                window_start: tau0,
                window_end: tauf,
            },
            ..base
        })
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn tauf(&self) -> f64 {
        self.tauf
    }

    pub fn duration(&self) -> f64 {
        self.tauf - self.tau0
    }

    pub fn evaluate(&self, tau: f64) -> Result<f64> {
        if !(tau >= self.tau0 && tau <= self.tauf) {
            return Err(Error::OutsideInterval { tau, tau0: self.tau0, tauf: self.tauf });
        }
        Ok(self.eval_side(tau, true))
    }

    /// Value at `tau`, taking the right limit at jumps when `from_right` and the
    /// left limit otherwise. Only piecewise-constant profiles have jumps.
    pub(crate) fn eval_side(&self, tau: f64, from_right: bool) -> f64 {
        match &self.shape {
            ProfileShape::Sinusoidal { amplitude, omega_c, phase } => {
                amplitude * (omega_c * (tau - self.tau0) + phase).cos()
            }
            ProfileShape::PiecewiseConstant { segments } => {
                let mut start = self.tau0;
                for (k, s) in segments.iter().enumerate() {
                    let end = if k + 1 == segments.len() { self.tauf } else { start + s.duration };
                    let inside = if from_right { tau < end } else { tau <= end };
                    if inside {
                        return s.value;
                    }
                    start = end;
                }
                segments.last().map_or(0.0, |s| s.value)
            }
            ProfileShape::Ramp { .. } => {
                let (times, values) = self.ramp_nodes();
                interpolate(&times, &values, tau)
            }
            ProfileShape::Sampled { times, values } => interpolate(times, values, tau),
            ProfileShape::RaisedCosine { amplitude, omega_c, phase, rise_time, window_start, window_end } => {
                let envelope = raised_cosine_envelope(tau, *window_start, *window_end, *rise_time);
                amplitude * envelope * (omega_c * (tau - self.tau0) + phase).cos()
            }
        }
    }

    fn ramp_nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let ProfileShape::Ramp { amplitude, ramp_time, hold_time } = self.shape else {
            unreachable!("ramp_nodes called on a non-ramp profile")
        };
        let t1 = self.tau0 + ramp_time;
        let t2 = t1 + hold_time;
        if hold_time > 0.0 {
            (vec![self.tau0, t1, t2, self.tauf], vec![0.0, amplitude, amplitude, 0.0])
        } else {
            (vec![self.tau0, t1, self.tauf], vec![0.0, amplitude, 0.0])
        }
    }

    /// Points inside `(tau0, tauf)` where `h` or its derivative is not smooth.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        let interior = |v: Vec<f64>| v.into_iter().filter(|&t| t > self.tau0 && t < self.tauf).collect();
        match &self.shape {
            ProfileShape::Sinusoidal { .. } => Vec::new(),
            ProfileShape::PiecewiseConstant { segments } => interior(
                segments
                    .iter()
                    .scan(self.tau0, |t, s| {
                        *t += s.duration;
                        Some(*t)
                    })
                    .collect(),
            ),
            ProfileShape::Ramp { .. } => interior(self.ramp_nodes().0),
            ProfileShape::Sampled { times, .. } => interior(times.clone()),
            ProfileShape::RaisedCosine { rise_time, window_start, window_end, .. } => {
                interior(vec![window_start + rise_time, window_end - rise_time])
            }
        }
    }

    /// `(omega_c, phase)` for profiles of the form `envelope(tau) cos(omega_c (tau - tau0) + phase)`.
    pub(crate) fn carrier(&self) -> Option<(f64, f64)> {
        match &self.shape {
            ProfileShape::Sinusoidal { omega_c, phase, .. } | ProfileShape::RaisedCosine { omega_c, phase, .. } => {
                Some((*omega_c, *phase))
            }
            _ => None,
        }
    }

    /// `h` with its carrier removed; `h` itself when there is no carrier.
    pub(crate) fn envelope_side(&self, tau: f64, from_right: bool) -> f64 {
        match &self.shape {
            ProfileShape::Sinusoidal { amplitude, .. } => *amplitude,
            ProfileShape::RaisedCosine { amplitude, rise_time, window_start, window_end, .. } => {
                amplitude * raised_cosine_envelope(tau, *window_start, *window_end, *rise_time)
            }
            _ => self.eval_side(tau, from_right),
        }
    }

    /// Angular frequency the adaptive rule must resolve in the envelope.
    pub(crate) fn resolve_frequency(&self) -> f64 {
        match &self.shape {
            ProfileShape::RaisedCosine { rise_time, .. } => PI / rise_time,
            _ => 0.0,
        }
    }

    pub fn rigidity(&self) -> RigidityReport {
        let mut best = RigidityReport { sup_abs: 0.0, tau_at_sup: self.tau0 };
        let mut consider = |tau: f64, value: f64| {
            if value.abs() > best.sup_abs {
                best = RigidityReport { sup_abs: value.abs(), tau_at_sup: tau };
            }
        };
        match &self.shape {
            ProfileShape::Sinusoidal { amplitude, omega_c, phase } => {
                consider(self.tau0, self.eval_side(self.tau0, true));
                consider(self.tauf, self.eval_side(self.tauf, true));
                if *omega_c > 0.0 {
                    // extrema of cos sit at multiples of pi in the argument
                    let k = (phase / PI).ceil();
                    let tau_peak = self.tau0 + (k * PI - phase) / omega_c;
                    if tau_peak <= self.tauf {
                        consider(tau_peak, amplitude.abs());
                    }
                }
            }
            ProfileShape::PiecewiseConstant { segments } => {
                let mut start = self.tau0;
                for s in segments {
                    consider(start, s.value);
                    start += s.duration;
                }
            }
            ProfileShape::Ramp { amplitude, ramp_time, .. } => consider(self.tau0 + ramp_time, *amplitude),
            ProfileShape::Sampled { times, values } => {
                for (&t, &v) in times.iter().zip(values) {
                    consider(t, v);
                }
            }
            ProfileShape::RaisedCosine { omega_c, rise_time, .. } => {
                let per_unit = (omega_c.max(PI / rise_time) * 32.0 / (2.0 * PI)).max(1.0);
                let n = ((self.duration() * per_unit).ceil() as usize).clamp(1024, 4_000_000);
                for k in 0..=n {
                    let tau = self.tau0 + self.duration() * k as f64 / n as f64;
                    consider(tau, self.eval_side(tau, true));
                }
            }
        }
        best
    }

    /// Ok iff `sup |h| < 2`; the bound is strict.
    pub fn validate_rigidity(&self) -> std::result::Result<RigidityReport, RigidityViolation> {
        let report = self.rigidity();
        if report.is_rigid() {
            Ok(report)
        } else {
            Err(RigidityViolation { tau: report.tau_at_sup, value: report.sup_abs })
        }
    }

    /// Cut the profile at `tau_mid` into two contiguous profiles that agree with
    /// `self` pointwise.
    pub fn split_at(&self, tau_mid: f64) -> Result<(Self, Self)> {
        if !(tau_mid > self.tau0 && tau_mid < self.tauf) {
            return Err(Error::OutsideInterval { tau: tau_mid, tau0: self.tau0, tauf: self.tauf });
        }
        match &self.shape {
            ProfileShape::Sinusoidal { amplitude, omega_c, phase } => {
                let shifted = phase + omega_c * (tau_mid - self.tau0);
                Ok((
                    Self::sinusoidal(*amplitude, *omega_c, *phase, self.tau0, tau_mid)?,
                    Self::sinusoidal(*amplitude, *omega_c, shifted, tau_mid, self.tauf)?,
                ))
            }
            ProfileShape::RaisedCosine { amplitude, omega_c, phase, rise_time, window_start, window_end } => {
                let shifted = phase + omega_c * (tau_mid - self.tau0);
                let piece = |phase: f64, tau0: f64, tauf: f64| Self {
                    shape: ProfileShape::RaisedCosine {
                        amplitude: *amplitude,
                        omega_c: *omega_c,
                        phase,
                        rise_time: *rise_time,
                        window_start: *window_start,
                        window_end: *window_end,
                    },
                    tau0,
                    tauf,
                };
                Ok((piece(*phase, self.tau0, tau_mid), piece(shifted, tau_mid, self.tauf)))
            }
            ProfileShape::PiecewiseConstant { segments } => {
                let (mut first, mut second) = (Vec::new(), Vec::new());
                let mut start = self.tau0;
                for s in segments {
                    let end = start + s.duration;
                    if end <= tau_mid {
                        first.push(*s);
                    } else if start >= tau_mid {
                        second.push(*s);
                    } else {
                        first.push(Segment::new(tau_mid - start, s.value));
                        second.push(Segment::new(end - tau_mid, s.value));
                    }
                    start = end;
                }
                Ok((Self::piecewise_constant(self.tau0, first)?, Self::piecewise_constant(tau_mid, second)?))
            }
            ProfileShape::Ramp { .. } => {
                let (times, values) = self.ramp_nodes();
                Self::sampled(times, values)?.split_at(tau_mid)
            }
            ProfileShape::Sampled { times, values } => {
                let h_mid = interpolate(times, values, tau_mid);
                let cut = times.partition_point(|&t| t < tau_mid);
                let mut t1: Vec<f64> = times[..cut].to_vec();
                let mut v1: Vec<f64> = values[..cut].to_vec();
                t1.push(tau_mid);
                v1.push(h_mid);
                let skip = if times[cut] == tau_mid { cut + 1 } else { cut };
                let mut t2 = vec![tau_mid];
                let mut v2 = vec![h_mid];
                t2.extend_from_slice(&times[skip..]);
                v2.extend_from_slice(&values[skip..]);
                Ok((Self::sampled(t1, v1)?, Self::sampled(t2, v2)?))
            }
        }
    }

    /// `int_{tau0}^{tauf} exp(-i delta (tau - tau0)) h(tau) dtau` with the
    /// default tolerance.
    pub fn oscillatory_integral(&self, delta: f64) -> Result<OscillatoryIntegralResult> {
        self.oscillatory_integral_with(delta, &QuadratureConfig::default())
    }

    /// Closed-form kernels for sinusoidal, piecewise-constant and piecewise-linear
    /// profiles; adaptive Filon quadrature otherwise.
    pub fn oscillatory_integral_with(
        &self,
        delta: f64,
        config: &QuadratureConfig,
    ) -> Result<OscillatoryIntegralResult> {
        self.validate_rigidity()?;
        if !delta.is_finite() {
            return Err(Error::Quadrature(format!("kernel frequency must be finite, got {delta}")));
        }
        let result = match &self.shape {
            ProfileShape::Sinusoidal { amplitude, omega_c, phase } => {
                quadrature::sinusoid(*amplitude, *omega_c, *phase, self.duration(), delta)
            }
            ProfileShape::PiecewiseConstant { segments } => quadrature::piecewise_constant(segments, delta),
            ProfileShape::Ramp { .. } => {
                let (times, values) = self.ramp_nodes();
                quadrature::piecewise_linear(&times, &values, self.tau0, delta)
            }
            ProfileShape::Sampled { times, values } => quadrature::piecewise_linear(times, values, self.tau0, delta),
            ProfileShape::RaisedCosine { .. } => return self.oscillatory_integral_adaptive(delta, config),
        };
        if result.abs_error > config.tolerance {
            return Err(Error::Quadrature(format!(
                "estimated error {:.3e} exceeds tolerance {:.3e}",
                result.abs_error, config.tolerance
            )));
        }
        Ok(result)
    }

    /// Adaptive Filon route for any profile, ignoring closed forms.
    pub fn oscillatory_integral_adaptive(
        &self,
        delta: f64,
        config: &QuadratureConfig,
    ) -> Result<OscillatoryIntegralResult> {
        self.validate_rigidity()?;
        quadrature::adaptive_filon(self, delta, config)
    }
}

fn interpolate(times: &[f64], values: &[f64], tau: f64) -> f64 {
    let k = times.partition_point(|&t| t <= tau);
    if k == 0 {
        return values[0];
    }
    if k >= times.len() {
        return values[values.len() - 1];
    }
    let (t0, t1) = (times[k - 1], times[k]);
    let w = (tau - t0) / (t1 - t0);
    values[k - 1] + w * (values[k] - values[k - 1])
}

fn raised_cosine_envelope(tau: f64, start: f64, end: f64, rise: f64) -> f64 {
    let edge = (tau - start).min(end - tau);
    if edge <= 0.0 {
        0.0
    } else if edge >= rise {
        1.0
    } else {
        0.5 * (1.0 - (PI * edge / rise).cos())
    }
}
