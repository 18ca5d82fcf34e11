//! Laboratory estimates in SI units for an optical cavity shaken transversely
//! to the direction in which its light travels.
//!
//! Light of wavelength `lambda` bouncing along `z` gives the cavity modes a
//! large effective mass, so mode mixing between transverse numbers `m` and
//! `m'` along the shaken axis resonates at the low frequency
//! `omega_c = c (pi lambda / 4) |m^2 - m'^2| / Lx^2`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bogoliubov::StaticCoefficients;
use crate::error::{Error, Result};
use crate::profiles::RIGIDITY_BOUND;
use crate::resonance::{self, DriveAmplitude, ResonanceKind};
use crate::spectrum::{Axis, Cavity3D};

/// Metres per second, exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Relative change on doubling the cutoff at which the bound sum is accepted.
const BOUND_CONVERGENCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Motion {
    /// Harmonic oscillation of amplitude `amplitude` (m) along `axis` (x or y).
    Linear { axis: Axis, amplitude: f64 },
    /// Circular motion in the x-y plane with radii `dx`, `dy` (m).
    Circular { dx: f64, dy: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentPlan {
    pub wavelength: f64,
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
    pub motion: Motion,
    /// Mode numbers along the shaken axis.
    pub modes: (u32, u32),
    /// Mode number along the other in-plane axis.
    pub transverse: u32,
    /// Mode whose particle-creation bound is reported.
    pub bound_mode: [u32; 3],
}

impl ExperimentPlan {
    pub fn new(wavelength: f64, lx: f64, ly: f64, lz: f64, motion: Motion, modes: (u32, u32)) -> Self {
        Self { wavelength, lx, ly, lz, motion, modes, transverse: 1, bound_mode: [1, 1, 1] }
    }

    /// Axis whose resonance is driven and its displacement amplitude. Circular
    /// motion is analysed through its x component.
    pub fn driven(&self) -> (Axis, f64) {
        match self.motion {
            Motion::Linear { axis, amplitude } => (axis, amplitude),
            Motion::Circular { dx, .. } => (Axis::X, dx),
        }
    }

    fn edge(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.lx,
            Axis::Y => self.ly,
            Axis::Z => self.lz,
        }
    }

    fn other_in_plane(axis: Axis) -> Axis {
        if axis == Axis::X {
            Axis::Y
        } else {
            Axis::X
        }
    }

    /// Longitudinal number of light of this wavelength along z.
    pub fn longitudinal_number(&self) -> u32 {
        (2.0 * self.lz / self.wavelength).round().max(1.0) as u32
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("wavelength", self.wavelength), ("lx", self.lx), ("ly", self.ly), ("lz", self.lz)] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::InvalidPlan(format!("{name} must be positive, got {x}")));
            }
        }
        let min_edge = self.lx.min(self.ly).min(self.lz);
        if self.wavelength >= min_edge / 100.0 {
            return Err(Error::InvalidPlan(format!(
                "wavelength {} m is not small against the shortest edge {min_edge} m (need < edge/100)",
                self.wavelength
            )));
        }
        let (m, mp) = self.modes;
        if m == 0 || mp == 0 || self.transverse == 0 || self.bound_mode.contains(&0) {
            return Err(Error::InvalidPlan("mode numbers start at 1".into()));
        }
        if (m + mp) % 2 == 0 {
            return Err(Error::InvalidPlan(format!("modes ({m}, {mp}) must differ by an odd number")));
        }
        let amplitudes: &[f64] = match &self.motion {
            Motion::Linear { axis: Axis::Z, .. } => {
                return Err(Error::InvalidPlan("linear motion must be transverse to the light (x or y)".into()));
            }
            Motion::Linear { amplitude, .. } => &[*amplitude],
            Motion::Circular { dx, dy } => &[*dx, *dy],
        };
        if let Some(bad) = amplitudes.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(Error::InvalidPlan(format!("amplitudes must be non-negative, got {bad}")));
        }
        Ok(())
    }

    pub fn paraxial_ratio(&self) -> f64 {
        let (axis, _) = self.driven();
        let m = self.modes.0.max(self.modes.1);
        let other = Self::other_in_plane(axis);
        resonance::paraxial_ratio(self.wavelength, self.edge(axis), self.edge(other), m, self.transverse)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaBound {
    /// Sum over `m'` of the squared coefficient per unit `(a L / c^2)`.
    pub factor: f64,
    /// `(a L / c^2)^2`.
    pub scale: f64,
    pub product: f64,
    /// Last `m'` included.
    pub cutoff: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanReport {
    pub omega_c_per_second: f64,
    pub omega_c_per_meter: f64,
    pub oscillation_frequency_hz: f64,
    pub growth_rate_per_second: f64,
    /// `1 / growth rate`: when the first-order `|A|` would reach one. Only an
    /// indicator; the expansion fails before that.
    pub time_to_unity_seconds: f64,
    /// `a L / c^2` at the peak of the drive.
    pub peak_h: f64,
    pub rigid: bool,
    pub paraxial_ratio: f64,
    pub beta_bound: BetaBound,
    pub rpm: Option<f64>,
    pub centripetal_acceleration: Option<f64>,
}

impl PlanReport {
    /// Name/value pairs for tabular output; absent values are skipped.
    pub fn fields(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("omega_c_per_second", self.omega_c_per_second),
            ("omega_c_per_meter", self.omega_c_per_meter),
            ("oscillation_frequency_hz", self.oscillation_frequency_hz),
            ("growth_rate_per_second", self.growth_rate_per_second),
            ("time_to_unity_seconds", self.time_to_unity_seconds),
            ("peak_h", self.peak_h),
            ("rigid", if self.rigid { 1.0 } else { 0.0 }),
            ("paraxial_ratio", self.paraxial_ratio),
            ("beta_bound_factor", self.beta_bound.factor),
            ("beta_bound_scale", self.beta_bound.scale),
            ("beta_bound_squared", self.beta_bound.product),
        ];
        if let Some(rpm) = self.rpm {
            out.push(("rpm", rpm));
        }
        if let Some(a) = self.centripetal_acceleration {
            out.push(("centripetal_acceleration", a));
        }
        out
    }
}

/// Paraxial estimates for `input`.
pub fn plan(input: &ExperimentPlan) -> Result<PlanReport> {
    input.validate()?;
    let ratio = input.paraxial_ratio();
    if !resonance::paraxial_is_valid(ratio) {
        return Err(Error::Paraxial { ratio });
    }
    let (axis, d) = input.driven();
    let length = input.edge(axis);
    let (m, mp) = input.modes;

    let omega_c_per_meter = resonance::paraxial_mixing_frequency(input.wavelength, length, m, mp);
    let omega_c_per_second = SPEED_OF_LIGHT * omega_c_per_meter;
    let growth_rate_per_second = SPEED_OF_LIGHT * resonance::paraxial_mixing_growth(input.wavelength, length, m, mp, d);
    let peak_h = d * omega_c_per_meter * omega_c_per_meter * length;
    if peak_h >= RIGIDITY_BOUND {
        return Err(Error::InvalidPlan(format!(
            "peak h = {peak_h:.3e} violates the rigidity bound |a| L / c^2 < {RIGIDITY_BOUND}"
        )));
    }
    let acceleration = d * omega_c_per_second * omega_c_per_second;
    let circular = matches!(input.motion, Motion::Circular { .. });

    Ok(PlanReport {
        omega_c_per_second,
        omega_c_per_meter,
        oscillation_frequency_hz: omega_c_per_second / (2.0 * PI),
        growth_rate_per_second,
        time_to_unity_seconds: 1.0 / growth_rate_per_second,
        peak_h,
        rigid: peak_h < RIGIDITY_BOUND,
        paraxial_ratio: ratio,
        beta_bound: beta_bound_for(input, acceleration)?,
        rpm: circular.then(|| omega_c_per_second * 60.0 / (2.0 * PI)),
        centripetal_acceleration: circular.then_some(acceleration),
    })
}

/// [`plan`] for circular motion, which also reports the angular velocity in
/// rpm and the centripetal acceleration `d omega_c^2`.
pub fn circular_report(input: &ExperimentPlan) -> Result<PlanReport> {
    if !matches!(input.motion, Motion::Circular { .. }) {
        return Err(Error::InvalidPlan("circular report needs circular motion".into()));
    }
    plan(input)
}

/// Upper bound on particles created in `bound_mode` by a sudden switch-on and
/// switch-off of the drive at the mixing resonance.
pub fn beta_bound(input: &ExperimentPlan) -> Result<BetaBound> {
    input.validate()?;
    let (axis, d) = input.driven();
    let omega_c =
        resonance::paraxial_mixing_frequency(input.wavelength, input.edge(axis), input.modes.0, input.modes.1)
            * SPEED_OF_LIGHT;
    beta_bound_for(input, d * omega_c * omega_c)
}

fn beta_bound_for(input: &ExperimentPlan, acceleration: f64) -> Result<BetaBound> {
    let (axis, _) = input.driven();
    let length = input.edge(axis);
    let cavity = Cavity3D::new(input.lx, input.ly, input.lz, 0.0)?;
    let [bx, by, bz] = input.bound_mode;
    let (k, transverse) = match axis {
        Axis::X => (bx, [by, bz]),
        Axis::Y => (by, [bx, bz]),
        Axis::Z => (bz, [bx, by]),
    };
    let omega_of = |q: u32| {
        let (a, b, c) = Cavity3D::triple(axis, q, transverse);
        cavity.omega(a, b, c)
    };
    let w = omega_of(k)?;
    let l4 = length.powi(4);
    let term = |q: u32| -> Result<f64> {
        let wq = omega_of(q)?;
        let x = 2.0 * PI * PI * (k * q) as f64 / (l4 * (w + wq).powi(3) * (w * wq).sqrt());
        Ok(x * x)
    };

    let mut cutoff = 16u32;
    let mut partial = 0.0;
    let mut next = 1u32;
    let mut previous = f64::NAN;
    loop {
        while next <= cutoff {
            if (k + next) % 2 == 1 {
                partial += term(next)?;
            }
            next += 1;
        }
        if previous.is_finite() && (partial - previous).abs() <= BOUND_CONVERGENCE * partial.abs() {
            break;
        }
        if cutoff > 1 << 24 {
            return Err(Error::Quadrature(format!("bound sum not converged at cutoff {cutoff}")));
        }
        previous = partial;
        cutoff *= 2;
    }
    let h = acceleration * length / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);
    let scale = h * h;
    Ok(BetaBound { factor: partial, scale, product: partial * scale, cutoff })
}

/// The plan's resonance and growth rate recomputed without the paraxial
/// approximation, through the exact spectrum of the box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactCheck {
    pub omega_c_per_second: f64,
    pub growth_rate_per_second: f64,
}

pub fn exact_check(input: &ExperimentPlan) -> Result<ExactCheck> {
    input.validate()?;
    let (axis, d) = input.driven();
    let length = input.edge(axis);
    let (lo, hi) = (input.modes.0.min(input.modes.1), input.modes.0.max(input.modes.1));
    let cavity = Cavity3D::new(input.lx, input.ly, input.lz, 0.0)?;
    let transverse = [input.transverse, input.longitudinal_number()];
    let reduced = cavity.reduce_to_effective_1d(axis, transverse, hi.max(2))?;
    let coeffs = StaticCoefficients::new(reduced);
    let entry = resonance::catalog_1d(&coeffs, f64::MAX)
        .into_iter()
        .find(|e| e.kind == ResonanceKind::ModeMixing && e.pair == (lo, hi))
        .ok_or_else(|| Error::InvalidPlan(format!("no mixing resonance for ({lo}, {hi})")))?;
    let rate = resonance::predicted_mixing_growth(&entry, DriveAmplitude::Displacement { d, length });
    Ok(ExactCheck { omega_c_per_second: entry.omega_r * SPEED_OF_LIGHT, growth_rate_per_second: rate * SPEED_OF_LIGHT })
}
