//! Resonances of a sinusoidally shaken cavity.
//!
//! A drive `h0 cos(omega_c (tau - tau0))` makes `A_mn` grow linearly when
//! `omega_c = |w_m - w_n|` (mode mixing) and `B_mn` when `omega_c = w_m + w_n`
//! (particle creation). Everything else stays bounded.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bogoliubov::StaticCoefficients;
use crate::error::Result;
use crate::spectrum::{Axis, Cavity3D};

/// Paraxial approximations are trusted above this ratio of `(2/lambda)^2` to
/// the transverse load.
pub const PARAXIAL_RATIO_THRESHOLD: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonanceKind {
    ModeMixing,
    ParticleCreation,
}

impl ResonanceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ResonanceKind::ModeMixing => "mode_mixing",
            ResonanceKind::ParticleCreation => "particle_creation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceEntry {
    pub kind: ResonanceKind,
    /// Longitudinal mode numbers, `m < n`.
    pub pair: (u32, u32),
    pub omega_r: f64,
    /// Slope of `|A_mn|` (or `|B_mn|`) per unit `h0` at exact resonance.
    pub growth_rate_per_h0: f64,
}

/// All resonances within the truncation of `coeffs` whose frequency does not
/// exceed `max_omega`, sorted by frequency.
pub fn catalog_1d(coeffs: &StaticCoefficients, max_omega: f64) -> Vec<ResonanceEntry> {
    let cavity = coeffs.cavity();
    let n_max = cavity.n_max();
    let mut out = Vec::new();
    if !(max_omega > 0.0) {
        return out;
    }
    for m in 1..n_max {
        for n in (m + 1..=n_max).step_by(2) {
            let gap = cavity.gap_unchecked(n, m);
            if gap <= max_omega {
                out.push(ResonanceEntry {
                    kind: ResonanceKind::ModeMixing,
                    pair: (m, n),
                    omega_r: gap,
                    growth_rate_per_h0: coeffs.mixing_rate_per_h0(m, n).expect("pair inside truncation"),
                });
            }
            let sum = cavity.omega_unchecked(m) + cavity.omega_unchecked(n);
            if sum <= max_omega {
                out.push(ResonanceEntry {
                    kind: ResonanceKind::ParticleCreation,
                    pair: (m, n),
                    omega_r: sum,
                    growth_rate_per_h0: coeffs.creation_rate_per_h0(m, n).expect("pair inside truncation"),
                });
            }
        }
    }
    out.sort_by(|a, b| a.omega_r.total_cmp(&b.omega_r).then(a.kind.cmp(&b.kind)).then(a.pair.cmp(&b.pair)));
    out
}

/// Catalog of the box shaken along `axis`. Only the longitudinal number may
/// change, so this is the catalog of the reduced (1+1)-dimensional cavity.
pub fn catalog_3d(
    cavity: &Cavity3D,
    axis: Axis,
    transverse: [u32; 2],
    n_max: u32,
    max_omega: f64,
) -> Result<Vec<ResonanceEntry>> {
    let reduced = cavity.reduce_to_effective_1d(axis, transverse, n_max)?;
    Ok(catalog_1d(&StaticCoefficients::new(reduced), max_omega))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveAmplitude {
    /// Dimensionless peak `h0 = a L`.
    H0(f64),
    /// Displacement amplitude `d` of a cavity of length `length` oscillating at
    /// the resonance frequency, so `h0 = d omega_r^2 length`.
    Displacement { d: f64, length: f64 },
}

impl DriveAmplitude {
    pub fn h0(self, omega_r: f64) -> f64 {
        match self {
            DriveAmplitude::H0(h0) => h0,
            DriveAmplitude::Displacement { d, length } => d * omega_r * omega_r * length,
        }
    }
}

/// Linear growth rate of the resonant coefficient for a cosine drive.
pub fn predicted_mixing_growth(entry: &ResonanceEntry, amplitude: DriveAmplitude) -> f64 {
    entry.growth_rate_per_h0 * amplitude.h0(entry.omega_r)
}

/// `(2/lambda)^2 / ((m/Lx)^2 + (n/Ly)^2)`; the paraxial formulas need this large.
pub fn paraxial_ratio(wavelength: f64, lx: f64, ly: f64, m: u32, n: u32) -> f64 {
    let k = 2.0 / wavelength;
    let load = (m as f64 / lx).powi(2) + (n as f64 / ly).powi(2);
    k * k / load
}

pub fn paraxial_is_valid(ratio: f64) -> bool {
    ratio > PARAXIAL_RATIO_THRESHOLD
}

/// `(pi lambda / 4) |m^2 - m'^2| / Lx^2`, in inverse length.
pub fn paraxial_mixing_frequency(wavelength: f64, lx: f64, m: u32, m_prime: u32) -> f64 {
    let diff = (m as f64).powi(2) - (m_prime as f64).powi(2);
    0.25 * PI * wavelength * diff.abs() / (lx * lx)
}

/// `(pi/2) m m' d lambda / Lx^3`, growth of `|A|` per unit length of light travel.
pub fn paraxial_mixing_growth(wavelength: f64, lx: f64, m: u32, m_prime: u32, displacement: f64) -> f64 {
    0.5 * PI * (m * m_prime) as f64 * displacement * wavelength / lx.powi(3)
}
