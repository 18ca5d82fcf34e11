//! Dirichlet mode spectra of rigid cavities in natural units (c = hbar = 1).
//!
//! A (1+1)-dimensional cavity of length `L` holding a field of mass `mu0` has
//! modes `n = 1, 2, ...` with `omega_n = sqrt(mu0^2 + (pi n / L)^2)`. The
//! rectangular (3+1)-dimensional box behaves, along any principal axis, like a
//! (1+1)-dimensional cavity whose mass absorbs the transverse momenta.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cavity1D {
    length: f64,
    mass: f64,
    n_max: u32,
}

impl Cavity1D {
    pub fn new(length: f64, mass: f64, n_max: u32) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidCavity(format!("length must be positive, got {length}")));
        }
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(Error::InvalidCavity(format!("mass must be non-negative, got {mass}")));
        }
        if n_max < 2 {
            return Err(Error::InvalidCavity(format!("n_max must be at least 2, got {n_max}")));
        }
        Ok(Self { length, mass, n_max })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// The dimensionless combination the static coefficients depend on.
    pub fn mass_length(&self) -> f64 {
        self.mass * self.length
    }

    /// Same cavity with a different truncation order.
    pub fn with_n_max(&self, n_max: u32) -> Result<Self> {
        Self::new(self.length, self.mass, n_max)
    }

    pub fn omega(&self, n: u32) -> Result<f64> {
        if n == 0 {
            return Err(Error::ZeroQuantumNumber(n));
        }
        Ok(self.omega_unchecked(n))
    }

    pub(crate) fn omega_unchecked(&self, n: u32) -> f64 {
        self.mass.hypot(PI * n as f64 / self.length)
    }

    /// `omega_m - omega_n` evaluated as `(omega_m^2 - omega_n^2) / (omega_m + omega_n)`.
    ///
    /// The numerator is formed from the quantum numbers alone, so the difference
    /// keeps full relative precision even when `mu0 L` is huge and the two
    /// frequencies agree to many digits.
    pub fn frequency_gap(&self, m: u32, n: u32) -> Result<f64> {
        if m == 0 || n == 0 {
            return Err(Error::ZeroQuantumNumber(m.min(n)));
        }
        Ok(self.gap_unchecked(m, n))
    }

    pub(crate) fn gap_unchecked(&self, m: u32, n: u32) -> f64 {
        let k = PI / self.length;
        let sum = self.omega_unchecked(m) + self.omega_unchecked(n);
        let (m, n) = (m as f64, n as f64);
        k * k * (m - n) * (m + n) / sum
    }

    pub fn mode(&self, n: u32) -> Result<ModeSpec> {
        Ok(ModeSpec { numbers: QuantumNumbers::Single(n), omega: self.omega(n)? })
    }

    /// Modes `1..=n_max`.
    pub fn modes(&self) -> impl Iterator<Item = ModeSpec> + '_ {
        (1..=self.n_max).map(move |n| ModeSpec { numbers: QuantumNumbers::Single(n), omega: self.omega_unchecked(n) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The two remaining axes, in cyclic-free ascending order.
    pub fn transverse(self) -> [Axis; 2] {
        match self {
            Axis::X => [Axis::Y, Axis::Z],
            Axis::Y => [Axis::X, Axis::Z],
            Axis::Z => [Axis::X, Axis::Y],
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cavity3D {
    edges: [f64; 3],
    mass: f64,
}

impl Cavity3D {
    pub fn new(lx: f64, ly: f64, lz: f64, mass: f64) -> Result<Self> {
        for (name, edge) in [("lx", lx), ("ly", ly), ("lz", lz)] {
            if !(edge.is_finite() && edge > 0.0) {
                return Err(Error::InvalidCavity(format!("{name} must be positive, got {edge}")));
            }
        }
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(Error::InvalidCavity(format!("mass must be non-negative, got {mass}")));
        }
        Ok(Self { edges: [lx, ly, lz], mass })
    }

    pub fn edges(&self) -> [f64; 3] {
        self.edges
    }

    pub fn edge(&self, axis: Axis) -> f64 {
        self.edges[axis.index()]
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self, m: u32, n: u32, p: u32) -> Result<f64> {
        if let Some(&zero) = [m, n, p].iter().find(|&&q| q == 0) {
            return Err(Error::ZeroQuantumNumber(zero));
        }
        let [lx, ly, lz] = self.edges;
        let kx = PI * m as f64 / lx;
        let ky = PI * n as f64 / ly;
        let kz = PI * p as f64 / lz;
        Ok((self.mass * self.mass + kx * kx + ky * ky + kz * kz).sqrt())
    }

    pub fn mode(&self, m: u32, n: u32, p: u32) -> Result<ModeSpec> {
        Ok(ModeSpec { numbers: QuantumNumbers::Triple(m, n, p), omega: self.omega(m, n, p)? })
    }

    /// Collapse the box onto `axis`: the transverse quantum numbers (ordered as
    /// in [`Axis::transverse`]) become part of an effective mass.
    pub fn reduce_to_effective_1d(&self, axis: Axis, transverse: [u32; 2], n_max: u32) -> Result<Cavity1D> {
        if let Some(&zero) = transverse.iter().find(|&&q| q == 0) {
            return Err(Error::ZeroQuantumNumber(zero));
        }
        let mut mass_sq = self.mass * self.mass;
        for (t_axis, q) in axis.transverse().into_iter().zip(transverse) {
            let k = PI * q as f64 / self.edge(t_axis);
            mass_sq += k * k;
        }
        Cavity1D::new(self.edge(axis), mass_sq.sqrt(), n_max)
    }

    /// Full triple for longitudinal number `k` along `axis` with the given
    /// transverse numbers.
    pub fn triple(axis: Axis, k: u32, transverse: [u32; 2]) -> (u32, u32, u32) {
        match axis {
            Axis::X => (k, transverse[0], transverse[1]),
            Axis::Y => (transverse[0], k, transverse[1]),
            Axis::Z => (transverse[0], transverse[1], k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantumNumbers {
    Single(u32),
    Triple(u32, u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub numbers: QuantumNumbers,
    pub omega: f64,
}
