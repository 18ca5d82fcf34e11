//! First-order Bogoliubov coefficients of a weakly accelerated cavity.
//!
//! To linear order in `h` the transformation between the inertial bases before
//! and after the acceleration segment is
//!
//! ```text
//! alpha = exp(i omega dtau) (1 + A),   beta = exp(i omega dtau) B,
//! A_mn = i (w_m - w_n) ahat_mn  int exp(-i (w_m - w_n)(tau - tau0)) h(tau) dtau,
//! B_mn = i (w_m + w_n) bhat_mn  int exp(-i (w_m + w_n)(tau - tau0)) h(tau) dtau,
//! ```
//!
//! where `ahat`, `bhat` are the static (uniform-acceleration) coefficients of
//! [`StaticCoefficients`]. Only pairs with `m + n` odd couple.

use std::f64::consts::PI;

use log::warn;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::profiles::{AccelerationProfile, QuadratureConfig};
use crate::spectrum::Cavity1D;

/// Above this `sup |h|` the first-order coefficients are only indicative.
pub const FIRST_ORDER_WARN_THRESHOLD: f64 = 0.1;

/// Residual below which the first-order Bogoliubov identities are deemed to hold.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StaticCoefficients {
    cavity: Cavity1D,
    alpha_hat: DMatrix<f64>,
    beta_hat: DMatrix<f64>,
    /// `(w_m - w_n) ahat_mn`, the finite combination entering `A`.
    mixing_weight: DMatrix<f64>,
    /// `(w_m + w_n) bhat_mn`.
    creation_weight: DMatrix<f64>,
}

impl StaticCoefficients {
    pub fn new(cavity: Cavity1D) -> Self {
        let n = cavity.n_max() as usize;
        let l4 = cavity.length().powi(4);
        let omega: Vec<f64> = (1..=n as u32).map(|k| cavity.omega_unchecked(k)).collect();

        let mut alpha_hat = DMatrix::zeros(n, n);
        let mut beta_hat = DMatrix::zeros(n, n);
        let mut mixing_weight = DMatrix::zeros(n, n);
        let mut creation_weight = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let (m, k) = (i as u32 + 1, j as u32 + 1);
                if (m + k) % 2 == 0 {
                    continue;
                }
                // parity factor (1 - (-1)^{m+n}) = 2 for the surviving pairs
                let numerator = 2.0 * PI * PI * (m * k) as f64;
                let root = (omega[i] * omega[j]).sqrt();
                let gap = cavity.gap_unchecked(m, k);
                let sum = omega[i] + omega[j];
                alpha_hat[(i, j)] = -numerator / (l4 * gap.powi(3) * root);
                beta_hat[(i, j)] = numerator / (l4 * sum.powi(3) * root);
                mixing_weight[(i, j)] = -numerator / (l4 * gap * gap * root);
                creation_weight[(i, j)] = numerator / (l4 * sum * sum * root);
            }
        }
        Self { cavity, alpha_hat, beta_hat, mixing_weight, creation_weight }
    }

    pub fn cavity(&self) -> &Cavity1D {
        &self.cavity
    }

    pub fn alpha_hat_matrix(&self) -> &DMatrix<f64> {
        &self.alpha_hat
    }

    pub fn beta_hat_matrix(&self) -> &DMatrix<f64> {
        &self.beta_hat
    }

    fn index(&self, m: u32, n: u32) -> Result<(usize, usize)> {
        let n_max = self.cavity.n_max();
        for q in [m, n] {
            if q == 0 {
                return Err(Error::ZeroQuantumNumber(q));
            }
            if q > n_max {
                return Err(Error::OutsideTruncation { n: q, n_max });
            }
        }
        Ok((m as usize - 1, n as usize - 1))
    }

    /// `ahat_mn` for 1-based mode numbers.
    pub fn alpha_hat(&self, m: u32, n: u32) -> Result<f64> {
        Ok(self.alpha_hat[self.index(m, n)?])
    }

    pub fn beta_hat(&self, m: u32, n: u32) -> Result<f64> {
        Ok(self.beta_hat[self.index(m, n)?])
    }

    /// Growth of `|A_mn|` per unit time and unit `h0` under a resonant cosine drive.
    pub fn mixing_rate_per_h0(&self, m: u32, n: u32) -> Result<f64> {
        Ok(0.5 * self.mixing_weight[self.index(m, n)?].abs())
    }

    pub fn creation_rate_per_h0(&self, m: u32, n: u32) -> Result<f64> {
        Ok(0.5 * self.creation_weight[self.index(m, n)?].abs())
    }

    /// `A_mn` alone, with the quadrature error bound it inherits.
    pub fn a_hat_entry(
        &self,
        m: u32,
        n: u32,
        profile: &AccelerationProfile,
        config: &QuadratureConfig,
    ) -> Result<(Complex64, f64)> {
        let idx = self.index(m, n)?;
        let weight = self.mixing_weight[idx];
        if weight == 0.0 {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let gap = self.cavity.gap_unchecked(m, n);
        let integral = profile.oscillatory_integral_with(gap, config)?;
        Ok((I * weight * integral.value, weight.abs() * integral.abs_error))
    }

    pub fn b_hat_entry(
        &self,
        m: u32,
        n: u32,
        profile: &AccelerationProfile,
        config: &QuadratureConfig,
    ) -> Result<(Complex64, f64)> {
        let idx = self.index(m, n)?;
        let weight = self.creation_weight[idx];
        if weight == 0.0 {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let sum = self.cavity.omega_unchecked(m) + self.cavity.omega_unchecked(n);
        let integral = profile.oscillatory_integral_with(sum, config)?;
        Ok((I * weight * integral.value, weight.abs() * integral.abs_error))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderBogoliubovMap {
    cavity: Cavity1D,
    tau0: f64,
    tauf: f64,
    a_hat: DMatrix<Complex64>,
    b_hat: DMatrix<Complex64>,
    phases: DVector<f64>,
    quadrature_error: f64,
}

impl FirstOrderBogoliubovMap {
    /// Pure free evolution over `[tau0, tauf]` (`A = B = 0`).
    pub fn free(cavity: Cavity1D, tau0: f64, tauf: f64) -> Result<Self> {
        if !(tau0.is_finite() && tauf.is_finite() && tauf >= tau0) {
            return Err(Error::InvalidProfile(format!("bad interval [{tau0}, {tauf}]")));
        }
        let n = cavity.n_max() as usize;
        Ok(Self {
            phases: free_phases(&cavity, tauf - tau0),
            cavity,
            tau0,
            tauf,
            a_hat: DMatrix::zeros(n, n),
            b_hat: DMatrix::zeros(n, n),
            quadrature_error: 0.0,
        })
    }

    /// Zero-duration map at `tau`; neutral under [`compose`].
    pub fn identity(cavity: Cavity1D, tau: f64) -> Result<Self> {
        Self::free(cavity, tau, tau)
    }

    pub fn cavity(&self) -> &Cavity1D {
        &self.cavity
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

    pub fn a_hat_matrix(&self) -> &DMatrix<Complex64> {
        &self.a_hat
    }

    pub fn b_hat_matrix(&self) -> &DMatrix<Complex64> {
        &self.b_hat
    }

    /// Free-evolution phases `omega_n dtau`.
    pub fn phases(&self) -> &DVector<f64> {
        &self.phases
    }

    /// Largest error bound carried by any entry of `A` or `B`.
    pub fn quadrature_error(&self) -> f64 {
        self.quadrature_error
    }

    fn index(&self, m: u32, n: u32) -> Result<(usize, usize)> {
        let n_max = self.cavity.n_max();
        for q in [m, n] {
            if q == 0 {
                return Err(Error::ZeroQuantumNumber(q));
            }
            if q > n_max {
                return Err(Error::OutsideTruncation { n: q, n_max });
            }
        }
        Ok((m as usize - 1, n as usize - 1))
    }

    pub fn a_hat(&self, m: u32, n: u32) -> Result<Complex64> {
        Ok(self.a_hat[self.index(m, n)?])
    }

    pub fn b_hat(&self, m: u32, n: u32) -> Result<Complex64> {
        Ok(self.b_hat[self.index(m, n)?])
    }

    /// `alpha = exp(i omega dtau) (1 + A)` truncated to first order.
    pub fn alpha(&self) -> DMatrix<Complex64> {
        let n = self.a_hat.nrows();
        let rotated = DMatrix::identity(n, n) + &self.a_hat;
        DMatrix::from_fn(n, n, |i, j| Complex64::from_polar(1.0, self.phases[i]) * rotated[(i, j)])
    }

    /// `beta = exp(i omega dtau) B`.
    pub fn beta(&self) -> DMatrix<Complex64> {
        let n = self.b_hat.nrows();
        DMatrix::from_fn(n, n, |i, j| Complex64::from_polar(1.0, self.phases[i]) * self.b_hat[(i, j)])
    }
}

fn free_phases(cavity: &Cavity1D, duration: f64) -> DVector<f64> {
    DVector::from_iterator(cavity.n_max() as usize, (1..=cavity.n_max()).map(|n| cavity.omega_unchecked(n) * duration))
}

/// Build `A`, `B` and the free phases for `profile` with default quadrature settings.
pub fn first_order_map(coeffs: &StaticCoefficients, profile: &AccelerationProfile) -> Result<FirstOrderBogoliubovMap> {
    first_order_map_with(coeffs, profile, &QuadratureConfig::default())
}

pub fn first_order_map_with(
    coeffs: &StaticCoefficients,
    profile: &AccelerationProfile,
    config: &QuadratureConfig,
) -> Result<FirstOrderBogoliubovMap> {
    let report = profile.validate_rigidity()?;
    if report.sup_abs > FIRST_ORDER_WARN_THRESHOLD {
        warn!(
            "sup|h| = {:.3} exceeds {FIRST_ORDER_WARN_THRESHOLD}; first-order coefficients are only indicative",
            report.sup_abs
        );
    }
    let cavity = *coeffs.cavity();
    let n = cavity.n_max() as usize;
    let mut a_hat = DMatrix::zeros(n, n);
    let mut b_hat = DMatrix::zeros(n, n);
    let mut quadrature_error: f64 = 0.0;
    // each entry is integrated independently so that the identity checks below
    // test the numerics rather than a symmetrised construction
    for i in 0..n {
        for j in 0..n {
            let (m, k) = (i as u32 + 1, j as u32 + 1);
            let (a, ea) = coeffs.a_hat_entry(m, k, profile, config)?;
            let (b, eb) = coeffs.b_hat_entry(m, k, profile, config)?;
            a_hat[(i, j)] = a;
            b_hat[(i, j)] = b;
            quadrature_error = quadrature_error.max(ea).max(eb);
        }
    }
    Ok(FirstOrderBogoliubovMap {
        phases: free_phases(&cavity, profile.duration()),
        cavity,
        tau0: profile.tau0(),
        tauf: profile.tauf(),
        a_hat,
        b_hat,
        quadrature_error,
    })
}

/// First-order product `U_second U_first`: the later map's coefficients are
/// conjugated by the earlier free evolution,
/// `A = A1 + e^{-i w T1} A2 e^{i w T1}`, `B = B1 + e^{-i w T1} B2 e^{-i w T1}`.
pub fn compose(first: &FirstOrderBogoliubovMap, second: &FirstOrderBogoliubovMap) -> Result<FirstOrderBogoliubovMap> {
    if first.cavity != second.cavity {
        return Err(Error::Incompatible(format!("cavities differ: {:?} vs {:?}", first.cavity, second.cavity)));
    }
    let scale = 1.0f64.max(first.tauf.abs());
    if (second.tau0 - first.tauf).abs() > 1e-9 * scale {
        return Err(Error::Incompatible(format!(
            "second map starts at {} but first ends at {}",
            second.tau0, first.tauf
        )));
    }
    let n = first.a_hat.nrows();
    let rot: Vec<Complex64> = first.phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
    let a_hat = DMatrix::from_fn(n, n, |i, j| first.a_hat[(i, j)] + rot[i].conj() * second.a_hat[(i, j)] * rot[j]);
    let b_hat =
        DMatrix::from_fn(n, n, |i, j| first.b_hat[(i, j)] + rot[i].conj() * second.b_hat[(i, j)] * rot[j].conj());
    Ok(FirstOrderBogoliubovMap {
        cavity: first.cavity,
        tau0: first.tau0,
        tauf: second.tauf,
        a_hat,
        b_hat,
        phases: &first.phases + &second.phases,
        quadrature_error: first.quadrature_error + second.quadrature_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// `max |(A + A^dagger)_mn|`.
    pub anti_hermitian_residual: f64,
    /// `max |(B - B^T)_mn|`.
    pub symmetry_residual: f64,
    /// `max |A_mn|, |B_mn|` over pairs with `m + n` even; zero by selection rule.
    pub parity_residual: f64,
    pub quadrature_error: f64,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.anti_hermitian_residual < IDENTITY_TOLERANCE
            && self.symmetry_residual < IDENTITY_TOLERANCE
            && self.parity_residual == 0.0
    }
}

/// The Bogoliubov identities `U diag(1,-1) U^dagger = diag(1,-1)` reduce at first
/// order to `A` anti-Hermitian and `B` symmetric.
pub fn verify_first_order_identities(map: &FirstOrderBogoliubovMap) -> IdentityReport {
    let n = map.a_hat.nrows();
    let mut report = IdentityReport {
        anti_hermitian_residual: 0.0,
        symmetry_residual: 0.0,
        parity_residual: 0.0,
        quadrature_error: map.quadrature_error,
    };
    for i in 0..n {
        for j in 0..n {
            let ah = (map.a_hat[(i, j)] + map.a_hat[(j, i)].conj()).norm();
            let sym = (map.b_hat[(i, j)] - map.b_hat[(j, i)]).norm();
            report.anti_hermitian_residual = report.anti_hermitian_residual.max(ah);
            report.symmetry_residual = report.symmetry_residual.max(sym);
            if (i + j) % 2 == 0 {
                let leak = map.a_hat[(i, j)].norm().max(map.b_hat[(i, j)].norm());
                report.parity_residual = report.parity_residual.max(leak);
            }
        }
    }
    report
}
