//! Gaussian states of cavity modes and the entanglement created by mode mixing.
//!
//! Quadratures are ordered `(q1, p1, q2, p2, ...)` with `a = (q + i p)/sqrt 2`,
//! and covariances are normalised so that the vacuum has `sigma = 1`.

use log::warn;
use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::bogoliubov::{FirstOrderBogoliubovMap, StaticCoefficients};
use crate::error::{Error, Result};
use crate::profiles::{AccelerationProfile, QuadratureConfig};

const SYMMETRY_TOLERANCE: f64 = 1e-12;
const BONA_FIDE_TOLERANCE: f64 = 1e-10;
const PAIRING_TOLERANCE: f64 = 1e-8;

/// `first_order_negativity` assumes `|B| <= B_NEGLIGIBLE |A|`.
pub const B_NEGLIGIBLE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Self {
        let mut matrix = DMatrix::zeros(2 * modes, 2 * modes);
        for k in 0..modes {
            matrix[(2 * k, 2 * k + 1)] = 1.0;
            matrix[(2 * k + 1, 2 * k)] = -1.0;
        }
        Self { matrix }
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `max |S Omega S^T - Omega|`.
    pub fn residual(&self, s: &DMatrix<f64>) -> f64 {
        (s * &self.matrix * s.transpose() - &self.matrix).amax()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    moments: DVector<f64>,
    sigma: DMatrix<f64>,
}

impl CovarianceState {
    /// Checked constructor: `sigma` must be symmetric and satisfy
    /// `sigma + i Omega >= 0`.
    pub fn new(moments: DVector<f64>, sigma: DMatrix<f64>) -> Result<Self> {
        let dim = sigma.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || sigma.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "covariance must be square with even size, got {}x{}",
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        if moments.len() != dim {
            return Err(Error::InvalidState(format!("{} first moments for a {dim}x{dim} covariance", moments.len())));
        }
        let asym = (&sigma - sigma.transpose()).amax();
        if asym > SYMMETRY_TOLERANCE * sigma.amax().max(1.0) {
            return Err(Error::InvalidState(format!("covariance not symmetric (residual {asym:.3e})")));
        }
        let omega = SymplecticForm::new(dim / 2);
        let hermitian = DMatrix::from_fn(dim, dim, |i, j| Complex64::new(sigma[(i, j)], omega.matrix[(i, j)]));
        let lowest = hermitian.symmetric_eigenvalues().min();
        if lowest < -BONA_FIDE_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "sigma + i Omega has eigenvalue {lowest:.3e}; not a physical state"
            )));
        }
        Ok(Self { moments, sigma })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self { moments: DVector::zeros(2 * modes), sigma: DMatrix::identity(2 * modes, 2 * modes) }
    }

    /// Every mode squeezed along the same axis by `s`: per-mode block
    /// `diag(e^{s}, e^{-s})`, zero moments.
    pub fn squeezed_vacuum(modes: usize, s: f64) -> Result<Self> {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::InvalidState(format!("squeezing must be >= 0, got {s}")));
        }
        let mut sigma = DMatrix::zeros(2 * modes, 2 * modes);
        for k in 0..modes {
            sigma[(2 * k, 2 * k)] = s.exp();
            sigma[(2 * k + 1, 2 * k + 1)] = (-s).exp();
        }
        Ok(Self { moments: DVector::zeros(2 * modes), sigma })
    }

    pub fn modes(&self) -> usize {
        self.sigma.nrows() / 2
    }

    pub fn moments(&self) -> &DVector<f64> {
        &self.moments
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// `sigma -> S sigma S^T`, moments `-> S x`. No physicality check, since a
    /// first-order `S` is symplectic only up to `O(h^2)`.
    pub fn transform(&self, s: &DMatrix<f64>) -> Result<Self> {
        let dim = self.sigma.nrows();
        if s.nrows() != dim || s.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "transform is {}x{} but state has dimension {dim}",
                s.nrows(),
                s.ncols()
            )));
        }
        Ok(Self { moments: s * &self.moments, sigma: s * &self.sigma * s.transpose() })
    }

    /// Reduced state of modes `i`, `j` (0-based).
    pub fn reduce(&self, i: usize, j: usize) -> Result<TwoModeReduction> {
        let n = self.modes();
        if i >= n || j >= n || i == j {
            return Err(Error::InvalidState(format!("cannot reduce to modes ({i}, {j}) of {n}")));
        }
        let idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1];
        let sigma_red = Matrix4::from_fn(|r, c| self.sigma[(idx[r], idx[c])]);
        Ok(TwoModeReduction { pair: (i, j), sigma_red })
    }

    /// `det sigma`, equal to 1 for pure states.
    pub fn purity_determinant(&self) -> f64 {
        self.sigma.determinant()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeReduction {
    pub pair: (usize, usize),
    pub sigma_red: Matrix4<f64>,
}

impl TwoModeReduction {
    pub fn negativity(&self) -> Result<f64> {
        negativity(&self.sigma_red)
    }
}

fn restrict(m: &DMatrix<Complex64>, idx: &[usize]) -> DMatrix<Complex64> {
    DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Real quadrature form of `a_out = M a + N a^dagger` with `M = conj(alpha)`,
/// `N = -conj(beta)`.
fn quadrature_representation(alpha: &DMatrix<Complex64>, beta: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = alpha.nrows();
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let m = alpha[(j, k)].conj();
            let nn = -beta[(j, k)].conj();
            let (plus, minus) = (m + nn, m - nn);
            s[(2 * j, 2 * k)] = plus.re;
            s[(2 * j, 2 * k + 1)] = -minus.im;
            s[(2 * j + 1, 2 * k)] = plus.im;
            s[(2 * j + 1, 2 * k + 1)] = minus.re;
        }
    }
    s
}

fn map_blocks(map: &FirstOrderBogoliubovMap, include_free_phases: bool) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    if include_free_phases {
        (map.alpha(), map.beta())
    } else {
        let n = map.a_hat_matrix().nrows();
        (DMatrix::identity(n, n) + map.a_hat_matrix(), map.b_hat_matrix().clone())
    }
}

/// The 4x4 quadrature matrix of `map` restricted to modes `(m, n)` (1-based).
pub fn symplectic_from_map(
    map: &FirstOrderBogoliubovMap,
    pair: (u32, u32),
    include_free_phases: bool,
) -> Result<Matrix4<f64>> {
    let (m, n) = pair;
    if m == n {
        return Err(Error::InvalidState(format!("pair must hold two distinct modes, got ({m}, {n})")));
    }
    // bounds and zero checks
    map.a_hat(m, n)?;
    let (alpha, beta) = map_blocks(map, include_free_phases);
    let idx = [m as usize - 1, n as usize - 1];
    let s = quadrature_representation(&restrict(&alpha, &idx), &restrict(&beta, &idx));
    Ok(Matrix4::from_fn(|r, c| s[(r, c)]))
}

/// Quadrature matrix of the whole truncated map (`2 n_max` square).
pub fn symplectic_full(map: &FirstOrderBogoliubovMap, include_free_phases: bool) -> DMatrix<f64> {
    let (alpha, beta) = map_blocks(map, include_free_phases);
    quadrature_representation(&alpha, &beta)
}

/// `P sigma P` with `P = diag(1, 1, 1, -1)`: time reversal of the second mode.
pub fn partial_transpose(sigma_red: &Matrix4<f64>) -> Matrix4<f64> {
    let p = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
    p * sigma_red * p
}

/// Symplectic eigenvalues in ascending order, from the spectrum `{+-i nu}` of
/// the real matrix `Omega sigma`.
pub fn symplectic_eigenvalues(sigma: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = sigma.nrows();
    if dim == 0 || !dim.is_multiple_of(2) || sigma.ncols() != dim {
        return Err(Error::InvalidState(format!(
            "expected even square matrix, got {}x{}",
            sigma.nrows(),
            sigma.ncols()
        )));
    }
    let omega = SymplecticForm::new(dim / 2);
    let eig = (omega.matrix() * sigma).complex_eigenvalues();
    let scale = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut ims = Vec::with_capacity(dim);
    for z in eig.iter() {
        if z.re.abs() > PAIRING_TOLERANCE * scale {
            return Err(Error::Eigen(format!(
                "Omega sigma has eigenvalue {z} off the imaginary axis; input is not a covariance matrix"
            )));
        }
        ims.push(z.im);
    }
    ims.sort_by(f64::total_cmp);
    let n = dim / 2;
    let upper = &ims[n..];
    let lower: Vec<f64> = ims[..n].iter().rev().map(|v| -v).collect();
    for (u, l) in upper.iter().zip(&lower) {
        if (u - l).abs() > PAIRING_TOLERANCE * scale {
            return Err(Error::Eigen(format!("eigenvalues +-i{u} and +-i{l} do not pair")));
        }
    }
    Ok(upper.iter().zip(&lower).map(|(u, l)| 0.5 * (u + l)).collect())
}

/// Smallest symplectic eigenvalue of the partial transpose.
pub fn nu_tilde_minus(sigma_red: &Matrix4<f64>) -> Result<f64> {
    let pt = partial_transpose(sigma_red);
    let dense = DMatrix::from_fn(4, 4, |r, c| pt[(r, c)]);
    Ok(symplectic_eigenvalues(&dense)?[0])
}

/// `max(0, (1/nu_min - 1)/2)` of the partially transposed two-mode state.
pub fn negativity(sigma_red: &Matrix4<f64>) -> Result<f64> {
    let nu = nu_tilde_minus(sigma_red)?;
    if !(nu > 0.0) {
        return Err(Error::Eigen(format!("smallest symplectic eigenvalue {nu} is not positive")));
    }
    Ok((0.5 * (1.0 / nu - 1.0)).max(0.0))
}

/// `|Im A_mn| sinh s`, the negativity created from two equally squeezed modes
/// to first order in the acceleration.
pub fn first_order_negativity(map: &FirstOrderBogoliubovMap, pair: (u32, u32), s: f64) -> Result<f64> {
    let a = map.a_hat(pair.0, pair.1)?;
    let b = map.b_hat(pair.0, pair.1)?;
    if b.norm() > B_NEGLIGIBLE * a.norm() {
        warn!(
            "|B_{}{}| = {:.3e} is not negligible against |A| = {:.3e}; first-order negativity is outside its regime",
            pair.0,
            pair.1,
            b.norm(),
            a.norm()
        );
    }
    Ok(a.im.abs() * s.sinh())
}

/// Negativity through the whole chain: squeezed vacuum of the pair, quadrature
/// transform, reduction, partial transpose.
pub fn pipeline_negativity(
    map: &FirstOrderBogoliubovMap,
    pair: (u32, u32),
    s: f64,
    include_free_phases: bool,
) -> Result<PipelineResult> {
    let sym = symplectic_from_map(map, pair, include_free_phases)?;
    let dense = DMatrix::from_fn(4, 4, |r, c| sym[(r, c)]);
    let state = CovarianceState::squeezed_vacuum(2, s)?.transform(&dense)?;
    let reduced = state.reduce(0, 1)?;
    Ok(PipelineResult {
        negativity: reduced.negativity()?,
        nu_tilde_minus: nu_tilde_minus(&reduced.sigma_red)?,
        purity_residual: state.purity_determinant() - 1.0,
        symplectic_residual: SymplecticForm::new(2).residual(&dense),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineResult {
    pub negativity: f64,
    pub nu_tilde_minus: f64,
    /// `det sigma - 1` after the transform.
    pub purity_residual: f64,
    /// `max |S Omega S^T - Omega|`.
    pub symplectic_residual: f64,
}

/// Negativity of `pair` after a cosine drive of amplitude `h0` at each
/// `omega_c`, for each duration. Rows follow `omegas`, columns `durations`.
pub fn figure1_grid(
    coeffs: &StaticCoefficients,
    pair: (u32, u32),
    s: f64,
    h0: f64,
    omegas: &[f64],
    durations: &[f64],
) -> Result<DMatrix<f64>> {
    if omegas.is_empty() || durations.is_empty() {
        return Err(Error::InvalidProfile("frequency and duration ranges must be nonempty".into()));
    }
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::InvalidState(format!("squeezing must be >= 0, got {s}")));
    }
    let config = QuadratureConfig::default();
    let sinh = s.sinh();
    let cells: Vec<(usize, usize)> =
        (0..omegas.len()).flat_map(|i| (0..durations.len()).map(move |j| (i, j))).collect();
    let values = cells
        .par_iter()
        .map(|&(i, j)| {
            let profile = AccelerationProfile::sinusoidal(h0, omegas[i], 0.0, 0.0, durations[j])?;
            let (a, _) = coeffs.a_hat_entry(pair.0, pair.1, &profile, &config)?;
            Ok(a.im.abs() * sinh)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(DMatrix::from_row_slice(omegas.len(), durations.len(), &values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bogoliubov::first_order_map;
    use crate::spectrum::Cavity1D;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn two_mode_squeezed(r: f64) -> DMatrix<f64> {
        let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        DMatrix::from_row_slice(4, 4, &[c, 0.0, s, 0.0, 0.0, c, 0.0, -s, s, 0.0, c, 0.0, 0.0, -s, 0.0, c])
    }

    #[test]
    fn form_squares_to_minus_one() {
        let o = SymplecticForm::new(3);
        let m = o.matrix();
        assert_eq!(m * m, -DMatrix::<f64>::identity(6, 6));
        assert_eq!(m.transpose(), -m);
    }

    #[test]
    fn vacuum_and_squeezed_spectra() {
        let v = CovarianceState::vacuum(2);
        let nu = symplectic_eigenvalues(v.sigma()).unwrap();
        assert_eq!(nu.len(), 2);
        for x in nu {
            assert_relative_eq!(x, 1.0, epsilon = 1e-12);
        }
        let sq = CovarianceState::squeezed_vacuum(1, 1.3).unwrap();
        assert_relative_eq!(symplectic_eigenvalues(sq.sigma()).unwrap()[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(sq.purity_determinant(), 1.0, epsilon = 1e-12);
        assert_eq!(CovarianceState::squeezed_vacuum(2, 0.0).unwrap(), CovarianceState::vacuum(2));
        assert!(CovarianceState::squeezed_vacuum(1, -0.1).is_err());
    }

    #[test]
    fn two_mode_squeezed_oracle() {
        for &r in &[0.1, 0.5, 1.2] {
            let sigma = two_mode_squeezed(r);
            let nu = symplectic_eigenvalues(&sigma).unwrap();
            assert_relative_eq!(nu[0], 1.0, epsilon = 1e-10);
            assert_relative_eq!(nu[1], 1.0, epsilon = 1e-10);
            let s4 = Matrix4::from_fn(|i, j| sigma[(i, j)]);
            let pt = partial_transpose(&s4);
            let nu_pt = symplectic_eigenvalues(&DMatrix::from_fn(4, 4, |i, j| pt[(i, j)])).unwrap();
            assert_relative_eq!(nu_pt[0], (-2.0 * r).exp(), max_relative = 1e-10);
            assert_relative_eq!(nu_pt[1], (2.0 * r).exp(), max_relative = 1e-10);
            assert_relative_eq!(negativity(&s4).unwrap(), 0.5 * ((2.0 * r).exp() - 1.0), max_relative = 1e-10);
        }
    }

    #[test]
    fn partial_transpose_is_involution_and_local() {
        let s = Matrix4::from_fn(|i, j| 1.0 / (1.0 + i as f64 + j as f64));
        assert_eq!(partial_transpose(&partial_transpose(&s)), s);
        let pt = partial_transpose(&s);
        for i in 0..4 {
            for j in 0..4 {
                let flip = (i == 3) ^ (j == 3);
                assert_eq!(pt[(i, j)], if flip { -s[(i, j)] } else { s[(i, j)] });
            }
        }
        assert_eq!(partial_transpose(&Matrix4::identity()), Matrix4::identity());
    }

    #[test]
    fn unphysical_inputs_rejected() {
        let bad = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 0.5]));
        assert!(CovarianceState::new(DVector::zeros(2), bad).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(CovarianceState::new(DVector::zeros(2), asym).is_err());
        let ok = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.5]));
        assert!(CovarianceState::new(DVector::zeros(2), ok).is_ok());
        // Omega sigma with real eigenvalues
        let indefinite = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(symplectic_eigenvalues(&indefinite), Err(Error::Eigen(_))));
    }

    #[test]
    fn free_map_gives_identity_or_rotations() {
        let cav = Cavity1D::new(1.0, 0.0, 4).unwrap();
        let map = FirstOrderBogoliubovMap::free(cav, 0.0, 0.37).unwrap();
        assert_eq!(symplectic_from_map(&map, (1, 2), false).unwrap(), Matrix4::identity());
        let s = symplectic_from_map(&map, (1, 2), true).unwrap();
        for (block, w) in [(0usize, PI), (2, 2.0 * PI)] {
            let th = w * 0.37;
            let r = s.fixed_view::<2, 2>(block, block);
            // conj(e^{i th}) a => q' = cos q + sin p, p' = -sin q + cos p
            assert_relative_eq!(r[(0, 0)], th.cos(), epsilon = 1e-14);
            assert_relative_eq!(r[(0, 1)], th.sin(), epsilon = 1e-14);
            assert_relative_eq!(r[(1, 0)], -th.sin(), epsilon = 1e-14);
            assert_relative_eq!(r[(1, 1)], th.cos(), epsilon = 1e-14);
        }
        assert_eq!(s.fixed_view::<2, 2>(0, 2).amax(), 0.0);
        assert!(symplectic_from_map(&map, (2, 2), false).is_err());
    }

    #[test]
    fn resonant_map_matches_exponentiated_generator() {
        let cav = Cavity1D::new(1.0, 0.0, 6).unwrap();
        let coeffs = StaticCoefficients::new(cav);
        let h0 = 1e-3;
        let profile = AccelerationProfile::sinusoidal(h0, PI, 0.0, 0.0, 2.0).unwrap();
        let map = first_order_map(&coeffs, &profile).unwrap();
        let s = symplectic_from_map(&map, (1, 2), false).unwrap();
        let generator = s - Matrix4::identity();
        let exact = generator.exp();
        assert!((exact - s).amax() < 10.0 * h0 * h0);
        assert!(generator.amax() > 0.1 * h0);
    }

    #[test]
    fn pipeline_agrees_with_first_order_formula() {
        let coeffs = StaticCoefficients::new(Cavity1D::new(1.0, 0.0, 6).unwrap());
        for &s in &[0.5, 1.0] {
            let h0 = 1e-3;
            let profile = AccelerationProfile::sinusoidal(h0, PI, 0.0, 0.0, 2.0).unwrap();
            let map = first_order_map(&coeffs, &profile).unwrap();
            let full = pipeline_negativity(&map, (1, 2), s, false).unwrap();
            let formula = first_order_negativity(&map, (1, 2), s).unwrap();
            assert!(formula > 0.0);
            assert!((full.negativity - formula).abs() < 10.0 * h0 * h0, "{} vs {formula}", full.negativity);
            assert!(full.purity_residual.abs() < 10.0 * h0 * h0);
            assert!(full.symplectic_residual < 10.0 * h0 * h0);
        }
    }

    #[test]
    fn grid_zero_without_squeezing_and_ridge_at_resonance() {
        let coeffs = StaticCoefficients::new(Cavity1D::new(1.0, 0.0, 4).unwrap());
        let omegas = [0.8 * PI, 0.9 * PI, PI, 1.1 * PI, 1.2 * PI];
        let durations: Vec<f64> = (1..=8).map(|k| 25.0 * k as f64).collect();
        let zero = figure1_grid(&coeffs, (1, 2), 0.0, 1e-3, &omegas, &durations).unwrap();
        assert_eq!(zero.amax(), 0.0);
        let g = figure1_grid(&coeffs, (1, 2), 1.0, 1e-3, &omegas, &durations).unwrap();
        let ridge = g.row(2);
        assert!(ridge.iter().zip(ridge.iter().skip(1)).all(|(a, b)| b > a));
        let last = durations.len() - 1;
        let argmax = (0..omegas.len()).max_by(|&a, &b| g[(a, last)].total_cmp(&g[(b, last)])).unwrap();
        assert_eq!(argmax, 2);
        assert!(figure1_grid(&coeffs, (1, 2), 1.0, 1e-3, &[], &durations).is_err());
    }
}
