use std::f64::consts::PI;

use cavmix::bogoliubov::{first_order_map, StaticCoefficients};
use cavmix::gaussian::{
    first_order_negativity, nu_tilde_minus, pipeline_negativity, symplectic_eigenvalues, CovarianceState,
    SymplecticForm,
};
use cavmix::profiles::AccelerationProfile;
use cavmix::spectrum::Cavity1D;
use nalgebra::{DMatrix, Matrix2, Matrix4};
use proptest::prelude::*;

fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, s, -s, c)
}

fn local(a: Matrix2<f64>, b: Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&b);
    m
}

fn beam_splitter(theta: f64) -> Matrix4<f64> {
    let (s, c) = theta.sin_cos();
    let i = Matrix2::identity();
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&(i * c));
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&(i * s));
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&(i * -s));
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&(i * c));
    m
}

fn two_mode_squeezer(r: f64) -> Matrix4<f64> {
    let (ch, sh) = (r.cosh(), r.sinh());
    let z = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&(Matrix2::identity() * ch));
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&(z * sh));
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&(z * sh));
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&(Matrix2::identity() * ch));
    m
}

fn dense(m: &Matrix4<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(4, 4, |r, c| m[(r, c)])
}

prop_compose! {
    /// A mixed two-mode state `S diag(nu1, nu1, nu2, nu2) S^T` with `S` a product of
    /// standard gates.
    fn two_mode_state()(
        r in 0.0f64..1.5,
        t in 0.0f64..PI,
        a in 0.0f64..2.0 * PI,
        b in 0.0f64..2.0 * PI,
        sq in -1.0f64..1.0,
        nu1 in 1.0f64..3.0,
        nu2 in 1.0f64..3.0,
    ) -> Matrix4<f64> {
        let squeeze = Matrix2::new(sq.exp(), 0.0, 0.0, (-sq).exp());
        let s = beam_splitter(t) * local(rotation(a) * squeeze, rotation(b)) * two_mode_squeezer(r);
        let thermal = Matrix4::from_diagonal(&nalgebra::Vector4::new(nu1, nu1, nu2, nu2));
        s * thermal * s.transpose()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn local_rotations_leave_partial_transpose_spectrum_alone(
        sigma in two_mode_state(),
        t1 in 0.0f64..2.0 * PI,
        t2 in 0.0f64..2.0 * PI,
    ) {
        let l = local(rotation(t1), rotation(t2));
        let before = nu_tilde_minus(&sigma).unwrap();
        let after = nu_tilde_minus(&(l * sigma * l.transpose())).unwrap();
        prop_assert!((before - after).abs() <= 1e-10 * before.max(1.0), "{before} vs {after}");
    }

    #[test]
    fn gates_are_symplectic_and_preserve_spectrum(sigma in two_mode_state(), r in 0.0f64..1.5, t in 0.0f64..PI) {
        let form = SymplecticForm::new(2);
        let g = beam_splitter(t) * two_mode_squeezer(r);
        prop_assert!(form.residual(&dense(&g)) < 1e-12 * (2.0 * r).cosh());
        let nu = symplectic_eigenvalues(&dense(&sigma)).unwrap();
        let moved = symplectic_eigenvalues(&dense(&(g * sigma * g.transpose()))).unwrap();
        for (x, y) in nu.iter().zip(&moved) {
            prop_assert!((x - y).abs() <= 1e-8 * x.max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn covariance_states_are_bona_fide(sigma in two_mode_state()) {
        let nu = symplectic_eigenvalues(&dense(&sigma)).unwrap();
        prop_assert!(nu.iter().all(|&v| v >= 1.0 - 1e-9));
        prop_assert!(CovarianceState::new(nalgebra::DVector::zeros(4), dense(&sigma)).is_ok());
    }
}

/// The first-order formula is the slope of the full pipeline at zero drive:
/// Richardson extrapolation of `N(h0) / h0` over three halvings lands on it.
#[test]
fn first_order_formula_is_the_zero_drive_slope() {
    let coeffs = StaticCoefficients::new(Cavity1D::new(1.0, 0.0, 4).unwrap());
    let s = 1.0;
    let slope_at = |h0: f64| {
        let profile = AccelerationProfile::sinusoidal(h0, PI, 0.0, 0.0, 2.0).unwrap();
        let map = first_order_map(&coeffs, &profile).unwrap();
        let full = pipeline_negativity(&map, (1, 2), s, false).unwrap().negativity;
        (full / h0, first_order_negativity(&map, (1, 2), s).unwrap() / h0)
    };
    let (q1, f) = slope_at(1e-3);
    let (q2, _) = slope_at(5e-4);
    let (q3, _) = slope_at(2.5e-4);
    let r1 = 2.0 * q2 - q1;
    let r2 = 2.0 * q3 - q2;
    let extrapolated = (4.0 * r2 - r1) / 3.0;
    assert!((extrapolated - f).abs() < 1e-6 * f, "extrapolated {extrapolated}, formula {f}");
    assert!((q3 - f).abs() < (q1 - f).abs(), "raw slopes should approach the formula");
}

#[test]
fn nothing_is_entangled_without_squeezing_or_drive() {
    let coeffs = StaticCoefficients::new(Cavity1D::new(1.0, 0.0, 4).unwrap());
    let driven = AccelerationProfile::sinusoidal(1e-3, PI, 0.0, 0.0, 50.0).unwrap();
    let map = first_order_map(&coeffs, &driven).unwrap();
    assert!(pipeline_negativity(&map, (1, 2), 0.0, false).unwrap().negativity < 1e-12);
    let idle = first_order_map(&coeffs, &AccelerationProfile::zero(0.0, 50.0).unwrap()).unwrap();
    let r = pipeline_negativity(&idle, (1, 2), 1.0, true).unwrap();
    assert_eq!(r.negativity, 0.0);
    assert!((r.nu_tilde_minus - 1.0).abs() < 1e-10);
}
