mod common;

use common::*;
use pepbound_core::bounds::sin_acute_angle;
use pepbound_core::denseig::inverse_iteration_vector;
use pepbound_core::denseig::{generalized_schur, spectral_norm, Eigenvalue};
use pepbound_core::kronlin::{assemble, recover_eigenvector, BlockKroneckerForm};
use pepbound_core::matrix::{cabs, cpowi, CMat, C64, ONE};
use pepbound_core::oracle::reference_spectrum;
use pepbound_core::polyval::*;
use pepbound_core::rng::Gaussian;
use pepbound_core::Error;
use proptest::prelude::*;

fn random_poly(n: usize, d: usize, seed: u64) -> MatrixPolynomial {
    random_unscaled(&PolySpec::new(PolyKind::P1, n, d, seed)).unwrap()
}

/// Σ λ^i A_i accumulated term by term with explicit powers.
fn naive_eval(p: &MatrixPolynomial, lambda: C64) -> CMat {
    let mut acc = CMat::zeros(p.n(), p.n());
    for (i, a) in p.coeffs().iter().enumerate() {
        acc.add_scaled(cpowi(lambda, i), a);
    }
    acc
}

fn finite_eigenvalues(p: &MatrixPolynomial) -> Vec<C64> {
    let l = assemble(&BlockKroneckerForm::frobenius(p).unwrap());
    generalized_schur(&l.a, &l.b)
        .unwrap()
        .eigenvalues()
        .into_iter()
        .filter_map(Eigenvalue::finite)
        .collect()
}

#[test]
fn evaluation_small_cases() {
    let i2 = CMat::identity(2);
    let constant = MatrixPolynomial::new(vec![i2.clone(), CMat::zeros(2, 2)]).unwrap();
    assert_eq!(constant.eval(C64::new(7.0, 0.0)), i2);
    assert_eq!(constant.eval_derivative(C64::new(7.0, 0.0)), CMat::zeros(2, 2));
    let quad = MatrixPolynomial::new(vec![i2.scaled_real(-1.0), CMat::zeros(2, 2), i2.clone()]).unwrap();
    assert_eq!(quad.eval(C64::new(2.0, 0.0)), i2.scaled_real(3.0));
    assert_eq!(quad.eval_derivative(C64::new(2.0, 0.0)), i2.scaled_real(4.0));
    let lin = MatrixPolynomial::new(vec![CMat::scalar(1, -ONE), CMat::identity(1)]).unwrap();
    assert_eq!(lin.residual_norm(C64::new(3.0, 0.0), &[ONE]).unwrap(), 2.0);
    assert!(matches!(
        lin.residual_norm(ONE, &[ONE, ONE]),
        Err(Error::DimensionMismatch(_))
    ));
}

#[test]
fn horner_matches_power_sum() {
    let mut g = Gaussian::new(11);
    for trial in 0..60 {
        let n = 1 + trial % 10;
        let d = 1 + trial % 8;
        let p = random_poly(n, d, 100 + trial as u64);
        let lambda = g.complex_normal() * (0.1 + 3.0 * g.uniform());
        let diff = p.eval(lambda).max_abs_diff(&naive_eval(&p, lambda));
        assert!(diff <= 1e-13 * evaluation_scale(&p, lambda), "trial {trial}: {diff:e}");
    }
}

#[test]
fn derivative_matches_central_difference() {
    let mut g = Gaussian::new(12);
    for trial in 0..20 {
        let p = random_poly(3, 1 + trial % 6, 200 + trial as u64);
        let lambda = g.complex_normal();
        let h = C64::new(1e-6, 0.0);
        let mut fd = p.eval(lambda + h);
        fd.add_scaled(-ONE, &p.eval(lambda - h));
        let fd = fd.scaled(ONE / (h * 2.0));
        let exact = p.eval_derivative(lambda);
        assert!(fd.distance(&exact) <= 1e-8 * exact.frobenius_norm());
    }
}

#[test]
fn reversal_identities() {
    let p = random_poly(3, 3, 13);
    assert_eq!(p.rev().rev(), p);
    let lambda = C64::new(2.0, 0.0);
    let lhs = p.rev().eval(lambda);
    let rhs = p.eval(ONE / lambda).scaled(cpowi(lambda, 3));
    assert!(lhs.distance(&rhs) <= 1e-13 * rhs.frobenius_norm());

    let a = CMat::identity(2).scaled_real(2.0);
    let palin = MatrixPolynomial::new(vec![a.clone(), CMat::identity(2), a]).unwrap();
    assert_eq!(palin.rev(), palin);

    let reciprocals: Vec<C64> = finite_eigenvalues(&p.rev()).into_iter().map(|z| ONE / z).collect();
    assert!(multiset_distance(&reciprocals, &finite_eigenvalues(&p), true) <= 1e-8);
}

#[test]
fn p1_entries_are_standard_complex_gaussian() {
    let p = random_unscaled(&PolySpec::new(PolyKind::P1, 10, 5, 1)).unwrap();
    let entries: Vec<f64> = p
        .coeffs()
        .iter()
        .flat_map(|a| a.as_slice().iter().map(|z| z.norm_sqr()))
        .collect();
    assert_eq!(entries.len(), 600);
    let mean = entries.iter().sum::<f64>() / entries.len() as f64;
    assert!((1.6..=2.4).contains(&mean), "{mean}");
    let wide = random_unscaled(&PolySpec::new(PolyKind::P1, 25, 5, 2)).unwrap();
    let big: Vec<f64> = wide
        .coeffs()
        .iter()
        .flat_map(|a| a.as_slice().iter().map(|z| z.norm_sqr()))
        .collect();
    assert!(big.len() >= 3000);
    let mean = big.iter().sum::<f64>() / big.len() as f64;
    assert!((1.6..=2.4).contains(&mean), "{mean}");
}

#[test]
fn generation_is_deterministic() {
    let spec = PolySpec::new(PolyKind::P2, 4, 5, 99);
    assert_eq!(random_polynomial(&spec).unwrap(), random_polynomial(&spec).unwrap());
    assert_ne!(
        random_polynomial(&spec).unwrap(),
        random_polynomial(&PolySpec::new(PolyKind::P2, 4, 5, 100)).unwrap()
    );
    assert!(matches!(
        random_polynomial(&PolySpec::new(PolyKind::P2, 4, 3, 1)),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn scaling_normalizes_spectral_norm() {
    for seed in 1..=3 {
        let p = random_polynomial(&PolySpec::new(PolyKind::P2, 10, 5, seed)).unwrap();
        let mut top: f64 = 0.0;
        for a in p.coeffs() {
            top = top.max(spectral_norm(a).unwrap());
        }
        assert!((top - 1.0).abs() <= 1e-12, "{top}");
    }
    let two = MatrixPolynomial::new(vec![CMat::zeros(2, 2), CMat::identity(2).scaled_real(2.0)]).unwrap();
    let (scaled, factor) = two.scale_max_norm().unwrap();
    assert!((factor - 2.0).abs() <= 1e-13);
    let (again, f2) = scaled.scale_max_norm().unwrap();
    assert!((f2 - 1.0).abs() <= 1e-13 && again.coeff(1).max_abs_diff(scaled.coeff(1)) <= 1e-13);
    let zero = MatrixPolynomial::new(vec![CMat::zeros(2, 2), CMat::zeros(2, 2)]).unwrap();
    assert_eq!(zero.scale_max_norm().unwrap_err(), Error::ZeroPolynomial);
}

#[test]
fn scaling_keeps_eigenvalues() {
    for seed in 0..3 {
        let p = random_unscaled(&PolySpec::new(PolyKind::P1, 4, 3, 300 + seed)).unwrap();
        let (q, _) = p.scale_max_norm().unwrap();
        assert!(multiset_distance(&finite_eigenvalues(&p), &finite_eigenvalues(&q), true) <= 1e-10);
    }
}

#[test]
fn p2_spectrum_has_three_clusters() {
    let p = random_polynomial(&PolySpec::new(PolyKind::P2, 10, 5, 1)).unwrap();
    let eig = finite_eigenvalues(&p);
    assert_eq!(eig.len(), 50);
    let low = eig
        .iter()
        .filter(|z| (10f64.powf(-5.5)..=10f64.powf(-2.5)).contains(&cabs(**z)))
        .count();
    assert!((8..=12).contains(&low), "{low} eigenvalues near 1e-4");
}

#[test]
fn frobenius_eigenpairs_match_reference() {
    let p = random_polynomial(&PolySpec::new(PolyKind::P1, 10, 5, 4)).unwrap();
    let form = BlockKroneckerForm::frobenius(&p).unwrap();
    let l = assemble(&form);
    let reference = reference_spectrum(&p).unwrap();
    let eig = finite_eigenvalues(&p);
    assert!(multiset_distance(&eig, &reference.lambdas(), true) <= 1e-8);
    for r in &reference.pairs {
        let lambda = eig
            .iter()
            .copied()
            .min_by(|a, b| cabs(a - r.lambda_f64()).total_cmp(&cabs(b - r.lambda_f64())))
            .unwrap();
        let v = inverse_iteration_vector(&l.a, &l.b, lambda).unwrap();
        let x = recover_eigenvector(&v, &form, lambda).unwrap();
        assert!(sin_acute_angle(&x, &r.x_f64()).unwrap() < 1e-8);
    }
}

#[test]
fn regularity_check() {
    assert!(random_poly(3, 2, 5).is_regular(1));
    let mut singular = random_poly(3, 2, 6).into_coeffs();
    for a in &mut singular {
        for j in 0..3 {
            a[(2, j)] = C64::new(0.0, 0.0);
        }
    }
    assert!(!MatrixPolynomial::new(singular).unwrap().is_regular(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn residual_is_norm_of_product(seed in 0u64..1000, n in 1usize..6, d in 1usize..5, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let p = random_poly(n, d, seed);
        let x = Gaussian::new(seed ^ 7).complex_vector(n);
        let lambda = C64::new(re, im);
        let direct = pepbound_core::matrix::norm2(&p.eval(lambda).mul_vec(&x));
        prop_assert_eq!(p.residual_norm(lambda, &x).unwrap(), direct);
        let applied = p.apply(lambda, &x).unwrap();
        prop_assert!(rel_err(pepbound_core::matrix::norm2(&applied), direct) <= 1e-13);
    }
}
