mod common;

use common::*;
use pepbound_core::bounds::*;
use pepbound_core::denseig::{generalized_schur, inverse_iteration_vector, separation, Eigenvalue};
use pepbound_core::kronlin::{assemble, recover_eigenvector, right_factor, BlockKroneckerForm, Variant};
use pepbound_core::matrix::{cabs, norm2, CMat, C64, ONE};
use pepbound_core::oracle::{reference_spectrum, refine_eigenpair};
use pepbound_core::polyval::{random_polynomial, MatrixPolynomial, PolyKind, PolySpec};
use pepbound_core::rng::Gaussian;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn variational_characterization() {
    let mut g = Gaussian::new(21);
    for trial in 0..500 {
        let n = 2 + trial % 7;
        let u = g.complex_vector(n);
        let mut w = g.complex_vector(n);
        if trial % 3 == 0 {
            // nearly parallel pairs
            for (wi, ui) in w.iter_mut().zip(&u) {
                *wi = *ui * c(0.5, -1.5) + *wi * 1e-3;
            }
        }
        let s = sin_acute_angle(&u, &w).unwrap();
        let alpha = optimal_alpha(&u, &w).unwrap();
        let best = angle_objective(&u, &w, alpha).unwrap();
        assert!((best - s).abs() <= 1e-12, "trial {trial}: {best} vs {s}");
        let radius = 2.0 / norm2(&w);
        for i in 0..100 {
            for j in 0..100 {
                let a = c(
                    radius * (2.0 * i as f64 / 99.0 - 1.0),
                    radius * (2.0 * j as f64 / 99.0 - 1.0),
                );
                assert!(best <= angle_objective(&u, &w, a).unwrap() + 1e-15);
            }
        }
    }
}

#[test]
fn block_angle_inequality() {
    let mut g = Gaussian::new(22);
    for trial in 0..500 {
        let d = 2 + trial % 5;
        let n = 1 + trial % 8;
        let i = trial % d;
        let mut u = g.complex_vector(d * n);
        let mut w: Vec<C64> = if trial % 2 == 0 {
            g.complex_vector(d * n)
        } else {
            let e = 10f64.powi(-((trial % 9) as i32));
            u.iter().map(|z| z * c(0.3, 0.7) + g.complex_normal() * e).collect()
        };
        for v in [&mut u, &mut w] {
            let block = &mut v[i * n..(i + 1) * n];
            let nb = norm2(block);
            block.iter_mut().for_each(|z| *z /= nb);
        }
        let lhs = sin_acute_angle(&u[i * n..(i + 1) * n], &w[i * n..(i + 1) * n]).unwrap();
        let rhs = norm2(&u).min(norm2(&w)) * sin_acute_angle(&u, &w).unwrap();
        assert!(lhs <= rhs + 1e-13, "trial {trial}: {lhs:e} > {rhs:e}");
    }
}

#[test]
fn monotone_in_sep_and_residual() {
    let lambdas = [c(0.0, 0.0), c(0.3, -0.4), c(1.0, 0.0), c(-2.0, 3.0), c(50.0, 1.0)];
    let seps: Vec<f64> = (0..12).map(|k| 10f64.powi(k - 10)).collect();
    for &lambda in &lambdas {
        for d in 1..=6 {
            let g_norm = if cabs(lambda) < 1.0 {
                1.0
            } else {
                cabs(lambda).powi(1 - d as i32)
            };
            let all = |r: f64, s: f64| {
                [
                    pep_bound_general(g_norm, r, s),
                    pep_bound_kronecker(r, lambda, d, s),
                    pep_bound_frobenius(r, lambda, d, s),
                ]
            };
            for w in seps.windows(2) {
                for (a, b) in all(1e-8, w[0]).iter().zip(all(1e-8, w[1])) {
                    assert!(*a >= b);
                }
                for (a, b) in all(w[0], 1e-2).iter().zip(all(w[1], 1e-2)) {
                    assert!(*a <= b);
                }
            }
        }
    }
}

#[test]
fn kronecker_bound_is_best_general_instance() {
    let mut g = Gaussian::new(23);
    for _ in 0..100 {
        let lambda = g.complex_normal() * 10f64.powf(4.0 * g.uniform() - 2.0);
        let d = 1 + (g.uniform() * 8.0) as usize;
        let r = 10f64.powf(-16.0 + 4.0 * g.uniform());
        let s = 10f64.powf(-4.0 * g.uniform());
        let h1 = pep_bound_general(1.0, r, s);
        let h2 = pep_bound_general(cabs(lambda).powi(1 - d as i32), r, s);
        let k = pep_bound_kronecker(r, lambda, d, s);
        assert!(rel_err(k, h1.min(h2)) <= 1e-14, "{k:e} vs {:e}", h1.min(h2));
    }
}

#[test]
fn ratio_bracket() {
    let mut g = Gaussian::new(24);
    for _ in 0..1000 {
        let lambda = g.complex_normal() * 10f64.powf(6.0 * g.uniform() - 3.0);
        let d = 1 + (g.uniform() * 8.0) as usize;
        let r = 10f64.powf(-14.0 + 6.0 * g.uniform());
        let s = 10f64.powf(-3.0 * g.uniform());
        let ratio = pep_bound_kronecker(r, lambda, d, s) / pep_bound_frobenius(r, lambda, d, s);
        assert!(
            ratio >= 1.0 - 1e-12 && ratio <= (d as f64).sqrt() + 1e-12,
            "d={d}: {ratio}"
        );
    }
}

#[test]
fn angle_scale_invariance() {
    let mut g = Gaussian::new(25);
    for _ in 0..200 {
        let u = g.complex_vector(5);
        let w = g.complex_vector(5);
        let (a, b) = (g.complex_normal() * 1e3, g.complex_normal() * 1e-3);
        let su: Vec<C64> = u.iter().map(|z| z * a).collect();
        let sw: Vec<C64> = w.iter().map(|z| z * b).collect();
        let base = sin_acute_angle(&u, &w).unwrap();
        assert!((sin_acute_angle(&su, &sw).unwrap() - base).abs() <= 1e-14);
        assert!((sin_acute_angle(&w, &u).unwrap() - base).abs() <= 1e-14);
    }
}

#[test]
fn gep_bound_holds_on_constructed_pencil() {
    // A = U diag(δ) V*, B = U V*: the eigenvectors are the columns of V.
    let n = 8;
    let (u, v) = (random_unitary(n, 31), random_unitary(n, 32));
    let mut g = Gaussian::new(33);
    let delta = g.complex_vector(n);
    let a = u.matmul(&CMat::diag(&delta)).matmul(&v.adjoint());
    let b = u.matmul(&v.adjoint());
    for (k, &dk) in delta.iter().enumerate() {
        let exact = v.column(k);
        for scale in [1e-10, 1e-7, 1e-4] {
            let lt = dk + g.complex_normal() * scale;
            let vt: Vec<C64> = exact.iter().map(|z| z + g.complex_normal() * scale).collect();
            let mut shifted = a.clone();
            shifted.add_scaled(-lt, &b);
            let resid = norm2(&shifted.mul_vec(&vt));
            let sep = separation(&a, &b, &exact, lt).unwrap().sep;
            let bound = gep_eigvec_bound(resid, norm2(&vt), sep);
            let err = sin_acute_angle(&exact, &vt).unwrap();
            assert!(err <= bound, "k={k} scale={scale:e}: {err:e} > {bound:e}");
        }
    }
}

#[test]
fn gep_bound_holds_for_qz_eigenpairs() {
    // the pencil A − λB as the grade-1 polynomial (A, −B), refined in double-double
    let n = 8;
    let mut g = Gaussian::new(34);
    let (a, b) = (g.complex_matrix(n, n), g.complex_matrix(n, n));
    let p = MatrixPolynomial::new(vec![a.clone(), b.scaled_real(-1.0)]).unwrap();
    let schur = generalized_schur(&a, &b).unwrap();
    for lt in schur.eigenvalues().into_iter().filter_map(Eigenvalue::finite) {
        let vt = inverse_iteration_vector(&a, &b, lt).unwrap();
        let exact = refine_eigenpair(&p, lt, &vt).unwrap();
        assert!(exact.converged);
        let mut shifted = a.clone();
        shifted.add_scaled(-lt, &b);
        let resid = norm2(&shifted.mul_vec(&vt));
        let sep = separation(&a, &b, &exact.x_f64(), lt).unwrap().sep;
        let bound = gep_eigvec_bound(resid, norm2(&vt), sep);
        let err = sin_acute_angle(&exact.x_f64(), &vt).unwrap();
        assert!(err <= bound + 1e-15, "{err:e} > {bound:e}");
    }
}

#[test]
fn pep_bound_holds_on_cubic() {
    let p = random_polynomial(&PolySpec::new(PolyKind::P1, 3, 3, 35)).unwrap();
    let form = BlockKroneckerForm::frobenius(&p).unwrap();
    let l = assemble(&form);
    let reference = reference_spectrum(&p).unwrap();
    let computed: Vec<C64> = generalized_schur(&l.a, &l.b)
        .unwrap()
        .eigenvalues()
        .into_iter()
        .filter_map(Eigenvalue::finite)
        .collect();
    assert_eq!(computed.len(), 9);
    let pairs = pair_nearest(&computed, &reference.lambdas()).unwrap();
    for (lt, pairing) in computed.iter().zip(&pairs) {
        assert!(!pairing.ambiguous);
        let r = &reference.pairs[pairing.reference];
        let (l0, x) = (r.lambda_f64(), r.x_f64());
        let vt = inverse_iteration_vector(&l.a, &l.b, *lt).unwrap();
        let xt = recover_eigenvector(&vt, &form, *lt).unwrap();
        let residual = p.residual_norm(*lt, &xt).unwrap();
        let v = right_factor(&form, Variant::for_lambda(l0)).lift(l0, &x).unwrap();
        let sep = separation(&l.a, &l.b, &v, *lt).unwrap().sep;
        let err = sin_acute_angle(&x, &xt).unwrap();
        for variant in [Variant::H1, Variant::H2] {
            let g = right_factor(&form, variant).g(*lt).unwrap();
            assert!(err <= pep_bound_general(norm2(&g), residual, sep) + 1e-15);
        }
        let kron = pep_bound_kronecker(residual, *lt, 3, sep);
        let frob = pep_bound_frobenius(residual, *lt, 3, sep);
        assert!(err <= frob + 1e-15 && frob <= kron);
    }
}

#[test]
fn infinite_markers() {
    assert_eq!(gep_eigvec_bound(1e-3, 1.0, 0.0), f64::INFINITY);
    let row = BoundRow {
        index: 0,
        lambda_exact: ONE,
        lambda_computed: ONE,
        residual: 0.0,
        sep: 1.0,
        sin_angle: 0.0,
        bound_kron: 0.0,
        bound_frob: 0.0,
        g_norm: 1.0,
        flags: RowFlags::default(),
    };
    assert_eq!(row.ratio(), f64::INFINITY);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn angle_in_unit_interval(seed in 0u64..10_000, n in 1usize..9) {
        let mut g = Gaussian::new(seed);
        let u = g.complex_vector(n);
        let w = g.complex_vector(n);
        let s = sin_acute_angle(&u, &w).unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(sin_acute_angle(&u, &u).unwrap() <= 1e-15, true);
    }
}
