//! Independent reference routines for the integration tests. Nothing here
//! calls into the factorizations under test.
#![allow(dead_code, clippy::needless_range_loop)]

use pepbound_core::matrix::{cabs, dotc, norm2, CMat, C64, ZERO};
use pepbound_core::rng::Gaussian;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-32 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// `σ_min(M)` as the square root of the smallest eigenvalue of `M*M`,
/// through the real symmetric embedding `[[Re, −Im], [Im, Re]]`.
pub fn sigma_min_jacobi(m: &CMat) -> f64 {
    let g = m.adjoint().matmul(m);
    let n = g.rows();
    let mut r = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = g[(i, j)];
            r[i][j] = z.re;
            r[i + n][j + n] = z.re;
            r[i][j + n] = -z.im;
            r[i + n][j] = z.im;
        }
    }
    jacobi_symmetric_eigenvalues(r)[0].max(0.0).sqrt()
}

/// Random unitary by modified Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary(n: usize, seed: u64) -> CMat {
    let mut g = Gaussian::new(seed);
    let mut cols: Vec<Vec<C64>> = Vec::new();
    while cols.len() < n {
        let mut v = g.complex_vector(n);
        for _ in 0..2 {
            for c in &cols {
                let p = dotc(c, &v);
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= p * ci;
                }
            }
        }
        let nv = norm2(&v);
        cols.push(v.iter().map(|z| z / nv).collect());
    }
    CMat::from_fn(n, n, |i, j| cols[j][i])
}

/// Roots of `det(A − λB) = 0` for a 2×2 pencil via the quadratic formula.
pub fn quadratic_eigenvalues(a: &CMat, b: &CMat) -> [C64; 2] {
    let (a11, a12, a21, a22) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let (b11, b12, b21, b22) = (b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
    let c2 = b11 * b22 - b12 * b21;
    let c1 = -(a11 * b22 + a22 * b11 - a12 * b21 - a21 * b12);
    let c0 = a11 * a22 - a12 * a21;
    let disc = (c1 * c1 - c2 * c0 * 4.0).sqrt();
    let qp = -(c1 + disc) * 0.5;
    let qm = -(c1 - disc) * 0.5;
    let q = if cabs(qp) >= cabs(qm) { qp } else { qm };
    [q / c2, c0 / q]
}

/// Moves the eigenvalue at diagonal position `k` of an upper triangular
/// pencil `(S, T)` to position 0 by adjacent swaps, updating `Q` and `Z`
/// so that `Q S Z*` and `Q T Z*` are preserved.
pub fn reorder_to_front(s: &mut CMat, t: &mut CMat, q: &mut CMat, z: &mut CMat, k: usize) {
    let n = s.rows();
    for i in (0..k).rev() {
        let (s11, s12, s22) = (s[(i, i)], s[(i, i + 1)], s[(i + 1, i + 1)]);
        let (t11, t12, t22) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i + 1)]);
        // null vector of t22·S − s22·T on the 2×2 block
        let mut w = [t22 * s12 - s22 * t12, -(t22 * s11 - s22 * t11)];
        let nw = norm2(&w);
        w = [w[0] / nw, w[1] / nw];
        let zloc = [[w[0], -w[1].conj()], [w[1], w[0].conj()]];
        apply_cols(s, i, &zloc, n);
        apply_cols(t, i, &zloc, n);
        apply_cols(z, i, &zloc, n);
        let us = [s[(i, i)], s[(i + 1, i)]];
        let ut = [t[(i, i)], t[(i + 1, i)]];
        let u = if norm2(&ut) >= norm2(&us) { ut } else { us };
        let nu = norm2(&u);
        let u = [u[0] / nu, u[1] / nu];
        let qloc = [[u[0], -u[1].conj()], [u[1], u[0].conj()]];
        apply_rows_adjoint(s, i, &qloc, n);
        apply_rows_adjoint(t, i, &qloc, n);
        apply_cols(q, i, &qloc, n);
        s[(i + 1, i)] = ZERO;
        t[(i + 1, i)] = ZERO;
    }
}

fn apply_cols(m: &mut CMat, i: usize, g: &[[C64; 2]; 2], _n: usize) {
    for r in 0..m.rows() {
        let x = m[(r, i)];
        let y = m[(r, i + 1)];
        m[(r, i)] = x * g[0][0] + y * g[1][0];
        m[(r, i + 1)] = x * g[0][1] + y * g[1][1];
    }
}

fn apply_rows_adjoint(m: &mut CMat, i: usize, g: &[[C64; 2]; 2], _n: usize) {
    for c in 0..m.cols() {
        let x = m[(i, c)];
        let y = m[(i + 1, c)];
        m[(i, c)] = g[0][0].conj() * x + g[1][0].conj() * y;
        m[(i + 1, c)] = g[0][1].conj() * x + g[1][1].conj() * y;
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Greedy matching of two eigenvalue lists. Returns the largest matched
/// distance, divided by `|y|` when `relative` is set.
pub fn multiset_distance(a: &[C64], b: &[C64], relative: bool) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, cabs(x - y)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        let scale = if relative {
            cabs(b[j]).max(f64::MIN_POSITIVE)
        } else {
            1.0
        };
        worst = worst.max(d / scale);
    }
    worst
}
