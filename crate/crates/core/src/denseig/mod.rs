//! Dense complex linear algebra for generalized eigenvalue problems.
//!
//! Everything is written for small dense pencils (a few hundred rows at
//! most) and works in complex arithmetic throughout.

mod inverse;
mod lu;
mod rotation;
mod schur;
mod sep;
mod svd;

use alloc::vec::Vec;

use crate::error::Result;
use crate::matrix::{cabs, CMat, C64};

pub use inverse::{inverse_iteration_vector, MAX_STEPS as INVERSE_ITERATION_STEPS};
pub use lu::Lu;
pub use schur::{generalized_schur, DEFLATION_TOL, ITERATIONS_PER_DIM};
pub use sep::{separation, unitary_completion, SepFlags, SepResult, EIGENVECTOR_TOL};
pub use svd::{singular_values, smallest_singular_value, spectral_norm};

/// `A = Q·T_A·Z*`, `B = Q·T_B·Z*` with `Q`, `Z` unitary and `T_A`, `T_B`
/// upper triangular. Diagonal entries of `T_B` are real and non-negative.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedSchur {
    pub q: CMat,
    pub z: CMat,
    pub ta: CMat,
    pub tb: CMat,
}

/// Ratio threshold below which a `T_B` diagonal entry marks an infinite
/// eigenvalue, relative to `‖T_B‖_F`.
pub const INFINITE_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Eigenvalue {
    Finite(C64),
    Infinite,
}

impl Eigenvalue {
    pub fn finite(self) -> Option<C64> {
        match self {
            Eigenvalue::Finite(z) => Some(z),
            Eigenvalue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Eigenvalue::Infinite)
    }
}

/// Generalized eigenpair with the homogeneous coordinates `λ = alpha/beta`
/// taken from the diagonals of `T_A` and `T_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct GepEigenpair {
    pub alpha: C64,
    pub beta: C64,
    pub lambda: Eigenvalue,
    /// Unit right eigenvector (empty for infinite eigenvalues).
    pub v: Vec<C64>,
}

impl GeneralizedSchur {
    pub fn dim(&self) -> usize {
        self.ta.rows()
    }

    /// Diagonal ratios in Schur order.
    pub fn eigenvalues(&self) -> Vec<Eigenvalue> {
        eigenvalues(self)
    }

    /// `(‖Q T_A Z* − A‖_F, ‖Q T_B Z* − B‖_F)`.
    pub fn reconstruction_residuals(&self, a: &CMat, b: &CMat) -> (f64, f64) {
        let zh = self.z.adjoint();
        let ra = self.q.matmul(&self.ta).matmul(&zh).distance(a);
        let rb = self.q.matmul(&self.tb).matmul(&zh).distance(b);
        (ra, rb)
    }

    /// `(‖Q*Q − I‖_F, ‖Z*Z − I‖_F)`.
    pub fn unitarity_defects(&self) -> (f64, f64) {
        let n = self.dim();
        let id = CMat::identity(n);
        (
            self.q.adjoint().matmul(&self.q).distance(&id),
            self.z.adjoint().matmul(&self.z).distance(&id),
        )
    }
}

pub fn eigenvalues(s: &GeneralizedSchur) -> Vec<Eigenvalue> {
    let tol = INFINITE_TOL * s.tb.frobenius_norm();
    (0..s.dim())
        .map(|i| {
            let beta = s.tb[(i, i)];
            if cabs(beta) > tol && beta != C64::new(0.0, 0.0) {
                Eigenvalue::Finite(s.ta[(i, i)] / beta)
            } else {
                Eigenvalue::Infinite
            }
        })
        .collect()
}

/// Schur form, eigenvalues, and inverse-iteration eigenvectors of `A − λB`.
pub fn eigenpairs(a: &CMat, b: &CMat) -> Result<Vec<GepEigenpair>> {
    let schur = generalized_schur(a, b)?;
    schur
        .eigenvalues()
        .into_iter()
        .enumerate()
        .map(|(i, lambda)| {
            let v = match lambda {
                Eigenvalue::Finite(l) => inverse_iteration_vector(a, b, l)?,
                Eigenvalue::Infinite => Vec::new(),
            };
            Ok(GepEigenpair {
                alpha: schur.ta[(i, i)],
                beta: schur.tb[(i, i)],
                lambda,
                v,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ONE, ZERO};

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn eigenvalues_of_given_triangular_pair() {
        let s = GeneralizedSchur {
            q: CMat::identity(2),
            z: CMat::identity(2),
            ta: CMat::diag(&[re(2.0), re(3.0)]),
            tb: CMat::identity(2),
        };
        assert_eq!(
            s.eigenvalues(),
            [Eigenvalue::Finite(re(2.0)), Eigenvalue::Finite(re(3.0))]
        );
        let s = GeneralizedSchur {
            tb: CMat::diag(&[ONE, ZERO]),
            ..s
        };
        assert_eq!(s.eigenvalues()[1], Eigenvalue::Infinite);
    }

    #[test]
    fn diagonal_pencil_schur() {
        let d = [re(1.0), C64::new(-2.0, 0.5), re(4.0)];
        let a = CMat::diag(&d);
        let b = CMat::identity(3);
        let s = generalized_schur(&a, &b).unwrap();
        let mut got: Vec<C64> = s.eigenvalues().into_iter().map(|e| e.finite().unwrap()).collect();
        got.sort_by(|x, y| x.re.total_cmp(&y.re));
        let mut want = d.to_vec();
        want.sort_by(|x, y| x.re.total_cmp(&y.re));
        for (g, w) in got.iter().zip(&want) {
            assert!(cabs(g - w) < 1e-15);
        }
        for i in 0..3 {
            assert!((cabs(s.ta[(i, i)]) - cabs(s.ta[(i, i)])).abs() < 1e-15);
        }
    }

    #[test]
    fn singular_b_yields_infinite_eigenvalue() {
        let mut g = crate::rng::Gaussian::new(11);
        let a = g.complex_matrix(5, 5);
        let mut b = g.complex_matrix(5, 5);
        for j in 0..5 {
            b[(4, j)] = ZERO;
        }
        let s = generalized_schur(&a, &b).unwrap();
        let (ra, rb) = s.reconstruction_residuals(&a, &b);
        assert!(ra < 1e-12 * a.frobenius_norm() && rb < 1e-12 * b.frobenius_norm());
        assert_eq!(s.eigenvalues().iter().filter(|e| e.is_infinite()).count(), 1);
    }

    #[test]
    fn empty_and_scalar_pencils() {
        let s = generalized_schur(&CMat::zeros(0, 0), &CMat::zeros(0, 0)).unwrap();
        assert!(s.eigenvalues().is_empty());
        let a = CMat::diag(&[re(6.0)]);
        let b = CMat::diag(&[C64::new(0.0, 2.0)]);
        let s = generalized_schur(&a, &b).unwrap();
        assert!(cabs(s.eigenvalues()[0].finite().unwrap() - C64::new(0.0, -3.0)) < 1e-15);
    }
}
