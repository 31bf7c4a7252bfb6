//! Unitary completions and the separation of a shift from the spectrum
//! left after deflating one eigenvector.

use crate::error::{Error, Result};
use crate::matrix::{cabs, dotc, norm2, CMat, C64, ONE, ZERO};

use super::rotation::Reflector;
use super::svd::smallest_singular_value;

/// Unitary `W` whose first column is the unit vector `u`.
///
/// `W = P·diag(−φ, 1, …, 1)` where `P` is the Householder reflector mapping
/// `u` to `−φ e₁`, `φ = u₀/|u₀|`.
pub fn unitary_completion(u: &[C64]) -> Result<CMat> {
    let nrm = norm2(u);
    if nrm == 0.0 {
        return Err(Error::ZeroVector);
    }
    if (nrm - 1.0).abs() > 1e-12 {
        return Err(Error::DimensionMismatch("unitary_completion expects a unit vector"));
    }
    let n = u.len();
    let mut w = CMat::identity(n);
    let phase = if u[0] == ZERO { ONE } else { u[0] / cabs(u[0]) };
    if let Some(r) = Reflector::new(u) {
        r.apply_left(&mut w, 0, 0..n);
        for i in 0..n {
            w[(i, 0)] *= -phase;
        }
    }
    // exact first column
    w.set_column(0, u);
    Ok(w)
}

/// Diagnostics attached to a separation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SepFlags {
    /// `sep` fell to round-off level: `λ̃` (numerically) hits another
    /// eigenvalue of the deflated pencil and the bounds degenerate.
    pub vanishing: bool,
    /// Eigenvalue recovered from the supplied eigenvector, `(Bz)*(Az)/‖Bz‖²`.
    pub lambda_exact: C64,
    /// `‖A z − λ₀ B z‖ / ‖A‖_F` for the normalized eigenvector `z`.
    pub eigen_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SepResult {
    pub sep: f64,
    pub lambda_used: C64,
    pub flags: SepFlags,
}

/// Eigenvector consistency threshold, relative to `‖A‖_F`.
pub const EIGENVECTOR_TOL: f64 = 1e-8;

/// `σ_min(Q₂*(A − λ̃B)Z₂)` where `[z₁ Z₂]`, `[q₁ Q₂]` are unitary completions
/// of `z₁ = v/‖v‖` and `q₁ = Bz₁/‖Bz₁‖`. Both completions leave the first
/// column of `Q*(A − λB)Z` equal to a multiple of `e₁`, so the trailing
/// block is the deflated pencil `A₁ − λ̃B₁` up to unitary factors.
pub fn separation(a: &CMat, b: &CMat, v: &[C64], lambda: C64) -> Result<SepResult> {
    if !a.is_square() || a.shape() != b.shape() || v.len() != a.rows() {
        return Err(Error::DimensionMismatch("separation: pencil and vector sizes differ"));
    }
    let z1 = crate::matrix::normalized(v)?;
    let bz = b.mul_vec(&z1);
    let bz_norm = norm2(&bz);
    let b_norm = b.frobenius_norm();
    if bz_norm <= 1e-14 * b_norm || bz_norm == 0.0 {
        return Err(Error::InfiniteEigenvalue);
    }
    let az = a.mul_vec(&z1);
    let lambda0 = dotc(&bz, &az) / (bz_norm * bz_norm);
    let a_norm = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let resid: alloc::vec::Vec<C64> = az.iter().zip(&bz).map(|(x, y)| x - lambda0 * y).collect();
    let eigen_residual = norm2(&resid) / a_norm;
    if eigen_residual > EIGENVECTOR_TOL {
        return Err(Error::NotAnEigenvector(eigen_residual));
    }
    let q1: alloc::vec::Vec<C64> = bz.iter().map(|x| x / bz_norm).collect();

    let n = a.rows();
    let z = unitary_completion(&z1)?;
    let q = unitary_completion(&q1)?;
    let mut shifted = a.clone();
    shifted.add_scaled(-lambda, b);
    let full = q.adjoint().matmul(&shifted).matmul(&z);
    let trailing = full.submatrix(1, n, 1, n);
    let sep = smallest_singular_value(&trailing)?;
    let vanishing = sep <= 1e-14 * shifted.frobenius_norm();
    Ok(SepResult {
        sep,
        lambda_used: lambda,
        flags: SepFlags {
            vanishing,
            lambda_exact: lambda0,
            eigen_residual,
        },
    })
}
