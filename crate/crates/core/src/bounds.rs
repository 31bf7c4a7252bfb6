//! Acute angles between vectors and a posteriori eigenvector error bounds.
//!
//! All bounds share the shape `residual / (scale · sep)` and return
//! `f64::INFINITY` when `sep = 0`, so that callers can keep the row and flag
//! it instead of dropping it.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::{cabs, dotc, norm2, C64};

/// `sin∠(u, w)`: the distance from `u/‖u‖` to its projection on `span{w}`,
/// clamped to `[0, 1]`.
///
/// The projection form keeps full relative accuracy for nearly parallel
/// vectors, where `√(1 − cos²)` loses everything below `√ε`.
pub fn sin_acute_angle(u: &[C64], w: &[C64]) -> Result<f64> {
    if u.len() != w.len() {
        return Err(Error::DimensionMismatch("vectors differ in length"));
    }
    let (nu, nw) = (norm2(u), norm2(w));
    if nu == 0.0 || nw == 0.0 {
        return Err(Error::ZeroVector);
    }
    let uh: Vec<C64> = u.iter().map(|z| z / nu).collect();
    let wh: Vec<C64> = w.iter().map(|z| z / nw).collect();
    let c = dotc(&wh, &uh);
    let r: Vec<C64> = uh.iter().zip(&wh).map(|(a, b)| a - c * b).collect();
    Ok(norm2(&r).clamp(0.0, 1.0))
}

/// The scalar `α = w*u / (‖u‖‖w‖²)` minimizing `‖u/‖u‖ − αw‖₂`.
pub fn optimal_alpha(u: &[C64], w: &[C64]) -> Result<C64> {
    let (nu, nw) = (norm2(u), norm2(w));
    if nu == 0.0 || nw == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(dotc(w, u) / (nu * nw * nw))
}

/// `‖u/‖u‖ − αw‖₂`, whose minimum over `α` is `sin∠(u, w)`.
pub fn angle_objective(u: &[C64], w: &[C64], alpha: C64) -> Result<f64> {
    let nu = norm2(u);
    if nu == 0.0 {
        return Err(Error::ZeroVector);
    }
    let r: Vec<C64> = u.iter().zip(w).map(|(a, b)| a / nu - alpha * b).collect();
    Ok(norm2(&r))
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// `‖L(λ̃)ṽ‖ / (‖ṽ‖ sep)`, the bound on `sin∠(v, ṽ)` for a pencil eigenvector.
pub fn gep_eigvec_bound(residual_l: f64, norm_v: f64, sep: f64) -> f64 {
    ratio(residual_l, norm_v * sep)
}

/// `‖g(λ̃)‖ ‖P(λ̃)x̃‖ / sep` for any linearization with a right-sided
/// factorization at `λ̃`.
pub fn pep_bound_general(g_norm: f64, residual_p: f64, sep: f64) -> f64 {
    ratio(g_norm * residual_p, sep)
}

/// `‖P(λ̃)x̃‖ / (max(1, |λ̃|^{d−1}) sep)` for block Kronecker linearizations.
pub fn pep_bound_kronecker(residual_p: f64, lambda: C64, d: usize, sep: f64) -> f64 {
    let r = cabs(lambda);
    let scale = if r <= 1.0 { 1.0 } else { math::powi(r, d - 1) };
    ratio(residual_p, scale * sep)
}

/// `√(Σ_{i<d} |λ|^{2i})`, evaluated without overflow for large `|λ|`.
pub fn frobenius_scale(lambda: C64, d: usize) -> f64 {
    let r = cabs(lambda);
    if r <= 1.0 {
        let mut sum = 0.0;
        let mut p = 1.0;
        for _ in 0..d {
            sum += p;
            p *= r * r;
        }
        math::sqrt(sum)
    } else {
        let inv = 1.0 / (r * r);
        let mut sum = 0.0;
        let mut p = 1.0;
        for _ in 0..d {
            sum += p;
            p *= inv;
        }
        math::powi(r, d - 1) * math::sqrt(sum)
    }
}

/// `‖P(λ̃)x̃‖ / (√(Σ_{i<d}|λ̃|^{2i}) sep)` for the Frobenius companion form.
pub fn pep_bound_frobenius(residual_p: f64, lambda: C64, d: usize, sep: f64) -> f64 {
    ratio(residual_p, frobenius_scale(lambda, d) * sep)
}

/// Diagnostics attached to one row of results.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RowFlags {
    /// `sep` vanished to round-off; the bounds are infinite.
    pub sep_vanishing: bool,
    /// The nearest reference eigenvalue is not clearly nearest, or was also
    /// claimed by another computed eigenvalue.
    pub ambiguous_pairing: bool,
    /// The reference eigenvalue belongs to a cluster.
    pub clustered: bool,
    /// The designated identity block of the pencil eigenvector was
    /// negligible and recovery used the fallback block.
    pub recovery_fallback: bool,
    /// The paired reference eigenpair did not reach the residual threshold.
    pub unconverged_reference: bool,
}

impl RowFlags {
    pub fn any(&self) -> bool {
        self.sep_vanishing
            || self.ambiguous_pairing
            || self.clustered
            || self.recovery_fallback
            || self.unconverged_reference
    }
}

/// One eigenpair's error and bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub index: usize,
    pub lambda_exact: C64,
    pub lambda_computed: C64,
    /// `‖P(λ̃)x̃‖₂` with `‖x̃‖₂ = 1`.
    pub residual: f64,
    pub sep: f64,
    pub sin_angle: f64,
    pub bound_kron: f64,
    pub bound_frob: f64,
    /// `‖g(λ̃)‖₂` of the factorization selected for `λ̃`.
    pub g_norm: f64,
    pub flags: RowFlags,
}

impl BoundRow {
    /// `bound_kron / sin_angle`; infinite when the error is exactly zero.
    pub fn ratio(&self) -> f64 {
        ratio(self.bound_kron, self.sin_angle)
    }
}

/// Relative gap below which the nearest reference eigenvalue is ambiguous.
pub const PAIRING_GAP: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pairing {
    pub reference: usize,
    pub distance: f64,
    pub ambiguous: bool,
}

/// Pairs each computed eigenvalue with the nearest reference eigenvalue.
/// A pairing is ambiguous when the runner-up is within `PAIRING_GAP·|λ̃|` of
/// the nearest, or when two computed eigenvalues pick the same reference.
pub fn pair_nearest(computed: &[C64], reference: &[C64]) -> Result<Vec<Pairing>> {
    if reference.is_empty() && !computed.is_empty() {
        return Err(Error::DimensionMismatch("no reference eigenvalues to pair with"));
    }
    let mut out: Vec<Pairing> = computed
        .iter()
        .map(|&z| {
            let mut best = (usize::MAX, f64::INFINITY);
            let mut second = f64::INFINITY;
            for (k, &r) in reference.iter().enumerate() {
                let dist = cabs(z - r);
                if dist < best.1 {
                    second = best.1;
                    best = (k, dist);
                } else if dist < second {
                    second = dist;
                }
            }
            Pairing {
                reference: best.0,
                distance: best.1,
                ambiguous: second - best.1 <= PAIRING_GAP * cabs(z),
            }
        })
        .collect();
    let mut claims = alloc::vec![0usize; reference.len()];
    for p in &out {
        claims[p.reference] += 1;
    }
    for p in &mut out {
        if claims[p.reference] > 1 {
            p.ambiguous = true;
        }
    }
    Ok(out)
}
