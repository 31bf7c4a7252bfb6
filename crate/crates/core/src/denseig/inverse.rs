use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{cabs, norm2, CMat, C64};
use crate::rng::Gaussian;

use super::lu::Lu;

/// Maximum solve-and-normalize steps.
pub const MAX_STEPS: usize = 3;

const START_SEED: u64 = 0x1de5_eed5;

/// Unit vector approximately spanning `null(A − λ̃B)` by inverse iteration
/// from a fixed pseudorandom start. Returns the iterate with the smallest
/// residual `‖(A − λ̃B)v‖₂`.
pub fn inverse_iteration_vector(a: &CMat, b: &CMat, lambda: C64) -> Result<Vec<C64>> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::DimensionMismatch("inverse iteration needs a square pencil"));
    }
    match attempt(a, b, lambda) {
        Some(v) => Ok(v),
        None => {
            let bump = 1e-13 * (1.0 + cabs(lambda));
            attempt(a, b, lambda + bump).ok_or(Error::Breakdown)
        }
    }
}

fn attempt(a: &CMat, b: &CMat, lambda: C64) -> Option<Vec<C64>> {
    let n = a.rows();
    let mut shifted = a.clone();
    shifted.add_scaled(-lambda, b);
    let scale = shifted.frobenius_norm().max(1.0);
    let lu = Lu::factor(&shifted);
    if lu.min_pivot <= f64::MIN_POSITIVE * scale {
        return None;
    }

    let mut x = Gaussian::new(START_SEED).complex_vector(n);
    let nrm = norm2(&x);
    x.iter_mut().for_each(|z| *z /= nrm);

    let mut best: Option<(f64, Vec<C64>)> = None;
    for _ in 0..MAX_STEPS {
        let y = lu.solve(&x);
        let ny = norm2(&y);
        if !ny.is_finite() || ny == 0.0 {
            break;
        }
        x = y.into_iter().map(|z| z / ny).collect();
        let r = norm2(&shifted.mul_vec(&x));
        if best.as_ref().is_none_or(|(br, _)| r < *br) {
            best = Some((r, x.clone()));
        }
        if r <= f64::EPSILON * shifted.frobenius_norm() {
            break;
        }
    }
    best.map(|(_, v)| v)
}
