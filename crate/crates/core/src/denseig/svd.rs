//! Singular values by Householder bidiagonalization followed by implicit
//! zero-chasing QR on the (real) bidiagonal.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::{cabs, CMat, C64};

use super::rotation::Reflector;

/// All singular values, largest first.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("singular_values input"));
    }
    let work = if m.rows() >= m.cols() { m.clone() } else { m.adjoint() };
    let (mut d, mut e) = bidiagonalize(work);
    bidiagonal_qr(&mut d, &mut e)?;
    let mut s: Vec<f64> = d.into_iter().map(f64::abs).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// `σ_min`; an empty matrix has no singular values and reports `+∞`.
pub fn smallest_singular_value(m: &CMat) -> Result<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(f64::INFINITY);
    }
    Ok(*singular_values(m)?.last().expect("nonempty"))
}

/// `‖M‖₂ = σ_max`.
pub fn spectral_norm(m: &CMat) -> Result<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    Ok(singular_values(m)?[0])
}

/// Reduces an `m × n` matrix (`m ≥ n`) to upper bidiagonal form and returns
/// the moduli of its diagonal and superdiagonal. Phases can be absorbed by
/// diagonal unitary scalings, so the moduli carry the singular values.
fn bidiagonalize(mut a: CMat) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = a.shape();
    let mut d = Vec::with_capacity(n);
    let mut e = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let col: Vec<C64> = (k..m).map(|i| a[(i, k)]).collect();
        if let Some(r) = Reflector::new(&col) {
            r.apply_left(&mut a, k, k..n);
        }
        d.push(cabs(a[(k, k)]));
        if k + 1 < n {
            let row: Vec<C64> = (k + 1..n).map(|j| a[(k, j)].conj()).collect();
            if let Some(r) = Reflector::new(&row) {
                r.apply_right(&mut a, k + 1, k..m);
            }
            e.push(cabs(a[(k, k + 1)]));
        }
    }
    (d, e)
}

#[inline]
fn rotation(f: f64, g: f64) -> (f64, f64, f64) {
    if g == 0.0 {
        return (1.0, 0.0, f);
    }
    let r = math::hypot(f, g);
    (f / r, g / r, r)
}

/// Golub–Kahan implicit-shift QR on a real bidiagonal `(d, e)`; on return
/// `|d|` holds the singular values.
fn bidiagonal_qr(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let scale = d.iter().chain(e.iter()).fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok(());
    }
    d.iter_mut().for_each(|x| *x /= scale);
    e.iter_mut().for_each(|x| *x /= scale);

    let eps = f64::EPSILON;
    let tiny = eps; // relative to the unit-scaled norm
    let max_steps = 60 * n * n.max(4);
    let mut steps = 0;
    loop {
        for i in 0..n - 1 {
            if e[i].abs() <= eps * (d[i].abs() + d[i + 1].abs()) || e[i].abs() <= eps * eps {
                e[i] = 0.0;
            }
        }
        let mut hi = n - 1;
        while hi > 0 && e[hi - 1] == 0.0 {
            hi -= 1;
        }
        if hi == 0 {
            break;
        }
        let mut lo = hi - 1;
        while lo > 0 && e[lo - 1] != 0.0 {
            lo -= 1;
        }

        steps += 1;
        if steps > max_steps {
            return Err(Error::NonConvergence {
                routine: "bidiagonal_qr",
                iterations: max_steps,
            });
        }

        if let Some(k) = (lo..hi).find(|&k| d[k].abs() <= tiny) {
            // Zero diagonal: rotate the row's superdiagonal entry out from the left.
            d[k] = 0.0;
            let mut f = e[k];
            e[k] = 0.0;
            for j in k + 1..=hi {
                let (c, s, r) = rotation(d[j], f);
                d[j] = r;
                if j < hi {
                    f = -s * e[j];
                    e[j] *= c;
                }
            }
            continue;
        }
        if d[hi].abs() <= tiny {
            // Zero at the bottom: rotate the column entry out from the right.
            d[hi] = 0.0;
            let mut f = e[hi - 1];
            e[hi - 1] = 0.0;
            for j in (lo..hi).rev() {
                let (c, s, r) = rotation(d[j], f);
                d[j] = r;
                if j > lo {
                    f = -s * e[j - 1];
                    e[j - 1] *= c;
                }
            }
            continue;
        }
        golub_kahan_step(d, e, lo, hi);
    }
    d.iter_mut().for_each(|x| *x *= scale);
    Ok(())
}

fn golub_kahan_step(d: &mut [f64], e: &mut [f64], lo: usize, hi: usize) {
    // Wilkinson shift from the trailing 2×2 of BᵀB.
    let dm = d[hi - 1];
    let dn = d[hi];
    let em = e[hi - 1];
    let emm = if hi - 1 > lo { e[hi - 2] } else { 0.0 };
    let ta = dm * dm + emm * emm;
    let tb = dm * em;
    let tc = dn * dn + em * em;
    let half = 0.5 * (ta - tc);
    let mu = if half == 0.0 && tb == 0.0 {
        tc
    } else {
        let denom = half + math::hypot(half, tb).copysign(half);
        if denom == 0.0 {
            tc - tb.abs()
        } else {
            tc - tb * tb / denom
        }
    };

    let mut y = d[lo] * d[lo] - mu;
    let mut z = d[lo] * e[lo];
    for k in lo..hi {
        let (c, s, r) = rotation(y, z);
        if k > lo {
            e[k - 1] = r;
        }
        y = c * d[k] + s * e[k];
        e[k] = -s * d[k] + c * e[k];
        z = s * d[k + 1];
        d[k + 1] *= c;

        let (c, s, r) = rotation(y, z);
        d[k] = r;
        y = c * e[k] + s * d[k + 1];
        d[k + 1] = -s * e[k] + c * d[k + 1];
        if k + 1 < hi {
            z = s * e[k + 1];
            e[k + 1] *= c;
        }
    }
    e[hi - 1] = y;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ZERO;

    #[test]
    fn diagonal_values_sorted() {
        let m = CMat::diag(&[C64::new(3.0, 0.0), C64::new(0.0, 1e-5)]);
        let s = singular_values(&m).unwrap();
        assert!((s[0] - 3.0).abs() < 1e-15);
        assert!((s[1] - 1e-5).abs() < 1e-20);
        assert!((smallest_singular_value(&m).unwrap() - 1e-5).abs() < 1e-20);
    }

    #[test]
    fn empty_matrix_is_infinite() {
        assert_eq!(smallest_singular_value(&CMat::zeros(0, 0)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn rank_one_rectangular() {
        // u vᵀ with ‖u‖ = √2, ‖v‖ = √3
        let m = CMat::from_fn(
            2,
            3,
            |i, _| if i == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) },
        );
        let s = singular_values(&m).unwrap();
        assert!((s[0] - 6f64.sqrt()).abs() < 1e-14);
        assert!(s[1].abs() < 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let s = singular_values(&CMat::from_fn(3, 3, |_, _| ZERO)).unwrap();
        assert!(s.iter().all(|&x| x == 0.0));
    }
}
