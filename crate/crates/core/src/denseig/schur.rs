//! Complex generalized Schur decomposition `A = Q·T_A·Z*`, `B = Q·T_B·Z*`.
//!
//! Householder QR of `B`, Givens reduction to Hessenberg-triangular form,
//! then implicit single-shift QZ sweeps with Wilkinson shifts, an
//! exceptional shift every tenth iteration, and explicit handling of
//! (numerically) zero diagonal entries of `T_B` (infinite eigenvalues).

use crate::error::{Error, Result};
use crate::matrix::{cabs, CMat, C64, ZERO};

use super::rotation::{abs1, givens, rot_accumulate_left, rot_cols, rot_rows, Reflector};
use super::GeneralizedSchur;

/// Relative deflation threshold on a subdiagonal entry of `T_A`, measured
/// against its two diagonal neighbours.
pub const DEFLATION_TOL: f64 = 1e-14;

/// Iteration budget per unit of dimension.
pub const ITERATIONS_PER_DIM: usize = 60;

pub fn generalized_schur(a: &CMat, b: &CMat) -> Result<GeneralizedSchur> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(
            "pencil matrices must be square and of equal size",
        ));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite("generalized_schur input"));
    }
    let n = a.rows();
    let mut h = a.clone();
    let mut t = b.clone();
    let mut q = CMat::identity(n);
    let mut z = CMat::identity(n);

    hessenberg_triangular(&mut h, &mut t, &mut q, &mut z);
    qz_iterate(&mut h, &mut t, &mut q, &mut z)?;

    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
            t[(i, j)] = ZERO;
        }
    }
    Ok(GeneralizedSchur { q, z, ta: h, tb: t })
}

/// Reduces `(H, T)` to upper Hessenberg / upper triangular form in place,
/// accumulating the transformations into `Q` and `Z`.
pub(crate) fn hessenberg_triangular(h: &mut CMat, t: &mut CMat, q: &mut CMat, z: &mut CMat) {
    let n = h.rows();
    if n == 0 {
        return;
    }
    for k in 0..n.saturating_sub(1) {
        let x: alloc::vec::Vec<C64> = (k..n).map(|i| t[(i, k)]).collect();
        if let Some(r) = Reflector::new(&x) {
            r.apply_left(t, k, k..n);
            r.apply_left(h, k, 0..n);
            r.apply_right(q, k, 0..n);
        }
        for i in k + 1..n {
            t[(i, k)] = ZERO;
        }
    }
    for j in 0..n.saturating_sub(2) {
        for i in (j + 2..n).rev() {
            let (c, s, r) = givens(h[(i - 1, j)], h[(i, j)]);
            h[(i - 1, j)] = r;
            h[(i, j)] = ZERO;
            rot_rows(h, i - 1, i, c, s, j + 1..n);
            rot_rows(t, i - 1, i, c, s, i - 1..n);
            rot_accumulate_left(q, i - 1, i, c, s);

            let (c, s, r) = givens(t[(i, i)], t[(i, i - 1)]);
            t[(i, i)] = r;
            t[(i, i - 1)] = ZERO;
            rot_cols(t, i, i - 1, c, s, 0..i);
            rot_cols(h, i, i - 1, c, s, 0..n);
            rot_cols(z, i, i - 1, c, s, 0..n);
        }
    }
}

enum Next {
    /// `ilast` decoupled with a finite or infinite eigenvalue.
    Deflate,
    /// `T[ilast, ilast]` is zero: rotate `H[ilast, ilast-1]` away first.
    ZeroT,
    /// Run a QZ sweep on the active window starting at `ifirst`.
    Sweep(usize),
}

fn qz_iterate(h: &mut CMat, t: &mut CMat, q: &mut CMat, z: &mut CMat) -> Result<()> {
    let n = h.rows();
    if n == 0 {
        return Ok(());
    }
    let ulp = f64::EPSILON;
    let safmin = f64::MIN_POSITIVE;
    let anorm = h.frobenius_norm();
    let bnorm = t.frobenius_norm();
    let atol = safmin.max(ulp * anorm);
    let btol = safmin.max(ulp * bnorm);
    let ascale = 1.0 / safmin.max(anorm);
    let bscale = 1.0 / safmin.max(bnorm);
    let small_sub = |h: &CMat, j: usize| -> bool {
        let local = DEFLATION_TOL * (abs1(h[(j, j)]) + abs1(h[(j - 1, j - 1)]));
        abs1(h[(j, j - 1)]) <= atol.max(local)
    };

    let mut ilast = n - 1;
    let mut iiter = 0usize;
    let mut eshift = ZERO;
    let maxit = ITERATIONS_PER_DIM * n;

    for _ in 0..maxit {
        let next = if ilast == 0 {
            Next::Deflate
        } else if small_sub(h, ilast) {
            h[(ilast, ilast - 1)] = ZERO;
            Next::Deflate
        } else if abs1(t[(ilast, ilast)]) <= btol {
            t[(ilast, ilast)] = ZERO;
            Next::ZeroT
        } else {
            find_active_block(h, t, q, z, ilast, atol, btol, ascale, &small_sub)
        };

        match next {
            Next::Sweep(ifirst) => {
                iiter += 1;
                let shift = if !iiter.is_multiple_of(10) {
                    wilkinson_shift(h, t, ilast, ascale, bscale)
                } else {
                    eshift += h[(ilast, ilast - 1)] * ascale / (t[(ilast - 1, ilast - 1)] * bscale);
                    eshift
                };
                single_shift_sweep(h, t, q, z, ifirst, ilast, shift, atol, ascale, bscale);
                continue;
            }
            Next::ZeroT => {
                let (c, s, r) = givens(h[(ilast, ilast)], h[(ilast, ilast - 1)]);
                h[(ilast, ilast)] = r;
                h[(ilast, ilast - 1)] = ZERO;
                rot_cols(h, ilast, ilast - 1, c, s, 0..ilast);
                rot_cols(t, ilast, ilast - 1, c, s, 0..ilast);
                rot_cols(z, ilast, ilast - 1, c, s, 0..n);
            }
            Next::Deflate => {}
        }

        normalize_diagonal(h, t, z, ilast, safmin);
        if ilast == 0 {
            return Ok(());
        }
        ilast -= 1;
        iiter = 0;
        eshift = ZERO;
    }
    Err(Error::NonConvergence {
        routine: "generalized_schur",
        iterations: maxit,
    })
}

/// Scales column `j` so that `T[j, j]` is real and non-negative.
fn normalize_diagonal(h: &mut CMat, t: &mut CMat, z: &mut CMat, j: usize, safmin: f64) {
    let absb = cabs(t[(j, j)]);
    if absb > safmin {
        let sign = t[(j, j)].conj() / absb;
        t[(j, j)] = C64::new(absb, 0.0);
        for i in 0..j {
            t[(i, j)] *= sign;
        }
        for i in 0..=j {
            h[(i, j)] *= sign;
        }
        for i in 0..z.rows() {
            z[(i, j)] *= sign;
        }
    } else {
        t[(j, j)] = ZERO;
    }
}

/// Scans upward from `ilast` for the top of the unreduced block. Zero
/// diagonal entries of `T` met on the way are chased out of the block.
#[allow(clippy::too_many_arguments)]
fn find_active_block(
    h: &mut CMat,
    t: &mut CMat,
    q: &mut CMat,
    z: &mut CMat,
    ilast: usize,
    atol: f64,
    btol: f64,
    ascale: f64,
    small_sub: &impl Fn(&CMat, usize) -> bool,
) -> Next {
    let n = h.rows();
    for j in (0..ilast).rev() {
        let ilazro = if j == 0 {
            true
        } else if small_sub(h, j) {
            h[(j, j - 1)] = ZERO;
            true
        } else {
            false
        };

        if abs1(t[(j, j)]) < btol {
            t[(j, j)] = ZERO;
            let mut ilazr2 =
                !ilazro && abs1(h[(j, j - 1)]) * (ascale * abs1(h[(j + 1, j)])) <= abs1(h[(j, j)]) * (ascale * atol);

            if ilazro || ilazr2 {
                // The zero of T splits off at the top: rotate it down the
                // diagonal of H.
                for jch in j..ilast {
                    let (c, s, r) = givens(h[(jch, jch)], h[(jch + 1, jch)]);
                    h[(jch, jch)] = r;
                    h[(jch + 1, jch)] = ZERO;
                    rot_rows(h, jch, jch + 1, c, s, jch + 1..n);
                    rot_rows(t, jch, jch + 1, c, s, jch + 1..n);
                    rot_accumulate_left(q, jch, jch + 1, c, s);
                    if ilazr2 {
                        h[(jch, jch - 1)] *= c;
                    }
                    ilazr2 = false;
                    if abs1(t[(jch + 1, jch + 1)]) >= btol {
                        return if jch + 1 >= ilast {
                            Next::Deflate
                        } else {
                            Next::Sweep(jch + 1)
                        };
                    }
                    t[(jch + 1, jch + 1)] = ZERO;
                }
                return Next::ZeroT;
            }

            // Chase the zero down to T[ilast, ilast].
            for jch in j..ilast {
                let (c, s, r) = givens(t[(jch, jch + 1)], t[(jch + 1, jch + 1)]);
                t[(jch, jch + 1)] = r;
                t[(jch + 1, jch + 1)] = ZERO;
                if jch + 2 < n {
                    rot_rows(t, jch, jch + 1, c, s, jch + 2..n);
                }
                rot_rows(h, jch, jch + 1, c, s, jch - 1..n);
                rot_accumulate_left(q, jch, jch + 1, c, s);

                let (c, s, r) = givens(h[(jch + 1, jch)], h[(jch + 1, jch - 1)]);
                h[(jch + 1, jch)] = r;
                h[(jch + 1, jch - 1)] = ZERO;
                rot_cols(h, jch, jch - 1, c, s, 0..jch + 1);
                rot_cols(t, jch, jch - 1, c, s, 0..jch);
                rot_cols(z, jch, jch - 1, c, s, 0..n);
            }
            return Next::ZeroT;
        } else if ilazro {
            return Next::Sweep(j);
        }
    }
    unreachable!("the scan always terminates at j = 0")
}

/// Eigenvalue of the trailing 2×2 of `A·B⁻¹` closest to the last diagonal ratio.
fn wilkinson_shift(h: &CMat, t: &CMat, ilast: usize, ascale: f64, bscale: f64) -> C64 {
    let tl = t[(ilast, ilast)] * bscale;
    let tm = t[(ilast - 1, ilast - 1)] * bscale;
    let u12 = t[(ilast - 1, ilast)] * bscale / tl;
    let ad11 = h[(ilast - 1, ilast - 1)] * ascale / tm;
    let ad21 = h[(ilast, ilast - 1)] * ascale / tm;
    let ad12 = h[(ilast - 1, ilast)] * ascale / tl;
    let ad22 = h[(ilast, ilast)] * ascale / tl;
    let abi22 = ad22 - u12 * ad21;
    let t1 = (ad11 + abi22) * 0.5;
    let rtdisc = (t1 * t1 + ad12 * ad21 - ad11 * ad22).sqrt();
    let diff = t1 - abi22;
    if diff.re * rtdisc.re + diff.im * rtdisc.im <= 0.0 {
        t1 + rtdisc
    } else {
        t1 - rtdisc
    }
}

#[allow(clippy::too_many_arguments)]
fn single_shift_sweep(
    h: &mut CMat,
    t: &mut CMat,
    q: &mut CMat,
    z: &mut CMat,
    ifirst: usize,
    ilast: usize,
    shift: C64,
    atol: f64,
    ascale: f64,
    bscale: f64,
) {
    let n = h.rows();
    // Start the bulge lower down if two consecutive subdiagonals are small.
    let mut istart = ifirst;
    let mut ctemp = h[(ifirst, ifirst)] * ascale - shift * (t[(ifirst, ifirst)] * bscale);
    for j in (ifirst + 1..ilast).rev() {
        let c = h[(j, j)] * ascale - shift * (t[(j, j)] * bscale);
        let mut temp = abs1(c);
        let mut temp2 = ascale * abs1(h[(j + 1, j)]);
        let tempr = temp.max(temp2);
        if tempr < 1.0 && tempr != 0.0 {
            temp /= tempr;
            temp2 /= tempr;
        }
        if abs1(h[(j, j - 1)]) * temp2 <= temp * atol {
            istart = j;
            ctemp = c;
            break;
        }
    }

    let (mut c, mut s, _) = givens(ctemp, h[(istart + 1, istart)] * ascale);
    for j in istart..ilast {
        if j > istart {
            let (c2, s2, r) = givens(h[(j, j - 1)], h[(j + 1, j - 1)]);
            c = c2;
            s = s2;
            h[(j, j - 1)] = r;
            h[(j + 1, j - 1)] = ZERO;
        }
        rot_rows(h, j, j + 1, c, s, j..n);
        rot_rows(t, j, j + 1, c, s, j..n);
        rot_accumulate_left(q, j, j + 1, c, s);

        let (c2, s2, r) = givens(t[(j + 1, j + 1)], t[(j + 1, j)]);
        t[(j + 1, j + 1)] = r;
        t[(j + 1, j)] = ZERO;
        rot_cols(h, j + 1, j, c2, s2, 0..(j + 3).min(ilast + 1));
        rot_cols(t, j + 1, j, c2, s2, 0..j + 1);
        rot_cols(z, j + 1, j, c2, s2, 0..n);
    }
}
