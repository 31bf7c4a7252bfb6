//! Plane rotations and Householder reflectors shared by the factorizations.

use alloc::vec::Vec;

use crate::math;
use crate::matrix::{cabs, norm2, CMat, C64, ZERO};

#[inline]
pub(crate) fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Complex Givens rotation: returns `(c, s, r)` with `c` real such that
///
/// ```text
/// [  c   s ] [f]   [r]
/// [ -s̄   c ] [g] = [0]
/// ```
pub(crate) fn givens(f: C64, g: C64) -> (f64, C64, C64) {
    if g == ZERO {
        return (1.0, ZERO, f);
    }
    if f == ZERO {
        let ga = cabs(g);
        return (0.0, g.conj() / ga, C64::new(ga, 0.0));
    }
    let fa = cabs(f);
    let ga = cabs(g);
    let nrm = math::hypot(fa, ga);
    let phase = f / fa;
    (fa / nrm, phase * g.conj() / nrm, phase * nrm)
}

/// Rows `a`, `b` ← `R` · rows, with `R = [[c, s], [-s̄, c]]`, over `cols`.
pub(crate) fn rot_rows(m: &mut CMat, a: usize, b: usize, c: f64, s: C64, cols: core::ops::Range<usize>) {
    for j in cols {
        let x = m[(a, j)];
        let y = m[(b, j)];
        m[(a, j)] = x * c + s * y;
        m[(b, j)] = y * c - s.conj() * x;
    }
}

/// Columns: `col_a ← c·col_a + s·col_b`, `col_b ← c·col_b − s̄·col_a`, over `rows`.
pub(crate) fn rot_cols(m: &mut CMat, a: usize, b: usize, c: f64, s: C64, rows: core::ops::Range<usize>) {
    for i in rows {
        let x = m[(i, a)];
        let y = m[(i, b)];
        m[(i, a)] = x * c + s * y;
        m[(i, b)] = y * c - s.conj() * x;
    }
}

/// Accumulates a row rotation `R` (applied to rows `a`, `b`) into `Q ← Q·R*`.
pub(crate) fn rot_accumulate_left(q: &mut CMat, a: usize, b: usize, c: f64, s: C64) {
    for i in 0..q.rows() {
        let x = q[(i, a)];
        let y = q[(i, b)];
        q[(i, a)] = x * c + s.conj() * y;
        q[(i, b)] = y * c - s * x;
    }
}

/// Hermitian Householder reflector `P = I − β w w*` with `P x = −e^{iθ}‖x‖ e₁`,
/// where `θ = arg x₀`. `None` when `x` is already a multiple of `e₁`.
pub(crate) struct Reflector {
    pub w: Vec<C64>,
    pub beta: f64,
}

impl Reflector {
    pub fn new(x: &[C64]) -> Option<Self> {
        let tail = norm2(&x[1..]);
        if tail == 0.0 {
            return None;
        }
        let nrm = norm2(x);
        let x0 = x[0];
        let phase = if x0 == ZERO { C64::new(1.0, 0.0) } else { x0 / cabs(x0) };
        let mut w = x.to_vec();
        w[0] = x0 + phase * nrm;
        let wn = norm2(&w);
        Some(Self {
            w,
            beta: 2.0 / (wn * wn),
        })
    }

    /// `M[offset.., cols] ← P · M[offset.., cols]`.
    pub fn apply_left(&self, m: &mut CMat, offset: usize, cols: core::ops::Range<usize>) {
        for j in cols {
            let mut dot = ZERO;
            for (k, wk) in self.w.iter().enumerate() {
                dot += wk.conj() * m[(offset + k, j)];
            }
            let f = dot * self.beta;
            for (k, wk) in self.w.iter().enumerate() {
                m[(offset + k, j)] -= wk * f;
            }
        }
    }

    /// `M[rows, offset..] ← M[rows, offset..] · P`.
    pub fn apply_right(&self, m: &mut CMat, offset: usize, rows: core::ops::Range<usize>) {
        for i in rows {
            let mut dot = ZERO;
            for (k, wk) in self.w.iter().enumerate() {
                dot += m[(i, offset + k)] * wk;
            }
            let f = dot * self.beta;
            for (k, wk) in self.w.iter().enumerate() {
                m[(i, offset + k)] -= f * wk.conj();
            }
        }
    }
}
