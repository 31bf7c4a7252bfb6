//! The `(η+1)×(ε+1)` block pencil `M(λ) = λM1 + M0` of a block Kronecker
//! pencil, and the conditions under which it reproduces a given polynomial.

use alloc::vec::Vec;

use super::blocks::lk_coefficients;
use crate::error::{Error, Result};
use crate::matrix::{CMat, C64, ONE};
use crate::polyval::MatrixPolynomial;

/// `M(λ) = λ·m1 + m0`, both `(η+1)n × (ε+1)n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MPencil {
    pub m1: CMat,
    pub m0: CMat,
}

impl MPencil {
    pub fn zeros(eps: usize, eta: usize, n: usize) -> Self {
        Self {
            m1: CMat::zeros((eta + 1) * n, (eps + 1) * n),
            m0: CMat::zeros((eta + 1) * n, (eps + 1) * n),
        }
    }

    pub fn eval(&self, lambda: C64) -> CMat {
        let mut out = self.m0.clone();
        out.add_scaled(lambda, &self.m1);
        out
    }

    /// Checks that the shape is `(η+1)n × (ε+1)n`.
    pub fn check_shape(&self, eps: usize, eta: usize, n: usize) -> Result<()> {
        let want = ((eta + 1) * n, (eps + 1) * n);
        if self.m1.shape() != want || self.m0.shape() != want {
            return Err(Error::DimensionMismatch("M pencil has the wrong block shape"));
        }
        Ok(())
    }
}

fn check_grade(p: &MatrixPolynomial, eps: usize, eta: usize) -> Result<()> {
    if eps + eta + 1 != p.grade() {
        return Err(Error::DimensionMismatch("eps + eta + 1 must equal the grade"));
    }
    Ok(())
}

/// The canonical solution: top block row `(λA_d + A_{d−1}, A_{d−2}, …, A_η)`,
/// last block column continuing down with `A_{η−1}, …, A_0`, zeros elsewhere.
pub fn m0_pencil(p: &MatrixPolynomial, eps: usize, eta: usize) -> Result<MPencil> {
    check_grade(p, eps, eta)?;
    let (n, d) = (p.n(), p.grade());
    let mut m = MPencil::zeros(eps, eta, n);
    m.m1.set_block(0, 0, n, p.coeff(d));
    for j in 0..=eps {
        m.m0.set_block(0, j, n, p.coeff(d - 1 - j));
    }
    for i in 1..=eta {
        m.m0.set_block(i, eps, n, p.coeff(eta - i));
    }
    Ok(m)
}

/// `M₀(λ) + B(L_ε(λ)⊗I) + (L_η(λ)ᵀ⊗I)C` with `B` of shape `(η+1)n × εn`
/// and `C` of shape `ηn × (ε+1)n`.
pub fn make_m_pencil(p: &MatrixPolynomial, eps: usize, eta: usize, bmat: &CMat, cmat: &CMat) -> Result<MPencil> {
    let n = p.n();
    if bmat.shape() != ((eta + 1) * n, eps * n) || cmat.shape() != (eta * n, (eps + 1) * n) {
        return Err(Error::DimensionMismatch("correction matrices have the wrong shape"));
    }
    let mut m = m0_pencil(p, eps, eta)?;
    let (le0, le1) = lk_coefficients(eps, n);
    let (lh0, lh1) = lk_coefficients(eta, n);
    if eps > 0 {
        m.m0.add_scaled(ONE, &bmat.matmul(&le0));
        m.m1.add_scaled(ONE, &bmat.matmul(&le1));
    }
    if eta > 0 {
        m.m0.add_scaled(ONE, &lh0.transpose().matmul(cmat));
        m.m1.add_scaled(ONE, &lh1.transpose().matmul(cmat));
    }
    Ok(m)
}

/// Expands `(Λ_η(λ)ᵀ⊗I)·M(λ)·(Λ_ε(λ)⊗I)` into a polynomial of grade `ε+η+1`.
pub fn induced_polynomial(m: &MPencil, eps: usize, eta: usize, n: usize) -> Result<MatrixPolynomial> {
    m.check_shape(eps, eta, n)?;
    let d = eps + eta + 1;
    let mut coeffs = alloc::vec![CMat::zeros(n, n); d + 1];
    for i in 0..=eta {
        for j in 0..=eps {
            let k = (eta - i) + (eps - j);
            coeffs[k + 1].add_scaled(ONE, &m.m1.block(i, j, n));
            coeffs[k].add_scaled(ONE, &m.m0.block(i, j, n));
        }
    }
    MatrixPolynomial::new(coeffs)
}

/// The anti-diagonal sum conditions: with 1-based block indices,
/// `Σ_{i+j=d+2−k} [M1]_ij + Σ_{i+j=d+1−k} [M0]_ij = A_k` for `k = 0..d`,
/// each within `1e-12·max_k ‖A_k‖_F`.
pub fn check_antidiagonal_sums(m: &MPencil, p: &MatrixPolynomial, eps: usize, eta: usize) -> Result<bool> {
    check_grade(p, eps, eta)?;
    let (n, d) = (p.n(), p.grade());
    m.check_shape(eps, eta, n)?;
    let scale = p.coeffs().iter().map(CMat::frobenius_norm).fold(0.0, f64::max);
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    for k in 0..=d {
        let mut sum = CMat::zeros(n, n);
        for i in 1..=eta + 1 {
            for j in 1..=eps + 1 {
                if i + j == d + 2 - k {
                    sum.add_scaled(ONE, &m.m1.block(i - 1, j - 1, n));
                }
                if i + j + k == d + 1 {
                    sum.add_scaled(ONE, &m.m0.block(i - 1, j - 1, n));
                }
            }
        }
        if sum.distance(p.coeff(k)) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `diag(λA_d + A_{d−1}, λA_{d−2} + A_{d−3}, …, λA_1 + A_0)` for odd `d`,
/// the solution with `ε = η = (d−1)/2` that has one pencil per diagonal block.
pub fn block_diagonal_m_pencil(p: &MatrixPolynomial) -> Result<MPencil> {
    let d = p.grade();
    if d.is_multiple_of(2) {
        return Err(Error::Unsupported("block diagonal M needs an odd grade"));
    }
    let (h, n) = ((d - 1) / 2, p.n());
    let mut m = MPencil::zeros(h, h, n);
    for i in 0..=h {
        m.m1.set_block(i, i, n, p.coeff(d - 2 * i));
        m.m0.set_block(i, i, n, p.coeff(d - 1 - 2 * i));
    }
    Ok(m)
}

/// Position of one coefficient: which of `M1`/`M0` and which block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Slot {
    linear: bool,
    i: usize,
    j: usize,
}

/// All pencils `M` that place each `A_k` whole in a single block on its
/// anti-diagonal, so every one of them satisfies the anti-diagonal sums.
/// The layout of [`m0_pencil`] comes first.
pub fn single_block_candidates(p: &MatrixPolynomial, eps: usize, eta: usize) -> Result<Vec<MPencil>> {
    check_grade(p, eps, eta)?;
    let (n, d) = (p.n(), p.grade());
    let options: Vec<Vec<Slot>> = (0..=d)
        .map(|k| {
            let preferred = if k == d {
                Slot {
                    linear: true,
                    i: 0,
                    j: 0,
                }
            } else if k >= eta {
                Slot {
                    linear: false,
                    i: 0,
                    j: d - 1 - k,
                }
            } else {
                Slot {
                    linear: false,
                    i: eta - k,
                    j: eps,
                }
            };
            let mut slots = alloc::vec![preferred];
            for i in 0..=eta {
                for j in 0..=eps {
                    for linear in [true, false] {
                        let on_diag = if linear { i + j + k == d } else { i + j + k + 1 == d };
                        let s = Slot { linear, i, j };
                        if on_diag && s != preferred {
                            slots.push(s);
                        }
                    }
                }
            }
            slots
        })
        .collect();
    let total: usize = options.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut choice = alloc::vec![0usize; d + 1];
    for _ in 0..total {
        let mut m = MPencil::zeros(eps, eta, n);
        for (k, &c) in choice.iter().enumerate() {
            let s = options[k][c];
            let target = if s.linear { &mut m.m1 } else { &mut m.m0 };
            target.add_block(s.i, s.j, n, p.coeff(k));
        }
        out.push(m);
        for k in (0..=d).rev() {
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
    Ok(out)
}
