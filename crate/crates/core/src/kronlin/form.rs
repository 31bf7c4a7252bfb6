use alloc::vec::Vec;

use super::blocks::lk_coefficients;
use super::mpencil::{induced_polynomial, m0_pencil, MPencil};
use crate::error::{Error, Result};
use crate::matrix::{CMat, C64};
use crate::polyval::MatrixPolynomial;

/// The pencil `L(λ) = A − λB`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    pub a: CMat,
    pub b: CMat,
}

impl Pencil {
    pub fn new(a: CMat, b: CMat) -> Result<Self> {
        if !a.is_square() || a.shape() != b.shape() {
            return Err(Error::DimensionMismatch(
                "pencil matrices must be square and equal in size",
            ));
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// `A − λB`.
    pub fn eval(&self, lambda: C64) -> CMat {
        let mut out = self.a.clone();
        out.add_scaled(-lambda, &self.b);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// Frobenius companion form.
    L1,
    /// Permuted Fiedler pencil.
    L2,
    /// Permuted generalized Fiedler pencil.
    L3,
    Custom,
}

/// A block Kronecker pencil
///
/// ```text
/// [ M(λ)      L_η(λ)ᵀ⊗I ]
/// [ L_ε(λ)⊗I  0         ]
/// ```
///
/// followed by block permutations: block row `i` of the result is block row
/// `row_perm[i]` of the core, and block column `j` is core block column
/// `col_perm[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockKroneckerForm {
    pub eps: usize,
    pub eta: usize,
    pub n: usize,
    pub m: MPencil,
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub label: Label,
}

fn is_permutation(p: &[usize], d: usize) -> bool {
    let mut seen = alloc::vec![false; d];
    p.len() == d && p.iter().all(|&i| i < d && !core::mem::replace(&mut seen[i], true))
}

impl BlockKroneckerForm {
    /// Unpermuted form with the given `M`.
    pub fn new(eps: usize, eta: usize, n: usize, m: MPencil, label: Label) -> Result<Self> {
        let d = eps + eta + 1;
        Self::with_permutations(eps, eta, n, m, (0..d).collect(), (0..d).collect(), label)
    }

    pub fn with_permutations(
        eps: usize,
        eta: usize,
        n: usize,
        m: MPencil,
        row_perm: Vec<usize>,
        col_perm: Vec<usize>,
        label: Label,
    ) -> Result<Self> {
        m.check_shape(eps, eta, n)?;
        let d = eps + eta + 1;
        if !is_permutation(&row_perm, d) || !is_permutation(&col_perm, d) {
            return Err(Error::DimensionMismatch(
                "block permutations must be permutations of 0..d",
            ));
        }
        Ok(Self {
            eps,
            eta,
            n,
            m,
            row_perm,
            col_perm,
            label,
        })
    }

    /// The Frobenius companion form `ε = d−1, η = 0, M = M₀`.
    pub fn frobenius(p: &MatrixPolynomial) -> Result<Self> {
        let d = p.grade();
        Self::new(d - 1, 0, p.n(), m0_pencil(p, d - 1, 0)?, Label::L1)
    }

    pub fn grade(&self) -> usize {
        self.eps + self.eta + 1
    }

    /// Size `dn` of the assembled pencil.
    pub fn dim(&self) -> usize {
        self.grade() * self.n
    }

    pub fn is_unpermuted(&self) -> bool {
        self.row_perm.iter().enumerate().all(|(i, &r)| i == r) && self.col_perm.iter().enumerate().all(|(i, &c)| i == c)
    }

    /// The polynomial this form linearizes.
    pub fn induced_polynomial(&self) -> Result<MatrixPolynomial> {
        induced_polynomial(&self.m, self.eps, self.eta, self.n)
    }

    /// Coefficients `(X0, X1)` of the unpermuted core `λX1 + X0`.
    pub fn core_coefficients(&self) -> (CMat, CMat) {
        let (eps, eta, n) = (self.eps, self.eta, self.n);
        let dn = self.dim();
        let top = (eta + 1) * n;
        let left = (eps + 1) * n;
        let mut x0 = CMat::zeros(dn, dn);
        let mut x1 = CMat::zeros(dn, dn);
        x0.set_submatrix(0, 0, &self.m.m0);
        x1.set_submatrix(0, 0, &self.m.m1);
        let (le0, le1) = lk_coefficients(eps, n);
        x0.set_submatrix(top, 0, &le0);
        x1.set_submatrix(top, 0, &le1);
        let (lh0, lh1) = lk_coefficients(eta, n);
        x0.set_submatrix(0, left, &lh0.transpose());
        x1.set_submatrix(0, left, &lh1.transpose());
        (x0, x1)
    }

    /// Applies the block permutations to a `dn × dn` core matrix.
    pub fn permute(&self, core: &CMat) -> CMat {
        let n = self.n;
        let d = self.grade();
        let mut out = CMat::zeros(core.rows(), core.cols());
        for i in 0..d {
            for j in 0..d {
                out.set_block(i, j, n, &core.block(self.row_perm[i], self.col_perm[j], n));
            }
        }
        out
    }
}

/// Assembles `L(λ) = A − λB` from a form. Since the core is `λX1 + X0`,
/// `A = X0` and `B = −X1` (both permuted).
pub fn assemble(form: &BlockKroneckerForm) -> Pencil {
    let (x0, x1) = form.core_coefficients();
    Pencil {
        a: form.permute(&x0),
        b: form.permute(&x1).scaled_real(-1.0),
    }
}
