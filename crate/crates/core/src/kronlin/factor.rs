//! Right-sided factorizations `L(λ)H(λ) = g(λ)⊗P(λ)` of block Kronecker
//! pencils, and eigenvector recovery from eigenvectors of the pencil.

use alloc::vec::Vec;

use super::blocks::{lambda_block, r_block};
use super::form::{BlockKroneckerForm, Pencil};
use crate::denseig::smallest_singular_value;
use crate::error::{Error, Result};
use crate::matrix::{cabs, cpowi, norm2, CMat, C64, ONE, ZERO};
use crate::polyval::MatrixPolynomial;

/// Which of the two factorizations to use.
///
/// `H1(λ) = [Λ_ε⊗I; R_η M(λ)(Λ_ε⊗I)]` with `g = e_{η+1}`, valid on all of ℂ.
/// `H2(λ) = [λ^{−ε}Λ_ε⊗I; −λ^{−(d−1)} S_η M(λ)(Λ_ε⊗I)]` with
/// `g = λ^{−(d−1)} e_1`, valid away from zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    H1,
    H2,
}

impl Variant {
    /// `H1` inside the unit disc, `H2` outside, which keeps `‖H(λ)‖`
    /// moderate for both small and large `|λ|`.
    pub fn for_lambda(lambda: C64) -> Self {
        if cabs(lambda) < 1.0 {
            Self::H1
        } else {
            Self::H2
        }
    }
}

/// The factor pair `(H, g)` of a form, evaluated on demand.
#[derive(Clone, Copy, Debug)]
pub struct FactorPair<'a> {
    form: &'a BlockKroneckerForm,
    variant: Variant,
}

pub fn right_factor(form: &BlockKroneckerForm, variant: Variant) -> FactorPair<'_> {
    FactorPair { form, variant }
}

impl<'a> FactorPair<'a> {
    pub fn form(&self) -> &'a BlockKroneckerForm {
        self.form
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn in_domain(&self, lambda: C64) -> bool {
        self.variant == Variant::H1 || lambda != ZERO
    }

    fn check_domain(&self, lambda: C64) -> Result<()> {
        if self.in_domain(lambda) && lambda.is_finite() {
            Ok(())
        } else {
            Err(Error::OutsideDomain(lambda))
        }
    }

    /// Block index (0-based, after permutation) at which `H(λ)` is `I_n`.
    pub fn identity_block(&self) -> usize {
        let core = match self.variant {
            Variant::H1 => self.form.eps,
            Variant::H2 => 0,
        };
        self.form
            .col_perm
            .iter()
            .position(|&c| c == core)
            .expect("column permutation is a bijection")
    }

    fn core_h(&self, lambda: C64) -> CMat {
        let f = self.form;
        let (eps, eta, n) = (f.eps, f.eta, f.n);
        let m = f.m.eval(lambda);
        match self.variant {
            Variant::H1 => {
                let top = lambda_block(eps, lambda, n);
                let bottom = r_block(eta, lambda, n).matmul(&m).matmul(&top);
                CMat::vstack(&[&top, &bottom])
            }
            Variant::H2 => {
                // λ^{−ε}Λ_ε(λ) and λ^{−η}S_η(λ) written in powers of 1/λ
                let mu = ONE / lambda;
                let mut top = CMat::zeros((eps + 1) * n, n);
                for i in 0..=eps {
                    let c = cpowi(mu, i);
                    for r in 0..n {
                        top[(i * n + r, r)] = c;
                    }
                }
                let mut s = CMat::zeros(eta * n, (eta + 1) * n);
                for i in 0..eta {
                    for j in i + 1..=eta {
                        let c = -cpowi(mu, j - i);
                        for r in 0..n {
                            s[(i * n + r, j * n + r)] = c;
                        }
                    }
                }
                let bottom = s.matmul(&m).matmul(&top);
                CMat::vstack(&[&top, &bottom])
            }
        }
    }

    /// `H(λ)`, shape `dn × n`, rows permuted to match the assembled pencil.
    pub fn h(&self, lambda: C64) -> Result<CMat> {
        self.check_domain(lambda)?;
        let core = self.core_h(lambda);
        let n = self.form.n;
        let mut out = CMat::zeros(core.rows(), n);
        for (j, &c) in self.form.col_perm.iter().enumerate() {
            out.set_block(j, 0, n, &core.block(c, 0, n));
        }
        Ok(out)
    }

    /// `g(λ)`, length `d`, permuted to match the assembled pencil.
    pub fn g(&self, lambda: C64) -> Result<Vec<C64>> {
        self.check_domain(lambda)?;
        let d = self.form.grade();
        let mut core = alloc::vec![ZERO; d];
        match self.variant {
            Variant::H1 => core[self.form.eta] = ONE,
            Variant::H2 => core[0] = ONE / cpowi(lambda, d - 1),
        }
        Ok(self.form.row_perm.iter().map(|&r| core[r]).collect())
    }

    /// `H(λ)x`, the pencil eigenvector that corresponds to `x`.
    pub fn lift(&self, lambda: C64, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.form.n {
            return Err(Error::DimensionMismatch("vector length differs from n"));
        }
        Ok(self.h(lambda)?.mul_vec(x))
    }
}

/// Designated block must carry at least this fraction of `‖v‖₂`.
pub const RECOVERY_BLOCK_TOL: f64 = 1e-8;

/// Extracts a unit polynomial eigenvector from an eigenvector `v` of the
/// assembled pencil: the identity block of `H1` if `|λ̃| < 1`, otherwise of
/// `H2`. If that block is numerically zero, the block with the smallest
/// `‖P(λ̃)v_j‖/‖v_j‖` is used instead.
pub fn recover_eigenvector(v: &[C64], form: &BlockKroneckerForm, lambda: C64) -> Result<Vec<C64>> {
    recover_eigenvector_flagged(v, form, lambda).map(|(x, _)| x)
}

/// [`recover_eigenvector`], also reporting whether the fallback block was used.
pub fn recover_eigenvector_flagged(v: &[C64], form: &BlockKroneckerForm, lambda: C64) -> Result<(Vec<C64>, bool)> {
    let (n, d) = (form.n, form.grade());
    if v.len() != d * n {
        return Err(Error::DimensionMismatch("vector length differs from dn"));
    }
    let total = norm2(v);
    if total == 0.0 {
        return Err(Error::ZeroVector);
    }
    let idx = right_factor(form, Variant::for_lambda(lambda)).identity_block();
    let block = &v[idx * n..(idx + 1) * n];
    let fallback = norm2(block) < RECOVERY_BLOCK_TOL * total;
    let chosen = if !fallback {
        block
    } else {
        let p = form.induced_polynomial()?;
        let mut best: Option<(f64, usize)> = None;
        for j in 0..d {
            let vj = &v[j * n..(j + 1) * n];
            let nj = norm2(vj);
            if nj == 0.0 {
                continue;
            }
            let score = p.residual_norm(lambda, vj)? / nj;
            if best.is_none_or(|(s, _)| score < s) {
                best = Some((score, j));
            }
        }
        let (_, j) = best.ok_or(Error::ZeroVector)?;
        &v[j * n..(j + 1) * n]
    };
    Ok((crate::matrix::normalized(chosen)?, fallback))
}

/// Residual of the factorization identity at one sample point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorizationSample {
    pub lambda: C64,
    /// `max |L(λ)H(λ) − g(λ)⊗P(λ)|` over entries, divided by `‖g(λ)‖₂‖P(λ)‖_F`.
    pub relative_residual: f64,
    pub sigma_min_h: f64,
    pub g_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationReport {
    pub samples: Vec<FactorizationSample>,
    pub passed: bool,
}

pub const FACTORIZATION_TOL: f64 = 1e-12;
pub const RANK_TOL: f64 = 1e-10;

/// `max |LH − g⊗P|` over entries, divided by `‖g‖₂‖P‖_F`, for values of
/// the pencil, factor and polynomial at one point.
pub fn factorization_residual(l: &CMat, h: &CMat, g: &[C64], p: &CMat) -> f64 {
    let n = p.rows();
    let mut diff = l.matmul(h);
    for (i, gi) in g.iter().enumerate() {
        let mut blk = diff.block(i, 0, n);
        blk.add_scaled(-*gi, p);
        diff.set_block(i, 0, n, &blk);
    }
    let scale = norm2(g) * p.frobenius_norm();
    diff.max_abs() / scale.max(f64::MIN_POSITIVE)
}

/// Checks `L(λ)H(λ) = g(λ)⊗P(λ)` and the full column rank of `H(λ)` at each
/// sample.
pub fn verify_right_sided_factorization(
    l: &Pencil,
    fp: &FactorPair<'_>,
    p: &MatrixPolynomial,
    samples: &[C64],
) -> Result<FactorizationReport> {
    let n = p.n();
    if l.dim() != fp.form().dim() || n != fp.form().n {
        return Err(Error::DimensionMismatch(
            "pencil, factor and polynomial disagree in size",
        ));
    }
    let mut out = Vec::with_capacity(samples.len());
    for &lambda in samples {
        let h = fp.h(lambda)?;
        let g = fp.g(lambda)?;
        out.push(FactorizationSample {
            lambda,
            relative_residual: factorization_residual(&l.eval(lambda), &h, &g, &p.eval(lambda)),
            sigma_min_h: smallest_singular_value(&h)?,
            g_norm: norm2(&g),
        });
    }
    let passed = out
        .iter()
        .all(|s| s.relative_residual <= FACTORIZATION_TOL && s.sigma_min_h > RANK_TOL);
    Ok(FactorizationReport { samples: out, passed })
}
