//! Matrix polynomials `P(λ) = Σ λ^i A_i` with coefficients stored in
//! ascending degree, and the seeded random test families.

use alloc::vec::Vec;

use crate::denseig::{spectral_norm, Lu};
use crate::error::{Error, Result};
use crate::matrix::{cabs, norm2, CMat, C64};
use crate::rng::Gaussian;

/// A square matrix polynomial of grade `d ≥ 1`. The leading coefficient may
/// be zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    n: usize,
    coeffs: Vec<CMat>,
}

impl MatrixPolynomial {
    /// Builds `Σ λ^i coeffs[i]`. All coefficients must be `n×n` and there must
    /// be at least two of them.
    pub fn new(coeffs: Vec<CMat>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DimensionMismatch("grade must be at least 1"));
        }
        let n = coeffs[0].rows();
        if coeffs.iter().any(|a| a.shape() != (n, n)) {
            return Err(Error::DimensionMismatch("coefficients must share one square shape"));
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &CMat {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<CMat> {
        self.coeffs
    }

    /// `P(λ)` by Horner's rule.
    pub fn eval(&self, lambda: C64) -> CMat {
        let mut acc = self.coeffs[self.grade()].clone();
        for a in self.coeffs.iter().rev().skip(1) {
            acc = acc.scaled(lambda);
            acc.add_scaled(C64::new(1.0, 0.0), a);
        }
        acc
    }

    /// `P'(λ) = Σ i λ^{i−1} A_i` by Horner's rule.
    pub fn eval_derivative(&self, lambda: C64) -> CMat {
        let d = self.grade();
        let mut acc = self.coeffs[d].scaled_real(d as f64);
        for i in (1..d).rev() {
            acc = acc.scaled(lambda);
            acc.add_scaled(C64::new(i as f64, 0.0), &self.coeffs[i]);
        }
        acc
    }

    /// `P(λ)x` without forming `P(λ)`.
    pub fn apply(&self, lambda: C64, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch("vector length differs from n"));
        }
        let mut acc = self.coeffs[self.grade()].mul_vec(x);
        for a in self.coeffs.iter().rev().skip(1) {
            let ax = a.mul_vec(x);
            for (s, t) in acc.iter_mut().zip(ax) {
                *s = *s * lambda + t;
            }
        }
        Ok(acc)
    }

    /// The reversal `λ^d P(1/λ)`.
    pub fn rev(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { n: self.n, coeffs }
    }

    /// `‖P(λ)x‖₂`, with `P(λ)` formed by Horner's rule first.
    pub fn residual_norm(&self, lambda: C64, x: &[C64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch("vector length differs from n"));
        }
        Ok(norm2(&self.eval(lambda).mul_vec(x)))
    }

    /// Spectral norms `‖A_i‖₂` of all coefficients.
    pub fn coeff_norms(&self) -> Result<Vec<f64>> {
        self.coeffs.iter().map(spectral_norm).collect()
    }

    /// `max_i ‖A_i‖₂`.
    pub fn max_coeff_norm(&self) -> Result<f64> {
        Ok(self.coeff_norms()?.into_iter().fold(0.0, f64::max))
    }

    /// Divides every coefficient by `max_i ‖A_i‖₂` and returns the factor.
    pub fn scale_max_norm(&self) -> Result<(Self, f64)> {
        let factor = self.max_coeff_norm()?;
        if factor == 0.0 {
            return Err(Error::ZeroPolynomial);
        }
        if !factor.is_finite() {
            return Err(Error::NonFinite("coefficient norms"));
        }
        let coeffs = self.coeffs.iter().map(|a| a.scaled_real(1.0 / factor)).collect();
        Ok((Self { n: self.n, coeffs }, factor))
    }

    /// Probabilistic regularity test: `det P(λ*) ≠ 0` at one seeded random
    /// point `λ*` on the unit circle, judged by the smallest LU pivot.
    pub fn is_regular(&self, seed: u64) -> bool {
        let mut g = Gaussian::new(seed);
        let z = g.complex_normal();
        let r = cabs(z);
        let lambda = if r == 0.0 { C64::new(1.0, 0.0) } else { z / r };
        let m = self.eval(lambda);
        let scale = m.frobenius_norm();
        if scale == 0.0 {
            return false;
        }
        Lu::factor(&m).min_pivot > f64::EPSILON * scale * self.n as f64
    }

    /// The polynomial with every coefficient equal to zero except `A_i = c·I`.
    pub fn monomial(n: usize, d: usize, i: usize, c: C64) -> Result<Self> {
        let mut coeffs = alloc::vec![CMat::zeros(n, n); d + 1];
        coeffs[i] = CMat::scalar(n, c);
        Self::new(coeffs)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(CMat::is_finite)
    }
}

/// Random coefficient families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyKind {
    /// Every `A_i` has independent standard complex Gaussian entries.
    P1,
    /// Degree 5 only: coefficient `i` is a standard complex Gaussian matrix
    /// times [`P2_SCALES`]`[i]`.
    P2,
}

/// Coefficient multipliers of the widely scaled family.
pub const P2_SCALES: [f64; 6] = [1.0, 1e4, 1e-2, 1e5, 1.0, 1e-1];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolySpec {
    pub kind: PolyKind,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
}

impl PolySpec {
    pub fn new(kind: PolyKind, n: usize, d: usize, seed: u64) -> Self {
        Self { kind, n, d, seed }
    }

    /// Per-coefficient multipliers.
    pub fn scales(&self) -> Result<Vec<f64>> {
        if self.d == 0 || self.n == 0 {
            return Err(Error::Unsupported("n and d must be positive"));
        }
        match self.kind {
            PolyKind::P1 => Ok(alloc::vec![1.0; self.d + 1]),
            PolyKind::P2 if self.d == 5 => Ok(P2_SCALES.to_vec()),
            PolyKind::P2 => Err(Error::Unsupported("the P2 family is defined for d = 5 only")),
        }
    }
}

/// Draws the coefficients of `spec` before normalization. Coefficients are
/// drawn in ascending degree, each one row-major with the real part of an
/// entry drawn before its imaginary part.
pub fn random_unscaled(spec: &PolySpec) -> Result<MatrixPolynomial> {
    let scales = spec.scales()?;
    let mut g = Gaussian::new(spec.seed);
    let coeffs = scales
        .iter()
        .map(|&s| g.complex_matrix(spec.n, spec.n).scaled_real(s))
        .collect();
    MatrixPolynomial::new(coeffs)
}

/// Draws `spec` and scales it so that `max_i ‖A_i‖₂ = 1`.
pub fn random_polynomial(spec: &PolySpec) -> Result<MatrixPolynomial> {
    Ok(random_unscaled(spec)?.scale_max_norm()?.0)
}

/// `Σ_i |λ|^i ‖A_i‖_F`, a scale for evaluation errors.
pub fn evaluation_scale(p: &MatrixPolynomial, lambda: C64) -> f64 {
    let r = cabs(lambda);
    let mut acc = 0.0;
    let mut pow = 1.0;
    for a in p.coeffs() {
        acc += pow * a.frobenius_norm();
        pow *= r;
    }
    acc
}
