//! Reference eigenpairs by Newton refinement in double-double arithmetic.
//!
//! Each pair solves the bordered system `P(λ)x = 0`, `c*x = 1` with `c` the
//! normalized seed vector. Residuals are measured homogeneously,
//! `‖P(λ)x‖ / (‖x‖ max(1, |λ|)^d)`, so that pairs with large `|λ|` are held
//! to the same relative standard as pairs near the unit circle.

pub mod dd;

use alloc::vec::Vec;

use crate::denseig::{generalized_schur, inverse_iteration_vector, smallest_singular_value, Eigenvalue};
use crate::error::{Error, Result};
use crate::kronlin::{assemble, recover_eigenvector, BlockKroneckerForm};
use crate::math;
use crate::matrix::{cabs, C64};
use crate::polyval::MatrixPolynomial;
pub use dd::{Dd, DdComplex};

/// Converged when the homogeneous residual is at most this times
/// `max_i ‖A_i‖₂`.
pub const RESIDUAL_TOL: f64 = 1e-25;
pub const MAX_NEWTON_STEPS: usize = 50;
/// Eigenvalues closer than this (relative) are flagged as clustered.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Leading coefficients with smaller `σ_min` (after scaling) are treated as
/// singular, which would mean infinite eigenvalues.
pub const LEADING_SIGMA_TOL: f64 = 1e-12;

/// A refined eigenpair.
#[derive(Clone, Debug, PartialEq)]
pub struct RefEigenpair {
    pub lambda: DdComplex,
    /// Normalized so that `c*x = 1` for the seed direction `c`.
    pub x: Vec<DdComplex>,
    /// Homogeneous residual at the final iterate.
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Residual before each Newton step and after the last one.
    pub history: Vec<f64>,
    pub clustered: bool,
}

impl RefEigenpair {
    pub fn lambda_f64(&self) -> C64 {
        self.lambda.to_c64()
    }

    /// `x` rounded to double and scaled to unit norm.
    pub fn x_f64(&self) -> Vec<C64> {
        let x: Vec<C64> = self.x.iter().map(|z| z.to_c64()).collect();
        crate::matrix::normalized(&x).unwrap_or(x)
    }
}

/// Coefficients promoted once, evaluated by Horner's rule in double-double.
struct DdPoly {
    n: usize,
    coeffs: Vec<Vec<DdComplex>>,
}

impl DdPoly {
    fn new(p: &MatrixPolynomial) -> Self {
        Self {
            n: p.n(),
            coeffs: p
                .coeffs()
                .iter()
                .map(|a| a.as_slice().iter().map(|&z| DdComplex::from(z)).collect())
                .collect(),
        }
    }

    fn grade(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `(P(λ), P'(λ))`, row-major.
    fn eval_with_derivative(&self, lambda: DdComplex) -> (Vec<DdComplex>, Vec<DdComplex>) {
        let d = self.grade();
        let mut p = self.coeffs[d].clone();
        let mut dp = alloc::vec![DdComplex::ZERO; self.n * self.n];
        for a in self.coeffs[..d].iter().rev() {
            for k in 0..p.len() {
                dp[k] = dp[k] * lambda + p[k];
                p[k] = p[k] * lambda + a[k];
            }
        }
        (p, dp)
    }

    fn apply(&self, lambda: DdComplex, x: &[DdComplex]) -> Vec<DdComplex> {
        let n = self.n;
        let d = self.grade();
        let mut acc = matvec(&self.coeffs[d], n, x);
        for a in self.coeffs[..d].iter().rev() {
            let ax = matvec(a, n, x);
            for (s, t) in acc.iter_mut().zip(ax) {
                *s = *s * lambda + t;
            }
        }
        acc
    }
}

fn matvec(a: &[DdComplex], n: usize, x: &[DdComplex]) -> Vec<DdComplex> {
    (0..n)
        .map(|i| {
            let mut s = DdComplex::ZERO;
            for j in 0..n {
                s += a[i * n + j] * x[j];
            }
            s
        })
        .collect()
}

fn norm_f64(v: &[DdComplex]) -> f64 {
    let s = v.iter().map(|z| z.norm_sqr()).fold(Dd::ZERO, |a, b| a + b);
    s.sqrt().to_f64()
}

fn homogeneous_scale(lambda: DdComplex, d: usize) -> f64 {
    math::powi(lambda.abs_f64().max(1.0), d)
}

/// Gaussian elimination with partial pivoting in double-double; solves
/// `J y = rhs` in place for a dense `m×m` row-major `J`.
fn solve_dd(mut j: Vec<DdComplex>, mut rhs: Vec<DdComplex>) -> Result<Vec<DdComplex>> {
    let m = rhs.len();
    let scale = j.iter().map(|z| z.abs_f64()).fold(0.0, f64::max);
    for k in 0..m {
        let (piv, mag) =
            (k..m)
                .map(|i| (i, j[i * m + k].abs_f64()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
        if mag <= f64::EPSILON * f64::EPSILON * scale || mag == 0.0 {
            return Err(Error::SingularJacobian);
        }
        if piv != k {
            for c in 0..m {
                j.swap(k * m + c, piv * m + c);
            }
            rhs.swap(k, piv);
        }
        let inv = DdComplex::ONE / j[k * m + k];
        for i in k + 1..m {
            let f = j[i * m + k] * inv;
            if f == DdComplex::ZERO {
                continue;
            }
            for c in k + 1..m {
                let t = f * j[k * m + c];
                j[i * m + c] -= t;
            }
            let t = f * rhs[k];
            rhs[i] -= t;
        }
    }
    for k in (0..m).rev() {
        let mut s = rhs[k];
        for c in k + 1..m {
            s -= j[k * m + c] * rhs[c];
        }
        rhs[k] = s / j[k * m + k];
    }
    Ok(rhs)
}

/// Homogeneous residual `‖P(λ)x‖ / (‖x‖ max(1,|λ|)^d)` of a double pair,
/// evaluated in double-double so that evaluation round-off does not mask the
/// true residual.
pub fn homogeneous_residual(p: &MatrixPolynomial, lambda: C64, x: &[C64]) -> Result<f64> {
    let r = residual_dd(p, lambda, x)?;
    let nx = crate::matrix::norm2(x);
    Ok(r / (nx * math::powi(cabs(lambda).max(1.0), p.grade())))
}

/// `‖P(λ)x‖₂` of a double pair, evaluated in double-double.
pub fn residual_dd(p: &MatrixPolynomial, lambda: C64, x: &[C64]) -> Result<f64> {
    if x.len() != p.n() {
        return Err(Error::DimensionMismatch("vector length differs from n"));
    }
    let dp = DdPoly::new(p);
    let xd: Vec<DdComplex> = x.iter().map(|&z| z.into()).collect();
    Ok(norm_f64(&dp.apply(lambda.into(), &xd)))
}

/// Newton refinement of `(λ̃, x̃)` on the bordered system.
pub fn refine_eigenpair(p: &MatrixPolynomial, lambda: C64, x: &[C64]) -> Result<RefEigenpair> {
    let n = p.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch("vector length differs from n"));
    }
    let nx = crate::matrix::norm2(x);
    if nx == 0.0 {
        return Err(Error::ZeroVector);
    }
    if !lambda.is_finite() || x.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite("seed eigenpair"));
    }
    let threshold = RESIDUAL_TOL * p.max_coeff_norm()?;
    let dp = DdPoly::new(p);
    let d = dp.grade();
    let c: Vec<DdComplex> = x.iter().map(|&z| DdComplex::from(z / nx)).collect();
    let mut xs: Vec<DdComplex> = c.clone();
    let mut lam = DdComplex::from(lambda);
    let mut history = Vec::new();
    let mut converged = false;
    let mut steps = 0;
    loop {
        let (pl, dpl) = dp.eval_with_derivative(lam);
        let px = matvec(&pl, n, &xs);
        let res = norm_f64(&px) / (norm_f64(&xs) * homogeneous_scale(lam, d));
        history.push(res);
        if res <= threshold {
            converged = true;
            break;
        }
        if steps == MAX_NEWTON_STEPS || !res.is_finite() {
            break;
        }
        // stagnation well above the threshold: three steps without a halving
        let k = history.len();
        if k >= 4 && (k - 3..k).all(|i| history[i] > 0.5 * history[i - 1]) {
            break;
        }
        let m = n + 1;
        let mut jac = alloc::vec![DdComplex::ZERO; m * m];
        for i in 0..n {
            jac[i * m..i * m + n].copy_from_slice(&pl[i * n..(i + 1) * n]);
        }
        let dpx = matvec(&dpl, n, &xs);
        for i in 0..n {
            jac[i * m + n] = dpx[i];
        }
        for j in 0..n {
            jac[n * m + j] = c[j].conj();
        }
        let mut rhs: Vec<DdComplex> = px.iter().map(|&z| -z).collect();
        let mut cx = DdComplex::ZERO;
        for j in 0..n {
            cx += c[j].conj() * xs[j];
        }
        rhs.push(DdComplex::ONE - cx);
        let delta = solve_dd(jac, rhs)?;
        for j in 0..n {
            xs[j] += delta[j];
        }
        lam += delta[n];
        steps += 1;
    }
    let residual = *history.last().expect("history holds the initial residual");
    Ok(RefEigenpair {
        lambda: lam,
        x: xs,
        residual,
        converged,
        iterations: steps,
        history,
        clustered: false,
    })
}

/// Reference eigenpairs of one polynomial, sorted by `|λ|` ascending.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReferenceSpectrum {
    pub pairs: Vec<RefEigenpair>,
    /// Seeds whose refinement failed, with the reason.
    pub failures: Vec<(C64, Error)>,
}

impl ReferenceSpectrum {
    pub fn lambdas(&self) -> Vec<C64> {
        self.pairs.iter().map(RefEigenpair::lambda_f64).collect()
    }

    pub fn all_converged(&self) -> bool {
        self.failures.is_empty() && self.pairs.iter().all(|p| p.converged)
    }
}

/// Reference spectrum seeded from the Frobenius companion form.
pub fn reference_spectrum(p: &MatrixPolynomial) -> Result<ReferenceSpectrum> {
    reference_spectrum_with(p, &BlockKroneckerForm::frobenius(p)?)
}

/// Reference spectrum seeded from the eigenpairs of the pencil assembled
/// from `form`: QZ eigenvalues, inverse iteration vectors, recovery.
pub fn reference_spectrum_with(p: &MatrixPolynomial, form: &BlockKroneckerForm) -> Result<ReferenceSpectrum> {
    let d = p.grade();
    let lead = p.coeff(d);
    let scale = p.max_coeff_norm()?;
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    if smallest_singular_value(lead)? <= LEADING_SIGMA_TOL * scale {
        return Err(Error::InfiniteEigenvalue);
    }
    let l = assemble(form);
    let schur = generalized_schur(&l.a, &l.b)?;
    let mut out = ReferenceSpectrum::default();
    for ev in schur.eigenvalues() {
        let lambda = match ev {
            Eigenvalue::Finite(z) => z,
            Eigenvalue::Infinite => {
                out.failures
                    .push((C64::new(f64::INFINITY, 0.0), Error::InfiniteEigenvalue));
                continue;
            }
        };
        let seeded = inverse_iteration_vector(&l.a, &l.b, lambda)
            .and_then(|v| recover_eigenvector(&v, form, lambda))
            .and_then(|x| refine_eigenpair(p, lambda, &x));
        match seeded {
            Ok(pair) => out.pairs.push(pair),
            Err(e) => out.failures.push((lambda, e)),
        }
    }
    out.pairs
        .sort_by(|a, b| a.lambda.abs_f64().total_cmp(&b.lambda.abs_f64()));
    flag_clusters(&mut out.pairs);
    Ok(out)
}

/// Sets `clustered` on pairs whose eigenvalue has a neighbour within
/// `CLUSTER_TOL` (relative).
pub fn flag_clusters(pairs: &mut [RefEigenpair]) {
    let lams: Vec<C64> = pairs.iter().map(RefEigenpair::lambda_f64).collect();
    for (i, p) in pairs.iter_mut().enumerate() {
        p.clustered = lams.iter().enumerate().any(|(j, &z)| {
            j != i && cabs(z - lams[i]) <= CLUSTER_TOL * cabs(z).max(cabs(lams[i])).max(f64::MIN_POSITIVE)
        });
    }
}
