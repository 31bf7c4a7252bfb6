//! The experiment pipeline: build and scale a polynomial, linearize, solve,
//! recover eigenvectors, bound their errors and compare with the reference
//! eigenpairs.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use pepbound_core::bounds::{
    pair_nearest, pep_bound_frobenius, pep_bound_kronecker, sin_acute_angle, BoundRow, Pairing, RowFlags,
};
use pepbound_core::denseig::{generalized_schur, inverse_iteration_vector, separation, Eigenvalue};
use pepbound_core::kronlin::{
    assemble, preset_linearization, recover_eigenvector_flagged, right_factor, BlockKroneckerForm, Label, Pencil,
    Variant,
};
use pepbound_core::matrix::norm2;
use pepbound_core::oracle::{reference_spectrum, residual_dd, RefEigenpair, ReferenceSpectrum};
use pepbound_core::polyval::{random_polynomial, MatrixPolynomial, PolyKind, PolySpec};
use pepbound_core::C64;
use rayon::prelude::*;

use crate::error::{BenchError, Result};
use crate::formats::{read_poly_file, PolyFile};

pub const DEFAULT_N: usize = 10;
pub const DEFAULT_D: usize = 5;

/// Slack allowed when checking `sin∠(x, x̃) ≤ bound`.
pub const VALIDITY_SLACK: f64 = 1e-15;
/// Angles at or below this are excluded from tightness statistics.
pub const TIGHTNESS_FLOOR: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq)]
pub enum PolySource {
    Generated(PolySpec),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub poly: PolySource,
    pub linearization: Label,
    /// Use the thread pool for the per-eigenpair stages.
    pub parallel: bool,
}

impl ExperimentConfig {
    /// A generated polynomial at the default size `d = 5`, `n = 10`.
    pub fn generated(kind: PolyKind, linearization: Label, seed: u64) -> Self {
        Self {
            poly: PolySource::Generated(PolySpec::new(kind, DEFAULT_N, DEFAULT_D, seed)),
            linearization,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metadata {
    pub poly: String,
    pub linearization: Label,
    pub n: usize,
    pub d: usize,
    pub version: &'static str,
    pub threads: usize,
    pub reference_cached: bool,
    pub wall_time: Duration,
}

/// An eigenvalue for which no row could be produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Exclusion {
    pub lambda: C64,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub excluded: Vec<Exclusion>,
    pub reference_failures: Vec<Exclusion>,
    pub flagged_rows: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    /// Sorted by `|λ̃|` ascending; `index` is the position in this order.
    pub rows: Vec<BoundRow>,
    pub metadata: Metadata,
    pub diagnostics: Diagnostics,
}

impl ExperimentReport {
    /// Unflagged rows whose error exceeds the block Kronecker bound. NaN
    /// values count as violations.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn violations(&self) -> Vec<&BoundRow> {
        self.rows
            .iter()
            .filter(|r| !r.flags.any() && !(r.sin_angle <= r.bound_kron + VALIDITY_SLACK))
            .collect()
    }

    /// `bound_kron / sin_angle` over unflagged rows with a measurable error.
    pub fn tightness_ratios(&self) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| !r.flags.any() && r.sin_angle > TIGHTNESS_FLOOR)
            .map(BoundRow::ratio)
            .collect()
    }
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    })
}

/// The polynomial named by `source`, unscaled, with the file it came from.
pub fn load_polynomial(source: &PolySource) -> Result<(MatrixPolynomial, Option<PolyFile>)> {
    match source {
        PolySource::Generated(spec) => Ok((random_polynomial(spec)?, None)),
        PolySource::File(path) => {
            let file = read_poly_file(path)?;
            Ok((file.to_polynomial()?, Some(file)))
        }
    }
}

/// Scales `raw` to unit max coefficient norm and computes its reference
/// spectrum, or reads it from `file` when cached there.
pub fn scaled_with_references(
    raw: &MatrixPolynomial,
    file: Option<&PolyFile>,
) -> Result<(MatrixPolynomial, ReferenceSpectrum, bool)> {
    let (p, _) = raw.scale_max_norm()?;
    match file.map(|f| f.references(&p)).transpose()?.flatten() {
        Some(r) => Ok((p, r, true)),
        None => {
            let r = reference_spectrum(&p)?;
            Ok((p, r, false))
        }
    }
}

fn describe(source: &PolySource) -> String {
    match source {
        PolySource::Generated(s) => format!("{:?} n={} d={} seed={}", s.kind, s.n, s.d, s.seed),
        PolySource::File(p) => p.display().to_string(),
    }
}

/// `PEPBOUND_THREADS`, where 0 or unset means one thread per core.
pub fn thread_count(parallel: bool) -> usize {
    if !parallel {
        return 1;
    }
    match std::env::var("PEPBOUND_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        Some(k) if k > 0 => k,
        _ => std::thread::available_parallelism().map_or(1, |k| k.get()),
    }
}

struct Context<'a> {
    p: &'a MatrixPolynomial,
    form: &'a BlockKroneckerForm,
    pencil: &'a Pencil,
    reference: &'a [RefEigenpair],
}

impl Context<'_> {
    fn row(&self, lt: C64, pairing: &Pairing) -> pepbound_core::Result<BoundRow> {
        let d = self.p.grade();
        let v = inverse_iteration_vector(&self.pencil.a, &self.pencil.b, lt)?;
        let (xt, fallback) = recover_eigenvector_flagged(&v, self.form, lt)?;
        let residual = residual_dd(self.p, lt, &xt)?;
        let r = &self.reference[pairing.reference];
        let (l0, x0) = (r.lambda_f64(), r.x_f64());
        let v0 = right_factor(self.form, Variant::for_lambda(l0)).lift(l0, &x0)?;
        let sep = separation(&self.pencil.a, &self.pencil.b, &v0, lt)?;
        let g = right_factor(self.form, Variant::for_lambda(lt)).g(lt)?;
        Ok(BoundRow {
            index: 0,
            lambda_exact: l0,
            lambda_computed: lt,
            residual,
            sep: sep.sep,
            sin_angle: sin_acute_angle(&x0, &xt)?,
            bound_kron: pep_bound_kronecker(residual, lt, d, sep.sep),
            bound_frob: pep_bound_frobenius(residual, lt, d, sep.sep),
            g_norm: norm2(&g),
            flags: RowFlags {
                sep_vanishing: sep.flags.vanishing,
                ambiguous_pairing: pairing.ambiguous,
                clustered: r.clustered,
                recovery_fallback: fallback,
                unconverged_reference: !r.converged,
            },
        })
    }
}

/// Runs the pipeline. Per-eigenvalue failures become exclusions; only
/// configuration, IO and whole-problem numerical failures abort.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let (raw, file) = load_polynomial(&cfg.poly)?;
    let (p, _) = raw.scale_max_norm()?;
    let form = preset_linearization(&p, cfg.linearization)?;
    let pencil = assemble(&form);
    let (_, reference, reference_cached) = scaled_with_references(&raw, file.as_ref())?;
    if reference.pairs.is_empty() {
        return Err(BenchError::Numeric(pepbound_core::Error::NonConvergence {
            routine: "reference spectrum",
            iterations: 0,
        }));
    }

    let mut diagnostics = Diagnostics {
        reference_failures: reference
            .failures
            .iter()
            .map(|(lambda, e)| Exclusion {
                lambda: *lambda,
                reason: e.to_string(),
            })
            .collect(),
        ..Diagnostics::default()
    };
    let mut computed = Vec::new();
    for ev in generalized_schur(&pencil.a, &pencil.b)?.eigenvalues() {
        match ev {
            Eigenvalue::Finite(z) => computed.push(z),
            Eigenvalue::Infinite => diagnostics.excluded.push(Exclusion {
                lambda: C64::new(f64::INFINITY, 0.0),
                reason: "infinite eigenvalue".into(),
            }),
        }
    }
    let pairings = pair_nearest(&computed, &reference.lambdas())?;

    let ctx = Context {
        p: &p,
        form: &form,
        pencil: &pencil,
        reference: &reference.pairs,
    };
    let threads = thread_count(cfg.parallel);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| BenchError::Config(format!("thread pool: {e}")))?;
    let results: Vec<(C64, pepbound_core::Result<BoundRow>)> = pool.install(|| {
        computed
            .par_iter()
            .zip(&pairings)
            .map(|(&lt, pr)| (lt, ctx.row(lt, pr)))
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    for (lambda, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => diagnostics.excluded.push(Exclusion {
                lambda,
                reason: e.to_string(),
            }),
        }
    }
    rows.sort_by(|a, b| a.lambda_computed.norm().total_cmp(&b.lambda_computed.norm()));
    for (k, r) in rows.iter_mut().enumerate() {
        r.index = k;
    }
    diagnostics.flagged_rows = rows.iter().filter(|r| r.flags.any()).count();

    Ok(ExperimentReport {
        rows,
        metadata: Metadata {
            poly: describe(&cfg.poly),
            linearization: cfg.linearization,
            n: p.n(),
            d: p.grade(),
            version: env!("CARGO_PKG_VERSION"),
            threads,
            reference_cached,
            wall_time: start.elapsed(),
        },
        diagnostics,
    })
}
