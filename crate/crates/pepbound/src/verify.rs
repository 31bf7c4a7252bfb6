//! A quick invariant suite on one random instance.

use pepbound_core::bounds::{angle_objective, optimal_alpha, sin_acute_angle};
use pepbound_core::denseig::{generalized_schur, separation};
use pepbound_core::kronlin::{
    assemble, check_antidiagonal_sums, m0_pencil, make_m_pencil, right_factor, verify_right_sided_factorization,
    BlockKroneckerForm, Label, Variant,
};
use pepbound_core::oracle::{reference_spectrum, RESIDUAL_TOL};
use pepbound_core::polyval::{random_polynomial, PolyKind, PolySpec};
use pepbound_core::rng::Gaussian;
use pepbound_core::{CMat, C64};

use crate::bench::{run_experiment, ExperimentConfig, PolySource};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Runs every check on a P1 instance of grade `d` and size `n`.
pub fn run_invariants(seed: u64, d: usize, n: usize) -> Result<Vec<Check>> {
    let p = random_polynomial(&PolySpec::new(PolyKind::P1, n, d, seed))?;
    let mut g = Gaussian::new(seed ^ 0x7e57);
    let mut checks = Vec::new();

    let mut worst_fact: f64 = 0.0;
    let mut worst_induced: f64 = 0.0;
    let mut all_passed = true;
    let mut sums_agree = true;
    let scale = p.max_coeff_norm()?;
    for eps in 0..d {
        let eta = d - 1 - eps;
        let bmat = g.complex_matrix((eta + 1) * n, eps * n);
        let cmat = g.complex_matrix(eta * n, (eps + 1) * n);
        for m in [m0_pencil(&p, eps, eta)?, make_m_pencil(&p, eps, eta, &bmat, &cmat)?] {
            let form = BlockKroneckerForm::new(eps, eta, n, m.clone(), Label::Custom)?;
            let l = assemble(&form);
            for variant in [Variant::H1, Variant::H2] {
                let samples: Vec<C64> = (0..5).map(|_| g.complex_normal()).collect();
                let report = verify_right_sided_factorization(&l, &right_factor(&form, variant), &p, &samples)?;
                all_passed &= report.passed;
                for s in &report.samples {
                    worst_fact = worst_fact.max(s.relative_residual);
                }
            }
            let induced = form.induced_polynomial()?;
            for (a, b) in induced.coeffs().iter().zip(p.coeffs()) {
                worst_induced = worst_induced.max(a.max_abs_diff(b) / scale);
            }
            sums_agree &= check_antidiagonal_sums(&m, &p, eps, eta)?;
        }
    }
    checks.push(Check::new(
        "factorization identities",
        all_passed,
        format!("max relative residual {worst_fact:.3e}"),
    ));
    checks.push(Check::new(
        "induced polynomial",
        worst_induced <= 1e-13 && sums_agree,
        format!("max relative deviation {worst_induced:.3e}"),
    ));

    let frob = BlockKroneckerForm::frobenius(&p)?;
    let l = assemble(&frob);
    let schur = generalized_schur(&l.a, &l.b)?;
    let big_n = l.dim() as f64;
    let (ra, rb) = schur.reconstruction_residuals(&l.a, &l.b);
    let (dq, dz) = schur.unitarity_defects();
    let qz_ok = ra <= 1e-12 * big_n * l.a.frobenius_norm()
        && rb <= 1e-12 * big_n * l.b.frobenius_norm()
        && dq.max(dz) <= 1e-13 * big_n;
    checks.push(Check::new(
        "qz backward stability",
        qz_ok,
        format!("residuals {ra:.3e}, {rb:.3e}; unitarity defects {dq:.3e}, {dz:.3e}"),
    ));

    let a = CMat::diag(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
    let sep = separation(
        &a,
        &CMat::identity(2),
        &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        C64::new(1.1, 0.0),
    )?
    .sep;
    checks.push(Check::new(
        "separation example",
        (sep - 0.9).abs() <= 1e-14,
        format!("sep = {sep:.17}"),
    ));

    let mut worst_gap: f64 = 0.0;
    for _ in 0..50 {
        let u = g.complex_vector(n);
        let w = g.complex_vector(n);
        let s = sin_acute_angle(&u, &w)?;
        let best = angle_objective(&u, &w, optimal_alpha(&u, &w)?)?;
        worst_gap = worst_gap.max((s - best).abs());
    }
    checks.push(Check::new(
        "angle characterization",
        worst_gap <= 1e-12,
        format!("max deviation {worst_gap:.3e}"),
    ));

    let reference = reference_spectrum(&p)?;
    let threshold = RESIDUAL_TOL * scale;
    let worst_ref = reference.pairs.iter().map(|q| q.residual).fold(0.0, f64::max);
    checks.push(Check::new(
        "oracle convergence",
        reference.all_converged() && reference.pairs.len() == n * d && worst_ref <= threshold,
        format!("{} pairs, max residual {worst_ref:.3e}", reference.pairs.len()),
    ));

    let report = run_experiment(&ExperimentConfig {
        poly: PolySource::Generated(PolySpec::new(PolyKind::P1, n, d, seed)),
        linearization: Label::L1,
        parallel: true,
    })?;
    let violations = report.violations().len();
    checks.push(Check::new(
        "bound validity",
        violations == 0 && report.rows.len() == n * d,
        format!("{} rows, {violations} violations", report.rows.len()),
    ));
    let root_d = (d as f64).sqrt();
    let bracket = report.rows.iter().all(|r| {
        let q = r.bound_kron / r.bound_frob;
        r.residual == 0.0 || (q >= 1.0 - 1e-12 && q <= root_d + 1e-12)
    });
    checks.push(Check::new(
        "ratio bracket",
        bracket,
        format!("1 <= kron/frob <= {root_d:.4}"),
    ));
    let sorted = report
        .rows
        .windows(2)
        .all(|w| w[0].lambda_computed.norm() <= w[1].lambda_computed.norm());
    checks.push(Check::new(
        "rows sorted by |lambda|",
        sorted,
        format!("{} rows", report.rows.len()),
    ));
    Ok(checks)
}
