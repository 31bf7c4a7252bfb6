//! Literal companion layouts and the block-permutation search that
//! identifies them as permuted block Kronecker forms.

use alloc::vec::Vec;

use super::form::{assemble, BlockKroneckerForm, Label, Pencil};
use super::mpencil::{single_block_candidates, MPencil};
use crate::error::{Error, Result};
use crate::matrix::{norm2, CMat, C64, ONE};
use crate::polyval::MatrixPolynomial;
use crate::rng::Gaussian;

/// One block of a layout matrix.
enum Entry {
    Zero,
    Coeff(usize),
    NegCoeff(usize),
    NegIdentity,
}

fn layout(p: &MatrixPolynomial, a: &[[Entry; 5]; 5], b: &[[Entry; 5]; 5]) -> Pencil {
    let n = p.n();
    let fill = |pattern: &[[Entry; 5]; 5]| {
        let mut m = CMat::zeros(5 * n, 5 * n);
        for (i, row) in pattern.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                match e {
                    Entry::Zero => {}
                    Entry::Coeff(k) => m.set_block(i, j, n, p.coeff(*k)),
                    Entry::NegCoeff(k) => m.set_block(i, j, n, &p.coeff(*k).scaled_real(-1.0)),
                    Entry::NegIdentity => m.set_block(i, j, n, &CMat::scalar(n, -ONE)),
                }
            }
        }
        m
    };
    Pencil { a: fill(a), b: fill(b) }
}

fn require_quintic(p: &MatrixPolynomial) -> Result<()> {
    if p.grade() != 5 {
        return Err(Error::Unsupported("this layout is defined for grade 5"));
    }
    Ok(())
}

/// The Frobenius companion pencil written out block by block:
/// `A` has `(A_{d−1}, …, A_0)` on top and `−I` on the block subdiagonal,
/// `B` has `−A_d` in the corner and `−I` on the rest of the diagonal.
pub fn frobenius_layout(p: &MatrixPolynomial) -> Pencil {
    let (n, d) = (p.n(), p.grade());
    let mut a = CMat::zeros(d * n, d * n);
    let mut b = CMat::zeros(d * n, d * n);
    for j in 0..d {
        a.set_block(0, j, n, p.coeff(d - 1 - j));
    }
    b.set_block(0, 0, n, &p.coeff(d).scaled_real(-1.0));
    let neg = CMat::scalar(n, -ONE);
    for i in 1..d {
        a.set_block(i, i - 1, n, &neg);
        b.set_block(i, i, n, &neg);
    }
    Pencil { a, b }
}

/// The grade-5 Fiedler pencil in its printed block layout.
pub fn fiedler_layout(p: &MatrixPolynomial) -> Result<Pencil> {
    use Entry::{Coeff as C, NegCoeff as Nc, NegIdentity as Ni, Zero as Z};
    require_quintic(p)?;
    let a = [
        [C(4), C(3), C(2), C(1), Ni],
        [Z, Z, Z, C(0), Z],
        [Ni, Z, Z, Z, Z],
        [Z, Ni, Z, Z, Z],
        [Z, Z, Ni, Z, Z],
    ];
    let b = [
        [Nc(5), Z, Z, Z, Z],
        [Z, Z, Z, Z, Ni],
        [Z, Ni, Z, Z, Z],
        [Z, Z, Ni, Z, Z],
        [Z, Z, Z, Ni, Z],
    ];
    Ok(layout(p, &a, &b))
}

/// The grade-5 generalized Fiedler pencil in its printed block layout.
pub fn generalized_fiedler_layout(p: &MatrixPolynomial) -> Result<Pencil> {
    use Entry::{Coeff as C, NegCoeff as Nc, NegIdentity as Ni, Zero as Z};
    require_quintic(p)?;
    let a = [
        [C(4), Z, Z, Ni, Z],
        [Z, C(2), Z, Z, Ni],
        [Z, Z, C(0), Z, Z],
        [Ni, Z, Z, Z, Z],
        [Z, Ni, Z, Z, Z],
    ];
    let b = [
        [Nc(5), Z, Z, Z, Z],
        [Z, Nc(3), Z, Ni, Z],
        [Z, Z, Nc(1), Z, Ni],
        [Z, Ni, Z, Z, Z],
        [Z, Z, Ni, Z, Z],
    ];
    Ok(layout(p, &a, &b))
}

/// Seeded linear functional `uᵀ X w` on `n×n` blocks.
struct Fingerprint {
    u: Vec<C64>,
    w: Vec<C64>,
}

impl Fingerprint {
    fn new(n: usize) -> Self {
        let mut g = Gaussian::new(0x5eed_b10c);
        Self {
            u: g.complex_vector(n),
            w: g.complex_vector(n),
        }
    }

    /// Table `[i][j] = (uᵀ A_ij w, uᵀ B_ij w)`.
    fn table(&self, l: &Pencil, d: usize, n: usize) -> Vec<Vec<(C64, C64)>> {
        let f = |m: &CMat, i: usize, j: usize| {
            let mut acc = C64::new(0.0, 0.0);
            for r in 0..n {
                for c in 0..n {
                    acc += self.u[r] * m[(i * n + r, j * n + c)] * self.w[c];
                }
            }
            acc
        };
        (0..d)
            .map(|i| (0..d).map(|j| (f(&l.a, i, j), f(&l.b, i, j))).collect())
            .collect()
    }
}

fn close(x: (C64, C64), y: (C64, C64), tol: f64) -> bool {
    (x.0 - y.0).norm() <= tol && (x.1 - y.1).norm() <= tol
}

/// Whether two lists of block fingerprints agree as multisets.
fn same_multiset(xs: &[(C64, C64)], ys: &[(C64, C64)], tol: f64) -> bool {
    let mut used = alloc::vec![false; ys.len()];
    xs.iter().all(
        |x| match ys.iter().enumerate().position(|(k, y)| !used[k] && close(*x, *y, tol)) {
            Some(k) => {
                used[k] = true;
                true
            }
            None => false,
        },
    )
}

/// Largest grade handled by [`discover_permutation`].
pub const MAX_SEARCH_GRADE: usize = 6;

/// Finds block permutations `(row_perm, col_perm)` under which the block
/// Kronecker core with the given `ε`, `η`, `M` equals `target` entrywise
/// (to `1e-12` relative). Column permutations are enumerated in
/// lexicographic order, skipping columns whose block contents cannot match;
/// rows are then matched greedily and the candidate verified in full.
pub fn discover_permutation(
    target: &Pencil,
    eps: usize,
    eta: usize,
    n: usize,
    m: &MPencil,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let d = eps + eta + 1;
    if d > MAX_SEARCH_GRADE {
        return Err(Error::Unsupported("permutation search is limited to grade 6"));
    }
    if target.dim() != d * n {
        return Err(Error::DimensionMismatch("target size differs from dn"));
    }
    let base = BlockKroneckerForm::new(eps, eta, n, m.clone(), Label::Custom)?;
    let core = assemble(&base);
    let scale = target.a.max_abs().max(target.b.max_abs()).max(1.0);
    let fp = Fingerprint::new(n);
    let tol = 1e-10 * scale * norm2(&fp.u) * norm2(&fp.w);
    let tt = fp.table(target, d, n);
    let ct = fp.table(&core, d, n);

    let column = |t: &Vec<Vec<(C64, C64)>>, j: usize| -> Vec<(C64, C64)> { t.iter().map(|r| r[j]).collect() };
    let compatible: Vec<Vec<bool>> = (0..d)
        .map(|j| {
            let tj = column(&tt, j);
            (0..d).map(|c| same_multiset(&tj, &column(&ct, c), tol)).collect()
        })
        .collect();

    let mut col_perm = Vec::with_capacity(d);
    let mut used = alloc::vec![false; d];
    let mut found = None;
    search_columns(
        &compatible,
        &mut col_perm,
        &mut used,
        &mut |cp| {
            let rp = match_rows(&tt, &ct, cp, tol)?;
            let form =
                BlockKroneckerForm::with_permutations(eps, eta, n, m.clone(), rp.clone(), cp.to_vec(), Label::Custom)
                    .ok()?;
            let l = assemble(&form);
            let ok = l.a.max_abs_diff(&target.a) <= 1e-12 * scale && l.b.max_abs_diff(&target.b) <= 1e-12 * scale;
            ok.then(|| (rp, cp.to_vec()))
        },
        &mut found,
    );
    found.ok_or(Error::NoMatch)
}

type PermPair = (Vec<usize>, Vec<usize>);

fn search_columns(
    compatible: &[Vec<bool>],
    prefix: &mut Vec<usize>,
    used: &mut [bool],
    accept: &mut dyn FnMut(&[usize]) -> Option<PermPair>,
    found: &mut Option<PermPair>,
) {
    let d = compatible.len();
    if found.is_some() {
        return;
    }
    let j = prefix.len();
    if j == d {
        *found = accept(prefix);
        return;
    }
    for c in 0..d {
        if used[c] || !compatible[j][c] {
            continue;
        }
        used[c] = true;
        prefix.push(c);
        search_columns(compatible, prefix, used, accept, found);
        prefix.pop();
        used[c] = false;
        if found.is_some() {
            return;
        }
    }
}

fn match_rows(tt: &[Vec<(C64, C64)>], ct: &[Vec<(C64, C64)>], col_perm: &[usize], tol: f64) -> Option<Vec<usize>> {
    let d = tt.len();
    let mut used = alloc::vec![false; d];
    let mut rows = Vec::with_capacity(d);
    for target_row in tt {
        let r = (0..d).find(|&r| !used[r] && (0..d).all(|j| close(target_row[j], ct[r][col_perm[j]], tol)))?;
        used[r] = true;
        rows.push(r);
    }
    Some(rows)
}

/// Searches `ε = d−1, …, 0` and, for each, the single-block solutions `M`
/// (canonical `M₀` first) for a permuted block Kronecker form equal to
/// `target`.
pub fn identify_layout(p: &MatrixPolynomial, target: &Pencil, label: Label) -> Result<BlockKroneckerForm> {
    let (n, d) = (p.n(), p.grade());
    for eps in (0..d).rev() {
        let eta = d - 1 - eps;
        for m in single_block_candidates(p, eps, eta)? {
            match discover_permutation(target, eps, eta, n, &m) {
                Ok((rp, cp)) => return BlockKroneckerForm::with_permutations(eps, eta, n, m, rp, cp, label),
                Err(Error::NoMatch) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::NoMatch)
}

/// The three companion linearizations used in the experiments. `L1` is the
/// Frobenius form for any grade; `L2` and `L3` are identified from their
/// grade-5 layouts.
pub fn preset_linearization(p: &MatrixPolynomial, label: Label) -> Result<BlockKroneckerForm> {
    match label {
        Label::L1 => BlockKroneckerForm::frobenius(p),
        Label::L2 => identify_layout(p, &fiedler_layout(p)?, Label::L2),
        Label::L3 => identify_layout(p, &generalized_fiedler_layout(p)?, Label::L3),
        Label::Custom => Err(Error::Unsupported("no preset for a custom label")),
    }
}
