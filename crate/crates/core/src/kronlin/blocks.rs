//! The structured block matrices `Λ_k⊗I`, `L_k⊗I`, `R_k⊗I`, `S_k⊗I`.

use crate::matrix::{cpowi, CMat, C64, ONE};

/// `Λ_k(λ)⊗I_n = [λ^k I; …; λI; I]`, shape `(k+1)n × n`.
pub fn lambda_block(k: usize, lambda: C64, n: usize) -> CMat {
    let mut out = CMat::zeros((k + 1) * n, n);
    let mut pow = ONE;
    for i in (0..=k).rev() {
        for r in 0..n {
            out[(i * n + r, r)] = pow;
        }
        pow *= lambda;
    }
    out
}

/// Coefficients `(E0, E1)` with `L_k(λ)⊗I_n = E0 + λE1`: `−I` on the block
/// diagonal of `E0` and `I` on the block superdiagonal of `E1`.
pub fn lk_coefficients(k: usize, n: usize) -> (CMat, CMat) {
    let mut e0 = CMat::zeros(k * n, (k + 1) * n);
    let mut e1 = CMat::zeros(k * n, (k + 1) * n);
    for i in 0..k {
        for r in 0..n {
            e0[(i * n + r, i * n + r)] = -ONE;
            e1[(i * n + r, (i + 1) * n + r)] = ONE;
        }
    }
    (e0, e1)
}

/// `L_k(λ)⊗I_n`, shape `kn × (k+1)n`. Empty for `k = 0`.
pub fn lk_block(k: usize, lambda: C64, n: usize) -> CMat {
    let (mut e0, e1) = lk_coefficients(k, n);
    e0.add_scaled(lambda, &e1);
    e0
}

fn toeplitz(k: usize, n: usize, mut entry: impl FnMut(usize, usize) -> Option<C64>) -> CMat {
    let mut out = CMat::zeros(k * n, (k + 1) * n);
    for i in 0..k {
        for j in 0..=k {
            if let Some(c) = entry(i, j) {
                for r in 0..n {
                    out[(i * n + r, j * n + r)] = c;
                }
            }
        }
    }
    out
}

/// `R_k(λ)⊗I_n`: block `(i, j)` is `λ^{i−j} I` for `j ≤ i`, zero otherwise.
pub fn r_block(k: usize, lambda: C64, n: usize) -> CMat {
    toeplitz(k, n, |i, j| (j <= i).then(|| cpowi(lambda, i - j)))
}

/// `S_k(λ)⊗I_n`: block `(i, j)` is `λ^{k−1−(j−i−1)} I` for `j > i`, zero
/// otherwise; the first block column vanishes.
pub fn s_block(k: usize, lambda: C64, n: usize) -> CMat {
    toeplitz(k, n, |i, j| (j > i).then(|| cpowi(lambda, k + i - j)))
}
