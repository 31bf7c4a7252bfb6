//! Block Kronecker linearizations of matrix polynomials.
//!
//! A form with `ε + η + 1 = d` assembles to the `dn × dn` pencil
//! `L(λ) = A − λB` whose unpermuted core is
//!
//! ```text
//! [ M(λ)      L_η(λ)ᵀ⊗I ]
//! [ L_ε(λ)⊗I  0         ]
//! ```
//!
//! It linearizes `P` exactly when `(Λ_η(λ)ᵀ⊗I) M(λ) (Λ_ε(λ)⊗I) = P(λ)`.

mod blocks;
mod factor;
mod form;
mod layouts;
mod mpencil;

pub use blocks::{lambda_block, lk_block, lk_coefficients, r_block, s_block};
pub use factor::{
    factorization_residual, recover_eigenvector, recover_eigenvector_flagged, right_factor,
    verify_right_sided_factorization, FactorPair, FactorizationReport, FactorizationSample, Variant, FACTORIZATION_TOL,
    RANK_TOL, RECOVERY_BLOCK_TOL,
};
pub use form::{assemble, BlockKroneckerForm, Label, Pencil};
pub use layouts::{
    discover_permutation, fiedler_layout, frobenius_layout, generalized_fiedler_layout, identify_layout,
    preset_linearization, MAX_SEARCH_GRADE,
};
pub use mpencil::{
    block_diagonal_m_pencil, check_antidiagonal_sums, induced_polynomial, m0_pencil, make_m_pencil,
    single_block_candidates, MPencil,
};
