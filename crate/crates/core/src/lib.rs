//! Polynomial eigenvalue problems through block Kronecker linearizations.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! - [`polyval`]: matrix polynomials, evaluation, residuals, scaling and the
//!   random test generators.
//! - [`kronlin`]: block Kronecker pencils, their right-sided factorizations
//!   and eigenvector recovery.
//! - [`denseig`]: a dense complex generalized eigensolver (Hessenberg-triangular
//!   reduction + single-shift QZ), inverse iteration, singular values and the
//!   separation of a pencil from a deflated eigenvalue.
//! - [`bounds`]: acute angles and the a posteriori eigenvector error bounds.
//! - [`oracle`]: double-double reference eigenpairs via Newton refinement.
//!
//! File formats, the experiment harness and the command line live in the
//! companion `pepbound` crate.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod bounds;
pub mod denseig;
mod error;
pub mod kronlin;
pub mod math;
pub mod matrix;
pub mod oracle;
pub mod polyval;
pub mod rng;

pub use error::{Error, Result};
pub use matrix::{CMat, C64};
