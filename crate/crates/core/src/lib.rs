//! Fredholm indices of scalar Toeplitz operators.
//!
//! The crate computes the index of `T_f` for finite Laurent symbols and
//! sampled circle functions by two independent routes (phase winding of the
//! symbol and root counting of `z^m f`), cross-checks them against
//! finite-section singular values, scans parameter families of symbols for
//! index jumps, and runs lattice experiments for the index of `PUP` in the
//! quantum Hall setting.
//!
//! Conventions: `a` is the backward shift `e_n -> e_{n-1}`, and `a = T_{1/z}`,
//! so `T_{z^n} = (a*)^n` has index `-n` and `Index(T_f) = -winding(f)`.
//!
//! The crate is `no_std` (it needs `alloc`). Enabling the `std` feature only
//! turns on runtime SIMD dispatch in the matrix kernels.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod fft;
pub mod index;
pub mod linalg;
pub mod portrait;
pub mod qhe;
pub mod rng;
pub mod symbol;
pub mod truncation;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use index::{
    expected_jump_codimension, index_from_roots, laurent_roots, toeplitz_index, winding_number,
    CoefficientField, FredholmStatus, IndexMethod, IndexOptions, IndexResult, RootReport,
};
pub use symbol::{AnnulusSpec, CircleFunction, LaurentSymbol, SampledSymbol, ShiftPolynomial};
