//! Numerical tools for the variational principle of fermionic projectors
//! on a finite discrete space-time with an indefinite inner product.
//!
//! The crate evaluates spectral-weight actions of closed chains, builds
//! operators of the admissible classes from spanning frames, fixes gauge by
//! Hilbert-Schmidt norm minimization, and searches for minimizers by direct
//! descent.

// `!(x > 0.0)` deliberately rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod fermionic;
pub mod gauge;
pub mod io;
pub mod optimize;
pub mod space;
pub mod spectral;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};

/// Double-precision complex scalar.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
