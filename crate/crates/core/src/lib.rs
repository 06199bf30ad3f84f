//! Generalized matrix coefficients of unitary Lie group representations.
//!
//! A generalized matrix coefficient pairs two distribution vectors `φ`, `ψ`
//! into a distribution on the group, `f ↦ ⟨π(f)φ, ψ⟩`. This crate realizes
//! that construction numerically for two concrete models:
//!
//! * [`torus`]: the circle `T = R/Z` acting on two-sided sequences by
//!   `(π(t)a)_n = a_n e^{2πint}`; every identity is exact up to rounding.
//! * [`heisenberg`]: the Schrödinger representation of the 3-dimensional
//!   Heisenberg group in the Hermite basis, where generalized matrix
//!   coefficients are distributional Fourier–Wigner transforms.
//!
//! Model-independent pieces live in [`coeff`] (coefficient vectors with growth
//! envelopes), [`uea`] (the universal enveloping algebra), [`pairing`] (the
//! bilinear dual pairing) and [`gmc`] (covariance operators on functionals).
//! [`mollifier`] provides approximate identities `J_n` and the convergence
//! diagnostics built on them.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod coeff;
pub mod error;
pub mod gmc;
pub mod group;
pub mod heisenberg;
pub mod hermite;
pub mod mollifier;
pub mod pairing;
pub mod quadrature;
pub mod torus;
pub mod uea;

pub use num_complex::Complex64;

pub use coeff::{CoefficientVector, Formula, GrowthClass, GrowthEnvelope, IndexDomain, Tail};
pub use error::{Error, Result};
pub use group::GroupModel;
pub use uea::{LieAlgebra, UeaElement};

/// `2π`.
pub const TAU: f64 = core::f64::consts::TAU;
