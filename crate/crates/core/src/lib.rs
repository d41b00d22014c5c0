//! Verification toolkit for the metric anomaly of holomorphic torsion on
//! flat complex tori.
//!
//! The crate is `no_std` (with `alloc`) so the algebraic and numerical
//! kernels can be embedded anywhere; the `std` feature only adds
//! `std::error::Error` plumbing through `core::error::Error`.
//!
//! Layout:
//!
//! * [`algebra`]: exterior algebra with auxiliary Grassmann parameters,
//!   Clifford actions, supertraces and the two rescalings.
//! * [`chern_weil`]: functional calculus on matrices of even forms and the
//!   characteristic forms built from it.
//! * [`mehler`]: the generalized Mehler kernel and its formal expansion.
//! * [`parametrix`]: heat-kernel parametrices with parameter-valued
//!   connections on flat models, plus the rescaled limit operator.
//! * [`torus`]: spectra, zeta-regularized torsion and the variation formula
//!   on flat complex tori.
#![cfg_attr(not(feature = "std"), no_std)]
// negated float comparisons are deliberate: NaN must fail checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod algebra;
pub mod chern_weil;
pub mod linalg;
pub mod mehler;
pub mod numeric;
pub mod parametrix;
pub mod poly;
pub mod quad;
pub mod scalar;
pub mod series;
pub mod torus;

pub use scalar::{Rational, Real, Ring, C64};
