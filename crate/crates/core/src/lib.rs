//! Zero counting, classification, and certification for planar harmonic
//! polynomial fields `F(z) = p(z) + conj(q(z))`.
//!
//! The crate locates all zeros of such a field by eliminating the conjugate
//! variable through a Sylvester resultant, classifies each zero by the sign
//! of the Jacobian `|p'|^2 - |q'|^2`, and independently certifies the counts
//! with winding numbers from the argument principle for harmonic functions.
//! On top of the solver sit:
//!
//! - [`family`]: an explicit family of fields with `deg q = deg p - 3` whose
//!   zero count exceeds the classical `3n - 2 + m(m-1)` valence bound, with
//!   all of its closed-form quantities;
//! - [`levelset`]: level-curve tracing of `Im f = 0` against the rays
//!   `Re z^n = 0`, whose transversal intersections realize the same zeros;
//! - [`hyperdim`]: harmonic vector fields in dimension `d >= 3`, including a
//!   3-D example whose zero set is a union of four circles;
//! - [`ensemble`]: random harmonic fields with Gaussian coefficients and a
//!   Monte Carlo estimator for the expected zero count.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature is
//! on by default.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod certify;
pub mod elim;
pub mod ensemble;
pub mod family;
pub mod hyperdim;
pub mod levelset;
pub mod planar;
pub mod poly;
pub mod roots;

pub use num_complex::Complex64;
