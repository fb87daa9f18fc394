//! Exact verification engine for affine numerators under quantum
//! Hamiltonian reduction.
//!
//! The crate is layered bottom-up:
//!
//! * [`rootsys`] — finite root systems, Weyl groups, coroot-lattice enumeration;
//! * [`series`] — truncated q-series with exponential-polynomial coefficients;
//! * [`theta`] — Jacobi, Mumford and Dedekind builders;
//! * [`numerator`] — the lattice theta-sum numerators and their checks;
//! * [`cft`] — A1 / Virasoro characters and the D4 character-side checks;
//! * [`report`] — the verification report type shared by every check.

// Matrix code indexes rows and columns explicitly.
#![allow(clippy::needless_range_loop)]

pub mod cft;
pub mod linalg;
pub mod numerator;
pub mod report;
pub mod rootsys;
pub mod series;
pub mod theta;

/// Exact rational used for weights, exponents and frame pairings.
pub type Rat = num_rational::Ratio<i64>;

/// Shorthand for `a / b` as a [`Rat`].
pub fn rat(a: i64, b: i64) -> Rat {
    Rat::new(a, b)
}

/// Shorthand for an integral [`Rat`].
pub fn int(a: i64) -> Rat {
    Rat::from_integer(a)
}

pub use report::{Mode, Status, VerificationReport};
pub use rootsys::{AffineWeight, Frame, RootSystem, Sl2Triple, Weight, WeylElement};
pub use series::{Coeff, ExpKey, ExpPolynomial, EvalPoint, GaussRat, Order, QSeries};
