//! Numerical laboratory for Fujita-type blow-up of systems of wave
//! inequalities on the exterior of a ball.
//!
//! * [`criticality`] classifies parameter tuples and builds the explicit
//!   power-law solutions that make the criterion sharp.
//! * [`testfn`] implements the test-function apparatus: harmonic lift,
//!   cutoffs, the space-time weights and the integrals whose growth rates
//!   drive the nonexistence argument.
//! * [`simulator`] integrates the radial equality system with a leapfrog
//!   scheme and detects blow-up.
//!
//! The guide in `book/` walks through each piece; its code listings are
//! compiled and run as doc-tests of this crate.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criticality;
pub mod error;
pub mod quadrature;
pub mod simulator;
pub mod testfn;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/criticality.md")]
    mod criticality {}
    #[doc = include_str!("../../../book/src/test-functions.md")]
    mod test_functions {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    mod asymptotics {}
    #[doc = include_str!("../../../book/src/simulator.md")]
    mod simulator {}
}
