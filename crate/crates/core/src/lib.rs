//! Numerical laboratory for n-starlike integral operators.
//!
//! The crate is organized bottom-up:
//!
//! * [`series`] truncated complex power series and fractional-head elements,
//! * [`salagean`] the Salagean operator and its ratio functional,
//! * [`integral_ops`] the integral operator families and their structural identities,
//! * [`dominants`] best dominants of the first-order subordination,
//! * [`geometry`] boundary minima, membership margins and containment tests,
//! * [`genfun`] generators of extremal and random test functions,
//! * [`report`] the verification commands behind the `starlab` binary.

pub mod dominants;
pub mod error;
pub mod genfun;
pub mod geometry;
pub mod integral_ops;
pub mod quadrature;
pub mod report;
pub mod salagean;
pub mod series;

pub use error::{Result, StarlabError};
pub use num_complex::Complex64;
