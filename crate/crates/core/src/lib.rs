//! Exact push-forward calculus for flag and Grassmann bundles.
//!
//! * [`polyring`]: sparse rational multivariate polynomials.
//! * [`gysin`]: flag and Grassmannian push-forwards by independent routes.
//! * [`approx`]: degree constants, per-quotient slope coefficients, and the
//!   formula audit built on top of them.
//! * [`certify`]: checks on numeric filtration certificates.

pub mod approx;
pub mod certify;
pub mod gysin;
pub mod polyring;

pub use gysin::{Ring, RootContext, SymmetricClass};
pub use polyring::MultiPoly;
