//! Exact simulator of a verifiable (t, n)-threshold quantum secret sharing
//! scheme in which a dealer and t participants pass a single d-dimensional
//! qudit along a chain, each applying a phase unitary derived from shares of
//! an asymmetric bivariate polynomial over F_d.
//!
//! * [`field`]: F_d arithmetic, bivariate shares, pairwise keys, Lagrange
//!   interpolation and the one-time pad for classical traffic.
//! * [`qudit`]: state vectors, quadratic-phase mutually unbiased bases, the
//!   `U_{x,y}` unitaries, measurement and a two-qudit extension.
//! * [`protocol`]: one session from preparation to recovery, with a transcript.
//! * [`adversary`]: the four attack experiments and enumeration oracles.
//!
//! The state-vector code is generic over [`Real`] (`f32`, `f64`); the aliases
//! below fix double precision, which is what the protocol tooling uses.

pub mod adversary;
pub mod error;
pub mod field;
pub mod protocol;
pub mod qudit;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use field::{BivariatePolynomial, FieldElement, PrimeField, SchemeParams, Share};
pub use qudit::MubLabel;
pub use scalar::Real;

pub type QuditState64 = qudit::QuditState<f64>;
pub type QuditState32 = qudit::QuditState<f32>;
pub type BipartiteState64 = qudit::BipartiteState<f64>;
pub type BipartiteState32 = qudit::BipartiteState<f32>;
