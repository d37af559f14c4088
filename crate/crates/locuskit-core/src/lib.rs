//! Exact computational kernel for deriving and analyzing implicit plane
//! curves ("loci") from polynomial constraint systems.
//!
//! The crate is organized as a pipeline of layers:
//!
//! * [`exact`] - arbitrary-precision integers and rationals, rational
//!   intervals, and real quadratic extensions `u + v*sqrt(n)`.
//! * [`multipoly`] - sparse multivariate polynomials over the rationals
//!   with lex / degrevlex / block monomial orders.
//! * [`groebner`] - Buchberger completion, elimination ideals, and locus
//!   polynomial extraction.
//! * [`factorize`] - exact gcd, squarefree decomposition, and univariate /
//!   bivariate factorization over the rationals.
//! * [`realsolve`] - certified real solving of zero-dimensional systems and
//!   classification of isolated curve points.
//! * [`scenario`] - the built-in triangle-geometry scenario relating the
//!   circumradius to the in/ex-circle radii.
//! * [`trace`] - float curve tracing on adaptive grids, acnode-aware.
//!
//! Everything except `trace` and the float side of `scenario` is exact; no
//! IO or file-format code lives here (see the companion `locuskit` crate).

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod exact;
pub mod multipoly;
mod upoly;
mod zpoly;
pub mod groebner;
pub mod factorize;
pub mod realsolve;
pub mod scenario;
pub mod trace;

pub use exact::{Interval, QuadExt, Rational};
pub use multipoly::{MonomialOrder, Polynomial, Var, VarContext};

/// Crate version, re-exported for report metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
