//! Exact-arithmetic workbench for ordinary differential algebra.
//!
//! The crate works with differential polynomials in a single differential
//! variable `x` over a base field `K = Q(u_1..u_k)` equipped with a
//! user-declared derivation. On top of that it provides:
//!
//! * Ritt-Kolchin reduction with checkable certificates and saturation-ideal
//!   membership ([`reduction`]),
//! * the section construction on the hypersurface `f = 0` together with the
//!   jet-extension recurrence ([`dvariety`]),
//! * truncated differential power/Laurent series and Taylor-style solving of
//!   differentially large problems, including an independent
//!   undetermined-coefficients oracle and the Henselian root equation
//!   ([`series`]),
//! * arithmetic and derivation in the algebraic extension
//!   `K(x_0..x_{n-1})[x_n]/(f)` and verification that the generic point
//!   solves the problem ([`extension`]),
//! * an expression parser / canonical printer and a JSON-emitting command
//!   front end ([`parse`], [`cli`]).
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod basefield;
pub mod cli;
pub mod config;
pub mod diffpoly;
pub mod dvariety;
pub mod error;
pub mod extension;
pub mod factor;
pub mod gcd;
pub mod multipoly;
pub mod parse;
pub mod ratfunc;
pub mod rational;
pub mod reduction;
pub mod series;

pub use basefield::{BaseFieldSpec, FieldElem};
pub use diffpoly::{DiffPoly, Jet, LeaderData};
pub use error::{Error, Result};
pub use multipoly::{Monomial, MultiPoly, Var};
pub use ratfunc::RatFunc;
pub use rational::Rat;
pub use reduction::{DLProblem, ProblemKind, ReductionCertificate};
pub use series::{SeriesSolution, TruncSeries};
