//! Exact arithmetic in the rational Witt ring of zeta functions of varieties
//! over finite fields.
//!
//! Everything is computed with arbitrary-precision integers and rationals:
//! Witt ring operations and norms on q-supported divisors, truncated
//! multivariate power series, pre-lambda powers (constant-coefficient Euler
//! products), Möbius functions of pattern sets, and finite-degree and
//! limiting divisors for spaces of effective zero-cycles.

pub mod densities;
pub mod error;
pub mod labeledconf;
pub mod patterns;
pub mod prelambda;
pub mod qlaurent;
pub mod series;
pub mod witt;
pub mod zoo;

pub use error::{Error, Result};
pub use qlaurent::{IntLaurent, QLaurent};
pub use series::TruncSeries;
pub use witt::{format_sig15, weight_agreement_depth, SigmaRationalForm, WittDivisor};
pub use zoo::VarietyClass;
