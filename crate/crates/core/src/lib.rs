//! Weight-dependent noncommutative binomial coefficients.
//!
//! The algebra `ℂ_w[x,y]` is generated by `x`, `y` and a doubly indexed
//! family of commuting weights `w(s,t)` subject to
//!
//! ```text
//! yx = w(1,1)·xy,   x·w(s,t) = w(s+1,t)·x,   y·w(s,t) = w(s,t+1)·y.
//! ```
//!
//! Every element has a unique normal form `Σ c_{k,l} x^k y^l` with the
//! coefficients on the left, and `(x+y)^n` expands with coefficients given
//! by a weighted lattice-path recursion. This crate computes those normal
//! forms and coefficients over exact rational polynomials or complex
//! doubles, and checks the surrounding identities (convolutions,
//! symmetric-function and elliptic specializations) against brute-force
//! oracles.

pub mod binomial;
pub mod coeffs;
pub mod elliptic;
pub mod error;
pub mod exec;
pub mod ncalgebra;
pub mod oracle;
pub mod paths;
pub mod precise;
pub mod random;
pub mod symmetric;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
