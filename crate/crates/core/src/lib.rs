//! Exact spectral geometry of the Zeitlin model on su(N).
//!
//! The crate computes Wigner 3j and 6j symbols in exact arithmetic, evaluates
//! the Ricci eigenvalues of the Zeitlin metric on su(N) and of the quotient
//! by the rigid rotations, and verifies the summation identities these
//! curvatures rest on with zero rational residual.

pub mod error;
pub mod half;
pub mod identities;
pub mod primes;
pub mod rational;
pub mod ricci;
pub mod wigner;

pub use error::{Error, Result};
pub use half::HalfInt;
pub use rational::Rational;
