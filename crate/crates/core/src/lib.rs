//! Braid group arithmetic and the two root-problem identification schemes
//! built on it, with a brute-force root oracle, impersonation experiments and
//! a framed TCP transport for running prover and verifier as separate
//! processes.

pub mod braid;
pub mod error;
pub mod exec;
pub mod hash;
pub mod net;
pub mod oracle;
pub mod protocol;
pub mod sampling;
pub mod selftest;

pub use braid::{BraidWord, CanonicalForm, DescentSet, GeneratorLetter, Permutation};
pub use error::BraidError;
pub use exec::Execution;
