//! Exact arithmetic in the Artin braid group B_n.
//!
//! Every group element is carried as a [`CanonicalForm`], the left-weighted
//! Garside decomposition `Δ^inf · π_1 ⋯ π_l`. Because that decomposition is
//! unique, structural equality of two forms decides the word problem.

pub mod audit;
mod canonical;
mod permutation;
mod word;

pub use canonical::CanonicalForm;
pub use permutation::{DescentSet, Permutation};
pub use word::{BraidWord, GeneratorLetter};

/// Largest strand count accepted anywhere in the crate. Factor tables are
/// stored with 16-bit entries.
pub const MAX_STRANDS: usize = 1024;

pub(crate) fn check_strands(n: usize) -> Result<(), crate::BraidError> {
    if n < 2 {
        return Err(crate::error::invalid(format!("strand count must be >= 2, got {n}")));
    }
    if n > MAX_STRANDS {
        return Err(crate::error::invalid(format!(
            "strand count must be <= {MAX_STRANDS}, got {n}"
        )));
    }
    Ok(())
}
