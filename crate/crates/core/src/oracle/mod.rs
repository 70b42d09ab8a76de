//! Brute-force solvers and experiments used as independent checks: a
//! rewriting-closure word-problem oracle, a bounded root search, and the
//! impersonation experiments.

mod attack;
mod closure;
mod rewrite;
mod root;

pub use attack::{
    impersonation_experiment, recover_key, recover_scheme1, recover_scheme2, AttackReport, AttackStrategy,
    ExperimentConfig, REPLAY_OBSERVATIONS,
};
pub use closure::{all_words, RewritingClosure};
pub use rewrite::{apply_random_move, random_rewrite, Move};
pub use root::{
    brute_force_root, brute_force_root_with, exponent_sum, RootOutcome, RootQuery, SearchExhausted, SearchOptions,
    WordSpace,
};
