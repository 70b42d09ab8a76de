//! Bounded exhaustive root search.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::braid::{BraidWord, CanonicalForm, GeneratorLetter};
use crate::error::{invalid, BraidError};
use crate::exec::Execution;
use crate::sampling::SubgroupSide;

/// Freely reduced words over a fixed set of generators, enumerated by
/// length and then lexicographically by `(index, sign)`.
pub struct WordSpace {
    n: usize,
    letters: Vec<GeneratorLetter>,
    atoms: Vec<CanonicalForm>,
}

impl WordSpace {
    /// All `2(n-1)` signed generators of B_n.
    pub fn full(n: usize) -> Result<Self, BraidError> {
        crate::braid::check_strands(n)?;
        Ok(Self::over(n, 1..=n - 1))
    }

    /// The signed generators of one commuting block.
    pub fn side(n: usize, side: SubgroupSide) -> Result<Self, BraidError> {
        Ok(Self::over(n, side.generators(n)?))
    }

    fn over(n: usize, indices: std::ops::RangeInclusive<usize>) -> Self {
        let mut letters: Vec<GeneratorLetter> =
            indices.flat_map(|i| [GeneratorLetter::sigma_inv(i), GeneratorLetter::sigma(i)]).collect();
        letters.sort_by_key(|l| l.order_key());
        let atoms = letters.iter().map(|&l| CanonicalForm::generator(n, l).expect("valid letter")).collect();
        Self { n, letters, atoms }
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    /// Number of freely reduced words of exactly `len` letters.
    pub fn count(&self, len: usize) -> u64 {
        let k = self.letters.len() as u64;
        match len {
            0 => 1,
            _ => k.saturating_mul((k - 1).saturating_pow(len as u32 - 1)),
        }
    }

    /// Number of freely reduced words of length at most `len`.
    pub fn count_up_to(&self, len: usize) -> u64 {
        (0..=len).map(|l| self.count(l)).fold(0u64, u64::saturating_add)
    }

    /// The first word of length `len`, in enumeration order, for which
    /// `visit` returns `Some`. Top-level branches may run in parallel; the
    /// result is the same either way.
    pub fn find_first<T, F>(&self, len: usize, exec: Execution, visit: &F) -> Option<T>
    where
        T: Send,
        F: Fn(&BraidWord, &CanonicalForm) -> Option<T> + Sync,
    {
        if len == 0 {
            let id = CanonicalForm::identity(self.n).expect("valid n");
            return visit(&BraidWord::identity(self.n).expect("valid n"), &id);
        }
        exec.find_first(self.letters.len(), |branch| {
            let mut found = None;
            let _ = self.walk_branch(branch, len, &mut |w, x| match visit(w, x) {
                Some(v) => {
                    found = Some(v);
                    ControlFlow::Break(())
                }
                None => ControlFlow::Continue(()),
            });
            found
        })
        .map(|(_, v)| v)
    }

    /// Every `Some` produced by `visit` over words of length `len`, in
    /// enumeration order.
    pub fn collect<T, F>(&self, len: usize, exec: Execution, visit: &F) -> Vec<T>
    where
        T: Send,
        F: Fn(&BraidWord, &CanonicalForm) -> Option<T> + Sync,
    {
        if len == 0 {
            let id = CanonicalForm::identity(self.n).expect("valid n");
            return visit(&BraidWord::identity(self.n).expect("valid n"), &id).into_iter().collect();
        }
        exec.map(self.letters.len(), |branch| {
            let mut hits = Vec::new();
            let _ = self.walk_branch(branch, len, &mut |w, x| {
                hits.extend(visit(w, x));
                ControlFlow::Continue(())
            });
            hits
        })
        .into_iter()
        .flatten()
        .collect()
    }

    fn walk_branch(
        &self,
        branch: usize,
        len: usize,
        sink: &mut dyn FnMut(&BraidWord, &CanonicalForm) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let mut word = BraidWord::identity(self.n).expect("valid n");
        word.push(self.letters[branch]).expect("letter below n");
        let prefix = self.atoms[branch].clone();
        self.walk(&mut word, &prefix, len - 1, sink)
    }

    fn walk(
        &self,
        word: &mut BraidWord,
        prefix: &CanonicalForm,
        remaining: usize,
        sink: &mut dyn FnMut(&BraidWord, &CanonicalForm) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if remaining == 0 {
            return sink(word, prefix);
        }
        let last = *word.letters().last().expect("non-empty prefix");
        for (letter, atom) in self.letters.iter().zip(&self.atoms) {
            if *letter == last.inverse() {
                continue;
            }
            let next = prefix.multiply(atom).expect("same strand count");
            word.push(*letter).expect("letter below n");
            let flow = self.walk(word, &next, remaining - 1, sink);
            word.pop_letter();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Abelianization degree of a word (sum of letter signs). Invariant under
/// the braid relations and free cancellation.
pub fn exponent_sum(w: &BraidWord) -> i64 {
    w.exponent_sum()
}

/// Find `x` with `x^e = y`, searching words of at most `max_word_length`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootQuery {
    pub y: CanonicalForm,
    pub e: u32,
    pub max_word_length: usize,
}

impl RootQuery {
    pub fn new(y: CanonicalForm, e: u32, max_word_length: usize) -> Result<Self, BraidError> {
        if e < 2 {
            return Err(invalid(format!("root degree must be >= 2, got {e}")));
        }
        Ok(Self { y, e, max_word_length })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of candidate words the search may enumerate.
    pub budget: u64,
    /// Skip work using `e · exponent_sum(x) = exponent_sum(y)`.
    pub exponent_filter: bool,
    pub execution: Execution,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { budget: 50_000_000, exponent_filter: true, execution: Execution::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootOutcome {
    /// A verified root: `root^e = y`.
    Found { root: CanonicalForm, word: BraidWord, candidates: u64 },
    /// No root within the bound. This is not a proof that none exists.
    /// `pruned` is set when the exponent-sum test ruled out every candidate.
    NoRootFound { candidates: u64, pruned: bool },
}

impl RootOutcome {
    pub fn root(&self) -> Option<&CanonicalForm> {
        match self {
            RootOutcome::Found { root, .. } => Some(root),
            RootOutcome::NoRootFound { .. } => None,
        }
    }
}

/// The search would enumerate more candidates than the budget allows.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("search exhausted: {candidates} candidates enumerated through length {completed_length}, budget {budget}")]
pub struct SearchExhausted {
    pub candidates: u64,
    pub budget: u64,
    pub completed_length: usize,
}

pub fn brute_force_root(query: &RootQuery) -> Result<RootOutcome, SearchExhausted> {
    brute_force_root_with(query, &SearchOptions::default())
}

/// Enumerates freely reduced words in order and returns the first `x` with
/// `x^e = y`. The budget is checked per length before any work, so the
/// outcome does not depend on the execution mode.
pub fn brute_force_root_with(query: &RootQuery, opts: &SearchOptions) -> Result<RootOutcome, SearchExhausted> {
    let y = &query.y;
    let e = query.e as i64;
    let target_sum = y.exponent_sum();
    if opts.exponent_filter && target_sum % e != 0 {
        return Ok(RootOutcome::NoRootFound { candidates: 0, pruned: true });
    }
    let space = WordSpace::full(y.strands()).expect("canonical forms carry a valid n");
    let mut candidates = 0u64;
    for len in 0..=query.max_word_length {
        let count = space.count(len);
        if candidates.saturating_add(count) > opts.budget {
            return Err(SearchExhausted {
                candidates,
                budget: opts.budget,
                completed_length: len.saturating_sub(1),
            });
        }
        let hit = space.find_first(len, opts.execution, &|word, x| {
            if opts.exponent_filter && word.exponent_sum() * e != target_sum {
                return None;
            }
            let p = x.power(e).expect("e >= 0");
            (p == *y).then(|| (word.clone(), x.clone()))
        });
        candidates += count;
        if let Some((word, root)) = hit {
            return Ok(RootOutcome::Found { root, word, candidates });
        }
    }
    Ok(RootOutcome::NoRootFound { candidates, pruned: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(n: usize, text: &str) -> CanonicalForm {
        BraidWord::parse(n, text).unwrap().normalize()
    }

    #[test]
    fn word_space_order_and_counts() {
        let space = WordSpace::full(3).unwrap();
        assert_eq!(space.count(0), 1);
        assert_eq!(space.count(1), 4);
        assert_eq!(space.count(3), 36);
        let words = space.collect(2, Execution::Sequential, &|w, _| Some(w.to_string()));
        assert_eq!(words.len(), 12);
        assert_eq!(words[0], "S1 S1");
        assert_eq!(words[1], "S1 S2");
        assert_eq!(words[2], "S1 s2");
        assert_eq!(words[3], "s1 s1");
        let par = space.collect(2, Execution::Parallel, &|w, _| Some(w.to_string()));
        assert_eq!(words, par);
        let all = space.collect(3, Execution::Sequential, &|w, x| Some((w.clone(), x.clone())));
        assert!(all.iter().all(|(w, x)| w.is_freely_reduced() && w.normalize() == *x));
    }

    #[test]
    fn root_examples() {
        let q = RootQuery::new(nf(3, "s1 s1"), 2, 2).unwrap();
        match brute_force_root(&q).unwrap() {
            RootOutcome::Found { root, word, .. } => {
                assert_eq!(root, nf(3, "s1"));
                assert_eq!(word.to_string(), "s1");
            }
            other => panic!("{other:?}"),
        }
        let q = RootQuery::new(nf(3, "s1 s2 s1 s2 s1 s2"), 3, 2).unwrap();
        assert_eq!(brute_force_root(&q).unwrap().root(), Some(&nf(3, "s1 s2")));

        let q = RootQuery::new(nf(3, "s1"), 2, 4).unwrap();
        assert_eq!(brute_force_root(&q).unwrap(), RootOutcome::NoRootFound { candidates: 0, pruned: true });
        assert!(RootQuery::new(nf(3, "s1"), 1, 4).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let q = RootQuery::new(nf(4, "s1 s2 s3 s1 s1 s2"), 2, 6).unwrap();
        let opts = SearchOptions { budget: 100, ..SearchOptions::default() };
        let err = brute_force_root_with(&q, &opts).unwrap_err();
        assert_eq!(err.candidates, 1 + 6 + 30);
    }

    #[test]
    fn exponent_sum_is_a_homomorphism() {
        let w = BraidWord::parse(4, "s1 S2 s3 s3").unwrap();
        let x = w.normalize();
        assert_eq!(exponent_sum(&w), 2);
        assert_eq!(x.exponent_sum(), 2);
        assert_eq!(x.power(3).unwrap().exponent_sum(), 6);
        assert_eq!(exponent_sum(&BraidWord::parse(3, "s1 s2 s1").unwrap()), 3);
    }
}
