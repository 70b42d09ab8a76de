use std::fmt;

use super::{check_strands, BraidWord, GeneratorLetter};
use crate::error::BraidError;

/// A permutation of `{0, …, n-1}`, stored as `table[j] = π(j)`.
///
/// Read as a braid, it is the positive permutation braid in which each pair
/// of strands crosses at most once and the strand starting at position `j`
/// ends at position `π(j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    table: Vec<u16>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { table: (0..n as u16).collect() }
    }

    /// The half twist `Δ`: `i ↦ n-1-i`.
    pub fn delta(n: usize) -> Self {
        Self { table: (0..n as u16).rev().collect() }
    }

    /// The permutation of the single crossing `σ_index`.
    pub fn atom(n: usize, index: usize) -> Self {
        let mut p = Self::identity(n);
        p.table.swap(index - 1, index);
        p
    }

    pub fn from_table(table: Vec<u16>) -> Result<Self, BraidError> {
        let n = table.len();
        check_strands(n)?;
        let mut seen = vec![false; n];
        for &v in &table {
            let v = v as usize;
            if v >= n || seen[v] {
                return Err(BraidError::NotAPermutation(n));
            }
            seen[v] = true;
        }
        Ok(Self { table })
    }

    pub(crate) fn from_table_unchecked(table: Vec<u16>) -> Self {
        Self { table }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    pub(crate) fn table_mut(&mut self) -> &mut [u16] {
        &mut self.table
    }

    pub fn apply(&self, j: usize) -> usize {
        self.table[j] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn is_delta(&self) -> bool {
        let n = self.table.len();
        self.table.iter().enumerate().all(|(i, &v)| v as usize == n - 1 - i)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.table.len()];
        for (j, &v) in self.table.iter().enumerate() {
            inv[v as usize] = j as u16;
        }
        Self { table: inv }
    }

    /// `self` followed by `next` (as braids, left to right).
    pub fn then(&self, next: &Permutation) -> Self {
        Self { table: self.table.iter().map(|&v| next.table[v as usize]).collect() }
    }

    /// Image under the flip automorphism `σ_i ↦ σ_{n-i}`, i.e. conjugation by `Δ`.
    pub fn tau(&self) -> Self {
        let n = self.table.len();
        Self { table: (0..n).map(|j| (n - 1) as u16 - self.table[n - 1 - j]).collect() }
    }

    /// `D(π) = {i | π(i) > π(i+1)}`: the generators `σ_{i+1}` that left-divide
    /// this permutation braid.
    pub fn descent_set(&self) -> DescentSet {
        DescentSet {
            members: self
                .table
                .windows(2)
                .enumerate()
                .filter(|(_, w)| w[0] > w[1])
                .map(|(i, _)| i as u16)
                .collect(),
        }
    }

    /// Number of inverted pairs; the word length of the permutation braid.
    pub fn inversions(&self) -> usize {
        let t = &self.table;
        let mut count = 0;
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                if t[i] > t[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// A positive word realizing this permutation braid. Repeatedly strips
    /// the smallest left descent, so its length equals [`Self::inversions`].
    pub fn to_braid_word(&self) -> BraidWord {
        let n = self.table.len();
        let mut rest = self.table.clone();
        let mut letters = Vec::with_capacity(self.inversions());
        let mut i = 0;
        while i + 1 < n {
            if rest[i] > rest[i + 1] {
                letters.push(GeneratorLetter::sigma(i + 1));
                rest.swap(i, i + 1);
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
        BraidWord::new(n, letters).expect("indices are below n")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.table)
    }
}

/// A descent set, kept as sorted member indices in `{0, …, n-2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DescentSet {
    members: Vec<u16>,
}

impl DescentSet {
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&m| m as usize)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&(i as u16)).is_ok()
    }

    pub fn is_subset(&self, other: &DescentSet) -> bool {
        self.members.iter().all(|m| other.members.binary_search(m).is_ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descent_sets() {
        assert!(Permutation::identity(4).descent_set().is_empty());
        let d: Vec<_> = Permutation::delta(3).descent_set().members().collect();
        assert_eq!(d, vec![0, 1]);
        let d: Vec<_> = Permutation::from_table(vec![2, 0, 1]).unwrap().descent_set().members().collect();
        assert_eq!(d, vec![0]);
    }

    #[test]
    fn braid_words_for_permutations() {
        let p = Permutation::from_table(vec![1, 0, 2]).unwrap();
        assert_eq!(p.to_braid_word().to_string(), "s1");
        assert_eq!(Permutation::delta(3).to_braid_word().to_string(), "s1 s2 s1");
        let p = Permutation::from_table(vec![1, 0, 3, 2]).unwrap();
        assert_eq!(p.to_braid_word().to_string(), "s1 s3");
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_table(vec![0, 0, 2]).is_err());
        assert!(Permutation::from_table(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn tau_matches_word_flip() {
        let w = BraidWord::parse(5, "s1 s2 s4 s3").unwrap();
        assert_eq!(w.permutation().tau(), w.flipped().permutation());
    }

    #[test]
    fn bijection_exhaustive_small_n() {
        fn perms(n: usize) -> Vec<Vec<u16>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, (n - 1) as u16);
                    out.push(q);
                }
            }
            out
        }
        for n in 2..=5 {
            for t in perms(n) {
                let p = Permutation::from_table(t).unwrap();
                let w = p.to_braid_word();
                assert_eq!(w.len(), p.inversions());
                assert!(w.len() <= n * (n - 1) / 2);
                assert_eq!(w.permutation(), p);
            }
        }
    }
}
