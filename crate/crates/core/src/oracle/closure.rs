//! Word-problem oracle that never touches canonical forms: two words are
//! equal when one rewrites into the other using the defining relations and
//! free cancellation/insertion, exploring all words up to a length bound.
//!
//! The bound makes the oracle one-sided in principle (a derivation might need
//! to pass through longer words), so it is only used at sizes where a few
//! letters of slack suffice.

use crate::braid::{BraidWord, GeneratorLetter};

/// Equivalence classes of all words over B_n up to `max_len` letters.
pub struct RewritingClosure {
    n: usize,
    max_len: usize,
    alphabet: usize,
    offsets: Vec<usize>,
    parent: Vec<u32>,
}

impl RewritingClosure {
    /// Explores every word of length `<= max_len`. The number of words is
    /// `Σ (2(n-1))^k`, so keep both parameters small.
    pub fn build(n: usize, max_len: usize) -> Self {
        assert!(n >= 2);
        let alphabet = 2 * (n - 1);
        let mut offsets = vec![0usize; max_len + 2];
        for len in 0..=max_len {
            offsets[len + 1] = offsets[len] + alphabet.pow(len as u32);
        }
        let total = offsets[max_len + 1];
        let mut closure = Self { n, max_len, alphabet, offsets, parent: (0..total as u32).collect() };
        closure.saturate();
        closure
    }

    // letter code: 2*(index-1) + (0 for positive, 1 for negative)
    fn code(l: GeneratorLetter) -> usize {
        2 * (l.index() - 1) + usize::from(!l.is_positive())
    }

    fn id(&self, codes: &[usize]) -> usize {
        let mut v = 0;
        for &c in codes {
            v = v * self.alphabet + c;
        }
        self.offsets[codes.len()] + v
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }

    fn saturate(&mut self) {
        let mut codes = Vec::with_capacity(self.max_len);
        for len in 0..=self.max_len {
            let count = self.alphabet.pow(len as u32);
            for v in 0..count {
                codes.clear();
                let mut rest = v;
                for _ in 0..len {
                    codes.push(rest % self.alphabet);
                    rest /= self.alphabet;
                }
                codes.reverse();
                self.link_neighbours(&codes);
            }
        }
    }

    fn link_neighbours(&mut self, codes: &[usize]) {
        let here = self.id(codes);
        let len = codes.len();
        // insertion of x x⁻¹ at every position
        if len + 2 <= self.max_len {
            let mut longer = Vec::with_capacity(len + 2);
            for pos in 0..=len {
                for c in 0..self.alphabet {
                    longer.clear();
                    longer.extend_from_slice(&codes[..pos]);
                    longer.push(c);
                    longer.push(c ^ 1);
                    longer.extend_from_slice(&codes[pos..]);
                    let there = self.id(&longer);
                    self.union(here, there);
                }
            }
        }
        let mut swapped = codes.to_vec();
        // σ_i^ε σ_j^δ = σ_j^δ σ_i^ε for |i - j| > 1
        for pos in 0..len.saturating_sub(1) {
            let (i, j) = (codes[pos] / 2, codes[pos + 1] / 2);
            if i.abs_diff(j) > 1 {
                swapped.swap(pos, pos + 1);
                let there = self.id(&swapped);
                self.union(here, there);
                swapped.swap(pos, pos + 1);
            }
        }
        // σ_i σ_j σ_i = σ_j σ_i σ_j for |i - j| = 1, and the same with all
        // letters inverted
        for pos in 0..len.saturating_sub(2) {
            let (a, b, c) = (codes[pos], codes[pos + 1], codes[pos + 2]);
            let same_sign = a % 2 == b % 2 && b % 2 == c % 2;
            if same_sign && a == c && (a / 2).abs_diff(b / 2) == 1 {
                swapped[pos] = b;
                swapped[pos + 1] = a;
                swapped[pos + 2] = b;
                let there = self.id(&swapped);
                self.union(here, there);
                swapped[pos..pos + 3].copy_from_slice(&codes[pos..pos + 3]);
            }
        }
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    /// Whether the two words were found to be equal. `None` if either word is
    /// longer than the explored bound or has the wrong strand count.
    pub fn same_class(&mut self, a: &BraidWord, b: &BraidWord) -> Option<bool> {
        let ia = self.word_id(a)?;
        let ib = self.word_id(b)?;
        Some(self.find(ia) == self.find(ib))
    }

    /// A representative id for the class of `w`.
    pub fn class_of(&mut self, w: &BraidWord) -> Option<usize> {
        let id = self.word_id(w)?;
        Some(self.find(id))
    }

    fn word_id(&self, w: &BraidWord) -> Option<usize> {
        if w.strands() != self.n || w.len() > self.max_len {
            return None;
        }
        let codes: Vec<usize> = w.letters().iter().map(|&l| Self::code(l)).collect();
        Some(self.id(&codes))
    }
}

/// Every word over B_n of length exactly `len`, in code order.
pub fn all_words(n: usize, len: usize) -> Vec<BraidWord> {
    let alphabet = 2 * (n - 1);
    let count = alphabet.pow(len as u32);
    (0..count)
        .map(|mut v| {
            let mut letters = Vec::with_capacity(len);
            for _ in 0..len {
                let c = v % alphabet;
                v /= alphabet;
                letters.push(GeneratorLetter::new(c / 2 + 1, c.is_multiple_of(2)).expect("index >= 1"));
            }
            letters.reverse();
            BraidWord::new(n, letters).expect("indices below n")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_relations_are_found() {
        let mut c = RewritingClosure::build(3, 6);
        let w = |t: &str| BraidWord::parse(3, t).unwrap();
        assert_eq!(c.same_class(&w("s1 s2 s1"), &w("s2 s1 s2")), Some(true));
        assert_eq!(c.same_class(&w("s1 S1"), &w("")), Some(true));
        assert_eq!(c.same_class(&w("s1 s2 S1"), &w("S2 s1 s2")), Some(true));
        assert_eq!(c.same_class(&w("s1"), &w("s2")), Some(false));
        assert_eq!(c.same_class(&w("s1 s1"), &w("")), Some(false));
        assert_eq!(c.same_class(&w("s1 s1 s1 s1 s1 s1 s1"), &w("")), None);
    }

    #[test]
    fn enumerates_words() {
        assert_eq!(all_words(3, 2).len(), 16);
        assert_eq!(all_words(3, 0), vec![BraidWord::identity(3).unwrap()]);
    }
}
