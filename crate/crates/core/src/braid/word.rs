use std::fmt;

use super::{check_strands, Permutation};
use crate::error::BraidError;

/// A signed Artin generator `σ_i^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorLetter {
    index: u16,
    positive: bool,
}

impl GeneratorLetter {
    /// `σ_index` (or its inverse when `positive` is false). `index` must be >= 1.
    pub fn new(index: usize, positive: bool) -> Result<Self, BraidError> {
        if index == 0 || index >= super::MAX_STRANDS {
            return Err(BraidError::GeneratorOutOfRange { index, n: super::MAX_STRANDS });
        }
        Ok(Self { index: index as u16, positive })
    }

    pub fn sigma(index: usize) -> Self {
        Self::new(index, true).expect("generator index must be >= 1")
    }

    pub fn sigma_inv(index: usize) -> Self {
        Self::new(index, false).expect("generator index must be >= 1")
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Self {
        Self { index: self.index, positive: !self.positive }
    }

    /// Enumeration order used by the search oracles: by index, then
    /// negative before positive.
    pub fn order_key(self) -> (u16, i8) {
        (self.index, if self.positive { 1 } else { -1 })
    }
}

impl fmt::Display for GeneratorLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "s{}", self.index)
        } else {
            write!(f, "S{}", self.index)
        }
    }
}

/// A word over the Artin generators of B_n. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    n: usize,
    letters: Vec<GeneratorLetter>,
}

impl BraidWord {
    pub fn identity(n: usize) -> Result<Self, BraidError> {
        check_strands(n)?;
        Ok(Self { n, letters: Vec::new() })
    }

    pub fn new(n: usize, letters: Vec<GeneratorLetter>) -> Result<Self, BraidError> {
        check_strands(n)?;
        if let Some(bad) = letters.iter().find(|l| l.index() >= n) {
            return Err(BraidError::GeneratorOutOfRange { index: bad.index(), n });
        }
        Ok(Self { n, letters })
    }

    /// Builds a word from signed indices: `3` is `σ_3`, `-3` is `σ_3⁻¹`.
    pub fn from_signed(n: usize, signed: &[i32]) -> Result<Self, BraidError> {
        let letters = signed
            .iter()
            .map(|&s| {
                if s == 0 {
                    Err(BraidError::GeneratorOutOfRange { index: 0, n })
                } else {
                    GeneratorLetter::new(s.unsigned_abs() as usize, s > 0)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, letters)
    }

    /// Parses the text notation `s1 s2 S1` (or `s1.s2.S1`): `s<i>` is `σ_i`,
    /// `S<i>` is `σ_i⁻¹`. An empty string is the identity.
    pub fn parse(n: usize, text: &str) -> Result<Self, BraidError> {
        let mut letters = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == '.').filter(|t| !t.is_empty()) {
            let positive = match token.as_bytes()[0] {
                b's' => true,
                b'S' => false,
                _ => return Err(BraidError::BadToken(token.to_string())),
            };
            let digits = &token[1..];
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(BraidError::BadToken(token.to_string()));
            }
            let index: usize = digits.parse().map_err(|_| BraidError::BadToken(token.to_string()))?;
            letters.push(GeneratorLetter::new(index, positive)?);
        }
        Self::new(n, letters)
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[GeneratorLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: GeneratorLetter) -> Result<(), BraidError> {
        if letter.index() >= self.n {
            return Err(BraidError::GeneratorOutOfRange { index: letter.index(), n: self.n });
        }
        self.letters.push(letter);
        Ok(())
    }

    pub(crate) fn pop_letter(&mut self) -> Option<GeneratorLetter> {
        self.letters.pop()
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.n != other.n {
            return Err(BraidError::StrandMismatch { left: self.n, right: other.n });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Self { n: self.n, letters })
    }

    /// The formal inverse: reversed, with every letter inverted.
    pub fn inverse(&self) -> BraidWord {
        Self { n: self.n, letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Removes adjacent `σ_i σ_i⁻¹` / `σ_i⁻¹ σ_i` pairs until none remain.
    pub fn freely_reduced(&self) -> BraidWord {
        let mut out: Vec<GeneratorLetter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { n: self.n, letters: out }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Sum of letter signs; the image of the word under the abelianization.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign()).sum()
    }

    /// The underlying permutation: start from the identity position array
    /// and let each letter `σ_i^{±1}` swap positions `i-1` and `i`. The result
    /// maps a strand's starting position to its final position.
    pub fn permutation(&self) -> Permutation {
        // strand_at[p] = starting position of the strand currently at p
        let mut strand_at: Vec<u16> = (0..self.n as u16).collect();
        for l in &self.letters {
            strand_at.swap(l.index() - 1, l.index());
        }
        let mut table = vec![0u16; self.n];
        for (pos, &start) in strand_at.iter().enumerate() {
            table[start as usize] = pos as u16;
        }
        Permutation::from_table_unchecked(table)
    }

    /// Applies `σ_i ↦ σ_{n-i}` letterwise.
    pub fn flipped(&self) -> BraidWord {
        Self {
            n: self.n,
            letters: self
                .letters
                .iter()
                .map(|l| GeneratorLetter { index: (self.n - l.index()) as u16, positive: l.positive })
                .collect(),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
