use std::fmt;

use super::{check_strands, BraidWord, GeneratorLetter, Permutation};
use crate::error::{invalid, BraidError};

/// The left canonical form `Δ^inf · π_1 ⋯ π_l` of a braid.
///
/// Invariants, upheld by every constructor:
/// - no factor is the identity or `Δ`;
/// - adjacent factors are left-weighted: `D(π_{k+1}) ⊆ D(π_k⁻¹)`.
///
/// Under these invariants the representation is unique, so the derived
/// `PartialEq` is equality in the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    n: usize,
    inf: i64,
    factors: Vec<Permutation>,
}

impl CanonicalForm {
    pub fn identity(n: usize) -> Result<Self, BraidError> {
        check_strands(n)?;
        Ok(Self { n, inf: 0, factors: Vec::new() })
    }

    /// The fundamental braid `Δ`.
    pub fn delta(n: usize) -> Result<Self, BraidError> {
        Self::delta_power(n, 1)
    }

    pub fn delta_power(n: usize, power: i64) -> Result<Self, BraidError> {
        check_strands(n)?;
        Ok(Self { n, inf: power, factors: Vec::new() })
    }

    /// The single generator `σ_index^{±1}`.
    pub fn generator(n: usize, letter: GeneratorLetter) -> Result<Self, BraidError> {
        Self::from_word(&BraidWord::new(n, vec![letter])?)
    }

    /// Builds a form from raw parts, checking every canonical-form invariant.
    pub fn from_parts(n: usize, inf: i64, factors: Vec<Permutation>) -> Result<Self, BraidError> {
        check_strands(n)?;
        let form = Self { n, inf, factors };
        form.validate()?;
        Ok(form)
    }

    /// Checks the canonical-form invariants on this value.
    pub fn validate(&self) -> Result<(), BraidError> {
        for (k, f) in self.factors.iter().enumerate() {
            if f.len() != self.n {
                return Err(BraidError::StrandMismatch { left: self.n, right: f.len() });
            }
            if f.is_identity() {
                return Err(BraidError::NotCanonical(format!("factor {k} is the identity")));
            }
            if f.is_delta() {
                return Err(BraidError::NotCanonical(format!("factor {k} is delta")));
            }
        }
        for (k, pair) in self.factors.windows(2).enumerate() {
            if !pair[1].descent_set().is_subset(&pair[0].inverse().descent_set()) {
                return Err(BraidError::NotCanonical(format!(
                    "factors {k} and {} are not left-weighted",
                    k + 1
                )));
            }
        }
        Ok(())
    }

    /// Left canonical form of a word.
    pub fn from_word(word: &BraidWord) -> Result<Self, BraidError> {
        let n = word.strands();
        check_strands(n)?;
        let mut acc = Accumulator { n, inf: 0, factors: Vec::new() };
        for &letter in word.letters() {
            if letter.is_positive() {
                acc.push(Permutation::atom(n, letter.index()));
            } else {
                // σ_i⁻¹ = Δ⁻¹ · (Δσ_i⁻¹)
                acc.shift_delta(-1);
                acc.push(delta_without(n, letter.index()));
            }
        }
        Ok(acc.finish())
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    /// The power of `Δ` (may be negative).
    pub fn inf(&self) -> i64 {
        self.inf
    }

    pub fn factors(&self) -> &[Permutation] {
        &self.factors
    }

    /// Canonical length `l`, the number of non-Δ factors.
    pub fn canonical_length(&self) -> usize {
        self.factors.len()
    }

    /// Exponent sum of any word representing this braid.
    pub fn exponent_sum(&self) -> i64 {
        let delta_len = (self.n * (self.n - 1) / 2) as i64;
        self.inf * delta_len + self.factors.iter().map(|f| f.inversions() as i64).sum::<i64>()
    }

    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    pub fn is_delta_power(&self) -> bool {
        self.factors.is_empty()
    }

    fn check_same_strands(&self, other: &CanonicalForm) -> Result<(), BraidError> {
        if self.n != other.n {
            return Err(BraidError::StrandMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Group equality. Errors when the strand counts differ.
    pub fn equals(&self, other: &CanonicalForm) -> Result<bool, BraidError> {
        self.check_same_strands(other)?;
        Ok(self == other)
    }

    pub fn multiply(&self, other: &CanonicalForm) -> Result<CanonicalForm, BraidError> {
        self.check_same_strands(other)?;
        // Δ^u A · Δ^v B = Δ^{u+v} τ^v(A) B
        let factors = if other.inf.rem_euclid(2) == 1 {
            self.factors.iter().map(Permutation::tau).collect()
        } else {
            self.factors.clone()
        };
        let mut acc = Accumulator { n: self.n, inf: self.inf + other.inf, factors };
        for f in &other.factors {
            acc.push(f.clone());
        }
        Ok(acc.finish())
    }

    pub fn inverse(&self) -> CanonicalForm {
        // (Δ^u A_1⋯A_l)⁻¹ = A_l⁻¹⋯A_1⁻¹ Δ^{-u}, with A⁻¹ = Δ⁻¹ · (ΔA⁻¹).
        let n = self.n;
        let mut acc = Accumulator { n, inf: 0, factors: Vec::new() };
        for f in self.factors.iter().rev() {
            let finv = f.inverse();
            let complement: Vec<u16> = (0..n).map(|j| finv.table()[n - 1 - j]).collect();
            acc.shift_delta(-1);
            acc.push(Permutation::from_table_unchecked(complement));
        }
        acc.shift_delta(-self.inf);
        acc.finish()
    }

    /// `x^e` for `e >= 0`; `x^0` is the identity.
    pub fn power(&self, e: i64) -> Result<CanonicalForm, BraidError> {
        if e < 0 {
            return Err(invalid(format!("exponent must be >= 0, got {e}")));
        }
        let mut result = CanonicalForm::identity(self.n)?;
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.multiply(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(result)
    }

    /// Image under `σ_i ↦ σ_{n-i}`; equivalently conjugation by `Δ`.
    pub fn tau(&self) -> CanonicalForm {
        let form = Self { n: self.n, inf: self.inf, factors: self.factors.iter().map(Permutation::tau).collect() };
        super::audit::record(&form);
        form
    }

    /// A word representing this braid: `Δ^inf` spelled out, then each factor.
    pub fn to_word(&self) -> BraidWord {
        let n = self.n;
        let delta = delta_word(n);
        let mut letters = Vec::new();
        let unit = if self.inf >= 0 { delta } else { delta.inverse() };
        for _ in 0..self.inf.unsigned_abs() {
            letters.extend_from_slice(unit.letters());
        }
        for f in &self.factors {
            letters.extend_from_slice(f.to_braid_word().letters());
        }
        BraidWord::new(n, letters).expect("letters come from valid factors")
    }

    /// True when every factor permutation fixes the given strand positions.
    pub fn factors_fix(&self, positions: std::ops::Range<usize>) -> bool {
        self.factors.iter().all(|f| positions.clone().all(|p| f.apply(p) == p))
    }
}

/// `(σ1⋯σ_{n-1})(σ1⋯σ_{n-2})⋯(σ1)`.
pub(crate) fn delta_word(n: usize) -> BraidWord {
    let mut letters = Vec::with_capacity(n * (n - 1) / 2);
    for top in (1..n).rev() {
        for i in 1..=top {
            letters.push(GeneratorLetter::sigma(i));
        }
    }
    BraidWord::new(n, letters).expect("indices are below n")
}

impl BraidWord {
    /// The fundamental braid as the word `(σ1⋯σ_{n-1})(σ1⋯σ_{n-2})⋯(σ1)`.
    pub fn delta(n: usize) -> Result<BraidWord, BraidError> {
        check_strands(n)?;
        Ok(delta_word(n))
    }

    pub fn normalize(&self) -> CanonicalForm {
        CanonicalForm::from_word(self).expect("a constructed word has a valid strand count")
    }
}

/// The permutation braid `Δσ_i⁻¹`.
fn delta_without(n: usize, i: usize) -> Permutation {
    let table = (0..n)
        .map(|j| {
            let v = n - 1 - j;
            if v == i - 1 {
                i as u16
            } else if v == i {
                (i - 1) as u16
            } else {
                v as u16
            }
        })
        .collect();
    Permutation::from_table_unchecked(table)
}

/// Working state `Δ^inf · factors` whose factor list is kept left-weighted
/// as simple elements are appended.
struct Accumulator {
    n: usize,
    inf: i64,
    factors: Vec<Permutation>,
}

impl Accumulator {
    /// Right-multiplies by `Δ^k`, moving it to the front through `τ^k`.
    fn shift_delta(&mut self, k: i64) {
        if k.rem_euclid(2) == 1 {
            for f in &mut self.factors {
                *f = f.tau();
            }
        }
        self.inf += k;
    }

    /// Right-multiplies by a simple element and restores left-weightedness by
    /// rebalancing pairs from right to left.
    fn push(&mut self, simple: Permutation) {
        if simple.is_identity() {
            return;
        }
        self.factors.push(simple);
        let mut j = self.factors.len() - 1;
        while j > 0 {
            let (left, right) = self.factors.split_at_mut(j);
            if !left_weight_pair(&mut left[j - 1], &mut right[0]) {
                break;
            }
            j -= 1;
        }
        while self.factors.last().is_some_and(Permutation::is_identity) {
            self.factors.pop();
        }
    }

    /// Runs full passes until nothing moves, then strips identity factors and
    /// absorbs `Δ` factors into `inf`.
    fn finish(mut self) -> CanonicalForm {
        loop {
            let mut changed = false;
            for j in 1..self.factors.len() {
                let (left, right) = self.factors.split_at_mut(j);
                changed |= left_weight_pair(&mut left[j - 1], &mut right[0]);
            }
            if let Some(k) = self.factors.iter().position(Permutation::is_identity) {
                self.factors.remove(k);
                changed = true;
            }
            if let Some(k) = self.factors.iter().position(Permutation::is_delta) {
                // x Δ = Δ τ(x)
                self.factors.remove(k);
                for f in &mut self.factors[..k] {
                    *f = f.tau();
                }
                self.inf += 1;
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let form = CanonicalForm { n: self.n, inf: self.inf, factors: self.factors };
        super::audit::record(&form);
        form
    }
}

/// Moves generators from the front of `right` to the back of `left` while
/// some `i ∈ D(right) \ D(left⁻¹)` exists, smallest index first. Returns
/// whether anything moved.
fn left_weight_pair(left: &mut Permutation, right: &mut Permutation) -> bool {
    let n = left.len();
    let mut left_inv = left.inverse();
    let mut moved = false;
    let mut i = 0;
    while i + 1 < n {
        let r = right.table();
        let li = left_inv.table();
        if r[i] > r[i + 1] && li[i] < li[i + 1] {
            // left ← left·σ_{i+1}, right ← σ_{i+1}⁻¹·right
            let inv = left_inv.table_mut();
            inv.swap(i, i + 1);
            let (a, b) = (inv[i] as usize, inv[i + 1] as usize);
            let lt = left.table_mut();
            lt[a] = i as u16;
            lt[b] = (i + 1) as u16;
            right.table_mut().swap(i, i + 1);
            moved = true;
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    moved
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ^{}", self.inf)?;
        for p in &self.factors {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}
