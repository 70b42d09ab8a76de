//! Random rewriting of words by the defining relations, producing a
//! different word for the same braid without going through canonical forms.

use rand::Rng;

use crate::braid::{BraidWord, GeneratorLetter};

/// One relation move applied at some position of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Insert `x x⁻¹`.
    Insert,
    /// Delete an adjacent `x x⁻¹`.
    Cancel,
    /// `σ_i^ε σ_j^δ → σ_j^δ σ_i^ε` with `|i - j| > 1`.
    Commute,
    /// `σ_i σ_j σ_i → σ_j σ_i σ_j` with `|i - j| = 1`, or the same with all
    /// letters inverted.
    Braid,
}

/// Tries to apply `mv` at a random applicable position. Returns false and
/// leaves the word alone when the move applies nowhere.
pub fn apply_random_move<R: Rng + ?Sized>(word: &mut Vec<GeneratorLetter>, n: usize, mv: Move, rng: &mut R) -> bool {
    let sites: Vec<usize> = match mv {
        Move::Insert => {
            let pos = rng.random_range(0..=word.len());
            let l = GeneratorLetter::new(rng.random_range(1..n), rng.random()).expect("index in range");
            word.splice(pos..pos, [l, l.inverse()]);
            return true;
        }
        Move::Cancel => (0..word.len().saturating_sub(1)).filter(|&p| word[p] == word[p + 1].inverse()).collect(),
        Move::Commute => (0..word.len().saturating_sub(1))
            .filter(|&p| word[p].index().abs_diff(word[p + 1].index()) > 1)
            .collect(),
        Move::Braid => (0..word.len().saturating_sub(2))
            .filter(|&p| {
                let (a, b, c) = (word[p], word[p + 1], word[p + 2]);
                a == c
                    && a.is_positive() == b.is_positive()
                    && a.index().abs_diff(b.index()) == 1
            })
            .collect(),
    };
    if sites.is_empty() {
        return false;
    }
    let p = sites[rng.random_range(0..sites.len())];
    match mv {
        Move::Cancel => {
            word.drain(p..p + 2);
        }
        Move::Commute => word.swap(p, p + 1),
        Move::Braid => {
            let (a, b) = (word[p], word[p + 1]);
            word[p] = b;
            word[p + 1] = a;
            word[p + 2] = b;
        }
        Move::Insert => unreachable!(),
    }
    true
}

/// Applies `steps` random relation moves to `w`. Moves that do not apply
/// are skipped, so the result may differ from `w` by fewer moves.
pub fn random_rewrite<R: Rng + ?Sized>(w: &BraidWord, steps: usize, rng: &mut R) -> BraidWord {
    let n = w.strands();
    let mut letters = w.letters().to_vec();
    const MOVES: [Move; 4] = [Move::Insert, Move::Cancel, Move::Commute, Move::Braid];
    for _ in 0..steps {
        // bias towards the length-preserving moves so words do not balloon
        let mv = match rng.random_range(0..8) {
            0 => Move::Insert,
            1 => Move::Cancel,
            2..=4 => Move::Commute,
            _ => Move::Braid,
        };
        if !apply_random_move(&mut letters, n, mv, rng) {
            let fallback = MOVES[rng.random_range(0..MOVES.len())];
            apply_random_move(&mut letters, n, fallback, rng);
        }
    }
    BraidWord::new(n, letters).expect("moves keep indices below n")
}
