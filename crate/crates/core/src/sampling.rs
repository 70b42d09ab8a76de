//! Random braids, the commuting subgroups `LB_n` / `UB_n`, and the hardness
//! policy used to accept sampled keys.

use std::fmt;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::braid::{BraidWord, CanonicalForm, GeneratorLetter};
use crate::error::{invalid, BraidError};

/// Deterministic, seedable stream used for every random choice in the crate.
pub type BraidRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> BraidRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// An independent stream for job `index` of a batch seeded by `seed`.
pub fn stream_rng(seed: u64, index: u64) -> BraidRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Which commuting block a subgroup word braids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupSide {
    /// `LB_n`, generated by `σ_1 … σ_{n/2-1}`.
    Lower,
    /// `UB_n`, generated by `σ_{n/2+1} … σ_{n-1}`.
    Upper,
}

impl SubgroupSide {
    /// Generator indices this side may use. Requires even `n >= 4`.
    pub fn generators(self, n: usize) -> Result<RangeInclusive<usize>, BraidError> {
        check_even(n)?;
        Ok(match self {
            SubgroupSide::Lower => 1..=n / 2 - 1,
            SubgroupSide::Upper => n / 2 + 1..=n - 1,
        })
    }

    /// Strand positions that words on this side never move.
    pub fn fixed_positions(self, n: usize) -> std::ops::Range<usize> {
        match self {
            SubgroupSide::Lower => n / 2..n,
            SubgroupSide::Upper => 0..n / 2,
        }
    }

    /// Whether every letter of `word` belongs to this side.
    pub fn contains_word(self, word: &BraidWord) -> bool {
        match self.generators(word.strands()) {
            Ok(range) => word.letters().iter().all(|l| range.contains(&l.index())),
            Err(_) => false,
        }
    }
}

fn check_even(n: usize) -> Result<(), BraidError> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(invalid(format!("n must be even and >= 4, got {n}")));
    }
    Ok(())
}

/// Sampling parameters. `word_length` is `L`; `min_canonical_length` is the
/// hardness floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    n: usize,
    word_length: usize,
    min_canonical_length: usize,
    seed: u64,
}

impl SamplerConfig {
    pub const DEMO_MIN_CANONICAL_LENGTH: usize = 8;
    pub const TEST_MIN_CANONICAL_LENGTH: usize = 3;

    pub fn new(n: usize, word_length: usize, min_canonical_length: usize, seed: u64) -> Result<Self, BraidError> {
        check_even(n)?;
        crate::braid::check_strands(n)?;
        if min_canonical_length == 0 {
            return Err(invalid("minimum canonical length must be positive"));
        }
        if word_length < min_canonical_length {
            return Err(invalid(format!(
                "word length {word_length} is below the minimum canonical length {min_canonical_length}"
            )));
        }
        Ok(Self { n, word_length, min_canonical_length, seed })
    }

    /// Demo defaults: n=16, L=128, floor 8.
    pub fn demo(seed: u64) -> Self {
        Self::new(16, 128, Self::DEMO_MIN_CANONICAL_LENGTH, seed).expect("demo parameters are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word_length(&self) -> usize {
        self.word_length
    }

    pub fn min_canonical_length(&self) -> usize {
        self.min_canonical_length
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn rng(&self) -> BraidRng {
        rng_from_seed(self.seed)
    }
}

impl fmt::Display for SamplerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} L={} minlen={} seed={}", self.n, self.word_length, self.min_canonical_length, self.seed)
    }
}

/// Freely reduced word of `length` letters drawn uniformly from the signed
/// generators with indices in `indices`; an immediate cancellation is redrawn.
pub fn sample_word_over<R: Rng + ?Sized>(
    n: usize,
    indices: RangeInclusive<usize>,
    length: usize,
    rng: &mut R,
) -> Result<BraidWord, BraidError> {
    crate::braid::check_strands(n)?;
    let (lo, hi) = (*indices.start(), *indices.end());
    if lo == 0 || hi >= n || lo > hi {
        return Err(invalid(format!("generator range {lo}..={hi} is empty or outside B_{n}")));
    }
    let choices = 2 * (hi - lo + 1) as u32;
    let mut letters: Vec<GeneratorLetter> = Vec::with_capacity(length);
    while letters.len() < length {
        let pick = rng.random_range(0..choices);
        let letter = GeneratorLetter::new(lo + (pick / 2) as usize, pick % 2 == 0)?;
        if letters.last() == Some(&letter.inverse()) {
            continue;
        }
        letters.push(letter);
    }
    BraidWord::new(n, letters)
}

/// Freely reduced word of length `L` over all `2(n-1)` signed generators.
pub fn sample_word<R: Rng + ?Sized>(cfg: &SamplerConfig, rng: &mut R) -> BraidWord {
    sample_word_over(cfg.n, 1..=cfg.n - 1, cfg.word_length, rng).expect("config is validated")
}

/// As [`sample_word`], restricted to one side's generators.
pub fn sample_subgroup_word<R: Rng + ?Sized>(
    side: SubgroupSide,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<BraidWord, BraidError> {
    sample_word_over(cfg.n, side.generators(cfg.n)?, cfg.word_length, rng)
}

/// The acceptance test for secret material: canonical length at least the
/// configured floor, and not a pure power of `Δ`.
pub fn is_hard_instance(x: &CanonicalForm, cfg: &SamplerConfig) -> bool {
    !x.is_delta_power() && x.canonical_length() >= cfg.min_canonical_length
}

/// Consecutive hardness rejections tolerated before sampling gives up.
pub const MAX_HARDNESS_REJECTIONS: usize = 100;

/// Samples until [`is_hard_instance`] accepts. `None` after
/// [`MAX_HARDNESS_REJECTIONS`] consecutive rejections.
pub fn sample_hard<R, F>(cfg: &SamplerConfig, rng: &mut R, mut draw: F) -> Option<CanonicalForm>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> BraidWord,
{
    (0..MAX_HARDNESS_REJECTIONS).find_map(|_| {
        let x = draw(rng).normalize();
        is_hard_instance(&x, cfg).then_some(x)
    })
}
