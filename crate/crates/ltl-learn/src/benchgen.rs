//! Synthetic benchmark samples generated from common temporal patterns.
//!
//! A generated sample draws words of a fixed total length uniformly at
//! random over the pattern's propositions plus extra unconstrained noise
//! propositions, classifies each word against the pattern, and keeps
//! collecting until both the positive and the negative half are full. The
//! pattern is therefore consistent with every sample it generates.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::PropositionAlphabet;
use crate::error::BenchError;
use crate::eval::evaluate;
use crate::parser::parse;
use crate::syntax::SyntaxDag;
use crate::word::{LassoWord, Sample, Symbol};

/// The nine catalog patterns, grouped as absence, existence, universality.
const PATTERNS: [&str; 9] = [
    // absence
    "G (! p0)",
    "(F p1) -> ((! p0) U p1)",
    "G (p1 -> (G (! p0)))",
    // existence
    "F p0",
    "G ((! p0) | (F (p0 & (F p1))))",
    "G (p0 & ((! p1) -> ((! p1) U (p2 & (! p1)))))",
    // universality
    "G p0",
    "(F p1) -> (p0 U p1)",
    "G (p1 -> (G p0))",
];

/// Parse the pattern catalog into syntax DAGs.
pub fn pattern_catalog() -> Vec<SyntaxDag> {
    PATTERNS
        .iter()
        .map(|text| parse(text).expect("catalog patterns are well-formed"))
        .collect()
}

/// Description of one generated benchmark sample.
#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub pattern: SyntaxDag,
    /// Total number of words to generate (split half and half).
    pub sample_size: usize,
    /// Fixed `|u| + |v|` of every word.
    pub word_length: usize,
    /// Unconstrained extra propositions appended to the alphabet.
    pub noise_props: usize,
    pub seed: u64,
    /// Draws before giving up when one class never shows up.
    pub draw_budget: usize,
}

impl BenchmarkSpec {
    pub fn new(pattern: SyntaxDag, sample_size: usize, seed: u64) -> BenchmarkSpec {
        BenchmarkSpec {
            pattern,
            sample_size,
            word_length: 10,
            noise_props: 1,
            seed,
            draw_budget: 1_000_000,
        }
    }

    /// The pattern's propositions in name order, then `noise0`, `noise1`, …
    pub fn alphabet(&self) -> Result<PropositionAlphabet, BenchError> {
        let mut names: Vec<String> = self
            .pattern
            .propositions()
            .iter()
            .map(|s| s.to_string())
            .collect();
        names.sort();
        for i in 0..self.noise_props {
            names.push(format!("noise{i}"));
        }
        Ok(PropositionAlphabet::new(names)?)
    }
}

/// Draw random words, classify them with the pattern, and fill both halves.
/// Positives get the rounded-up half when `sample_size` is odd.
pub fn generate_sample(spec: &BenchmarkSpec) -> Result<Sample, BenchError> {
    assert!(spec.word_length >= 2, "word length must be at least 2");
    assert!(spec.sample_size >= 2, "sample size must be at least 2");
    let alphabet = spec.alphabet()?;
    for name in spec.pattern.propositions() {
        if alphabet.index_of(name).is_none() {
            return Err(BenchError::MissingProposition(name.to_string()));
        }
    }

    let need_pos = spec.sample_size.div_ceil(2);
    let need_neg = spec.sample_size / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut positives: Vec<LassoWord> = Vec::with_capacity(need_pos);
    let mut negatives: Vec<LassoWord> = Vec::with_capacity(need_neg);
    let symbol_space = 1u64 << alphabet.len();

    let mut draws = 0usize;
    while positives.len() < need_pos || negatives.len() < need_neg {
        if draws >= spec.draw_budget {
            return Err(BenchError::Starved {
                draws,
                positives: positives.len(),
                negatives: negatives.len(),
                need_pos,
                need_neg,
            });
        }
        draws += 1;
        let prefix_len = rng.gen_range(0..spec.word_length);
        let mut symbols: Vec<Symbol> = Vec::with_capacity(spec.word_length);
        for _ in 0..spec.word_length {
            symbols.push(Symbol(rng.gen_range(0..symbol_space)));
        }
        let period = symbols.split_off(prefix_len);
        let word = LassoWord::new(symbols, period).expect("period is nonempty");

        let accepted = evaluate(&spec.pattern, &alphabet, &word, 0)?;
        let side = if accepted { &mut positives } else { &mut negatives };
        let need = if accepted { need_pos } else { need_neg };
        if side.len() < need && !side.contains(&word) {
            side.push(word);
        }
    }

    Ok(Sample::new(alphabet, positives, negatives)?)
}

/// Cross product of the nine catalog patterns with the requested sizes and
/// seeds, in catalog-then-size-then-seed order.
pub fn benchmark_suite(
    sizes: &[usize],
    seeds: &[u64],
) -> Result<Vec<(BenchmarkSpec, Sample)>, BenchError> {
    let mut out = Vec::new();
    for pattern in pattern_catalog() {
        for &size in sizes {
            for &seed in seeds {
                let spec = BenchmarkSpec::new(pattern.clone(), size, seed);
                let sample = generate_sample(&spec)?;
                out.push((spec, sample));
            }
        }
    }
    Ok(out)
}
