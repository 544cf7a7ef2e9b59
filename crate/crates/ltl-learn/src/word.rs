//! Ultimately periodic words and samples of positive/negative examples.

use std::collections::HashMap;

use crate::alphabet::PropositionAlphabet;
use crate::error::WordError;

/// One symbol of a trace: the set of propositions holding at that instant,
/// stored as a bitmask in alphabet order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Symbol(pub u64);

impl Symbol {
    pub fn empty() -> Self {
        Symbol(0)
    }

    pub fn contains(self, prop: usize) -> bool {
        self.0 & (1 << prop) != 0
    }

    pub fn insert(&mut self, prop: usize) {
        self.0 |= 1 << prop;
    }

    pub fn with(mut self, prop: usize) -> Self {
        self.insert(prop);
        self
    }
}

/// An ultimately periodic word `u v^ω`, stored as the finite prefix `u` and
/// the nonempty period `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    prefix: Vec<Symbol>,
    period: Vec<Symbol>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Symbol>, period: Vec<Symbol>) -> Result<Self, WordError> {
        if period.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        Ok(LassoWord { prefix, period })
    }

    /// A purely periodic word `v^ω`.
    pub fn periodic(period: Vec<Symbol>) -> Result<Self, WordError> {
        LassoWord::new(Vec::new(), period)
    }

    pub fn prefix(&self) -> &[Symbol] {
        &self.prefix
    }

    pub fn period(&self) -> &[Symbol] {
        &self.period
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Length of the stored finite part `uv`.
    pub fn total_len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// Symbol at a stored position `t < |uv|`.
    pub fn symbol(&self, t: usize) -> Symbol {
        if t < self.prefix.len() {
            self.prefix[t]
        } else {
            self.period[t - self.prefix.len()]
        }
    }

    /// Symbol at an arbitrary position of the infinite word.
    pub fn symbol_at_infinite(&self, m: usize) -> Symbol {
        if m < self.prefix.len() {
            self.prefix[m]
        } else {
            self.period[(m - self.prefix.len()) % self.period.len()]
        }
    }

    /// Whether `self` and `other` denote the same infinite word. Both are
    /// unrolled to `|u1| + |u2| + 2 * lcm(|v1|, |v2|)` symbols and compared
    /// position by position, which is exact for ultimately periodic words.
    pub fn omega_eq(&self, other: &LassoWord) -> bool {
        if self == other {
            return true;
        }
        let len = self.prefix_len() + other.prefix_len()
            + 2 * lcm(self.period_len(), other.period_len());
        (0..len).all(|m| self.symbol_at_infinite(m) == other.symbol_at_infinite(m))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A sample `(P, N)`: positive and negative example words over a common
/// alphabet. The two sets are disjoint as infinite words.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    alphabet: PropositionAlphabet,
    positives: Vec<LassoWord>,
    negatives: Vec<LassoWord>,
}

impl Sample {
    /// Build a sample, dropping exact duplicate words inside each block and
    /// rejecting samples where some infinite word occurs on both sides.
    pub fn new(
        alphabet: PropositionAlphabet,
        positives: Vec<LassoWord>,
        negatives: Vec<LassoWord>,
    ) -> Result<Self, WordError> {
        let positives = dedup_exact(positives);
        let negatives = dedup_exact(negatives);
        if !cross_disjoint(&positives, &negatives) {
            return Err(WordError::ContradictorySample);
        }
        Ok(Sample {
            alphabet,
            positives,
            negatives,
        })
    }

    pub fn alphabet(&self) -> &PropositionAlphabet {
        &self.alphabet
    }

    pub fn positives(&self) -> &[LassoWord] {
        &self.positives
    }

    pub fn negatives(&self) -> &[LassoWord] {
        &self.negatives
    }

    /// All words, positives first, in insertion order.
    pub fn words(&self) -> impl Iterator<Item = &LassoWord> {
        self.positives.iter().chain(self.negatives.iter())
    }

    pub fn word_count(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    /// The sample size `|S| = Σ |u| + |v|` over all words.
    pub fn size(&self) -> usize {
        self.words().map(|w| w.total_len()).sum()
    }
}

fn dedup_exact(words: Vec<LassoWord>) -> Vec<LassoWord> {
    let mut out: Vec<LassoWord> = Vec::with_capacity(words.len());
    for w in words {
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// Check that no infinite word occurs on both sides. Words are bucketed by
/// their first few unrolled symbols so that only plausible pairs pay for the
/// full unrolling comparison.
fn cross_disjoint(positives: &[LassoWord], negatives: &[LassoWord]) -> bool {
    const FINGERPRINT: usize = 16;
    let key = |w: &LassoWord| -> Vec<Symbol> {
        (0..FINGERPRINT).map(|m| w.symbol_at_infinite(m)).collect()
    };
    let mut buckets: HashMap<Vec<Symbol>, Vec<&LassoWord>> = HashMap::new();
    for w in positives {
        buckets.entry(key(w)).or_default().push(w);
    }
    for n in negatives {
        if let Some(candidates) = buckets.get(&key(n)) {
            if candidates.iter().any(|p| p.omega_eq(n)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(bits: &[usize]) -> Symbol {
        let mut s = Symbol::empty();
        for &b in bits {
            s.insert(b);
        }
        s
    }

    #[test]
    fn empty_period_is_rejected() {
        assert_eq!(
            LassoWord::new(vec![sym(&[0])], vec![]),
            Err(WordError::EmptyPeriod)
        );
    }

    #[test]
    fn symbols_index_prefix_then_period() {
        let w = LassoWord::new(vec![sym(&[0])], vec![sym(&[1]), sym(&[])]).unwrap();
        assert_eq!(w.total_len(), 3);
        assert_eq!(w.symbol(0), sym(&[0]));
        assert_eq!(w.symbol(1), sym(&[1]));
        assert_eq!(w.symbol(2), sym(&[]));
        assert_eq!(w.symbol_at_infinite(3), sym(&[1]));
        assert_eq!(w.symbol_at_infinite(4), sym(&[]));
    }

    #[test]
    fn omega_equality_sees_through_different_representations() {
        // (p)^ω written three ways
        let a = LassoWord::periodic(vec![sym(&[0])]).unwrap();
        let b = LassoWord::periodic(vec![sym(&[0]), sym(&[0])]).unwrap();
        let c = LassoWord::new(vec![sym(&[0])], vec![sym(&[0])]).unwrap();
        assert!(a.omega_eq(&b));
        assert!(a.omega_eq(&c));
        assert!(b.omega_eq(&c));

        // (p ∅)^ω vs (∅ p)^ω differ at position 0
        let d = LassoWord::periodic(vec![sym(&[0]), sym(&[])]).unwrap();
        let e = LassoWord::periodic(vec![sym(&[]), sym(&[0])]).unwrap();
        assert!(!d.omega_eq(&e));
        // but prefixing one symbol aligns them
        let f = LassoWord::new(vec![sym(&[0])], vec![sym(&[]), sym(&[0])]).unwrap();
        assert!(d.omega_eq(&f));
    }

    #[test]
    fn contradictory_sample_is_rejected_even_across_representations() {
        let alphabet = PropositionAlphabet::new(["p"]).unwrap();
        let a = LassoWord::periodic(vec![sym(&[0])]).unwrap();
        let b = LassoWord::periodic(vec![sym(&[0]), sym(&[0])]).unwrap();
        assert_eq!(
            Sample::new(alphabet, vec![a], vec![b]),
            Err(WordError::ContradictorySample)
        );
    }

    #[test]
    fn sample_size_and_dedup() {
        let alphabet = PropositionAlphabet::new(["p"]).unwrap();
        let a = LassoWord::periodic(vec![sym(&[0])]).unwrap();
        let b = LassoWord::periodic(vec![sym(&[])]).unwrap();
        let s = Sample::new(alphabet, vec![a.clone(), a.clone()], vec![b]).unwrap();
        assert_eq!(s.positives().len(), 1);
        assert_eq!(s.negatives().len(), 1);
        assert_eq!(s.size(), 2);
    }
}
