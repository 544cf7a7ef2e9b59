//! Encoding-level invariants checked against the solver, the evaluator, and
//! the enumeration oracle on randomized small instances.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ltl_learn::alphabet::{Operator, OperatorSet, PropositionAlphabet};
use ltl_learn::encoding::{pin_formula_clauses, SampleEncoding};
use ltl_learn::eval::{is_consistent, valuation_table};
use ltl_learn::oracle::{oracle_minimal, EnumerationBudget};
use ltl_learn::solver::{SolverBackend, SolverVerdict};
use ltl_learn::syntax::{DagBuilder, NodeId, SyntaxDag};
use ltl_learn::word::{LassoWord, Sample, Symbol};

fn random_word(rng: &mut ChaCha8Rng, props: usize, max_len: usize) -> LassoWord {
    let total = rng.gen_range(1..=max_len);
    let prefix_len = rng.gen_range(0..total);
    let mut symbols: Vec<Symbol> = (0..total)
        .map(|_| Symbol(rng.gen_range(0..(1u64 << props))))
        .collect();
    let period = symbols.split_off(prefix_len);
    LassoWord::new(symbols, period).unwrap()
}

fn random_sample(rng: &mut ChaCha8Rng, props: usize) -> Option<Sample> {
    let names: Vec<String> = (0..props).map(|i| format!("p{i}")).collect();
    let alphabet = PropositionAlphabet::new(names).ok()?;
    let n_pos = rng.gen_range(1..=3usize);
    let n_neg = rng.gen_range(1..=3usize);
    let positives: Vec<LassoWord> = (0..n_pos).map(|_| random_word(rng, props, 6)).collect();
    let negatives: Vec<LassoWord> = (0..n_neg).map(|_| random_word(rng, props, 6)).collect();
    Sample::new(alphabet, positives, negatives).ok()
}

fn random_formula(rng: &mut ChaCha8Rng, alphabet: &PropositionAlphabet, max_size: usize) -> SyntaxDag {
    fn go(
        rng: &mut ChaCha8Rng,
        b: &mut DagBuilder,
        alphabet: &PropositionAlphabet,
        budget: usize,
    ) -> NodeId {
        if budget <= 1 || rng.gen_bool(0.3) {
            let p = rng.gen_range(0..alphabet.len());
            return b.prop(alphabet.name(p).to_string());
        }
        let ops = Operator::ALL;
        let op = ops[rng.gen_range(0..ops.len())];
        if op.is_unary() {
            let child = go(rng, b, alphabet, budget - 1);
            b.unary(op, child)
        } else {
            let left_budget = rng.gen_range(1..=(budget - 1).max(1));
            let left = go(rng, b, alphabet, left_budget);
            let right = go(rng, b, alphabet, budget.saturating_sub(1 + left_budget).max(1));
            b.binary(op, left, right)
        }
    }
    let mut b = DagBuilder::new();
    let root = go(rng, &mut b, alphabet, max_size);
    b.finish(root)
}

/// Every model of the sample encoding decodes to a formula the evaluator
/// confirms consistent, across 200 solved random instances.
#[test]
fn model_soundness_on_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x50DE);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 200 {
        attempts += 1;
        assert!(attempts < 3000, "SAT instances should be plentiful");
        let props = rng.gen_range(1..=2usize);
        let Some(sample) = random_sample(&mut rng, props) else {
            continue;
        };
        let n = rng.gen_range(1..=4usize);
        let encoding = SampleEncoding::build(n, &sample, &OperatorSet::full());
        match SolverBackend::Embedded
            .solve(&encoding.to_instance(false), None)
            .unwrap()
        {
            SolverVerdict::Sat(model) => {
                let dag = encoding.decode(&model).unwrap();
                assert_eq!(dag.size(), n);
                assert!(
                    is_consistent(&dag, &sample).unwrap(),
                    "decoded {} inconsistent at n={n}",
                    dag.render()
                );
                checked += 1;
            }
            SolverVerdict::Unsat => {}
            SolverVerdict::Timeout(_) => unreachable!("no timeout configured"),
        }
    }
}

/// Whenever the enumeration oracle finds a consistent formula of size n,
/// the size-n encoding is satisfiable.
#[test]
fn encoding_completeness_against_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC03);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 60 {
        attempts += 1;
        assert!(attempts < 2000, "oracle-settled instances should be plentiful");
        let props = rng.gen_range(1..=2usize);
        let Some(sample) = random_sample(&mut rng, props) else {
            continue;
        };
        let budget = EnumerationBudget {
            max_size: 4,
            ops: OperatorSet::full(),
            alphabet: sample.alphabet().clone(),
        };
        let Some((minimal, witnesses)) = oracle_minimal(&sample, &budget).unwrap() else {
            continue;
        };
        assert!(!witnesses.is_empty());
        let encoding = SampleEncoding::build(minimal, &sample, &OperatorSet::full());
        let verdict = SolverBackend::Embedded
            .solve(&encoding.to_instance(false), None)
            .unwrap();
        assert!(
            verdict.is_sat(),
            "oracle found {} at size {minimal} but the encoding is UNSAT",
            witnesses[0].render()
        );
        // below the oracle minimum the encoding must be UNSAT
        if minimal > 1 {
            let below = SampleEncoding::build(minimal - 1, &sample, &OperatorSet::full());
            let verdict = SolverBackend::Embedded
                .solve(&below.to_instance(false), None)
                .unwrap();
            assert!(
                !verdict.is_sat(),
                "encoding SAT at {} although the oracle's minimum is {minimal}",
                minimal - 1
            );
        }
        checked += 1;
    }
}

/// Pinning the structural variables to a known formula forces the semantic
/// variables to the evaluator's valuation table, for random formulas and
/// words.
#[test]
#[allow(clippy::needless_range_loop)]
fn pinned_formulas_force_the_valuation_table() {
    let alphabet = PropositionAlphabet::new(["p0", "p1"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA93E);
    let mut checked = 0;
    while checked < 100 {
        let formula = random_formula(&mut rng, &alphabet, 5);
        if formula.size() > 5 {
            continue;
        }
        let word = random_word(&mut rng, 2, 8);
        // placing the word on its own satisfied side keeps the root
        // assertion compatible with the pinned formula
        let satisfied = valuation_table(&formula, &alphabet, &word).unwrap()
            [formula.root().get() - 1][0];
        let (pos, neg) = if satisfied {
            (vec![word.clone()], vec![])
        } else {
            (vec![], vec![word.clone()])
        };
        let sample = Sample::new(alphabet.clone(), pos, neg).unwrap();
        let mut encoding = SampleEncoding::build(formula.size(), &sample, &OperatorSet::full());
        let pins = pin_formula_clauses(&formula, encoding.pool(), &alphabet).unwrap();
        encoding.extend_clauses(pins);
        let expect = valuation_table(&formula, &alphabet, &word).unwrap();
        match SolverBackend::Embedded
            .solve(&encoding.to_instance(false), None)
            .unwrap()
        {
            SolverVerdict::Sat(model) => {
                for i in 1..=formula.size() {
                    for t in 0..word.total_len() {
                        assert_eq!(
                            model.value(encoding.pool().y(0, i, t)),
                            expect[i - 1][t],
                            "formula {} node {i} position {t} on {:?}",
                            formula.render(),
                            word
                        );
                    }
                }
                let decoded = encoding.decode(&model).unwrap();
                assert_eq!(decoded.render(), formula.render());
            }
            other => panic!(
                "pinned formula {} must be satisfiable, got {other:?}",
                formula.render()
            ),
        }
        checked += 1;
    }
}
