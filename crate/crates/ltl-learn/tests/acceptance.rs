//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Shared fixtures (the random small samples and the pattern-benchmark runs)
//! are computed once and reused across criteria.

use std::sync::OnceLock;
use std::time::Duration;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ltl_learn::alphabet::{Operator, OperatorSet, PropositionAlphabet};
use ltl_learn::benchgen::{generate_sample, pattern_catalog, BenchmarkSpec};
use ltl_learn::dt::{
    learn_dt, tree_to_formula, DecisionTree, DtResult, SamplingConfig, Strategy, TreeNode,
};
use ltl_learn::encoding::{primary_variable_closed_form, SampleEncoding};
use ltl_learn::eval::{evaluate, is_consistent, normalize_position};
use ltl_learn::exact::{learn_distinct, learn_minimal, LearnResult, LearnerConfig};
use ltl_learn::oracle::{oracle_minimal, unrolled_eval, EnumerationBudget};
use ltl_learn::syntax::{DagBuilder, NodeId, SyntaxDag};
use ltl_learn::word::{LassoWord, Sample, Symbol};

fn random_symbol(rng: &mut ChaCha8Rng, props: usize) -> Symbol {
    Symbol(rng.gen_range(0..(1u64 << props)))
}

fn random_word(rng: &mut ChaCha8Rng, props: usize, max_len: usize) -> LassoWord {
    let total = rng.gen_range(1..=max_len);
    let prefix_len = rng.gen_range(0..total);
    let mut symbols: Vec<Symbol> = (0..total).map(|_| random_symbol(rng, props)).collect();
    let period = symbols.split_off(prefix_len);
    LassoWord::new(symbols, period).expect("period nonempty")
}

/// A random formula of size at most `max_size` over the first `props`
/// proposition names, built with all eight operators.
fn random_formula(rng: &mut ChaCha8Rng, alphabet: &PropositionAlphabet, max_size: usize) -> SyntaxDag {
    fn go(rng: &mut ChaCha8Rng, b: &mut DagBuilder, alphabet: &PropositionAlphabet, budget: usize) -> NodeId {
        if budget <= 1 || rng.gen_bool(0.3) {
            let p = rng.gen_range(0..alphabet.len());
            return b.prop(alphabet.name(p).to_string());
        }
        let ops = [
            Operator::Not,
            Operator::Or,
            Operator::And,
            Operator::Implies,
            Operator::Next,
            Operator::Until,
            Operator::Finally,
            Operator::Globally,
        ];
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
    let dag = b.finish(root);
    debug_assert!(dag.size() <= max_size + 1);
    dag
}

struct SettledSample {
    sample: Sample,
    oracle_size: usize,
    oracle_formulas: Vec<SyntaxDag>,
    learned: LearnResult,
}

/// Criterion 1/2 fixture: 50 random small samples the size-4 oracle can
/// settle, each learned exactly.
fn settled_samples() -> &'static Vec<SettledSample> {
    static DATA: OnceLock<Vec<SettledSample>> = OnceLock::new();
    DATA.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97);
        let mut out = Vec::new();
        let mut attempts = 0;
        while out.len() < 50 {
            attempts += 1;
            assert!(attempts < 5000, "sample generation should settle quickly");
            let props = rng.gen_range(1..=2usize);
            let names: Vec<String> = (0..props).map(|i| format!("p{i}")).collect();
            let alphabet = PropositionAlphabet::new(names).unwrap();
            let n_pos = rng.gen_range(1..=4usize);
            let n_neg = rng.gen_range(1..=(8 - n_pos).min(4));
            let positives: Vec<LassoWord> =
                (0..n_pos).map(|_| random_word(&mut rng, props, 6)).collect();
            let negatives: Vec<LassoWord> =
                (0..n_neg).map(|_| random_word(&mut rng, props, 6)).collect();
            let Ok(sample) = Sample::new(alphabet.clone(), positives, negatives) else {
                continue; // contradictory draw
            };
            let budget = EnumerationBudget {
                max_size: 4,
                ops: OperatorSet::full(),
                alphabet,
            };
            let Some((oracle_size, oracle_formulas)) =
                oracle_minimal(&sample, &budget).unwrap()
            else {
                continue; // oracle cannot settle this one within size 4
            };
            let config = LearnerConfig {
                max_size: 6,
                ..LearnerConfig::default()
            };
            let learned = learn_minimal(&sample, &config).expect("small samples must learn");
            out.push(SettledSample {
                sample,
                oracle_size,
                oracle_formulas,
                learned,
            });
        }
        out
    })
}

#[test]
fn criterion_1_minimality_matches_the_enumeration_oracle() {
    let data = settled_samples();
    assert_eq!(data.len(), 50);
    for (idx, case) in data.iter().enumerate() {
        assert_eq!(
            case.learned.size, case.oracle_size,
            "sample {idx}: learner found size {} but oracle found {}",
            case.learned.size, case.oracle_size
        );
        for formula in &case.learned.formulas {
            assert!(
                is_consistent(formula, &case.sample).unwrap(),
                "sample {idx}: learned formula {} is inconsistent",
                formula.render()
            );
        }
        for witness in &case.oracle_formulas {
            assert!(
                is_consistent(witness, &case.sample).unwrap(),
                "sample {idx}: oracle witness {} must stay consistent",
                witness.render()
            );
        }
    }
    println!(
        "criterion 1 (minimality vs oracle): PASS - {} samples, sizes agree 100%",
        data.len()
    );
}

#[test]
fn criterion_2_unsat_staircase_below_the_minimal_size() {
    let data = settled_samples();
    for (idx, case) in data.iter().enumerate() {
        let stats = &case.learned.stats;
        assert_eq!(stats.len(), case.oracle_size, "sample {idx}: one record per n");
        for (k, record) in stats.iter().enumerate() {
            assert_eq!(record.n, k + 1, "sample {idx}: no skipped sizes");
            let expected = if record.n < case.oracle_size { "unsat" } else { "sat" };
            assert_eq!(
                record.verdict, expected,
                "sample {idx}: size {} should be {expected}",
                record.n
            );
        }
    }
    println!(
        "criterion 2 (UNSAT staircase): PASS - every size below the minimum UNSAT, minimum SAT, {} samples",
        data.len()
    );
}

const BENCH_SEEDS: [u64; 3] = [1, 2, 3];

struct PatternRun {
    pattern_index: usize,
    pattern_size: usize,
    seed: u64,
    learned: LearnResult,
    elapsed: Duration,
}

/// Criterion 3 fixture: exact learning on size-50 samples of all nine
/// patterns, three seeds each.
fn pattern_runs() -> &'static Vec<PatternRun> {
    static DATA: OnceLock<Vec<PatternRun>> = OnceLock::new();
    DATA.get_or_init(|| {
        let mut out = Vec::new();
        for (pattern_index, pattern) in pattern_catalog().into_iter().enumerate() {
            for seed in BENCH_SEEDS {
                let spec = BenchmarkSpec::new(pattern.clone(), 50, seed);
                let sample = generate_sample(&spec).unwrap();
                let config = LearnerConfig {
                    total_timeout: Some(Duration::from_secs(600)),
                    ..LearnerConfig::default()
                };
                let start = std::time::Instant::now();
                let learned = learn_minimal(&sample, &config)
                    .unwrap_or_else(|e| panic!("pattern {} seed {seed}: {e}", pattern_index + 1));
                for formula in &learned.formulas {
                    assert!(is_consistent(formula, &sample).unwrap());
                }
                out.push(PatternRun {
                    pattern_index,
                    pattern_size: pattern.size(),
                    seed,
                    learned,
                    elapsed: start.elapsed(),
                });
            }
        }
        out
    })
}

#[test]
fn criterion_3_pattern_recovery_at_desk_scale() {
    let runs = pattern_runs();
    assert_eq!(runs.len(), 27);
    for run in runs {
        assert!(
            run.learned.size <= run.pattern_size,
            "pattern {} seed {}: learned size {} exceeds the pattern's size {}",
            run.pattern_index + 1,
            run.seed,
            run.learned.size,
            run.pattern_size
        );
        assert!(
            run.elapsed < Duration::from_secs(600),
            "pattern {} seed {} took {:?}",
            run.pattern_index + 1,
            run.seed,
            run.elapsed
        );
    }
    let worst = runs.iter().map(|r| r.elapsed).max().unwrap();
    println!(
        "criterion 3 (pattern recovery, size 50, 3 seeds): PASS - 27/27 consistent within bounds, slowest {:.1}s",
        worst.as_secs_f64()
    );
}

/// Criterion 4/5 fixture: decision-tree learning on size-200 samples with
/// the default strategy alpha and k = 3.
fn dt_runs() -> &'static Vec<(usize, u64, DtResult)> {
    static DATA: OnceLock<Vec<(usize, u64, DtResult)>> = OnceLock::new();
    DATA.get_or_init(|| {
        let mut out = Vec::new();
        for (pattern_index, pattern) in pattern_catalog().into_iter().enumerate() {
            for seed in BENCH_SEEDS {
                let spec = BenchmarkSpec::new(pattern.clone(), 200, seed);
                let sample = generate_sample(&spec).unwrap();
                let learner = LearnerConfig::default();
                let sampling = SamplingConfig {
                    strategy: Strategy::Alpha,
                    subset_size: 3,
                    seed,
                    ..SamplingConfig::default()
                };
                let result = learn_dt(&sample, &learner, &sampling)
                    .unwrap_or_else(|e| panic!("pattern {} seed {seed}: {e}", pattern_index + 1));
                assert!(is_consistent(&result.formula, &sample).unwrap());
                out.push((pattern_index, seed, result));
            }
        }
        out
    })
}

#[test]
fn criterion_4_decision_tree_consistency() {
    // learn_dt asserts consistency internally and the fixture re-checks it;
    // reaching here with 27 results means zero timeouts and zero failures
    let runs = dt_runs();
    assert_eq!(runs.len(), 27);
    println!(
        "criterion 4 (tree consistency, size 200, alpha k=3): PASS - 27/27 consistent, 0 timeouts"
    );
}

#[test]
fn criterion_5_decision_tree_compactness_soft_report() {
    let runs = dt_runs();
    let mean_inner: f64 = runs
        .iter()
        .map(|(_, _, r)| r.tree.inner_count() as f64)
        .sum::<f64>()
        / runs.len() as f64;

    // size ratio against the minimal sizes criterion 3 established for the
    // same pattern and seed
    let minimal: &Vec<PatternRun> = pattern_runs();
    let mut ratios = Vec::new();
    for (pattern_index, seed, result) in runs.iter() {
        if let Some(m) = minimal
            .iter()
            .find(|r| r.pattern_index == *pattern_index && r.seed == *seed)
        {
            ratios.push(result.formula.size() as f64 / m.learned.size as f64);
        }
    }
    let mean_ratio: f64 = ratios.iter().sum::<f64>() / ratios.len() as f64;

    let inner_ok = mean_inner <= 6.0;
    let ratio_ok = mean_ratio <= 2.0;
    // soft criterion: deviations are logged, not failures
    println!(
        "criterion 5 (tree compactness, soft): {} - mean inner nodes {:.2} (target <= 6), mean size ratio {:.2} (target <= 2.0)",
        if inner_ok && ratio_ok { "PASS" } else { "DEVIATION" },
        mean_inner,
        mean_ratio
    );
}

#[test]
fn criterion_6_normalized_evaluation_equals_unrolled_semantics() {
    let alphabet = PropositionAlphabet::new(["p0", "p1"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0B5E);
    let mut checked = 0;
    while checked < 1000 {
        let formula = random_formula(&mut rng, &alphabet, 5);
        if formula.size() > 5 {
            continue;
        }
        let word = random_word(&mut rng, 2, 8);
        let k = rng.gen_range(0..=20usize);
        let normalized = normalize_position(word.prefix_len() + k, word.prefix_len(), word.period_len());
        let fast = evaluate(&formula, &alphabet, &word, normalized).unwrap();
        let slow = unrolled_eval(&formula, &alphabet, &word, word.prefix_len() + k).unwrap();
        assert_eq!(
            fast,
            slow,
            "formula {} on {:?} at offset {k}",
            formula.render(),
            word
        );
        checked += 1;
    }
    println!("criterion 6 (periodic-suffix semantics): PASS - 1000/1000 triples agree");
}

#[test]
fn criterion_7_distinct_enumeration_matches_the_oracle() {
    // positive: ∅ then p forever, negative: ∅ forever; Xp and Fp are the
    // only consistent size-2 formulas
    let alphabet = PropositionAlphabet::new(["p"]).unwrap();
    let sample = Sample::new(
        alphabet.clone(),
        vec![LassoWord::new(vec![Symbol::empty()], vec![Symbol(1)]).unwrap()],
        vec![LassoWord::periodic(vec![Symbol::empty()]).unwrap()],
    )
    .unwrap();

    let mut config = LearnerConfig {
        count: 2,
        ..LearnerConfig::default()
    };
    let two = learn_distinct(&sample, &config).unwrap();
    assert_eq!(two.size, 2);
    assert_eq!(two.formulas.len(), 2);
    let renders: std::collections::HashSet<String> =
        two.formulas.iter().map(|f| f.render()).collect();
    assert_eq!(renders.len(), 2, "formulas must be canonically distinct");
    for f in &two.formulas {
        assert!(is_consistent(f, &sample).unwrap());
    }

    config.count = 5;
    let all = learn_distinct(&sample, &config).unwrap();
    let budget = EnumerationBudget {
        max_size: 2,
        ops: OperatorSet::full(),
        alphabet,
    };
    let (oracle_size, oracle_formulas) = oracle_minimal(&sample, &budget).unwrap().unwrap();
    assert_eq!(oracle_size, 2);
    let oracle_renders: std::collections::HashSet<String> =
        oracle_formulas.iter().map(|f| f.render()).collect();
    let learner_renders: std::collections::HashSet<String> =
        all.formulas.iter().map(|f| f.render()).collect();
    assert_eq!(learner_renders, oracle_renders);
    assert_eq!(
        oracle_renders,
        std::collections::HashSet::from(["(X p)".to_string(), "(F p)".to_string()])
    );
    println!(
        "criterion 7 (distinct enumeration): PASS - count 2 gives 2 distinct formulas, count 5 returns exactly the oracle set {:?}",
        oracle_renders
    );
}

#[test]
fn criterion_8_primary_variable_count_matches_the_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF007);
    for case in 0..20 {
        let props = rng.gen_range(1..=3usize);
        let names: Vec<String> = (0..props).map(|i| format!("p{i}")).collect();
        let alphabet = PropositionAlphabet::new(names).unwrap();
        let n = rng.gen_range(1..=5usize);
        let n_pos = rng.gen_range(0..=3usize);
        let n_neg = rng.gen_range(0..=3usize);
        let positives: Vec<LassoWord> =
            (0..n_pos).map(|_| random_word(&mut rng, props, 6)).collect();
        let negatives: Vec<LassoWord> =
            (0..n_neg).map(|_| random_word(&mut rng, props, 6)).collect();
        let Ok(sample) = Sample::new(alphabet, positives, negatives) else {
            continue;
        };
        let encoding = SampleEncoding::build(n, &sample, &OperatorSet::full());
        let lengths: Vec<usize> = sample.words().map(|w| w.total_len()).collect();
        let expected = primary_variable_closed_form(n, props + 8, &lengths);
        assert_eq!(
            encoding.primary_var_count(),
            expected,
            "case {case}: n={n}, lengths={lengths:?}"
        );
    }
    println!("criterion 8 (encoding footprint): PASS - 20/20 instances match the closed form");
}

#[test]
fn criterion_9_tree_extraction_matches_tree_classification() {
    let alphabet = PropositionAlphabet::new(["p0", "p1"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7EE);

    fn random_tree(rng: &mut ChaCha8Rng, features: usize, depth: usize) -> TreeNode {
        if depth == 0 || rng.gen_bool(0.35) {
            TreeNode::Leaf {
                accept: rng.gen_bool(0.5),
            }
        } else {
            TreeNode::Inner {
                feature: rng.gen_range(0..features),
                on_true: Box::new(random_tree(rng, features, depth - 1)),
                on_false: Box::new(random_tree(rng, features, depth - 1)),
            }
        }
    }

    for case in 0..200 {
        let n_prims = rng.gen_range(1..=3usize);
        let primitives: Vec<SyntaxDag> = (0..n_prims)
            .map(|_| random_formula(&mut rng, &alphabet, 4))
            .collect();
        let tree = DecisionTree {
            root: random_tree(&mut rng, n_prims, 3),
        };
        let psi = tree_to_formula(&tree, &primitives, &OperatorSet::full(), &alphabet);
        let word = random_word(&mut rng, 2, 8);
        let features: Vec<bool> = primitives
            .iter()
            .map(|p| evaluate(p, &alphabet, &word, 0).unwrap())
            .collect();
        assert_eq!(
            evaluate(&psi, &alphabet, &word, 0).unwrap(),
            tree.classify(&features),
            "case {case}: tree {:?} with primitives {:?}",
            tree,
            primitives.iter().map(|p| p.render()).collect::<Vec<_>>()
        );
    }
    println!("criterion 9 (tree extraction semantics): PASS - 200/200 cases agree");
}
