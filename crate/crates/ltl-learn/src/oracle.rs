//! Brute-force ground truth for tests: exhaustive formula enumeration and a
//! reference evaluator that works straight off the textbook semantics.
//!
//! Everything here is deliberately slow and simple. The enumerator settles
//! minimality questions on tiny instances; the reference evaluator settles
//! semantic questions without sharing any machinery with the table-driven
//! evaluator it checks. Practical ceiling is size 5 on one or two
//! propositions.

use std::collections::{HashMap, HashSet};

use crate::alphabet::{Operator, OperatorSet, PropositionAlphabet};
use crate::error::EvalError;
use crate::eval::is_consistent;
use crate::syntax::{DagBuilder, Label, NodeId, SyntaxDag};
use crate::word::{LassoWord, Sample};

/// Bounds for exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct EnumerationBudget {
    pub max_size: usize,
    pub ops: OperatorSet,
    pub alphabet: PropositionAlphabet,
}

/// Every formula of size at most `budget.max_size`, in nondecreasing size
/// order, each exactly once up to identifier renumbering. Formulas are built
/// by composing smaller ones; hash-consing makes duplicates impossible.
pub fn enumerate_formulas(budget: &EnumerationBudget) -> Vec<SyntaxDag> {
    let mut builder = DagBuilder::new();
    // subterm set per arena node, as a sorted vector of node ids
    let mut subterms: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    let mut strata: Vec<Vec<NodeId>> = vec![Vec::new(); budget.max_size + 1];

    for name in budget.alphabet.names() {
        let id = builder.prop(name.clone());
        subterms.insert(id, vec![id]);
        strata[1].push(id);
    }
    if budget.ops.constants_enabled() {
        for value in [true, false] {
            let id = builder.constant(value);
            subterms.insert(id, vec![id]);
            strata[1].push(id);
        }
    }

    let unary: Vec<Operator> = budget
        .ops
        .operators()
        .iter()
        .copied()
        .filter(|op| op.is_unary())
        .collect();
    let binary: Vec<Operator> = budget
        .ops
        .operators()
        .iter()
        .copied()
        .filter(|op| op.is_binary())
        .collect();

    let union_size = |a: &[NodeId], b: &[NodeId]| -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            count += 1;
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        count + (a.len() - i) + (b.len() - j)
    };
    let union_of = |a: &[NodeId], b: &[NodeId], top: NodeId| -> Vec<NodeId> {
        let mut out: Vec<NodeId> = a.iter().chain(b.iter()).copied().collect();
        out.push(top);
        out.sort_unstable();
        out.dedup();
        out
    };

    let mut seen: HashSet<NodeId> = strata[1].iter().copied().collect();
    for size in 2..=budget.max_size {
        let mut fresh: Vec<NodeId> = Vec::new();
        for &child in &strata[size - 1] {
            for &op in &unary {
                let id = builder.unary(op, child);
                if seen.insert(id) {
                    let mut set = subterms[&child].clone();
                    set.push(id);
                    set.sort_unstable();
                    subterms.insert(id, set);
                    fresh.push(id);
                }
            }
        }
        for a in 1..size {
            for b in 1..size {
                // |set(φ) ∪ set(ψ)| lies in [max(a,b), a+b]
                if a.max(b) + 1 > size || a + b + 1 < size {
                    continue;
                }
                for li in 0..strata[a].len() {
                    for ri in 0..strata[b].len() {
                        let (left, right) = (strata[a][li], strata[b][ri]);
                        if union_size(&subterms[&left], &subterms[&right]) + 1 != size {
                            continue;
                        }
                        for &op in &binary {
                            let id = builder.binary(op, left, right);
                            if seen.insert(id) {
                                let set =
                                    union_of(&subterms[&left], &subterms[&right], id);
                                subterms.insert(id, set);
                                fresh.push(id);
                            }
                        }
                    }
                }
            }
        }
        strata[size] = fresh;
    }

    strata
        .iter()
        .flatten()
        .map(|&id| builder.finish(id))
        .collect()
}

/// The smallest size at which a consistent formula exists, together with
/// every consistent formula of that size; `None` if the budget runs out.
pub fn oracle_minimal(
    sample: &Sample,
    budget: &EnumerationBudget,
) -> Result<Option<(usize, Vec<SyntaxDag>)>, EvalError> {
    let mut hits: Vec<SyntaxDag> = Vec::new();
    let mut hit_size = None;
    for dag in enumerate_formulas(budget) {
        if let Some(s) = hit_size {
            if dag.size() > s {
                break;
            }
        }
        if is_consistent(&dag, sample)? {
            hit_size = Some(dag.size());
            hits.push(dag);
        }
    }
    Ok(hit_size.map(|s| (s, hits)))
}

/// Reference valuation on `u v^ω` by direct recursion over the inductive
/// definition, used to cross-check the table-driven evaluator.
///
/// Positions are absolute positions of the infinite word; nothing is
/// normalized. Temporal operators scan forward symbol by symbol and stop one
/// full period past `max(position, |uv|-1)`: beyond that point every suffix
/// has already been seen, so the scan's outcome cannot change.
pub fn unrolled_eval(
    dag: &SyntaxDag,
    alphabet: &PropositionAlphabet,
    word: &LassoWord,
    position: usize,
) -> Result<bool, EvalError> {
    let mut memo: HashMap<(usize, usize), bool> = HashMap::new();
    recurse(dag, dag.root(), alphabet, word, position, &mut memo)
}

fn recurse(
    dag: &SyntaxDag,
    id: NodeId,
    alphabet: &PropositionAlphabet,
    word: &LassoWord,
    m: usize,
    memo: &mut HashMap<(usize, usize), bool>,
) -> Result<bool, EvalError> {
    if let Some(&v) = memo.get(&(id.get(), m)) {
        return Ok(v);
    }
    let node = dag.node(id);
    let scan_end = m.max(word.total_len().saturating_sub(1)) + word.period_len() + 1;
    let value = match &node.label {
        Label::Prop(name) => {
            let p = alphabet
                .index_of(name)
                .ok_or_else(|| EvalError::UnknownProposition(name.clone()))?;
            word.symbol_at_infinite(m).contains(p)
        }
        Label::Const(b) => *b,
        Label::Op(op) => {
            let left = node.left.expect("operator has left child");
            match op {
                Operator::Not => !recurse(dag, left, alphabet, word, m, memo)?,
                Operator::Next => recurse(dag, left, alphabet, word, m + 1, memo)?,
                Operator::Finally => {
                    let mut found = false;
                    for m2 in m..scan_end {
                        if recurse(dag, left, alphabet, word, m2, memo)? {
                            found = true;
                            break;
                        }
                    }
                    found
                }
                Operator::Globally => {
                    let mut holds = true;
                    for m2 in m..scan_end {
                        if !recurse(dag, left, alphabet, word, m2, memo)? {
                            holds = false;
                            break;
                        }
                    }
                    holds
                }
                Operator::Or | Operator::And | Operator::Implies => {
                    let right = node.right.expect("binary operator has right child");
                    let a = recurse(dag, left, alphabet, word, m, memo)?;
                    let b = recurse(dag, right, alphabet, word, m, memo)?;
                    match op {
                        Operator::Or => a || b,
                        Operator::And => a && b,
                        Operator::Implies => !a || b,
                        _ => unreachable!(),
                    }
                }
                Operator::Until => {
                    let right = node.right.expect("until has right child");
                    let mut result = false;
                    for m2 in m..scan_end {
                        if recurse(dag, right, alphabet, word, m2, memo)? {
                            result = true;
                            break;
                        }
                        if !recurse(dag, left, alphabet, word, m2, memo)? {
                            result = false;
                            break;
                        }
                    }
                    result
                }
            }
        }
    };
    memo.insert((id.get(), m), value);
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{evaluate, normalize_position};
    use crate::parser::parse;
    use crate::word::Symbol;

    fn sym(bits: &[usize]) -> Symbol {
        let mut s = Symbol::empty();
        for &b in bits {
            s.insert(b);
        }
        s
    }

    fn budget(names: &[&str], max_size: usize) -> EnumerationBudget {
        EnumerationBudget {
            max_size,
            ops: OperatorSet::full(),
            alphabet: PropositionAlphabet::new(names.to_vec()).unwrap(),
        }
    }

    #[test]
    fn size_one_enumeration_is_the_alphabet() {
        let formulas = enumerate_formulas(&budget(&["p"], 1));
        assert_eq!(formulas.len(), 1);
        assert_eq!(formulas[0].render(), "p");

        let formulas = enumerate_formulas(&budget(&["p", "q"], 1));
        let rendered: Vec<String> = formulas.iter().map(|f| f.render()).collect();
        assert_eq!(rendered, vec!["p", "q"]);
    }

    #[test]
    fn size_two_enumeration_over_one_proposition_has_nine_formulas() {
        let formulas = enumerate_formulas(&budget(&["p"], 2));
        assert_eq!(formulas.len(), 9);
        let rendered: HashSet<String> = formulas.iter().map(|f| f.render()).collect();
        for expect in [
            "p", "(! p)", "(X p)", "(F p)", "(G p)", "(p & p)", "(p | p)", "(p -> p)",
            "(p U p)",
        ] {
            assert!(rendered.contains(expect), "missing {expect}");
        }
    }

    #[test]
    fn enumeration_is_deduplicated_and_ordered_by_size() {
        let formulas = enumerate_formulas(&budget(&["p", "q"], 3));
        let mut renders = HashSet::new();
        let mut last = 0;
        for f in &formulas {
            assert!(f.size() >= last, "sizes must be nondecreasing");
            last = f.size();
            assert!(renders.insert(f.render()), "duplicate {}", f.render());
        }
    }

    #[test]
    fn counts_are_monotone_in_size_and_alphabet() {
        let c = |names: &[&str], n: usize| enumerate_formulas(&budget(names, n)).len();
        assert!(c(&["p"], 1) <= c(&["p"], 2));
        assert!(c(&["p"], 2) <= c(&["p"], 3));
        assert!(c(&["p"], 3) <= c(&["p", "q"], 3));
    }

    #[test]
    fn oracle_minimal_finds_the_single_proposition() {
        let alphabet = PropositionAlphabet::new(["p"]).unwrap();
        let sample = Sample::new(
            alphabet,
            vec![LassoWord::periodic(vec![sym(&[0])]).unwrap()],
            vec![LassoWord::periodic(vec![sym(&[])]).unwrap()],
        )
        .unwrap();
        let (size, formulas) = oracle_minimal(&sample, &budget(&["p"], 3))
            .unwrap()
            .unwrap();
        assert_eq!(size, 1);
        assert_eq!(formulas.len(), 1);
        assert_eq!(formulas[0].render(), "p");
    }

    #[test]
    fn oracle_minimal_finds_xp_and_fp_at_size_two() {
        let alphabet = PropositionAlphabet::new(["p"]).unwrap();
        let sample = Sample::new(
            alphabet,
            vec![LassoWord::new(vec![sym(&[])], vec![sym(&[0])]).unwrap()],
            vec![LassoWord::periodic(vec![sym(&[])]).unwrap()],
        )
        .unwrap();
        let (size, formulas) = oracle_minimal(&sample, &budget(&["p"], 3))
            .unwrap()
            .unwrap();
        assert_eq!(size, 2);
        let renders: HashSet<String> = formulas.iter().map(|f| f.render()).collect();
        assert_eq!(
            renders,
            HashSet::from(["(X p)".to_string(), "(F p)".to_string()])
        );

        // with the budget capped below the answer, the oracle reports none
        assert!(oracle_minimal(&sample, &budget(&["p"], 1))
            .unwrap()
            .is_none());
    }

    #[test]
    fn reference_semantics_handles_wraparound_until() {
        let alphabet = PropositionAlphabet::new(["p", "q"]).unwrap();
        // q^ω satisfies p U q immediately, with no p anywhere
        let w = LassoWord::periodic(vec![sym(&[1])]).unwrap();
        let dag = parse("p U q").unwrap();
        assert_eq!(unrolled_eval(&dag, &alphabet, &w, 0), Ok(true));

        // (q ∅)^ω satisfies G (F q) even though q keeps lapsing
        let w = LassoWord::periodic(vec![sym(&[1]), sym(&[])]).unwrap();
        let dag = parse("G (F q)").unwrap();
        assert_eq!(unrolled_eval(&dag, &alphabet, &w, 0), Ok(true));
        let dag = parse("G q").unwrap();
        assert_eq!(unrolled_eval(&dag, &alphabet, &w, 0), Ok(false));
    }

    #[test]
    fn reference_and_table_evaluator_agree_on_fixed_cases() {
        let alphabet = PropositionAlphabet::new(["p", "q"]).unwrap();
        let words = [
            LassoWord::periodic(vec![sym(&[1])]).unwrap(),
            LassoWord::new(vec![sym(&[0])], vec![sym(&[1])]).unwrap(),
            LassoWord::new(vec![sym(&[]), sym(&[0])], vec![sym(&[0, 1]), sym(&[])]).unwrap(),
            LassoWord::periodic(vec![sym(&[0]), sym(&[1]), sym(&[])]).unwrap(),
        ];
        let formulas = [
            "p U q",
            "G (F q)",
            "F (G q)",
            "(p U (G q)) | (F (G q))",
            "X (X (p U q))",
            "G (p -> (X q))",
            "(F p) U (G q)",
            "q U (q U p)",
        ];
        for text in formulas {
            let dag = parse(text).unwrap();
            for w in &words {
                for k in 0..12 {
                    let normalized =
                        normalize_position(w.prefix_len() + k, w.prefix_len(), w.period_len());
                    let fast = evaluate(&dag, &alphabet, w, normalized).unwrap();
                    let slow = unrolled_eval(&dag, &alphabet, w, w.prefix_len() + k).unwrap();
                    assert_eq!(fast, slow, "{text} on {w:?} at offset {k}");
                }
            }
        }
    }
}
