//! Valuation of LTL formulas on ultimately periodic words.
//!
//! Evaluation fills a dynamic-programming table over (node identifier,
//! position in `uv`), walking nodes in identifier order so children are
//! always computed first. Temporal operators at periodic positions wrap
//! around to the start of the period; the same position walk drives the SAT
//! encoding, so evaluator and encoder agree by construction.

use crate::alphabet::PropositionAlphabet;
use crate::error::EvalError;
use crate::syntax::{Label, SyntaxDag};
use crate::word::LassoWord;
use crate::Operator;

/// Map an arbitrary position of `u v^ω` onto the stored finite part `uv`.
pub fn normalize_position(t: usize, prefix_len: usize, period_len: usize) -> usize {
    debug_assert!(period_len >= 1);
    if t < prefix_len + period_len {
        t
    } else {
        prefix_len + (t - prefix_len) % period_len
    }
}

/// Positions visited when scanning forward from `t`, in order. Prefix
/// positions scan straight to the end of `uv`; periodic positions scan to
/// the end and then wrap through the period start up to `t` (exclusive), so
/// every reachable suffix is visited exactly once.
pub(crate) fn suffix_walk(
    t: usize,
    prefix_len: usize,
    total_len: usize,
) -> impl Iterator<Item = usize> {
    let wrap = if t >= prefix_len {
        prefix_len..t
    } else {
        0..0
    };
    (t..total_len).chain(wrap)
}

fn resolve_props(
    dag: &SyntaxDag,
    alphabet: &PropositionAlphabet,
) -> Result<Vec<Option<usize>>, EvalError> {
    dag.iter()
        .map(|(_, node)| match &node.label {
            Label::Prop(name) => alphabet
                .index_of(name)
                .map(Some)
                .ok_or_else(|| EvalError::UnknownProposition(name.clone())),
            _ => Ok(None),
        })
        .collect()
}

/// The full valuation table: `table[i - 1][t]` is the valuation of the
/// subformula rooted at node `i` on the suffix starting at position `t`.
#[allow(clippy::needless_range_loop)]
pub fn valuation_table(
    dag: &SyntaxDag,
    alphabet: &PropositionAlphabet,
    word: &LassoWord,
) -> Result<Vec<Vec<bool>>, EvalError> {
    let props = resolve_props(dag, alphabet)?;
    let len = word.total_len();
    let prefix_len = word.prefix_len();
    let mut table: Vec<Vec<bool>> = Vec::with_capacity(dag.size());

    for (id, node) in dag.iter() {
        let mut row = vec![false; len];
        match &node.label {
            Label::Prop(_) => {
                let p = props[id.get() - 1].expect("proposition index resolved");
                for (t, slot) in row.iter_mut().enumerate() {
                    *slot = word.symbol(t).contains(p);
                }
            }
            Label::Const(value) => {
                row.fill(*value);
            }
            Label::Op(op) => {
                let left = &table[node.left.expect("operator has left child").get() - 1];
                match op {
                    Operator::Not => {
                        for (t, slot) in row.iter_mut().enumerate() {
                            *slot = !left[t];
                        }
                    }
                    Operator::Next => {
                        for t in 0..len {
                            let next = if t + 1 < len { t + 1 } else { prefix_len };
                            row[t] = left[next];
                        }
                    }
                    Operator::Finally => {
                        for t in 0..len {
                            row[t] = suffix_walk(t, prefix_len, len).any(|t2| left[t2]);
                        }
                    }
                    Operator::Globally => {
                        for t in 0..len {
                            row[t] = suffix_walk(t, prefix_len, len).all(|t2| left[t2]);
                        }
                    }
                    Operator::Or | Operator::And | Operator::Implies | Operator::Until => {
                        let right =
                            &table[node.right.expect("binary operator has right child").get() - 1];
                        match op {
                            Operator::Or => {
                                for (t, slot) in row.iter_mut().enumerate() {
                                    *slot = left[t] || right[t];
                                }
                            }
                            Operator::And => {
                                for (t, slot) in row.iter_mut().enumerate() {
                                    *slot = left[t] && right[t];
                                }
                            }
                            Operator::Implies => {
                                for (t, slot) in row.iter_mut().enumerate() {
                                    *slot = !left[t] || right[t];
                                }
                            }
                            Operator::Until => {
                                // The first walk step is the zero-step
                                // witness: the right operand alone decides.
                                for t in 0..len {
                                    let mut holds = false;
                                    let mut left_so_far = true;
                                    for t2 in suffix_walk(t, prefix_len, len) {
                                        if left_so_far && right[t2] {
                                            holds = true;
                                            break;
                                        }
                                        left_so_far &= left[t2];
                                        if !left_so_far {
                                            break;
                                        }
                                    }
                                    row[t] = holds;
                                }
                            }
                            _ => unreachable!(),
                        }
                    }
                }
            }
        }
        table.push(row);
    }
    Ok(table)
}

/// Valuation `V(φ, uv^ω[at, ∞))` of the whole formula at stored position `at`.
pub fn evaluate(
    dag: &SyntaxDag,
    alphabet: &PropositionAlphabet,
    word: &LassoWord,
    at: usize,
) -> Result<bool, EvalError> {
    if at >= word.total_len() {
        return Err(EvalError::PositionOutOfRange {
            position: at,
            length: word.total_len(),
        });
    }
    let table = valuation_table(dag, alphabet, word)?;
    Ok(table[dag.root().get() - 1][at])
}

/// Whether every positive word satisfies the formula at position 0 and every
/// negative word violates it.
pub fn is_consistent(dag: &SyntaxDag, sample: &crate::word::Sample) -> Result<bool, EvalError> {
    for w in sample.positives() {
        if !evaluate(dag, sample.alphabet(), w, 0)? {
            return Ok(false);
        }
    }
    for w in sample.negatives() {
        if evaluate(dag, sample.alphabet(), w, 0)? {
            return Ok(false);
        }
    }
    Ok(true)
}
