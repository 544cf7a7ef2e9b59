//! The decision-tree learner: obtain LTL primitives by running the exact
//! learner on small subsets of the sample, then combine them with a
//! decision tree into one consistent formula.
//!
//! Two subset-selection strategies are provided. Strategy α keeps per-word
//! weights and repeatedly learns from weighted random subsets, boosting the
//! weight of words no primitive classifies correctly yet. Strategy β works
//! on the set of (positive, negative) pairs directly, learning a separator
//! for a random batch of pairs and discarding every pair it separates.
//!
//! Tree induction is plain recursive Gini splitting without pruning, so the
//! tree classifies the training sample perfectly, and the extracted formula
//! `ψ_t` (the disjunction over accept paths of the conjunction of path
//! literals) is consistent with the sample by construction. That consistency
//! is still asserted with the evaluator before returning.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use serde::Serialize;

use crate::alphabet::{Operator, OperatorSet, PropositionAlphabet};
use crate::error::LearnError;
use crate::eval::{evaluate, is_consistent};
use crate::exact::{learn_minimal, LearnerConfig};
use crate::syntax::{DagBuilder, NodeId, SyntaxDag};
use crate::word::{LassoWord, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Alpha,
    Beta,
}

/// Parameters of the primitive-generation phase.
#[derive(Debug, Clone)]
pub struct SamplingConfig {
    pub strategy: Strategy,
    /// Subset size `k`: words per side (α) or pairs per batch (β).
    pub subset_size: usize,
    /// Weight multiplier for words still classified wrong (α only).
    pub boost: f64,
    /// Rounds without new pair coverage before weights reset (α only).
    pub restart_rounds: usize,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            strategy: Strategy::Alpha,
            subset_size: 3,
            boost: 2.0,
            restart_rounds: 32,
            seed: 0,
        }
    }
}

/// The learned primitives Π together with their valuations on every sample
/// word, which double as the coverage matrix and the feature columns.
#[derive(Debug, Clone)]
pub struct PrimitiveSet {
    primitives: Vec<SyntaxDag>,
    /// `pos_vals[k][i]`: primitive `k` on positive word `i`.
    pos_vals: Vec<Vec<bool>>,
    /// `neg_vals[k][j]`: primitive `k` on negative word `j`.
    neg_vals: Vec<Vec<bool>>,
}

impl PrimitiveSet {
    pub fn empty() -> PrimitiveSet {
        PrimitiveSet {
            primitives: Vec::new(),
            pos_vals: Vec::new(),
            neg_vals: Vec::new(),
        }
    }

    /// Evaluate the given formulas on the sample and package them as a
    /// primitive set.
    pub fn from_formulas(
        sample: &Sample,
        formulas: Vec<SyntaxDag>,
    ) -> Result<PrimitiveSet, LearnError> {
        let mut set = PrimitiveSet::empty();
        for f in formulas {
            set.push(sample, f)?;
        }
        Ok(set)
    }

    fn push(&mut self, sample: &Sample, formula: SyntaxDag) -> Result<bool, LearnError> {
        if self.primitives.iter().any(|p| p.render() == formula.render()) {
            return Ok(false);
        }
        let eval_side = |words: &[LassoWord]| -> Result<Vec<bool>, LearnError> {
            words
                .iter()
                .map(|w| evaluate(&formula, sample.alphabet(), w, 0).map_err(LearnError::from))
                .collect()
        };
        self.pos_vals.push(eval_side(sample.positives())?);
        self.neg_vals.push(eval_side(sample.negatives())?);
        self.primitives.push(formula);
        Ok(true)
    }

    pub fn primitives(&self) -> &[SyntaxDag] {
        &self.primitives
    }

    pub fn len(&self) -> usize {
        self.primitives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primitives.is_empty()
    }

    /// Does primitive `k` separate positive `i` from negative `j`?
    pub fn separates(&self, k: usize, i: usize, j: usize) -> bool {
        self.pos_vals[k][i] && !self.neg_vals[k][j]
    }

    /// Separation completeness: every (positive, negative) pair has a
    /// separating primitive.
    pub fn is_complete(&self, sample: &Sample) -> bool {
        let (np, nn) = (sample.positives().len(), sample.negatives().len());
        (0..np).all(|i| {
            (0..nn).all(|j| (0..self.len()).any(|k| self.separates(k, i, j)))
        })
    }
}

/// Statistics for one strategy round.
#[derive(Debug, Clone, Serialize)]
pub struct RoundStats {
    pub round: usize,
    pub subset_positives: usize,
    pub subset_negatives: usize,
    pub primitive: String,
    pub primitive_size: usize,
    pub pairs_remaining: usize,
    pub seconds: f64,
}

fn weighted_sample_without_replacement(
    rng: &mut ChaCha8Rng,
    weights: &[f64],
    k: usize,
) -> Vec<usize> {
    let mut picked = Vec::with_capacity(k);
    let mut available: Vec<usize> = (0..weights.len()).collect();
    for _ in 0..k.min(weights.len()) {
        let total: f64 = available.iter().map(|&i| weights[i]).sum();
        let mut target = rng.gen::<f64>() * total;
        let mut chosen = available.len() - 1;
        for (slot, &i) in available.iter().enumerate() {
            target -= weights[i];
            if target <= 0.0 {
                chosen = slot;
                break;
            }
        }
        picked.push(available.swap_remove(chosen));
    }
    picked.sort_unstable();
    picked
}

fn uniform_sample_without_replacement(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
) -> Vec<usize> {
    let mut indices: Vec<usize> = (0..n).collect();
    let k = k.min(n);
    for slot in 0..k {
        let pick = slot + rng.gen_range(0..n - slot);
        indices.swap(slot, pick);
    }
    indices.truncate(k);
    indices.sort_unstable();
    indices
}

fn subsample(sample: &Sample, pos_idx: &[usize], neg_idx: &[usize]) -> Sample {
    let positives: Vec<LassoWord> = pos_idx
        .iter()
        .map(|&i| sample.positives()[i].clone())
        .collect();
    let negatives: Vec<LassoWord> = neg_idx
        .iter()
        .map(|&j| sample.negatives()[j].clone())
        .collect();
    Sample::new(sample.alphabet().clone(), positives, negatives)
        .expect("subsets of a non-contradictory sample stay non-contradictory")
}

/// Strategy α: weighted random subsets of `k` positives and `k` negatives.
pub fn strategy_alpha(
    sample: &Sample,
    learner: &LearnerConfig,
    config: &SamplingConfig,
    rounds: &mut Vec<RoundStats>,
) -> Result<PrimitiveSet, LearnError> {
    let (np, nn) = (sample.positives().len(), sample.negatives().len());
    let mut set = PrimitiveSet::empty();
    if np == 0 || nn == 0 {
        return Ok(set);
    }
    let k = config.subset_size.max(1).min(np).min(nn);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut weights_pos = vec![1.0f64; np];
    let mut weights_neg = vec![1.0f64; nn];
    let mut separated = vec![false; np * nn];
    let mut separated_count = 0usize;
    let mut stale_rounds = 0usize;
    let mut sub_config = learner.clone();
    sub_config.count = 1;

    while separated_count < np * nn {
        let round_start = std::time::Instant::now();
        let pos_idx = weighted_sample_without_replacement(&mut rng, &weights_pos, k);
        let neg_idx = weighted_sample_without_replacement(&mut rng, &weights_neg, k);
        let sub = subsample(sample, &pos_idx, &neg_idx);
        let result = learn_minimal(&sub, &sub_config)?;
        let formula = result.formulas.into_iter().next().ok_or_else(|| {
            LearnError::Invariant("exact learner returned no formula".into())
        })?;
        let primitive = formula.render();
        let primitive_size = formula.size();
        let added = set.push(sample, formula)?;

        let mut progress = 0usize;
        if added {
            let knew = set.len() - 1;
            for i in 0..np {
                for j in 0..nn {
                    if !separated[i * nn + j] && set.separates(knew, i, j) {
                        separated[i * nn + j] = true;
                        separated_count += 1;
                        progress += 1;
                    }
                }
            }
        }

        // boost every word no primitive classifies correctly yet
        for (i, w) in weights_pos.iter_mut().enumerate() {
            let covered = (0..set.len()).any(|p| set.pos_vals[p][i]);
            if !covered {
                *w *= config.boost;
            }
        }
        for (j, w) in weights_neg.iter_mut().enumerate() {
            let covered = (0..set.len()).any(|p| !set.neg_vals[p][j]);
            if !covered {
                *w *= config.boost;
            }
        }

        if progress == 0 {
            stale_rounds += 1;
            if stale_rounds >= config.restart_rounds.max(1) {
                weights_pos.fill(1.0);
                weights_neg.fill(1.0);
                stale_rounds = 0;
            }
        } else {
            stale_rounds = 0;
        }

        rounds.push(RoundStats {
            round: rounds.len() + 1,
            subset_positives: pos_idx.len(),
            subset_negatives: neg_idx.len(),
            primitive,
            primitive_size,
            pairs_remaining: np * nn - separated_count,
            seconds: round_start.elapsed().as_secs_f64(),
        });
    }
    Ok(set)
}

/// Strategy β: uniform batches of unseparated (positive, negative) pairs.
/// Each learned separator removes at least its own batch, so the loop ends
/// after at most |P|·|N| rounds.
pub fn strategy_beta(
    sample: &Sample,
    learner: &LearnerConfig,
    config: &SamplingConfig,
    rounds: &mut Vec<RoundStats>,
) -> Result<PrimitiveSet, LearnError> {
    let (np, nn) = (sample.positives().len(), sample.negatives().len());
    let mut set = PrimitiveSet::empty();
    if np == 0 || nn == 0 {
        return Ok(set);
    }
    let k = config.subset_size.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut remaining: Vec<(usize, usize)> = (0..np)
        .flat_map(|i| (0..nn).map(move |j| (i, j)))
        .collect();
    let mut sub_config = learner.clone();
    sub_config.count = 1;

    while !remaining.is_empty() {
        let round_start = std::time::Instant::now();
        let batch = uniform_sample_without_replacement(&mut rng, remaining.len(), k);
        let mut pos_idx: Vec<usize> = batch.iter().map(|&b| remaining[b].0).collect();
        let mut neg_idx: Vec<usize> = batch.iter().map(|&b| remaining[b].1).collect();
        pos_idx.sort_unstable();
        pos_idx.dedup();
        neg_idx.sort_unstable();
        neg_idx.dedup();
        let sub = subsample(sample, &pos_idx, &neg_idx);
        let result = learn_minimal(&sub, &sub_config)?;
        let formula = result.formulas.into_iter().next().ok_or_else(|| {
            LearnError::Invariant("exact learner returned no formula".into())
        })?;
        let primitive = formula.render();
        let primitive_size = formula.size();
        set.push(sample, formula)?;
        let knew = set.len() - 1;
        remaining.retain(|&(i, j)| !set.separates(knew, i, j));

        rounds.push(RoundStats {
            round: rounds.len() + 1,
            subset_positives: pos_idx.len(),
            subset_negatives: neg_idx.len(),
            primitive,
            primitive_size,
            pairs_remaining: remaining.len(),
            seconds: round_start.elapsed().as_secs_f64(),
        });
    }
    Ok(set)
}

/// Feature vectors: one row per word (positives first), one column per
/// primitive, labeled with the word's side.
#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    pub rows: Vec<Vec<bool>>,
    pub labels: Vec<bool>,
}

/// Build the labeled feature matrix. Fails if the primitives are not
/// separation complete, which would leave two equal rows with different
/// labels and no correct tree.
pub fn featurize(sample: &Sample, primitives: &PrimitiveSet) -> Result<FeatureMatrix, LearnError> {
    if !primitives.is_complete(sample) {
        return Err(LearnError::Invariant(
            "primitive set does not separate every positive/negative pair".into(),
        ));
    }
    let mut rows = Vec::with_capacity(sample.word_count());
    let mut labels = Vec::with_capacity(sample.word_count());
    for i in 0..sample.positives().len() {
        rows.push((0..primitives.len()).map(|k| primitives.pos_vals[k][i]).collect());
        labels.push(true);
    }
    for j in 0..sample.negatives().len() {
        rows.push((0..primitives.len()).map(|k| primitives.neg_vals[k][j]).collect());
        labels.push(false);
    }
    Ok(FeatureMatrix { rows, labels })
}

/// Branch-weighted Gini impurity of splitting `rows` on `feature`:
/// `Σ_branch (|branch|/|rows|) · (1 − p_acc² − p_rej²)`.
pub fn gini_split(matrix: &FeatureMatrix, rows: &[usize], feature: usize) -> f64 {
    let gini = |acc: usize, total: usize| -> f64 {
        if total == 0 {
            return 0.0;
        }
        let pa = acc as f64 / total as f64;
        let pr = 1.0 - pa;
        1.0 - pa * pa - pr * pr
    };
    let (mut true_total, mut true_acc, mut false_total, mut false_acc) = (0, 0, 0, 0);
    for &r in rows {
        if matrix.rows[r][feature] {
            true_total += 1;
            true_acc += matrix.labels[r] as usize;
        } else {
            false_total += 1;
            false_acc += matrix.labels[r] as usize;
        }
    }
    let total = (true_total + false_total) as f64;
    (true_total as f64 / total) * gini(true_acc, true_total)
        + (false_total as f64 / total) * gini(false_acc, false_total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNode {
    Leaf {
        accept: bool,
    },
    Inner {
        feature: usize,
        on_true: Box<TreeNode>,
        on_false: Box<TreeNode>,
    },
}

/// A decision tree over primitive features; leaves accept or reject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTree {
    pub root: TreeNode,
}

impl DecisionTree {
    pub fn classify(&self, features: &[bool]) -> bool {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { accept } => return *accept,
                TreeNode::Inner {
                    feature,
                    on_true,
                    on_false,
                } => {
                    node = if features[*feature] { on_true } else { on_false };
                }
            }
        }
    }

    pub fn inner_count(&self) -> usize {
        fn count(node: &TreeNode) -> usize {
            match node {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Inner {
                    on_true, on_false, ..
                } => 1 + count(on_true) + count(on_false),
            }
        }
        count(&self.root)
    }

    /// Report rendering: one node per line, two-space indentation, `+` for
    /// the edge taken when the node holds and `-` otherwise.
    pub fn render(&self, primitives: &[SyntaxDag]) -> String {
        fn walk(node: &TreeNode, primitives: &[SyntaxDag], depth: usize, edge: &str, out: &mut String) {
            out.push_str(&"  ".repeat(depth));
            out.push_str(edge);
            match node {
                TreeNode::Leaf { accept } => {
                    out.push_str(if *accept { "accept" } else { "reject" });
                    out.push('\n');
                }
                TreeNode::Inner {
                    feature,
                    on_true,
                    on_false,
                } => {
                    out.push_str(&primitives[*feature].render());
                    out.push('\n');
                    walk(on_true, primitives, depth + 1, "+ ", out);
                    walk(on_false, primitives, depth + 1, "- ", out);
                }
            }
        }
        let mut out = String::new();
        walk(&self.root, primitives, 0, "", &mut out);
        out
    }
}

/// Recursive best-Gini splitting; no pruning, ties broken by the lowest
/// feature index, recursion stops at pure nodes.
pub fn learn_tree(matrix: &FeatureMatrix) -> Result<DecisionTree, LearnError> {
    fn split(matrix: &FeatureMatrix, rows: &[usize]) -> Result<TreeNode, LearnError> {
        if rows.is_empty() {
            return Ok(TreeNode::Leaf { accept: true });
        }
        let first = matrix.labels[rows[0]];
        if rows.iter().all(|&r| matrix.labels[r] == first) {
            return Ok(TreeNode::Leaf { accept: first });
        }
        let features = matrix.rows[rows[0]].len();
        let mut best: Option<(usize, f64)> = None;
        for f in 0..features {
            let on_true = rows.iter().filter(|&&r| matrix.rows[r][f]).count();
            if on_true == 0 || on_true == rows.len() {
                continue; // no split, would recurse forever
            }
            let impurity = gini_split(matrix, rows, f);
            let better = match best {
                None => true,
                Some((_, b)) => impurity < b,
            };
            if better {
                best = Some((f, impurity));
            }
        }
        let (feature, _) = best.ok_or_else(|| {
            LearnError::Invariant(
                "impure node with no splitting feature: contradictory rows".into(),
            )
        })?;
        let true_rows: Vec<usize> = rows.iter().copied().filter(|&r| matrix.rows[r][feature]).collect();
        let false_rows: Vec<usize> = rows.iter().copied().filter(|&r| !matrix.rows[r][feature]).collect();
        let on_true = Box::new(split(matrix, &true_rows)?);
        let on_false = Box::new(split(matrix, &false_rows)?);
        Ok(TreeNode::Inner {
            feature,
            on_true,
            on_false,
        })
    }
    let rows: Vec<usize> = (0..matrix.rows.len()).collect();
    Ok(DecisionTree {
        root: split(matrix, &rows)?,
    })
}

/// Extract `ψ_t`: the disjunction over root-to-accept paths of the
/// conjunction of path literals, a primitive taken positively on a `+` edge
/// and negated on a `-` edge. Repeated primitives are shared in the DAG.
/// With constants disabled, an accepting root leaf becomes `p ∨ ¬p` and a
/// tree without accept leaves its negation.
pub fn tree_to_formula(
    tree: &DecisionTree,
    primitives: &[SyntaxDag],
    ops: &OperatorSet,
    alphabet: &PropositionAlphabet,
) -> SyntaxDag {
    let mut builder = DagBuilder::new();
    let roots: Vec<NodeId> = primitives.iter().map(|p| builder.import(p)).collect();

    let mut paths: Vec<Vec<(usize, bool)>> = Vec::new();
    fn collect(node: &TreeNode, prefix: &mut Vec<(usize, bool)>, paths: &mut Vec<Vec<(usize, bool)>>) {
        match node {
            TreeNode::Leaf { accept } => {
                if *accept {
                    paths.push(prefix.clone());
                }
            }
            TreeNode::Inner {
                feature,
                on_true,
                on_false,
            } => {
                prefix.push((*feature, true));
                collect(on_true, prefix, paths);
                prefix.pop();
                prefix.push((*feature, false));
                collect(on_false, prefix, paths);
                prefix.pop();
            }
        }
    }
    collect(&tree.root, &mut Vec::new(), &mut paths);

    let constant = |builder: &mut DagBuilder, value: bool| -> NodeId {
        if ops.constants_enabled() {
            builder.constant(value)
        } else {
            // true := p ∨ ¬p for the first proposition; false negates it
            let p = builder.prop(alphabet.name(0).to_string());
            let np = builder.unary(Operator::Not, p);
            let tt = builder.binary(Operator::Or, p, np);
            if value {
                tt
            } else {
                builder.unary(Operator::Not, tt)
            }
        }
    };

    let mut disjuncts: Vec<NodeId> = Vec::new();
    for path in &paths {
        if path.is_empty() {
            disjuncts.push(constant(&mut builder, true));
            continue;
        }
        let mut conj: Option<NodeId> = None;
        for &(feature, positive) in path {
            let mut lit = roots[feature];
            if !positive {
                lit = builder.unary(Operator::Not, lit);
            }
            conj = Some(match conj {
                None => lit,
                Some(acc) => builder.binary(Operator::And, acc, lit),
            });
        }
        disjuncts.push(conj.expect("nonempty path"));
    }

    let root = if disjuncts.is_empty() {
        constant(&mut builder, false)
    } else {
        let mut acc = disjuncts[0];
        for &d in &disjuncts[1..] {
            acc = builder.binary(Operator::Or, acc, d);
        }
        acc
    };
    builder.finish(root)
}

/// Everything the decision-tree learner produces.
#[derive(Debug, Clone)]
pub struct DtResult {
    pub tree: DecisionTree,
    pub formula: SyntaxDag,
    pub primitives: PrimitiveSet,
    pub rounds: Vec<RoundStats>,
}

/// Run the full pipeline: primitives, feature matrix, tree, formula, and
/// the final consistency assertion.
pub fn learn_dt(
    sample: &Sample,
    learner: &LearnerConfig,
    config: &SamplingConfig,
) -> Result<DtResult, LearnError> {
    let mut rounds = Vec::new();
    let primitives = match config.strategy {
        Strategy::Alpha => strategy_alpha(sample, learner, config, &mut rounds)?,
        Strategy::Beta => strategy_beta(sample, learner, config, &mut rounds)?,
    };
    let matrix = featurize(sample, &primitives)?;
    let tree = learn_tree(&matrix)?;
    let formula = tree_to_formula(&tree, primitives.primitives(), &learner.ops, sample.alphabet());
    if !is_consistent(&formula, sample)? {
        return Err(LearnError::Invariant(format!(
            "extracted tree formula {} is not consistent with the sample",
            formula.render()
        )));
    }
    Ok(DtResult {
        tree,
        formula,
        primitives,
        rounds,
    })
}
