//! Propositional encoding of "a consistent formula of size n exists".
//!
//! The encoding guesses a syntax DAG with nodes `1..=n` through three
//! variable families: `x[i,λ]` (node `i` carries label `λ`), `l[i,j]` and
//! `r[i,j]` (node `j` is the left/right child of node `i`). A fourth family
//! `y[w,i,t]` tracks, for every word `w` of the sample, the valuation of the
//! subformula rooted at node `i` on the suffix starting at position `t` of
//! the stored part `uv`. Root assertions `y[w,n,0]` (positive words) and
//! `¬y[w,n,0]` (negative words) tie the guessed formula to the sample.
//!
//! Temporal operators scan positions with the same wraparound walk the
//! evaluator uses, so a decoded model always agrees with direct evaluation.
//! Inner conjunctions of the until scan are named by auxiliary variables
//! (shared across parent nodes) to keep the clause count polynomial.

use std::collections::HashMap;

use crate::alphabet::{Operator, OperatorSet, PropositionAlphabet};
use crate::cnf::{CnfInstance, Lit, Model};
use crate::error::EncodeError;
use crate::eval::suffix_walk;
use crate::syntax::{Label, Node, NodeId, SyntaxDag};
use crate::word::{LassoWord, Sample};

/// A label in the encoding universe: a proposition index, an enabled
/// operator, or (when enabled) a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncLabel {
    Prop(usize),
    Op(Operator),
    Const(bool),
}

/// Dense allocation of the primary variable families plus a counter for
/// auxiliary variables introduced during clause generation.
#[derive(Debug, Clone)]
pub struct VariablePool {
    n: usize,
    labels: Vec<EncLabel>,
    word_lengths: Vec<usize>,
    x_base: u32,
    l_base: u32,
    r_base: u32,
    y_bases: Vec<u32>,
    next_var: u32,
    primary_vars: usize,
}

/// Number of unordered child slots below nodes `2..=n`: Σ_{i=2..n} (i-1).
fn child_slots(n: usize) -> usize {
    n * (n - 1) / 2
}

/// The closed form for the primary variable count:
/// `n·|labels| + 2·Σ_{i=2..n}(i−1) + n·Σ_w |uv_w|`.
pub fn primary_variable_closed_form(
    n: usize,
    label_count: usize,
    word_lengths: &[usize],
) -> usize {
    n * label_count + 2 * child_slots(n) + n * word_lengths.iter().sum::<usize>()
}

impl VariablePool {
    pub fn new(
        n: usize,
        alphabet: &PropositionAlphabet,
        ops: &OperatorSet,
        word_lengths: &[usize],
    ) -> VariablePool {
        assert!(n >= 1, "size bound must be at least 1");
        let mut labels: Vec<EncLabel> = (0..alphabet.len()).map(EncLabel::Prop).collect();
        labels.extend(ops.operators().iter().map(|&op| EncLabel::Op(op)));
        if ops.constants_enabled() {
            labels.push(EncLabel::Const(true));
            labels.push(EncLabel::Const(false));
        }

        let x_base = 1;
        let l_base = x_base + (n * labels.len()) as u32;
        let r_base = l_base + child_slots(n) as u32;
        let mut next = r_base + child_slots(n) as u32;
        let mut y_bases = Vec::with_capacity(word_lengths.len());
        for &len in word_lengths {
            y_bases.push(next);
            next += (n * len) as u32;
        }
        let primary_vars = (next - 1) as usize;
        debug_assert_eq!(
            primary_vars,
            primary_variable_closed_form(n, labels.len(), word_lengths)
        );
        VariablePool {
            n,
            labels,
            word_lengths: word_lengths.to_vec(),
            x_base,
            l_base,
            r_base,
            y_bases,
            next_var: next,
            primary_vars,
        }
    }

    pub fn size_bound(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[EncLabel] {
        &self.labels
    }

    pub fn label_index(&self, label: EncLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Variable `x[i, λ]`, `i ∈ 1..=n`.
    pub fn x(&self, i: usize, label: usize) -> u32 {
        debug_assert!((1..=self.n).contains(&i) && label < self.labels.len());
        self.x_base + ((i - 1) * self.labels.len() + label) as u32
    }

    fn child_offset(i: usize, j: usize) -> usize {
        debug_assert!(i >= 2 && (1..i).contains(&j));
        child_slots(i - 1) + (j - 1)
    }

    /// Variable `l[i, j]`, `2 ≤ i ≤ n`, `1 ≤ j < i`.
    pub fn left(&self, i: usize, j: usize) -> u32 {
        self.l_base + Self::child_offset(i, j) as u32
    }

    /// Variable `r[i, j]`, `2 ≤ i ≤ n`, `1 ≤ j < i`.
    pub fn right(&self, i: usize, j: usize) -> u32 {
        self.r_base + Self::child_offset(i, j) as u32
    }

    /// Variable `y[w, i, t]` for word `w`, node `i`, position `t`.
    pub fn y(&self, word: usize, i: usize, t: usize) -> u32 {
        debug_assert!(t < self.word_lengths[word] && (1..=self.n).contains(&i));
        self.y_bases[word] + ((i - 1) * self.word_lengths[word] + t) as u32
    }

    pub fn fresh_aux(&mut self) -> u32 {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    /// Count of `x`/`l`/`r`/`y` variables, excluding auxiliaries.
    pub fn primary_var_count(&self) -> usize {
        self.primary_vars
    }

    /// Total variables allocated so far, auxiliaries included.
    pub fn var_count(&self) -> u32 {
        self.next_var - 1
    }

    /// Attach `c x i λ <var>`-style name comments for DIMACS export.
    pub fn annotate(&self, alphabet: &PropositionAlphabet, cnf: &mut CnfInstance) {
        for i in 1..=self.n {
            for (k, label) in self.labels.iter().enumerate() {
                let name = match label {
                    EncLabel::Prop(p) => alphabet.name(*p).to_string(),
                    EncLabel::Op(op) => op.symbol().to_string(),
                    EncLabel::Const(true) => "true".to_string(),
                    EncLabel::Const(false) => "false".to_string(),
                };
                cnf.name_var(self.x(i, k), format!("x {i} {name}"));
            }
        }
        for i in 2..=self.n {
            for j in 1..i {
                cnf.name_var(self.left(i, j), format!("l {i} {j}"));
                cnf.name_var(self.right(i, j), format!("r {i} {j}"));
            }
        }
        for w in 0..self.word_lengths.len() {
            for i in 1..=self.n {
                for t in 0..self.word_lengths[w] {
                    cnf.name_var(self.y(w, i, t), format!("y {w} {i} {t}"));
                }
            }
        }
    }
}

/// The positions of the periodic part lying between `t` and `t2` under
/// wraparound: `{t, …, t2−1}` when `t < t2`, and
/// `{prefix_len, …, t2−1} ∪ {t, …, total_len−1}` when `t ≥ t2` (so equal
/// arguments denote one full trip around the loop).
pub fn between_positions(
    t: usize,
    t2: usize,
    prefix_len: usize,
    total_len: usize,
) -> Result<Vec<usize>, EncodeError> {
    let inside = |p: usize| p >= prefix_len && p < total_len;
    if !inside(t) || !inside(t2) {
        return Err(EncodeError::OutsidePeriodicPart {
            t,
            t2,
            lo: prefix_len,
            hi: total_len,
        });
    }
    if t < t2 {
        Ok((t..t2).collect())
    } else {
        Ok((prefix_len..t2).chain(t..total_len).collect())
    }
}

fn pos(var: u32) -> Lit {
    Lit::positive(var)
}

fn neg(var: u32) -> Lit {
    Lit::negative(var)
}

/// Exactly-one over `vars`: one at-least-one clause plus pairwise exclusion.
fn exactly_one(vars: &[u32], out: &mut Vec<Vec<Lit>>) {
    out.push(vars.iter().map(|&v| pos(v)).collect());
    for (a, &va) in vars.iter().enumerate() {
        for &vb in &vars[a + 1..] {
            out.push(vec![neg(va), neg(vb)]);
        }
    }
}

/// Structural constraints: each node has exactly one label, every node above
/// 1 has exactly one left and one right child slot filled, and node 1 is
/// atomic. Child slots of unary and atomic nodes exist but are ignored by
/// decoding.
pub fn encode_structure(pool: &VariablePool, out: &mut Vec<Vec<Lit>>) {
    let n = pool.size_bound();
    let label_count = pool.labels().len();
    for i in 1..=n {
        let vars: Vec<u32> = (0..label_count).map(|k| pool.x(i, k)).collect();
        exactly_one(&vars, out);
    }
    for i in 2..=n {
        let lefts: Vec<u32> = (1..i).map(|j| pool.left(i, j)).collect();
        exactly_one(&lefts, out);
        let rights: Vec<u32> = (1..i).map(|j| pool.right(i, j)).collect();
        exactly_one(&rights, out);
    }
    // node 1 carries a 0-ary label
    let atomic: Vec<Lit> = pool
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, l)| matches!(l, EncLabel::Prop(_) | EncLabel::Const(_)))
        .map(|(k, _)| pos(pool.x(1, k)))
        .collect();
    out.push(atomic);
}

/// Per-word semantic constraints tying `y[w,·,·]` to the guessed DAG.
#[allow(clippy::needless_range_loop)]
pub fn encode_word(
    pool: &mut VariablePool,
    word_index: usize,
    word: &LassoWord,
    out: &mut Vec<Vec<Lit>>,
) {
    let n = pool.size_bound();
    let len = word.total_len();
    let up = word.prefix_len();
    let walks: Vec<Vec<usize>> = (0..len)
        .map(|t| suffix_walk(t, up, len).collect())
        .collect();

    // atomic labels fix y directly
    let labels = pool.labels().to_vec();
    for i in 1..=n {
        for (k, label) in labels.iter().copied().enumerate() {
            match label {
                EncLabel::Prop(p) => {
                    let x = pool.x(i, k);
                    for t in 0..len {
                        let y = pool.y(word_index, i, t);
                        let lit = if word.symbol(t).contains(p) {
                            pos(y)
                        } else {
                            neg(y)
                        };
                        out.push(vec![neg(x), lit]);
                    }
                }
                EncLabel::Const(value) => {
                    let x = pool.x(i, k);
                    for t in 0..len {
                        let y = pool.y(word_index, i, t);
                        out.push(vec![neg(x), if value { pos(y) } else { neg(y) }]);
                    }
                }
                EncLabel::Op(_) => {}
            }
        }
    }

    // conjunction chains along the walk, shared between all until parents:
    // chain(j, t, k) = y[j, walk[0]] ∧ … ∧ y[j, walk[k-1]]
    let mut chains: HashMap<(usize, usize, usize), Lit> = HashMap::new();
    // pair(j, j2, t, k) = chain(j, t, k) ∧ y[j2, walk[k]]
    let mut pairs: HashMap<(usize, usize, usize, usize), Lit> = HashMap::new();

    let ops: Vec<(usize, Operator)> = pool
        .labels()
        .iter()
        .enumerate()
        .filter_map(|(k, l)| match l {
            EncLabel::Op(op) => Some((k, *op)),
            _ => None,
        })
        .collect();

    for i in 2..=n {
        for (k, op) in &ops {
            let x = pool.x(i, *k);
            match op {
                Operator::Not => {
                    for j in 1..i {
                        let l = pool.left(i, j);
                        for t in 0..len {
                            let yi = pool.y(word_index, i, t);
                            let yj = pool.y(word_index, j, t);
                            out.push(vec![neg(x), neg(l), neg(yi), neg(yj)]);
                            out.push(vec![neg(x), neg(l), pos(yi), pos(yj)]);
                        }
                    }
                }
                Operator::Next => {
                    for j in 1..i {
                        let l = pool.left(i, j);
                        for t in 0..len {
                            let succ = if t + 1 < len { t + 1 } else { up };
                            let yi = pool.y(word_index, i, t);
                            let yj = pool.y(word_index, j, succ);
                            out.push(vec![neg(x), neg(l), neg(yi), pos(yj)]);
                            out.push(vec![neg(x), neg(l), pos(yi), neg(yj)]);
                        }
                    }
                }
                Operator::Finally => {
                    for j in 1..i {
                        let l = pool.left(i, j);
                        for t in 0..len {
                            let yi = pool.y(word_index, i, t);
                            let mut long = vec![neg(x), neg(l), neg(yi)];
                            for &s in &walks[t] {
                                let yj = pool.y(word_index, j, s);
                                long.push(pos(yj));
                                out.push(vec![neg(x), neg(l), neg(yj), pos(yi)]);
                            }
                            out.push(long);
                        }
                    }
                }
                Operator::Globally => {
                    for j in 1..i {
                        let l = pool.left(i, j);
                        for t in 0..len {
                            let yi = pool.y(word_index, i, t);
                            let mut long = vec![neg(x), neg(l), pos(yi)];
                            for &s in &walks[t] {
                                let yj = pool.y(word_index, j, s);
                                long.push(neg(yj));
                                out.push(vec![neg(x), neg(l), neg(yi), pos(yj)]);
                            }
                            out.push(long);
                        }
                    }
                }
                Operator::Or | Operator::And | Operator::Implies => {
                    for j in 1..i {
                        for j2 in 1..i {
                            let l = pool.left(i, j);
                            let r = pool.right(i, j2);
                            for t in 0..len {
                                let yi = pool.y(word_index, i, t);
                                let ya = pool.y(word_index, j, t);
                                let yb = pool.y(word_index, j2, t);
                                let g = [neg(x), neg(l), neg(r)];
                                match op {
                                    Operator::Or => {
                                        out.push(
                                            [g.as_slice(), &[neg(yi), pos(ya), pos(yb)]].concat(),
                                        );
                                        out.push([g.as_slice(), &[neg(ya), pos(yi)]].concat());
                                        out.push([g.as_slice(), &[neg(yb), pos(yi)]].concat());
                                    }
                                    Operator::And => {
                                        out.push(
                                            [g.as_slice(), &[pos(yi), neg(ya), neg(yb)]].concat(),
                                        );
                                        out.push([g.as_slice(), &[neg(yi), pos(ya)]].concat());
                                        out.push([g.as_slice(), &[neg(yi), pos(yb)]].concat());
                                    }
                                    Operator::Implies => {
                                        out.push(
                                            [g.as_slice(), &[neg(yi), neg(ya), pos(yb)]].concat(),
                                        );
                                        out.push([g.as_slice(), &[pos(ya), pos(yi)]].concat());
                                        out.push([g.as_slice(), &[neg(yb), pos(yi)]].concat());
                                    }
                                    _ => unreachable!(),
                                }
                            }
                        }
                    }
                }
                Operator::Until => {
                    for j in 1..i {
                        for j2 in 1..i {
                            let l = pool.left(i, j);
                            let r = pool.right(i, j2);
                            for t in 0..len {
                                let yi = pool.y(word_index, i, t);
                                let walk = &walks[t];
                                // disjunct 0 is the zero-step witness: the
                                // right operand holds at t itself
                                let mut terms: Vec<Lit> =
                                    vec![pos(pool.y(word_index, j2, walk[0]))];
                                for step in 1..walk.len() {
                                    let chain = chain_lit(
                                        pool, word_index, j, t, step, walk, &mut chains, out,
                                    );
                                    let term = pair_lit(
                                        pool, word_index, j, j2, t, step, walk, chain,
                                        &mut pairs, out,
                                    );
                                    terms.push(term);
                                }
                                let g = [neg(x), neg(l), neg(r)];
                                let mut long = g.to_vec();
                                long.push(neg(yi));
                                long.extend(terms.iter().copied());
                                out.push(long);
                                for term in terms {
                                    out.push([g.as_slice(), &[term.negated(), pos(yi)]].concat());
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Literal for the conjunction of `y[j, walk[0..step]]` (step ≥ 1).
#[allow(clippy::too_many_arguments)]
fn chain_lit(
    pool: &mut VariablePool,
    word_index: usize,
    j: usize,
    t: usize,
    step: usize,
    walk: &[usize],
    chains: &mut HashMap<(usize, usize, usize), Lit>,
    out: &mut Vec<Vec<Lit>>,
) -> Lit {
    if step == 1 {
        return pos(pool.y(word_index, j, walk[0]));
    }
    if let Some(&lit) = chains.get(&(j, t, step)) {
        return lit;
    }
    let prev = chain_lit(pool, word_index, j, t, step - 1, walk, chains, out);
    let extra = pos(pool.y(word_index, j, walk[step - 1]));
    let aux = pos(pool.fresh_aux());
    out.push(vec![aux.negated(), prev]);
    out.push(vec![aux.negated(), extra]);
    out.push(vec![aux, prev.negated(), extra.negated()]);
    chains.insert((j, t, step), aux);
    aux
}

/// Literal for `chain(j, t, step) ∧ y[j2, walk[step]]`, shared across all
/// parent nodes with the same children.
#[allow(clippy::too_many_arguments)]
fn pair_lit(
    pool: &mut VariablePool,
    word_index: usize,
    j: usize,
    j2: usize,
    t: usize,
    step: usize,
    walk: &[usize],
    chain: Lit,
    pairs: &mut HashMap<(usize, usize, usize, usize), Lit>,
    out: &mut Vec<Vec<Lit>>,
) -> Lit {
    if let Some(&lit) = pairs.get(&(j, j2, t, step)) {
        return lit;
    }
    let psi = pos(pool.y(word_index, j2, walk[step]));
    let aux = pos(pool.fresh_aux());
    out.push(vec![aux.negated(), chain]);
    out.push(vec![aux.negated(), psi]);
    out.push(vec![aux, chain.negated(), psi.negated()]);
    pairs.insert((j, j2, t, step), aux);
    aux
}

/// The complete propositional formula for one size bound: structure,
/// per-word semantics, and root assertions.
#[derive(Debug)]
pub struct SampleEncoding {
    pool: VariablePool,
    alphabet: PropositionAlphabet,
    clauses: Vec<Vec<Lit>>,
}

impl SampleEncoding {
    /// Encode "some formula of size exactly `n` over the given operators is
    /// consistent with `sample`". An empty sample yields just the structure
    /// constraints, which are satisfiable for every `n`.
    pub fn build(n: usize, sample: &Sample, ops: &OperatorSet) -> SampleEncoding {
        let word_lengths: Vec<usize> = sample.words().map(|w| w.total_len()).collect();
        let mut pool = VariablePool::new(n, sample.alphabet(), ops, &word_lengths);
        let mut clauses = Vec::new();
        encode_structure(&pool, &mut clauses);
        let words: Vec<&LassoWord> = sample.words().collect();
        for (w, word) in words.iter().enumerate() {
            encode_word(&mut pool, w, word, &mut clauses);
        }
        let positives = sample.positives().len();
        for w in 0..words.len() {
            let root = pool.y(w, n, 0);
            clauses.push(vec![if w < positives { pos(root) } else { neg(root) }]);
        }
        SampleEncoding {
            pool,
            alphabet: sample.alphabet().clone(),
            clauses,
        }
    }

    pub fn pool(&self) -> &VariablePool {
        &self.pool
    }

    pub fn primary_var_count(&self) -> usize {
        self.pool.primary_var_count()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Conjoin user constraints over the `x`/`l`/`r` vocabulary.
    pub fn apply_structural_constraints(
        &mut self,
        constraints: &[StructuralConstraint],
    ) -> Result<(), EncodeError> {
        let clauses = lower_constraints(constraints, &self.pool, &self.alphabet)?;
        self.clauses.extend(clauses);
        Ok(())
    }

    /// Append raw clauses over this encoding's variables, e.g. the pins
    /// produced by [`pin_formula_clauses`].
    pub fn extend_clauses(&mut self, clauses: impl IntoIterator<Item = Vec<Lit>>) {
        self.clauses.extend(clauses);
    }

    /// Exclude a previously found model: blocks its complete `x`/`l`/`r`
    /// assignment, so any structurally different DAG remains reachable.
    pub fn block_model(&mut self, model: &Model) {
        let mut lits = Vec::new();
        let n = self.pool.size_bound();
        for i in 1..=n {
            for k in 0..self.pool.labels().len() {
                let v = self.pool.x(i, k);
                lits.push(Lit::with_sign(v, model.value(v)));
            }
        }
        for i in 2..=n {
            for j in 1..i {
                for v in [self.pool.left(i, j), self.pool.right(i, j)] {
                    lits.push(Lit::with_sign(v, model.value(v)));
                }
            }
        }
        self.clauses.push(lits.iter().map(|l| l.negated()).collect());
    }

    /// Materialize as a CNF instance. With `annotate` set, variable-name
    /// comments are included for DIMACS export.
    pub fn to_instance(&self, annotate: bool) -> CnfInstance {
        let mut cnf = CnfInstance::new(self.pool.var_count());
        if annotate {
            self.pool.annotate(&self.alphabet, &mut cnf);
        }
        for clause in &self.clauses {
            cnf.add_clause(clause.clone());
        }
        cnf
    }

    /// Read the syntax DAG out of a model of this encoding.
    pub fn decode(&self, model: &Model) -> Result<SyntaxDag, EncodeError> {
        decode_model(model, &self.pool, &self.alphabet)
    }
}

/// Construct the syntax DAG a model describes: each node gets its unique
/// true label, children come from the unique true `l`/`r` variables, and
/// child slots beyond the label's arity are ignored.
pub fn decode_model(
    model: &Model,
    pool: &VariablePool,
    alphabet: &PropositionAlphabet,
) -> Result<SyntaxDag, EncodeError> {
    let n = pool.size_bound();
    let mut nodes = Vec::with_capacity(n);
    for i in 1..=n {
        let mut label = None;
        for (k, &enc) in pool.labels().iter().enumerate() {
            if model.value(pool.x(i, k)) {
                if label.is_some() {
                    return Err(EncodeError::MalformedModel { node: i });
                }
                label = Some(enc);
            }
        }
        let label = label.ok_or(EncodeError::MalformedModel { node: i })?;

        let pick_child = |left: bool| -> Result<Option<NodeId>, EncodeError> {
            if i == 1 {
                return Ok(None);
            }
            let mut found = None;
            for j in 1..i {
                let v = if left {
                    pool.left(i, j)
                } else {
                    pool.right(i, j)
                };
                if model.value(v) {
                    if found.is_some() {
                        return Err(EncodeError::MalformedModel { node: i });
                    }
                    found = Some(NodeId(j));
                }
            }
            found.ok_or(EncodeError::MalformedModel { node: i }).map(Some)
        };

        let (label, left, right) = match label {
            EncLabel::Prop(p) => {
                if i > 1 {
                    // children exist in the model but are ignored
                    pick_child(true)?;
                    pick_child(false)?;
                }
                (Label::Prop(alphabet.name(p).to_string()), None, None)
            }
            EncLabel::Const(b) => {
                if i > 1 {
                    pick_child(true)?;
                    pick_child(false)?;
                }
                (Label::Const(b), None, None)
            }
            EncLabel::Op(op) if op.is_unary() => {
                let left = pick_child(true)?;
                pick_child(false)?;
                (Label::Op(op), left, None)
            }
            EncLabel::Op(op) => {
                let left = pick_child(true)?;
                let right = pick_child(false)?;
                (Label::Op(op), left, right)
            }
        };
        nodes.push(Node { label, left, right });
    }
    SyntaxDag::from_nodes(nodes).map_err(|_| EncodeError::MalformedModel { node: 1 })
}

/// A node reference inside a structural constraint. `Root` always resolves
/// to the current size bound, whatever it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRef {
    Root,
    Id(usize),
}

/// An atom of the `x`/`l`/`r` vocabulary for expert-knowledge constraints.
#[derive(Debug, Clone, PartialEq)]
pub enum StructuralAtom {
    /// `x[node, label]`
    HasLabel(NodeRef, Label),
    /// `l[node, j]`
    LeftChild(NodeRef, usize),
    /// `r[node, j]`
    RightChild(NodeRef, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuralLiteral {
    pub positive: bool,
    pub atom: StructuralAtom,
}

/// Expert knowledge injected into the search, e.g. fixing the root label or
/// banning an operator everywhere.
#[derive(Debug, Clone, PartialEq)]
pub enum StructuralConstraint {
    /// The root's label must be one of the given choices.
    RootLabelOneOf(Vec<Label>),
    /// No node may carry this label.
    ForbidLabel(Label),
    /// An arbitrary clause over structural atoms.
    Clause(Vec<StructuralLiteral>),
}

fn enc_label(label: &Label, pool: &VariablePool, alphabet: &PropositionAlphabet) -> Option<usize> {
    let enc = match label {
        Label::Prop(name) => EncLabel::Prop(alphabet.index_of(name)?),
        Label::Const(b) => EncLabel::Const(*b),
        Label::Op(op) => EncLabel::Op(*op),
    };
    pool.label_index(enc)
}

fn resolve_node(node: NodeRef, n: usize) -> Result<usize, EncodeError> {
    match node {
        NodeRef::Root => Ok(n),
        NodeRef::Id(i) if (1..=n).contains(&i) => Ok(i),
        NodeRef::Id(i) => Err(EncodeError::ConstraintOutOfRange { node: i, max: n }),
    }
}

/// Lower structural constraints to clauses over the pool's variables.
/// Atoms whose variable does not exist at the current size bound (a child
/// slot of node 1, a disabled operator, an unknown proposition) are treated
/// as constant false.
pub fn lower_constraints(
    constraints: &[StructuralConstraint],
    pool: &VariablePool,
    alphabet: &PropositionAlphabet,
) -> Result<Vec<Vec<Lit>>, EncodeError> {
    let n = pool.size_bound();
    let mut out = Vec::new();
    for constraint in constraints {
        match constraint {
            StructuralConstraint::RootLabelOneOf(labels) => {
                // alternatives that do not exist simply drop out; if none
                // are available the empty clause records unsatisfiability
                let clause: Vec<Lit> = labels
                    .iter()
                    .filter_map(|l| enc_label(l, pool, alphabet))
                    .map(|k| pos(pool.x(n, k)))
                    .collect();
                out.push(clause);
            }
            StructuralConstraint::ForbidLabel(label) => {
                if let Some(k) = enc_label(label, pool, alphabet) {
                    for i in 1..=n {
                        out.push(vec![neg(pool.x(i, k))]);
                    }
                }
            }
            StructuralConstraint::Clause(lits) => {
                let mut clause = Vec::new();
                let mut satisfied = false;
                for lit in lits {
                    let var = match &lit.atom {
                        StructuralAtom::HasLabel(node, label) => {
                            let i = resolve_node(*node, n)?;
                            enc_label(label, pool, alphabet).map(|k| pool.x(i, k))
                        }
                        StructuralAtom::LeftChild(node, j) | StructuralAtom::RightChild(node, j) => {
                            let i = resolve_node(*node, n)?;
                            if *j == 0 || *j > n {
                                return Err(EncodeError::ConstraintOutOfRange { node: *j, max: n });
                            }
                            let exists = i >= 2 && *j < i;
                            let left = matches!(lit.atom, StructuralAtom::LeftChild(..));
                            exists.then(|| {
                                if left {
                                    pool.left(i, *j)
                                } else {
                                    pool.right(i, *j)
                                }
                            })
                        }
                    };
                    match var {
                        Some(v) => clause.push(Lit::with_sign(v, lit.positive)),
                        None if lit.positive => {}
                        None => satisfied = true,
                    }
                }
                if !satisfied {
                    out.push(clause);
                }
            }
        }
    }
    Ok(out)
}

/// Unit clauses fixing the `x`/`l`/`r` variables to a concrete formula.
/// The DAG must have exactly the pool's size bound many nodes. Child slots
/// the formula ignores (right child of unary nodes, both slots of atomic
/// nodes) are left unconstrained.
pub fn pin_formula_clauses(
    dag: &SyntaxDag,
    pool: &VariablePool,
    alphabet: &PropositionAlphabet,
) -> Result<Vec<Vec<Lit>>, EncodeError> {
    assert_eq!(dag.size(), pool.size_bound(), "formula size must match the bound");
    let mut out = Vec::new();
    for (id, node) in dag.iter() {
        let i = id.get();
        let k = enc_label(&node.label, pool, alphabet)
            .ok_or(EncodeError::ConstraintOutOfRange { node: i, max: pool.size_bound() })?;
        out.push(vec![pos(pool.x(i, k))]);
        if let Some(left) = node.left {
            out.push(vec![pos(pool.left(i, left.get()))]);
        }
        if let Some(right) = node.right {
            out.push(vec![pos(pool.right(i, right.get()))]);
        }
    }
    Ok(out)
}
