//! LTL formulas represented as syntax DAGs.
//!
//! A syntax DAG is a syntax tree in which identical subformulas are shared,
//! so the node count equals the number of distinct subformulas. Nodes carry
//! identifiers `1..=n` such that every child identifier is smaller than its
//! parent's and the root is node `n`; node 1 is always atomic.

use std::collections::HashMap;
use std::fmt;

use crate::alphabet::Operator;
use crate::error::SyntaxError;

/// 1-based node identifier inside a [`SyntaxDag`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn get(self) -> usize {
        self.0
    }
}

/// A node label: an atomic proposition, a constant, or an operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Prop(String),
    Const(bool),
    Op(Operator),
}

impl Label {
    /// Number of children this label requires: 0, 1, or 2.
    pub fn arity(&self) -> usize {
        match self {
            Label::Prop(_) | Label::Const(_) => 0,
            Label::Op(op) if op.is_unary() => 1,
            Label::Op(_) => 2,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Prop(name) => f.write_str(name),
            Label::Const(true) => f.write_str("true"),
            Label::Const(false) => f.write_str("false"),
            Label::Op(op) => write!(f, "{op}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: Label,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
}

/// An LTL formula as a syntax DAG. The root is the node with the largest
/// identifier; nodes a solver model leaves unreachable are retained, so
/// [`SyntaxDag::size`] is always the stored node count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxDag {
    nodes: Vec<Node>,
}

impl SyntaxDag {
    /// Build a DAG from nodes listed in identifier order (`nodes[k]` becomes
    /// node `k + 1`), checking the identifier-scheme invariants.
    pub fn from_nodes(nodes: Vec<Node>) -> Result<Self, SyntaxError> {
        if nodes.is_empty() {
            return Err(SyntaxError::Empty);
        }
        if nodes[0].label.arity() != 0 {
            return Err(SyntaxError::FirstNodeNotAtomic);
        }
        for (k, node) in nodes.iter().enumerate() {
            let id = k + 1;
            let expect = node.label.arity();
            let have = match (node.left, node.right) {
                (None, None) => 0,
                (Some(_), None) => 1,
                (Some(_), Some(_)) => 2,
                (None, Some(_)) => return Err(SyntaxError::ArityMismatch { node: id }),
            };
            if have != expect {
                return Err(SyntaxError::ArityMismatch { node: id });
            }
            for child in [node.left, node.right].into_iter().flatten() {
                if child.get() == 0 || child.get() >= id {
                    return Err(SyntaxError::ChildNotSmaller {
                        parent: id,
                        child: child.get(),
                    });
                }
            }
        }
        Ok(SyntaxDag { nodes })
    }

    /// Node count, i.e. the size of the formula.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> NodeId {
        NodeId(self.nodes.len())
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.get() - 1]
    }

    /// Nodes paired with their identifiers, in identifier order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().map(|(k, n)| (NodeId(k + 1), n))
    }

    /// Distinct proposition names used anywhere in the DAG.
    pub fn propositions(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for node in &self.nodes {
            if let Label::Prop(name) = &node.label {
                if !seen.contains(&name.as_str()) {
                    seen.push(name.as_str());
                }
            }
        }
        seen
    }

    fn render_node(&self, id: NodeId, out: &mut String) {
        let node = self.node(id);
        match &node.label {
            Label::Prop(_) | Label::Const(_) => {
                out.push_str(&node.label.to_string());
            }
            Label::Op(op) if op.is_unary() => {
                out.push('(');
                out.push_str(op.symbol());
                out.push(' ');
                self.render_node(node.left.expect("unary node has left child"), out);
                out.push(')');
            }
            Label::Op(op) => {
                out.push('(');
                self.render_node(node.left.expect("binary node has left child"), out);
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                self.render_node(node.right.expect("binary node has right child"), out);
                out.push(')');
            }
        }
    }

    /// Deterministic fully parenthesized text. Round-trips through
    /// [`crate::parser::parse`] and serves as the canonical form when
    /// comparing formulas for distinctness.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_node(self.root(), &mut out);
        out
    }
}

impl fmt::Display for SyntaxDag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Incremental construction of syntax DAGs with maximal sharing.
///
/// Identical subterms are hash-consed to the same node, and identifiers are
/// handed out in creation order, which automatically satisfies the
/// child-below-parent numbering. [`DagBuilder::finish`] drops nodes that are
/// not reachable from the requested root and renumbers.
#[derive(Debug, Default, Clone)]
pub struct DagBuilder {
    nodes: Vec<Node>,
    memo: HashMap<(Label, Option<NodeId>, Option<NodeId>), NodeId>,
}

impl DagBuilder {
    pub fn new() -> Self {
        DagBuilder::default()
    }

    fn intern(&mut self, label: Label, left: Option<NodeId>, right: Option<NodeId>) -> NodeId {
        let key = (label.clone(), left, right);
        if let Some(&id) = self.memo.get(&key) {
            return id;
        }
        self.nodes.push(Node { label, left, right });
        let id = NodeId(self.nodes.len());
        self.memo.insert(key, id);
        id
    }

    pub fn prop(&mut self, name: impl Into<String>) -> NodeId {
        self.intern(Label::Prop(name.into()), None, None)
    }

    pub fn constant(&mut self, value: bool) -> NodeId {
        self.intern(Label::Const(value), None, None)
    }

    pub fn unary(&mut self, op: Operator, child: NodeId) -> NodeId {
        debug_assert!(op.is_unary());
        self.intern(Label::Op(op), Some(child), None)
    }

    pub fn binary(&mut self, op: Operator, left: NodeId, right: NodeId) -> NodeId {
        debug_assert!(op.is_binary());
        self.intern(Label::Op(op), Some(left), Some(right))
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.get() - 1]
    }

    /// Intern a whole existing DAG into this builder, returning its root.
    /// Shared subformulas across several imported DAGs end up shared here.
    pub fn import(&mut self, dag: &SyntaxDag) -> NodeId {
        let mut remap = vec![NodeId(0); dag.size()];
        for (id, node) in dag.iter() {
            let left = node.left.map(|c| remap[c.get() - 1]);
            let right = node.right.map(|c| remap[c.get() - 1]);
            remap[id.get() - 1] = self.intern(node.label.clone(), left, right);
        }
        remap[dag.root().get() - 1]
    }

    /// Extract the formula rooted at `root`, keeping only reachable nodes.
    pub fn finish(&self, root: NodeId) -> SyntaxDag {
        let mut reachable = vec![false; self.nodes.len()];
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            let k = id.get() - 1;
            if reachable[k] {
                continue;
            }
            reachable[k] = true;
            let node = &self.nodes[k];
            stack.extend([node.left, node.right].into_iter().flatten());
        }
        // Old identifiers are already topologically ordered, so keeping the
        // reachable ones in ascending order preserves child < parent.
        let mut remap = vec![NodeId(0); self.nodes.len()];
        let mut nodes = Vec::new();
        for (k, node) in self.nodes.iter().enumerate() {
            if reachable[k] {
                nodes.push(Node {
                    label: node.label.clone(),
                    left: node.left.map(|c| remap[c.get() - 1]),
                    right: node.right.map(|c| remap[c.get() - 1]),
                });
                remap[k] = NodeId(nodes.len());
            }
        }
        SyntaxDag::from_nodes(nodes).expect("builder output satisfies DAG invariants")
    }
}
