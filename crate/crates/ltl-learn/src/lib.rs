//! Learning linear temporal logic formulas from example traces.
//!
//! Given a sample of positive and negative ultimately periodic words, this
//! crate learns LTL formulas that satisfy every positive example and violate
//! every negative one. Two learners are provided:
//!
//! - an exact learner that encodes the existence of a consistent formula of
//!   size `n` as a propositional satisfiability problem and grows `n` until
//!   the instance becomes satisfiable, yielding a minimal consistent formula;
//! - a decision-tree learner that runs the exact learner on small subsets of
//!   the sample to obtain LTL primitives and combines them with a decision
//!   tree, trading minimality for speed on larger samples.

pub mod alphabet;
pub mod benchgen;
pub mod cnf;
pub mod dt;
pub mod encoding;
pub mod error;
pub mod eval;
pub mod exact;
pub mod oracle;
pub mod parser;
pub mod solver;
pub mod syntax;
pub mod trace_io;
pub mod word;

pub use alphabet::{Operator, OperatorSet, PropositionAlphabet};
pub use eval::{evaluate, is_consistent, normalize_position};
pub use parser::parse;
pub use syntax::{DagBuilder, Label, NodeId, SyntaxDag};
pub use word::{LassoWord, Sample, Symbol};
