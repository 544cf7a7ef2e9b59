//! Proposition alphabets, operator sets, and node labels.

use std::collections::HashMap;
use std::fmt;

use crate::error::AlphabetError;

/// The eight LTL operators available to the learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    Not,
    Or,
    And,
    Implies,
    Next,
    Until,
    Finally,
    Globally,
}

impl Operator {
    pub const ALL: [Operator; 8] = [
        Operator::Not,
        Operator::Or,
        Operator::And,
        Operator::Implies,
        Operator::Next,
        Operator::Until,
        Operator::Finally,
        Operator::Globally,
    ];

    pub fn is_unary(self) -> bool {
        matches!(
            self,
            Operator::Not | Operator::Next | Operator::Finally | Operator::Globally
        )
    }

    pub fn is_binary(self) -> bool {
        !self.is_unary()
    }

    /// The concrete spelling used in formula text and `.ops` blocks.
    pub fn symbol(self) -> &'static str {
        match self {
            Operator::Not => "!",
            Operator::Or => "|",
            Operator::And => "&",
            Operator::Implies => "->",
            Operator::Next => "X",
            Operator::Until => "U",
            Operator::Finally => "F",
            Operator::Globally => "G",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Operator> {
        match s {
            "!" => Some(Operator::Not),
            "|" => Some(Operator::Or),
            "&" => Some(Operator::And),
            "->" => Some(Operator::Implies),
            "X" => Some(Operator::Next),
            "U" => Some(Operator::Until),
            "F" => Some(Operator::Finally),
            "G" => Some(Operator::Globally),
            _ => None,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// The subset of operators the learner may use, plus whether the constants
/// `true`/`false` are available as 0-ary node labels.
///
/// Constants are off by default; they can be enabled through the `.ops`
/// block of a sample file by listing `true,false`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSet {
    enabled: Vec<Operator>,
    constants: bool,
}

impl OperatorSet {
    /// All eight operators, no constants. The default for learning.
    pub fn full() -> Self {
        OperatorSet {
            enabled: Operator::ALL.to_vec(),
            constants: false,
        }
    }

    /// A specific subset of operators. Must be nonempty.
    pub fn new(ops: &[Operator]) -> Result<Self, AlphabetError> {
        if ops.is_empty() {
            return Err(AlphabetError::EmptyOperatorSet);
        }
        let mut enabled: Vec<Operator> = Vec::new();
        for op in Operator::ALL {
            if ops.contains(&op) && !enabled.contains(&op) {
                enabled.push(op);
            }
        }
        Ok(OperatorSet {
            enabled,
            constants: false,
        })
    }

    /// Parse a comma-separated `.ops` list such as `!,|,&,->,X,U,F,G` or
    /// `G,!,true,false`.
    pub fn parse(text: &str) -> Result<Self, AlphabetError> {
        let mut ops = Vec::new();
        let mut constants = false;
        for tok in text.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            if tok == "true" || tok == "false" {
                constants = true;
                continue;
            }
            match Operator::from_symbol(tok) {
                Some(op) => ops.push(op),
                None => return Err(AlphabetError::UnknownOperator(tok.to_string())),
            }
        }
        let mut set = OperatorSet::new(&ops)?;
        set.constants = constants;
        Ok(set)
    }

    pub fn with_constants(mut self, constants: bool) -> Self {
        self.constants = constants;
        self
    }

    /// Enabled operators in a fixed canonical order.
    pub fn operators(&self) -> &[Operator] {
        &self.enabled
    }

    pub fn contains(&self, op: Operator) -> bool {
        self.enabled.contains(&op)
    }

    pub fn constants_enabled(&self) -> bool {
        self.constants
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<&str> = self.enabled.iter().map(|op| op.symbol()).collect();
        if self.constants {
            parts.push("true");
            parts.push("false");
        }
        parts.join(",")
    }
}

impl Default for OperatorSet {
    fn default() -> Self {
        OperatorSet::full()
    }
}

/// Names reserved by the formula grammar; propositions may not use them.
const RESERVED: [&str; 6] = ["X", "U", "F", "G", "true", "false"];

fn valid_proposition_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !RESERVED.contains(&name)
}

/// An ordered set of atomic proposition names. The order is significant: it
/// defines bit positions in trace files and feature vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropositionAlphabet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl PropositionAlphabet {
    pub fn new<I, S>(names: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(AlphabetError::EmptyAlphabet);
        }
        if names.len() > 64 {
            return Err(AlphabetError::TooManyPropositions(names.len()));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if !valid_proposition_name(name) {
                return Err(AlphabetError::InvalidPropositionName(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(AlphabetError::DuplicateProposition(name.clone()));
            }
        }
        Ok(PropositionAlphabet { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one proposition
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}
