//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet must contain at least one proposition")]
    EmptyAlphabet,
    #[error("alphabet has {0} propositions, at most 64 are supported")]
    TooManyPropositions(usize),
    #[error("invalid proposition name {0:?}")]
    InvalidPropositionName(String),
    #[error("duplicate proposition {0:?}")]
    DuplicateProposition(String),
    #[error("operator set must be nonempty")]
    EmptyOperatorSet,
    #[error("unknown operator {0:?}")]
    UnknownOperator(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("syntax error at column {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("node {parent} has child {child} with a non-smaller identifier")]
    ChildNotSmaller { parent: usize, child: usize },
    #[error("node 1 must carry a proposition or constant, found an operator")]
    FirstNodeNotAtomic,
    #[error("node {node} has an arity mismatch for its label")]
    ArityMismatch { node: usize },
    #[error("formula has no nodes")]
    Empty,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("period of a lasso word must be nonempty")]
    EmptyPeriod,
    #[error("sample is contradictory: a word appears as both positive and negative")]
    ContradictorySample,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown proposition {0:?} for this alphabet")]
    UnknownProposition(String),
    #[error("evaluation position {position} is outside the stored word (length {length})")]
    PositionOutOfRange { position: usize, length: usize },
}

#[derive(Debug, Error)]
pub enum TraceIoError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: bit vector has {found} bits, alphabet has {expected}")]
    BitVectorLength {
        line: usize,
        found: usize,
        expected: usize,
    },
    #[error("line {line}: empty period")]
    EmptyPeriod { line: usize },
    #[error("line {line}: word already occurs in the other block, sample is contradictory")]
    Contradictory { line: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("failed to launch external solver {command:?}: {source}")]
    Launch {
        command: String,
        source: std::io::Error,
    },
    #[error("external solver protocol error: {0}")]
    Protocol(String),
    #[error("i/o error talking to external solver: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver returned a model that does not satisfy the instance")]
    BadModel,
}

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("model violates an exactly-one constraint at node {node}")]
    MalformedModel { node: usize },
    #[error("structural constraint references node {node}, valid range is 1..={max}")]
    ConstraintOutOfRange { node: usize, max: usize },
    #[error("position arguments ({t}, {t2}) lie outside the periodic part [{lo}, {hi})")]
    OutsidePeriodicPart {
        t: usize,
        t2: usize,
        lo: usize,
        hi: usize,
    },
}

#[derive(Debug, Error)]
pub enum LearnError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("no consistent formula of size <= {max_size} exists for this sample")]
    SizeBudgetExhausted { max_size: usize },
    #[error("solver timed out at size {n}; last completed size was {last_completed}")]
    Timeout { n: usize, last_completed: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("pattern uses proposition {0:?} which is missing from the alphabet")]
    MissingProposition(String),
    #[error(
        "gave up after {draws} draws: pattern classified {positives} positive / {negatives} \
         negative words, needed {need_pos}/{need_neg}"
    )]
    Starved {
        draws: usize,
        positives: usize,
        negatives: usize,
        need_pos: usize,
        need_neg: usize,
    },
}
