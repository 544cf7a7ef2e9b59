//! The exact learner: grow the size bound until the encoding becomes
//! satisfiable, then read the formula out of the model.
//!
//! Sizes are probed in order 1, 2, 3, …, so the first satisfiable bound is
//! the minimal size of any consistent formula. Every decoded formula is
//! re-checked against the sample with the evaluator before it is returned;
//! an inconsistency there means the encoding is wrong and is reported as an
//! internal invariant failure rather than papered over.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::alphabet::OperatorSet;
use crate::encoding::{SampleEncoding, StructuralConstraint};
use crate::error::LearnError;
use crate::eval::is_consistent;
use crate::solver::{SolverBackend, SolverVerdict};
use crate::syntax::SyntaxDag;
use crate::word::Sample;

/// Knobs for the exact learner.
#[derive(Debug, Clone)]
pub struct LearnerConfig {
    /// Largest size bound to try before giving up.
    pub max_size: usize,
    /// Budget for a single solver call.
    pub solve_timeout: Option<Duration>,
    /// Budget for the whole learning run.
    pub total_timeout: Option<Duration>,
    /// Operators the learned formula may use.
    pub ops: OperatorSet,
    /// How many distinct formulas of the minimal size to return.
    pub count: usize,
    /// Expert knowledge over the structural variables.
    pub constraints: Vec<StructuralConstraint>,
    /// Where to solve.
    pub backend: SolverBackend,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            max_size: 30,
            solve_timeout: None,
            total_timeout: None,
            ops: OperatorSet::full(),
            count: 1,
            constraints: Vec::new(),
            backend: SolverBackend::Embedded,
        }
    }
}

/// One record per probed size bound.
#[derive(Debug, Clone, Serialize)]
pub struct SolveStats {
    pub n: usize,
    pub primary_variables: usize,
    pub variables: usize,
    pub clauses: usize,
    pub seconds: f64,
    pub verdict: String,
}

/// Outcome of a successful learning run: one or more formulas, all of the
/// same minimal size, plus the per-size solver statistics.
#[derive(Debug, Clone)]
pub struct LearnResult {
    pub formulas: Vec<SyntaxDag>,
    pub size: usize,
    pub stats: Vec<SolveStats>,
}

/// Learn one minimal consistent formula.
pub fn learn_minimal(sample: &Sample, config: &LearnerConfig) -> Result<LearnResult, LearnError> {
    let mut single = config.clone();
    single.count = 1;
    learn_observed(sample, &single, |_| {})
}

/// Learn up to `config.count` distinct minimal consistent formulas.
/// Distinctness is judged by canonical rendering; models that decode to a
/// formula already seen (identifier permutations, unreachable spare nodes)
/// are blocked and skipped.
pub fn learn_distinct(sample: &Sample, config: &LearnerConfig) -> Result<LearnResult, LearnError> {
    learn_observed(sample, config, |_| {})
}

/// Like [`learn_distinct`], reporting each size bound's statistics as soon
/// as the solver returns, which the CLI uses for streaming output.
pub fn learn_observed(
    sample: &Sample,
    config: &LearnerConfig,
    mut on_stats: impl FnMut(&SolveStats),
) -> Result<LearnResult, LearnError> {
    assert!(config.max_size >= 1, "max_size must be at least 1");
    assert!(config.count >= 1, "count must be at least 1");
    let start = Instant::now();
    let deadline = config.total_timeout.map(|d| start + d);
    let mut stats: Vec<SolveStats> = Vec::new();

    for n in 1..=config.max_size {
        let mut encoding = SampleEncoding::build(n, sample, &config.ops);
        encoding.apply_structural_constraints(&config.constraints)?;
        let instance = encoding.to_instance(false);
        let clauses = instance.num_clauses();
        let variables = instance.num_vars() as usize;
        let primary = encoding.primary_var_count();

        let budget = remaining_budget(config.solve_timeout, deadline, n)?;
        let solve_start = Instant::now();
        let verdict = config.backend.solve(&instance, budget)?;
        let seconds = solve_start.elapsed().as_secs_f64();

        let record = |verdict: &str| SolveStats {
            n,
            primary_variables: primary,
            variables,
            clauses,
            seconds,
            verdict: verdict.to_string(),
        };
        match verdict {
            SolverVerdict::Unsat => {
                let s = record("unsat");
                on_stats(&s);
                stats.push(s);
            }
            SolverVerdict::Timeout(_) => {
                let s = record("timeout");
                on_stats(&s);
                return Err(LearnError::Timeout {
                    n,
                    last_completed: n - 1,
                });
            }
            SolverVerdict::Sat(model) => {
                let s = record("sat");
                on_stats(&s);
                stats.push(s);
                let formulas =
                    enumerate_distinct(sample, config, encoding, model, deadline, n)?;
                return Ok(LearnResult {
                    formulas,
                    size: n,
                    stats,
                });
            }
        }
    }
    Err(LearnError::SizeBudgetExhausted {
        max_size: config.max_size,
    })
}

fn remaining_budget(
    per_call: Option<Duration>,
    deadline: Option<Instant>,
    n: usize,
) -> Result<Option<Duration>, LearnError> {
    let total_left = match deadline {
        None => None,
        Some(d) => {
            let now = Instant::now();
            if now >= d {
                return Err(LearnError::Timeout {
                    n,
                    last_completed: n - 1,
                });
            }
            Some(d - now)
        }
    };
    Ok(match (per_call, total_left) {
        (None, None) => None,
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(b),
        (Some(a), Some(b)) => Some(a.min(b)),
    })
}

/// Decode the first model, then keep blocking full structural assignments
/// and re-solving until enough canonically distinct formulas are collected
/// or none remain.
fn enumerate_distinct(
    sample: &Sample,
    config: &LearnerConfig,
    mut encoding: SampleEncoding,
    first_model: crate::cnf::Model,
    deadline: Option<Instant>,
    n: usize,
) -> Result<Vec<SyntaxDag>, LearnError> {
    let mut formulas: Vec<SyntaxDag> = Vec::new();
    let mut renders: Vec<String> = Vec::new();
    let mut model = first_model;

    loop {
        let dag = encoding.decode(&model)?;
        if !is_consistent(&dag, sample)? {
            return Err(LearnError::Invariant(format!(
                "decoded formula {} is not consistent with the sample",
                dag.render()
            )));
        }
        let render = dag.render();
        if !renders.contains(&render) {
            renders.push(render);
            formulas.push(dag);
        }
        if formulas.len() >= config.count {
            return Ok(formulas);
        }

        encoding.block_model(&model);
        let budget = remaining_budget(config.solve_timeout, deadline, n)?;
        match config.backend.solve(&encoding.to_instance(false), budget)? {
            SolverVerdict::Sat(next) => model = next,
            SolverVerdict::Unsat => return Ok(formulas),
            SolverVerdict::Timeout(_) => {
                return Err(LearnError::Timeout {
                    n,
                    last_completed: n,
                })
            }
        }
    }
}
