//! Satisfiability backends: an embedded CDCL solver and an external
//! DIMACS-speaking process.
//!
//! Every SAT verdict is certified by re-checking the model clause by clause
//! before it is returned, so a buggy bridge can never smuggle in a bogus
//! model. UNSAT is trusted from the solver. Timeouts are a distinct verdict
//! and never conflated with UNSAT.

mod cdcl;

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crate::cnf::{CnfInstance, Model};
use crate::error::SolverError;

use cdcl::{Cdcl, CdclOutcome};

/// Result of a solver run.
#[derive(Debug, Clone)]
pub enum SolverVerdict {
    Sat(Model),
    Unsat,
    Timeout(Duration),
}

impl SolverVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolverVerdict::Sat(_))
    }
}

/// Which solver executes the instances.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SolverBackend {
    /// The built-in CDCL solver. Deterministic and needs no setup.
    #[default]
    Embedded,
    /// An external process invoked as `<path> <cnf-file>`, answering on
    /// stdout with the usual `s SATISFIABLE` / `v ...` lines.
    External(PathBuf),
}

impl SolverBackend {
    /// Decide satisfiability of `instance`, stopping at `timeout` if given.
    pub fn solve(
        &self,
        instance: &CnfInstance,
        timeout: Option<Duration>,
    ) -> Result<SolverVerdict, SolverError> {
        let verdict = match self {
            SolverBackend::Embedded => match Cdcl::new(instance).solve(timeout) {
                CdclOutcome::Sat(model) => SolverVerdict::Sat(model),
                CdclOutcome::Unsat => SolverVerdict::Unsat,
                CdclOutcome::Timeout(d) => SolverVerdict::Timeout(d),
            },
            SolverBackend::External(path) => solve_external(path, instance, timeout)?,
        };
        if let SolverVerdict::Sat(model) = &verdict {
            if !instance.check_model(model) {
                return Err(SolverError::BadModel);
            }
        }
        Ok(verdict)
    }
}

fn solve_external(
    path: &PathBuf,
    instance: &CnfInstance,
    timeout: Option<Duration>,
) -> Result<SolverVerdict, SolverError> {
    let dir = tempfile::tempdir()?;
    let cnf_path = dir.path().join("instance.cnf");
    let mut file = std::fs::File::create(&cnf_path)?;
    instance.write_dimacs(&mut file)?;
    file.flush()?;

    let start = Instant::now();
    let mut child = Command::new(path)
        .arg(&cnf_path)
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| SolverError::Launch {
            command: path.display().to_string(),
            source,
        })?;

    // poll so a timeout can kill the process
    loop {
        match child.try_wait()? {
            Some(_) => break,
            None => {
                if let Some(budget) = timeout {
                    if start.elapsed() >= budget {
                        let _ = child.kill();
                        let _ = child.wait();
                        return Ok(SolverVerdict::Timeout(start.elapsed()));
                    }
                }
                std::thread::sleep(Duration::from_millis(2));
            }
        }
    }
    let output = child.wait_with_output()?;
    drop(dir);
    let stdout = String::from_utf8_lossy(&output.stdout);
    parse_solver_output(&stdout, instance.num_vars())
}

fn parse_solver_output(stdout: &str, num_vars: u32) -> Result<SolverVerdict, SolverError> {
    let mut answer: Option<bool> = None;
    let mut values = vec![false; num_vars as usize + 1];
    let mut assigned = vec![false; num_vars as usize + 1];
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            match rest.trim() {
                "SATISFIABLE" => answer = Some(true),
                "UNSATISFIABLE" => answer = Some(false),
                other => {
                    return Err(SolverError::Protocol(format!(
                        "unrecognized status line {other:?}"
                    )))
                }
            }
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| SolverError::Protocol(format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    continue;
                }
                let var = lit.unsigned_abs() as usize;
                if var > num_vars as usize {
                    return Err(SolverError::Protocol(format!(
                        "model literal {lit} beyond variable count {num_vars}"
                    )));
                }
                values[var] = lit > 0;
                assigned[var] = true;
            }
        }
    }
    match answer {
        Some(true) => {
            // unassigned variables default to false; the model is checked
            // against the instance by the caller anyway
            let _ = assigned;
            Ok(SolverVerdict::Sat(Model::new(values)))
        }
        Some(false) => Ok(SolverVerdict::Unsat),
        None => Err(SolverError::Protocol(
            "solver produced no 's' status line".into(),
        )),
    }
}
