//! A compact conflict-driven clause-learning SAT solver.
//!
//! Two watched literals, first-UIP clause learning with local minimization,
//! VSIDS branching with phase saving, Luby restarts, and LBD-based learnt
//! clause reduction. Branching is fully deterministic: ties in activity are
//! broken by variable index and no randomness is used anywhere.

use std::time::{Duration, Instant};

use crate::cnf::{CnfInstance, Lit, Model};

/// Internal literal: `var * 2 + sign`, variables 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ILit(u32);

impl ILit {
    fn new(var: usize, negative: bool) -> ILit {
        ILit((var as u32) << 1 | negative as u32)
    }

    fn from_external(lit: Lit) -> ILit {
        ILit::new((lit.var() - 1) as usize, !lit.is_positive())
    }

    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    fn is_negative(self) -> bool {
        self.0 & 1 == 1
    }

    fn negated(self) -> ILit {
        ILit(self.0 ^ 1)
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LBool {
    True,
    False,
    Undef,
}

#[derive(Debug)]
struct Clause {
    lits: Vec<ILit>,
    learnt: bool,
    lbd: u32,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    clause: u32,
    blocker: ILit,
}

const NO_REASON: u32 = u32::MAX;

/// Binary max-heap over variable activities with index positions, so
/// membership tests and sift-ups after activity bumps are O(log n).
#[derive(Debug, Default)]
struct VarHeap {
    heap: Vec<u32>,
    positions: Vec<i32>,
}

impl VarHeap {
    fn with_vars(n: usize) -> VarHeap {
        let mut h = VarHeap {
            heap: (0..n as u32).collect(),
            positions: (0..n as i32).collect(),
        };
        // all activities start equal, initial vector is already a heap
        debug_assert_eq!(h.heap.len(), h.positions.len());
        for i in 0..n {
            h.positions[i] = i as i32;
        }
        h
    }

    fn better(a: u32, b: u32, activity: &[f64]) -> bool {
        let (aa, ab) = (activity[a as usize], activity[b as usize]);
        aa > ab || (aa == ab && a < b)
    }

    fn contains(&self, var: usize) -> bool {
        self.positions[var] >= 0
    }

    fn sift_up(&mut self, mut pos: usize, activity: &[f64]) {
        let item = self.heap[pos];
        while pos > 0 {
            let parent = (pos - 1) / 2;
            if Self::better(item, self.heap[parent], activity) {
                self.heap[pos] = self.heap[parent];
                self.positions[self.heap[pos] as usize] = pos as i32;
                pos = parent;
            } else {
                break;
            }
        }
        self.heap[pos] = item;
        self.positions[item as usize] = pos as i32;
    }

    fn sift_down(&mut self, mut pos: usize, activity: &[f64]) {
        let item = self.heap[pos];
        loop {
            let left = 2 * pos + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len()
                && Self::better(self.heap[right], self.heap[left], activity)
            {
                right
            } else {
                left
            };
            if Self::better(self.heap[child], item, activity) {
                self.heap[pos] = self.heap[child];
                self.positions[self.heap[pos] as usize] = pos as i32;
                pos = child;
            } else {
                break;
            }
        }
        self.heap[pos] = item;
        self.positions[item as usize] = pos as i32;
    }

    fn insert(&mut self, var: usize, activity: &[f64]) {
        if self.contains(var) {
            return;
        }
        self.heap.push(var as u32);
        self.positions[var] = (self.heap.len() - 1) as i32;
        self.sift_up(self.heap.len() - 1, activity);
    }

    fn bumped(&mut self, var: usize, activity: &[f64]) {
        if self.contains(var) {
            self.sift_up(self.positions[var] as usize, activity);
        }
    }

    fn pop(&mut self, activity: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        self.positions[top as usize] = -1;
        let last = self.heap.pop().unwrap();
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.positions[last as usize] = 0;
            self.sift_down(0, activity);
        }
        Some(top)
    }
}

/// Outcome of a [`Cdcl::solve`] run.
#[derive(Debug)]
pub enum CdclOutcome {
    Sat(Model),
    Unsat,
    Timeout(Duration),
}

pub struct Cdcl {
    num_vars: usize,
    ok: bool,
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watcher>>,
    assign: Vec<LBool>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<ILit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    saved_phase: Vec<bool>,
    seen: Vec<bool>,
    num_learnts: usize,
    max_learnts: usize,
    conflicts: u64,
    propagations: u64,
}

impl Cdcl {
    pub fn new(instance: &CnfInstance) -> Cdcl {
        let n = instance.num_vars() as usize;
        let mut solver = Cdcl {
            num_vars: n,
            ok: true,
            clauses: Vec::with_capacity(instance.num_clauses()),
            watches: vec![Vec::new(); 2 * n],
            assign: vec![LBool::Undef; n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n],
            var_inc: 1.0,
            heap: VarHeap::with_vars(n),
            saved_phase: vec![false; n],
            seen: vec![false; n],
            num_learnts: 0,
            max_learnts: 0,
            conflicts: 0,
            propagations: 0,
        };
        for clause in instance.clauses() {
            let lits: Vec<ILit> = clause.iter().map(|&l| ILit::from_external(l)).collect();
            solver.add_input_clause(lits);
            if !solver.ok {
                break;
            }
        }
        solver.max_learnts = (solver.clauses.len() / 3).max(4000);
        solver
    }

    fn value(&self, lit: ILit) -> LBool {
        match self.assign[lit.var()] {
            LBool::Undef => LBool::Undef,
            LBool::True => {
                if lit.is_negative() {
                    LBool::False
                } else {
                    LBool::True
                }
            }
            LBool::False => {
                if lit.is_negative() {
                    LBool::True
                } else {
                    LBool::False
                }
            }
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, lit: ILit, reason: u32) {
        debug_assert_eq!(self.value(lit), LBool::Undef);
        let var = lit.var();
        self.assign[var] = if lit.is_negative() {
            LBool::False
        } else {
            LBool::True
        };
        self.level[var] = self.decision_level();
        self.reason[var] = reason;
        self.trail.push(lit);
    }

    /// Add an input clause at level 0, simplifying against the current
    /// root-level assignment.
    fn add_input_clause(&mut self, mut lits: Vec<ILit>) {
        lits.sort_by_key(|l| l.0);
        lits.dedup();
        // drop tautologies and falsified literals
        for pair in lits.windows(2) {
            if pair[0].var() == pair[1].var() {
                return; // l and ¬l in one clause
            }
        }
        lits.retain(|&l| self.value(l) != LBool::False);
        if lits.iter().any(|&l| self.value(l) == LBool::True) {
            return;
        }
        match lits.len() {
            0 => self.ok = false,
            1 => self.enqueue(lits[0], NO_REASON),
            _ => {
                let idx = self.clauses.len() as u32;
                self.attach(idx, lits[0], lits[1]);
                self.clauses.push(Clause {
                    lits,
                    learnt: false,
                    lbd: 0,
                });
            }
        }
    }

    fn attach(&mut self, clause: u32, l0: ILit, l1: ILit) {
        self.watches[l0.index()].push(Watcher {
            clause,
            blocker: l1,
        });
        self.watches[l1.index()].push(Watcher {
            clause,
            blocker: l0,
        });
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.propagations += 1;
            let false_lit = p.negated();
            let mut ws = std::mem::take(&mut self.watches[false_lit.index()]);
            let mut kept = Vec::with_capacity(ws.len());
            let mut conflict = None;

            let mut it = ws.drain(..);
            for w in it.by_ref() {
                if self.value(w.blocker) == LBool::True {
                    kept.push(w);
                    continue;
                }
                let ci = w.clause as usize;
                // make sure the false literal is at position 1
                if self.clauses[ci].lits[0] == false_lit {
                    self.clauses[ci].lits.swap(0, 1);
                }
                let first = self.clauses[ci].lits[0];
                if first != w.blocker && self.value(first) == LBool::True {
                    kept.push(Watcher {
                        clause: w.clause,
                        blocker: first,
                    });
                    continue;
                }
                // look for a new literal to watch
                let mut moved = false;
                for k in 2..self.clauses[ci].lits.len() {
                    if self.value(self.clauses[ci].lits[k]) != LBool::False {
                        self.clauses[ci].lits.swap(1, k);
                        let new_watch = self.clauses[ci].lits[1];
                        self.watches[new_watch.index()].push(Watcher {
                            clause: w.clause,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                // clause is unit or conflicting
                kept.push(Watcher {
                    clause: w.clause,
                    blocker: first,
                });
                if self.value(first) == LBool::False {
                    conflict = Some(w.clause);
                    self.qhead = self.trail.len();
                    break;
                }
                self.enqueue(first, w.clause);
            }
            kept.extend(it);
            drop(ws);
            self.watches[false_lit.index()] = kept;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, var: usize) {
        self.activity[var] += self.var_inc;
        if self.activity[var] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(var, &self.activity);
    }

    fn analyze(&mut self, confl: u32) -> (Vec<ILit>, u32) {
        let mut learnt: Vec<ILit> = vec![ILit(0)]; // slot for the asserting literal
        let mut counter = 0usize;
        let mut clause = confl as usize;
        let mut index = self.trail.len();
        let mut resolved: Option<ILit> = None;
        let current = self.decision_level();

        loop {
            for k in 0..self.clauses[clause].lits.len() {
                let q = self.clauses[clause].lits[k];
                if Some(q) == resolved {
                    continue;
                }
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            // next literal on the trail that participates in the conflict
            loop {
                index -= 1;
                if self.seen[self.trail[index].var()] {
                    break;
                }
            }
            let p = self.trail[index];
            self.seen[p.var()] = false;
            counter -= 1;
            if counter == 0 {
                learnt[0] = p.negated();
                break;
            }
            clause = self.reason[p.var()] as usize;
            resolved = Some(p);
        }

        // local minimization: drop literals implied by the rest
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(k, &l)| k == 0 || !self.literal_redundant(l))
            .collect();
        let mut minimized = Vec::with_capacity(learnt.len());
        for (k, &l) in learnt.iter().enumerate() {
            if keep[k] {
                minimized.push(l);
            }
        }

        // clear the marks of every collected literal, dropped ones included
        for &l in &learnt {
            self.seen[l.var()] = false;
        }

        // place a literal of the second-highest level at position 1
        let backtrack = if minimized.len() == 1 {
            0
        } else {
            let mut max_k = 1;
            for k in 2..minimized.len() {
                if self.level[minimized[k].var()] > self.level[minimized[max_k].var()] {
                    max_k = k;
                }
            }
            minimized.swap(1, max_k);
            self.level[minimized[1].var()]
        };

        (minimized, backtrack)
    }

    fn literal_redundant(&self, lit: ILit) -> bool {
        let reason = self.reason[lit.var()];
        if reason == NO_REASON {
            return false;
        }
        self.clauses[reason as usize].lits.iter().all(|&q| {
            q.var() == lit.var() || self.seen[q.var()] || self.level[q.var()] == 0
        })
    }

    fn compute_lbd(&mut self, lits: &[ILit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|l| self.level[l.var()]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn cancel_until(&mut self, target: u32) {
        if self.decision_level() <= target {
            return;
        }
        let bound = self.trail_lim[target as usize];
        while self.trail.len() > bound {
            let lit = self.trail.pop().unwrap();
            let var = lit.var();
            self.saved_phase[var] = !lit.is_negative();
            self.assign[var] = LBool::Undef;
            self.reason[var] = NO_REASON;
            self.heap.insert(var, &self.activity);
        }
        self.trail_lim.truncate(target as usize);
        self.qhead = self.trail.len();
    }

    fn learn(&mut self, lits: Vec<ILit>) {
        if lits.len() == 1 {
            self.enqueue(lits[0], NO_REASON);
            return;
        }
        let lbd = self.compute_lbd(&lits);
        let idx = self.clauses.len() as u32;
        self.attach(idx, lits[0], lits[1]);
        let asserting = lits[0];
        self.clauses.push(Clause {
            lits,
            learnt: true,
            lbd,
        });
        self.num_learnts += 1;
        self.enqueue(asserting, idx);
    }

    fn locked(&self, idx: usize) -> bool {
        let first = self.clauses[idx].lits[0];
        self.value(first) == LBool::True && self.reason[first.var()] == idx as u32
    }

    /// Throw away the less useful half of the learnt clauses and rebuild the
    /// watch lists. Called only with a fully propagated trail.
    fn reduce_db(&mut self) {
        let mut removable: Vec<usize> = (0..self.clauses.len())
            .filter(|&i| self.clauses[i].learnt && self.clauses[i].lbd > 3 && !self.locked(i))
            .collect();
        removable.sort_by_key(|&i| (self.clauses[i].lbd, self.clauses[i].lits.len()));
        let cut = removable.len() / 2;
        let mut drop_flag = vec![false; self.clauses.len()];
        for &i in &removable[cut..] {
            drop_flag[i] = true;
        }

        let mut remap = vec![NO_REASON; self.clauses.len()];
        let mut compacted = Vec::with_capacity(self.clauses.len());
        for (i, clause) in std::mem::take(&mut self.clauses).into_iter().enumerate() {
            if !drop_flag[i] {
                remap[i] = compacted.len() as u32;
                compacted.push(clause);
            }
        }
        self.clauses = compacted;
        self.num_learnts = self.clauses.iter().filter(|c| c.learnt).count();
        for r in &mut self.reason {
            if *r != NO_REASON {
                *r = remap[*r as usize];
                debug_assert!(*r != NO_REASON, "reason clause must not be dropped");
            }
        }
        for list in &mut self.watches {
            list.clear();
        }
        for i in 0..self.clauses.len() {
            let (l0, l1) = (self.clauses[i].lits[0], self.clauses[i].lits[1]);
            self.attach(i as u32, l0, l1);
        }
        self.max_learnts += self.max_learnts / 10;
    }

    fn pick_branch_var(&mut self) -> Option<usize> {
        while let Some(var) = self.heap.pop(&self.activity) {
            if self.assign[var as usize] == LBool::Undef {
                return Some(var as usize);
            }
        }
        None
    }

    pub fn solve(&mut self, timeout: Option<Duration>) -> CdclOutcome {
        let start = Instant::now();
        if !self.ok {
            return CdclOutcome::Unsat;
        }
        if self.propagate().is_some() {
            self.ok = false;
            return CdclOutcome::Unsat;
        }

        let mut restart_count = 0u32;
        let mut conflicts_until_restart = 100 * luby(restart_count);
        let mut since_check = 0u64;

        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                since_check += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return CdclOutcome::Unsat;
                }
                let (learnt, backtrack) = self.analyze(confl);
                self.cancel_until(backtrack);
                self.learn(learnt);
                self.var_inc /= 0.95;

                conflicts_until_restart = conflicts_until_restart.saturating_sub(1);
                if since_check >= 1024 {
                    since_check = 0;
                    if let Some(budget) = timeout {
                        if start.elapsed() >= budget {
                            return CdclOutcome::Timeout(start.elapsed());
                        }
                    }
                }
            } else {
                if conflicts_until_restart == 0 {
                    restart_count += 1;
                    conflicts_until_restart = 100 * luby(restart_count);
                    self.cancel_until(0);
                }
                if self.num_learnts >= self.max_learnts {
                    self.reduce_db();
                }
                if let Some(budget) = timeout {
                    if self.propagations > 200_000 || since_check > 64 {
                        // decisions are cheap; only poll the clock sometimes
                        if start.elapsed() >= budget {
                            return CdclOutcome::Timeout(start.elapsed());
                        }
                    }
                }
                match self.pick_branch_var() {
                    None => {
                        let values: Vec<bool> = std::iter::once(false)
                            .chain((0..self.num_vars).map(|v| self.assign[v] == LBool::True))
                            .collect();
                        return CdclOutcome::Sat(Model::new(values));
                    }
                    Some(var) => {
                        self.trail_lim.push(self.trail.len());
                        let lit = ILit::new(var, !self.saved_phase[var]);
                        self.enqueue(lit, NO_REASON);
                    }
                }
            }
        }
    }

    /// (conflicts, propagations) counters, exposed for diagnostics.
    #[allow(dead_code)]
    pub fn stats(&self) -> (u64, u64) {
        (self.conflicts, self.propagations)
    }
}

/// Luby restart sequence: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
fn luby(x: u32) -> u64 {
    let mut x = x as u64;
    let mut size: u64 = 1;
    let mut seq: u32 = 0;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1u64 << seq
}
