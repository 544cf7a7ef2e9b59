//! CNF instances, models, and DIMACS serialization.

use std::fmt;
use std::io::Write;

/// A signed literal. Positive values mean the variable, negative its
/// negation; variables are 1-based as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit(i32);

impl Lit {
    pub fn positive(var: u32) -> Lit {
        Lit(var as i32)
    }

    pub fn negative(var: u32) -> Lit {
        Lit(-(var as i32))
    }

    /// Literal for `var` with the given polarity.
    pub fn with_sign(var: u32, value: bool) -> Lit {
        if value {
            Lit::positive(var)
        } else {
            Lit::negative(var)
        }
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Lit {
        Lit(-self.0)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A total assignment to the variables of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>, // index 0 unused
}

impl Model {
    pub fn new(values_one_based: Vec<bool>) -> Model {
        Model {
            values: values_one_based,
        }
    }

    pub fn value(&self, var: u32) -> bool {
        self.values[var as usize]
    }

    pub fn satisfies(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    pub fn num_vars(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// A propositional formula in clausal form, together with optional
/// human-readable names for variables (used in DIMACS comments).
#[derive(Debug, Clone, Default)]
pub struct CnfInstance {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
    var_names: Vec<(u32, String)>,
}

impl CnfInstance {
    pub fn new(num_vars: u32) -> CnfInstance {
        CnfInstance {
            num_vars,
            clauses: Vec::new(),
            var_names: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    /// Add a clause. Panics on zero literals or variables beyond the
    /// declared count; those indicate construction bugs, not user input.
    pub fn add_clause(&mut self, lits: impl Into<Vec<Lit>>) {
        let lits = lits.into();
        for l in &lits {
            assert!(l.to_dimacs() != 0, "zero literal");
            assert!(
                l.var() <= self.num_vars,
                "literal {} beyond variable count {}",
                l,
                self.num_vars
            );
        }
        self.clauses.push(lits);
    }

    /// Record a readable name for a variable, emitted as a `c` comment in
    /// DIMACS exports.
    pub fn name_var(&mut self, var: u32, name: String) {
        self.var_names.push((var, name));
    }

    /// Exclude the (partial) assignment given by `literals`: appends the
    /// clause that is the disjunction of their negations.
    pub fn add_blocking_clause(&mut self, literals: &[Lit]) {
        assert!(!literals.is_empty(), "blocking clause needs literals");
        let clause: Vec<Lit> = literals.iter().map(|l| l.negated()).collect();
        self.add_clause(clause);
    }

    /// Whether the model satisfies every clause.
    pub fn check_model(&self, model: &Model) -> bool {
        if model.num_vars() < self.num_vars as usize {
            return false;
        }
        self.clauses
            .iter()
            .all(|clause| clause.iter().any(|&l| model.satisfies(l)))
    }

    /// Serialize in DIMACS CNF format, with variable-name comments first.
    pub fn write_dimacs<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut text = String::new();
        for (var, name) in &self.var_names {
            text.push_str(&format!("c {name} {var}\n"));
        }
        text.push_str(&format!("p cnf {} {}\n", self.num_vars, self.clauses.len()));
        for clause in &self.clauses {
            for lit in clause {
                text.push_str(&format!("{} ", lit.to_dimacs()));
            }
            text.push_str("0\n");
        }
        w.write_all(text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocking_clause_negates_literals() {
        let mut inst = CnfInstance::new(2);
        inst.add_clause(vec![Lit::positive(1), Lit::positive(2)]);
        inst.add_blocking_clause(&[Lit::positive(1), Lit::negative(2)]);
        assert_eq!(
            inst.clauses()[1],
            vec![Lit::negative(1), Lit::positive(2)]
        );
    }

    #[test]
    fn model_checking() {
        let mut inst = CnfInstance::new(2);
        inst.add_clause(vec![Lit::positive(1)]);
        inst.add_clause(vec![Lit::negative(1), Lit::positive(2)]);
        let good = Model::new(vec![false, true, true]);
        let bad = Model::new(vec![false, true, false]);
        assert!(inst.check_model(&good));
        assert!(!inst.check_model(&bad));
    }

    #[test]
    fn dimacs_output_shape() {
        let mut inst = CnfInstance::new(2);
        inst.name_var(1, "x 1 p".into());
        inst.add_clause(vec![Lit::positive(1), Lit::negative(2)]);
        let mut buf = Vec::new();
        inst.write_dimacs(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "c x 1 p 1\np cnf 2 1\n1 -2 0\n");
    }
}
