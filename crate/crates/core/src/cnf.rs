//! CNF data model: literals, clauses, formulas, assignments.
//!
//! Clauses are sets of literals over distinct variables; formulas are
//! *ordered* sequences of pairwise-distinct clauses. The order matters:
//! the split counter carves the clause sequence into a head and a tail
//! by position, so file order is the canonical order.

use std::fmt;

use crate::error::{Error, Result};

/// Polarity of a literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// A variable (1-based index) with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: u32,
    sign: Sign,
}

impl Literal {
    /// Builds a literal; `var` is 1-based.
    pub fn new(var: u32, sign: Sign) -> Result<Literal> {
        if var == 0 {
            return Err(Error::ZeroVariable);
        }
        Ok(Literal { var, sign })
    }

    pub fn positive(var: u32) -> Result<Literal> {
        Literal::new(var, Sign::Positive)
    }

    pub fn negative(var: u32) -> Result<Literal> {
        Literal::new(var, Sign::Negative)
    }

    /// Converts a nonzero DIMACS integer (negative = negated variable).
    pub fn from_dimacs(code: i64) -> Result<Literal> {
        if code == 0 {
            return Err(Error::ZeroVariable);
        }
        let var = u32::try_from(code.unsigned_abs()).map_err(|_| Error::ZeroVariable)?;
        let sign = if code > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        };
        Literal::new(var, sign)
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    /// DIMACS encoding: signed variable index.
    pub fn to_dimacs(self) -> i64 {
        match self.sign {
            Sign::Positive => i64::from(self.var),
            Sign::Negative => -i64::from(self.var),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A nonempty set of literals over pairwise-distinct variables.
///
/// Literals are stored sorted by variable index, which gives clauses a
/// canonical form: two clauses are equal as sets iff they compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Builds a clause, rejecting empty literal lists and repeated
    /// variables (in either polarity).
    pub fn new(mut literals: Vec<Literal>) -> Result<Clause> {
        if literals.is_empty() {
            return Err(Error::EmptyClause);
        }
        literals.sort_unstable();
        for pair in literals.windows(2) {
            if pair[0].var() == pair[1].var() {
                return Err(Error::RepeatedVariable { var: pair[0].var() });
            }
        }
        Ok(Clause { literals })
    }

    /// Convenience constructor from DIMACS codes.
    pub fn from_dimacs(codes: &[i64]) -> Result<Clause> {
        let literals = codes
            .iter()
            .map(|&c| Literal::from_dimacs(c))
            .collect::<Result<Vec<_>>>()?;
        Clause::new(literals)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    /// Number of literals (the clause width).
    pub fn width(&self) -> u32 {
        self.literals.len() as u32
    }

    /// Largest variable index mentioned.
    pub fn max_var(&self) -> u32 {
        // literals are sorted by variable
        self.literals.last().map_or(0, |l| l.var())
    }

    pub fn contains_var(&self, var: u32) -> bool {
        self.literals
            .binary_search_by_key(&var, |l| l.var())
            .is_ok()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for lit in &self.literals {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{lit}")?;
            first = false;
        }
        Ok(())
    }
}

// Clauses cross the JSON boundary as arrays of DIMACS codes.
impl serde::Serialize for Clause {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.literals.iter().map(|l| l.to_dimacs()))
    }
}

impl<'de> serde::Deserialize<'de> for Clause {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Clause, D::Error> {
        let codes = Vec::<i64>::deserialize(deserializer)?;
        Clause::from_dimacs(&codes).map_err(serde::de::Error::custom)
    }
}

/// An ordered sequence of pairwise-distinct clauses over `num_vars`
/// variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl Formula {
    /// Builds a formula, validating variable ranges and clause
    /// distinctness. Duplicate clauses are an error rather than being
    /// silently dropped: the signed-sum identity ranges over the subset
    /// lattice of a *set* of clauses, and a silent dedup would mask
    /// caller bugs.
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Formula> {
        if num_vars == 0 {
            return Err(Error::NoVariables);
        }
        let mut seen = std::collections::HashSet::with_capacity(clauses.len());
        for (position, clause) in clauses.iter().enumerate() {
            if clause.max_var() > num_vars {
                return Err(Error::VariableOutOfRange {
                    var: clause.max_var(),
                    num_vars,
                });
            }
            if !seen.insert(clause.clone()) {
                return Err(Error::DuplicateClause { position });
            }
        }
        Ok(Formula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Clause density m/n.
    pub fn density(&self) -> f64 {
        self.clauses.len() as f64 / f64::from(self.num_vars)
    }

    /// Smallest clause width, or `None` for the empty formula.
    pub fn min_width(&self) -> Option<u32> {
        self.clauses.iter().map(Clause::width).min()
    }

    /// True iff every clause contains a literal made true by `assignment`.
    /// The empty formula is vacuously satisfied.
    pub fn evaluate(&self, assignment: &Assignment) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .literals()
                .iter()
                .any(|lit| assignment.get(lit.var()) == (lit.sign() == Sign::Positive))
        })
    }
}

/// A total assignment of truth values to variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Assignment {
        Assignment { values }
    }

    /// Assignment whose bit `i` of `index` gives the value of variable
    /// `i + 1`. Enumerating `index` over `0..2^n` walks all assignments.
    pub fn from_index(index: u64, num_vars: u32) -> Assignment {
        let values = (0..num_vars).map(|i| index >> i & 1 == 1).collect();
        Assignment { values }
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    /// Value of 1-based variable `var`.
    pub fn get(&self, var: u32) -> bool {
        self.values[var as usize - 1]
    }
}
