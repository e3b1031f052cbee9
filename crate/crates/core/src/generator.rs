//! Seeded uniform random k-CNF generation.
//!
//! Clauses are drawn uniformly from the `2^k * C(n, k)` candidates with
//! exactly `k` distinct variables; a formula is a sequence of `m`
//! pairwise-distinct such clauses in generation order. The RNG is
//! ChaCha8 seeded from a 64-bit value, so identical seeds reproduce
//! identical formulas byte for byte.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use crate::cnf::{Clause, Formula, Literal, Sign};
use crate::error::{Error, Result};

/// Parameters for random formula generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    /// Variable count n.
    pub num_vars: u32,
    /// Clause count m.
    pub num_clauses: usize,
    /// Exact clause width k.
    pub width: u32,
    /// RNG seed.
    pub seed: u64,
}

/// Number of distinct width-k clauses over n variables: `2^k * C(n, k)`.
pub fn candidate_count(num_vars: u32, width: u32) -> BigUint {
    let binom = num_integer::binomial(BigUint::from(num_vars), BigUint::from(width));
    binom << width
}

/// Draws one clause uniformly from the `2^k * C(n, k)` candidates.
pub fn random_clause(num_vars: u32, width: u32, rng: &mut impl Rng) -> Result<Clause> {
    if width == 0 {
        return Err(Error::EmptyClause);
    }
    if width > num_vars {
        return Err(Error::WidthExceedsVariables {
            k: width,
            n: num_vars,
        });
    }
    // Uniform k-subset by rejection; fine at any density we run since the
    // loop expectation is at most ~k ln k draws even when k == n.
    let mut vars = HashSet::with_capacity(width as usize);
    while vars.len() < width as usize {
        vars.insert(rng.gen_range(1..=num_vars));
    }
    let mut vars: Vec<u32> = vars.into_iter().collect();
    vars.sort_unstable();
    // Signs are drawn in sorted variable order to keep the stream
    // reproducible regardless of hash iteration order.
    let literals = vars
        .into_iter()
        .map(|v| {
            let sign = if rng.gen_bool(0.5) {
                Sign::Positive
            } else {
                Sign::Negative
            };
            Literal::new(v, sign)
        })
        .collect::<Result<Vec<_>>>()?;
    Clause::new(literals)
}

/// Generates `m` distinct random clauses in draw order. Collisions with
/// already-generated clauses are resampled until distinct, preserving the
/// set semantics the signed-sum identity needs.
pub fn random_formula(config: &GeneratorConfig) -> Result<Formula> {
    let candidates = candidate_count(config.num_vars, config.width);
    if BigUint::from(config.num_clauses) > candidates {
        return Err(Error::TooManyClauses {
            requested: config.num_clauses as u64,
            available: candidates.to_u64().unwrap_or(u64::MAX),
        });
    }
    if config.width > config.num_vars {
        return Err(Error::WidthExceedsVariables {
            k: config.width,
            n: config.num_vars,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut seen: HashSet<Clause> = HashSet::with_capacity(config.num_clauses);
    let mut clauses = Vec::with_capacity(config.num_clauses);
    while clauses.len() < config.num_clauses {
        let clause = random_clause(config.num_vars, config.width, &mut rng)?;
        if seen.insert(clause.clone()) {
            clauses.push(clause);
        }
    }
    Formula::new(config.num_vars, clauses)
}
