//! Random inflation: a count-preserving widening reduction.
//!
//! Each clause `c` is replaced by the `2^z` clauses obtained by adding
//! `z` freshly drawn variables (from those `c` does not mention) in
//! every sign combination. Resolving those `2^z` clauses on the added
//! variables yields `c` back, so the inflated formula has exactly the
//! same satisfying assignments while its clauses are wider and look
//! random. One clause per entry — the tail clause — is set aside; the
//! tails occupy the final positions of the output, where the split
//! counter enumerates exhaustively.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::cnf::{Clause, Formula, Literal, Sign};
use crate::count::{count_random_a1_mode, CountMode, CountResult};
use crate::error::{Error, Result};

/// Literals added per clause: `max(1, ceil(log2 log2 n))`.
pub fn inflation_width(num_vars: u32) -> Result<u32> {
    if num_vars < 4 {
        return Err(Error::TooFewVariablesToInflate { n: num_vars });
    }
    let z = f64::from(num_vars).log2().log2().ceil() as u32;
    Ok(z.max(1))
}

/// One inflated clause group: which variables were added to which
/// original clause, the resulting `2^z` clauses in sign-pattern order,
/// and which of them is the designated tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InflationEntry {
    pub original: Clause,
    pub variables: Vec<u32>,
    pub clauses: Vec<Clause>,
    pub tail_index: usize,
}

impl InflationEntry {
    pub fn tail(&self) -> &Clause {
        &self.clauses[self.tail_index]
    }
}

/// Audit record of a whole-formula inflation. Entries are ordered
/// pass-major: pass `p`'s entry for original clause `j` sits at index
/// `p * m + j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InflationRecord {
    pub z: u32,
    pub passes: usize,
    pub entries: Vec<InflationEntry>,
}

/// Why [`verify_inflation`] rejected a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    /// Index of the first failing entry, when the defect is entry-local.
    pub entry: Option<usize>,
    pub reason: String,
}

impl std::fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.entry {
            Some(index) => write!(f, "entry {index}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

impl std::error::Error for VerifyFailure {}

/// Inflates one clause: picks `z` distinct variables the clause does not
/// mention and returns the `2^z` widened clauses, one per sign
/// combination of the added variables, in sign-pattern order (bit `i`
/// clear = variable `i` positive).
pub fn inflate_clause(
    clause: &Clause,
    z: u32,
    num_vars: u32,
    rng: &mut impl Rng,
) -> Result<Vec<Clause>> {
    let pool = variable_pool(clause, num_vars);
    if (pool.len() as u32) < z {
        return Err(Error::ClauseTooWide {
            width: clause.width(),
            z,
            n: num_vars,
        });
    }
    let chosen = draw_variables(&pool, z, rng);
    Ok(expand(clause, &chosen))
}

fn variable_pool(clause: &Clause, num_vars: u32) -> Vec<u32> {
    (1..=num_vars)
        .filter(|&v| !clause.contains_var(v))
        .collect()
}

fn draw_variables(pool: &[u32], z: u32, rng: &mut impl Rng) -> Vec<u32> {
    let mut chosen: Vec<u32> = rand::seq::index::sample(rng, pool.len(), z as usize)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    chosen.sort_unstable();
    chosen
}

fn expand(clause: &Clause, added: &[u32]) -> Vec<Clause> {
    (0..1usize << added.len())
        .map(|pattern| {
            let literals = clause
                .literals()
                .iter()
                .copied()
                .chain(added.iter().enumerate().map(|(i, &var)| {
                    let sign = if pattern >> i & 1 == 0 {
                        Sign::Positive
                    } else {
                        Sign::Negative
                    };
                    Literal::new(var, sign).expect("pool variables are nonzero")
                }))
                .collect();
            Clause::new(literals).expect("added variables are fresh to the clause")
        })
        .collect()
}

/// Picks added variables for one entry, avoiding collisions with already
/// placed clauses when any collision-free choice exists. Tries random
/// draws first, then scans variable combinations in lexicographic order;
/// if every choice collides the final random draw stands and duplicate
/// clauses are collapsed during assembly.
fn draw_entry_variables(
    clause: &Clause,
    z: u32,
    num_vars: u32,
    seen: &HashSet<Clause>,
    rng: &mut impl Rng,
) -> Result<Vec<u32>> {
    let pool = variable_pool(clause, num_vars);
    if (pool.len() as u32) < z {
        return Err(Error::ClauseTooWide {
            width: clause.width(),
            z,
            n: num_vars,
        });
    }
    let collision_free = |vars: &[u32]| expand(clause, vars).iter().all(|c| !seen.contains(c));

    const RANDOM_ATTEMPTS: usize = 256;
    for _ in 0..RANDOM_ATTEMPTS {
        let chosen = draw_variables(&pool, z, rng);
        if collision_free(&chosen) {
            return Ok(chosen);
        }
    }
    // Random draws keep colliding: the pool is cramped. Scan all
    // combinations for a free one before giving up on distinctness.
    let mut indices: Vec<usize> = (0..z as usize).collect();
    loop {
        let candidate: Vec<u32> = indices.iter().map(|&i| pool[i]).collect();
        if collision_free(&candidate) {
            return Ok(candidate);
        }
        // next lexicographic combination
        let mut i = z as usize;
        loop {
            if i == 0 {
                return Ok(draw_variables(&pool, z, rng));
            }
            i -= 1;
            if indices[i] != i + pool.len() - z as usize {
                break;
            }
        }
        indices[i] += 1;
        for j in i + 1..z as usize {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

/// Inflates a whole formula. With `m >= sigma*n` a single pass inflates
/// each clause once; otherwise the pass repeats `ceil(sigma*n / m)`
/// times with fresh randomness so the tail section reaches `sigma*n`
/// clauses. The returned sequence is all non-tail clauses (pass-major,
/// clause-minor) followed by all tails. Clauses that could not be kept
/// distinct are collapsed onto their last occurrence, which keeps the
/// tails in place.
pub fn inflate_formula(
    formula: &Formula,
    sigma: u32,
    rng: &mut impl Rng,
) -> Result<(Formula, InflationRecord)> {
    if sigma == 0 {
        return Err(Error::SigmaZero);
    }
    let n = formula.num_vars();
    let z = inflation_width(n)?;
    let m = formula.num_clauses();

    if m == 0 {
        let record = InflationRecord {
            z,
            passes: 0,
            entries: Vec::new(),
        };
        return Ok((formula.clone(), record));
    }
    for clause in formula.clauses() {
        if clause.width() + z > n {
            return Err(Error::ClauseTooWide {
                width: clause.width(),
                z,
                n,
            });
        }
    }

    let target = sigma as usize * n as usize;
    let passes = if m >= target { 1 } else { target.div_ceil(m) };

    let mut seen: HashSet<Clause> = HashSet::new();
    let mut entries = Vec::with_capacity(passes * m);
    for _pass in 0..passes {
        for clause in formula.clauses() {
            let variables = draw_entry_variables(clause, z, n, &seen, rng)?;
            let clauses = expand(clause, &variables);
            let tail_index = rng.gen_range(0..clauses.len());
            seen.extend(clauses.iter().cloned());
            entries.push(InflationEntry {
                original: clause.clone(),
                variables,
                clauses,
                tail_index,
            });
        }
    }

    let record = InflationRecord { z, passes, entries };
    let inflated = Formula::new(n, assemble(&record))?;
    Ok((inflated, record))
}

/// Lays out a record's clauses — non-tails first, tails last — and
/// collapses duplicates onto their last occurrence.
fn assemble(record: &InflationRecord) -> Vec<Clause> {
    let mut sequence: Vec<Clause> = Vec::new();
    for entry in &record.entries {
        for (i, clause) in entry.clauses.iter().enumerate() {
            if i != entry.tail_index {
                sequence.push(clause.clone());
            }
        }
    }
    for entry in &record.entries {
        sequence.push(entry.tail().clone());
    }

    let mut kept = vec![true; sequence.len()];
    let mut later: HashSet<&Clause> = HashSet::new();
    for (i, clause) in sequence.iter().enumerate().rev() {
        if !later.insert(clause) {
            kept[i] = false;
        }
    }
    sequence
        .into_iter()
        .zip(kept)
        .filter_map(|(clause, keep)| keep.then_some(clause))
        .collect()
}

/// Structural check that `record` really is an inflation of `original`
/// and assembles to exactly `inflated`: every entry carries all `2^z`
/// sign patterns over `z` fresh variables (so the group resolves back to
/// its original clause), entries cover the original clause sequence
/// pass by pass, and the recorded clauses reproduce `inflated` in order.
pub fn verify_inflation(
    original: &Formula,
    inflated: &Formula,
    record: &InflationRecord,
) -> std::result::Result<(), VerifyFailure> {
    let fail = |entry: Option<usize>, reason: String| Err(VerifyFailure { entry, reason });

    let m = original.num_clauses();
    if m == 0 {
        if record.entries.is_empty() && inflated.clauses().is_empty() {
            return Ok(());
        }
        return fail(None, "record for an empty formula must be empty".into());
    }
    if record.entries.len() != record.passes * m {
        return fail(
            None,
            format!(
                "{} entries, expected passes*m = {}",
                record.entries.len(),
                record.passes * m
            ),
        );
    }
    if inflated.num_vars() != original.num_vars() {
        return fail(None, "variable counts differ".into());
    }

    let expected_group = 1usize << record.z;
    for (index, entry) in record.entries.iter().enumerate() {
        let source = &original.clauses()[index % m];
        if &entry.original != source {
            return fail(Some(index), "original clause out of sequence".into());
        }
        if entry.variables.len() != record.z as usize {
            return fail(Some(index), "wrong number of added variables".into());
        }
        let mut vars = entry.variables.clone();
        vars.sort_unstable();
        vars.dedup();
        if vars.len() != entry.variables.len() {
            return fail(Some(index), "added variables repeat".into());
        }
        for &v in &vars {
            if v == 0 || v > original.num_vars() {
                return fail(Some(index), format!("added variable {v} out of range"));
            }
            if source.contains_var(v) {
                return fail(
                    Some(index),
                    format!("added variable {v} already occurs in the clause"),
                );
            }
        }
        if entry.clauses.len() != expected_group {
            return fail(
                Some(index),
                format!(
                    "{} inflated clauses, expected {expected_group}",
                    entry.clauses.len()
                ),
            );
        }
        if entry.tail_index >= entry.clauses.len() {
            return fail(Some(index), "tail index out of range".into());
        }
        // Each clause must be the original plus one sign pattern over the
        // added variables, and all patterns must occur: that is what
        // makes the group resolvable back down to the original clause.
        let mut patterns = HashSet::with_capacity(expected_group);
        for clause in &entry.clauses {
            if clause.width() != source.width() + record.z {
                return fail(Some(index), "inflated clause has wrong width".into());
            }
            for lit in source.literals() {
                if !clause.literals().contains(lit) {
                    return fail(
                        Some(index),
                        "inflated clause drops an original literal".into(),
                    );
                }
            }
            let mut pattern = 0usize;
            for (bit, &v) in vars.iter().enumerate() {
                let lit = clause.literals().iter().find(|l| l.var() == v).copied();
                match lit {
                    Some(l) if l.sign() == Sign::Negative => pattern |= 1 << bit,
                    Some(_) => {}
                    None => {
                        return fail(
                            Some(index),
                            format!("inflated clause misses added variable {v}"),
                        )
                    }
                }
            }
            if !patterns.insert(pattern) {
                return fail(Some(index), "duplicate sign pattern in group".into());
            }
        }
        if patterns.len() != expected_group {
            return fail(Some(index), "sign patterns do not cover the group".into());
        }
    }

    let reconstructed = assemble(record);
    if reconstructed != inflated.clauses() {
        return fail(
            None,
            "record does not reconstruct the inflated sequence".into(),
        );
    }
    Ok(())
}

/// Counts any formula by inflating it and handing the widened instance
/// to the split counter. The inflation preserves the model set, so the
/// value is exact whenever the split counter's cutoff loses nothing;
/// the result is flagged inexact accordingly.
pub fn count_a2(formula: &Formula, sigma: u32, rng: &mut impl Rng) -> Result<CountResult> {
    let (inflated, _record) = inflate_formula(formula, sigma, rng)?;
    count_random_a1_mode(&inflated, sigma, CountMode::A2)
}
