//! The counting engines.
//!
//! Every engine enumerates monotone sub-formulae of the input — clause
//! subsets in which each variable keeps one polarity — and folds them
//! into per-variable-count parity tallies. The model count then falls
//! out of the identity
//!
//! ```text
//! |S| = 2^n - sum over v in 1..=n of (O_v - E_v) * 2^(n-v)
//! ```
//!
//! where `O_v` / `E_v` count monotone sub-formulae with `v` variables
//! and an odd / even number of clauses.
//!
//! Three engines share that identity:
//!
//! * **exhaustive** walks the full branch tree: clauses are scanned in
//!   formula order, each compatible clause branches into include/skip,
//!   each incompatible clause is skipped.
//! * **pruned** additionally abandons the subtree under every freshly
//!   included clause for which some later clause is *fruitless*
//!   (compatible and bringing no new variable). Such a clause can be
//!   toggled in any monotone superset without changing its variable
//!   count, so the subtree's odd and even tallies cancel exactly and the
//!   count is unchanged.
//! * **split** (`count_random_a1`) carves the clause sequence into a
//!   head of `m - sigma*n` clauses and a tail of `sigma*n` clauses, and
//!   enumerates head subsets only while their saturation (fraction of
//!   variables used) stays below the critical threshold. On random
//!   instances the discarded subtrees almost surely contain a fruitless
//!   clause and contribute nothing; the result is exact with probability
//!   approaching 1 but is flagged inexact.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cnf::{Clause, Formula, Sign};
use crate::error::{Error, Result};

/// Practical ceiling on the number of distinct sign states the split
/// counter tracks before giving up.
const STATE_TABLE_CEILING: usize = 1 << 26;

// ---------------------------------------------------------------------------
// Sign state
// ---------------------------------------------------------------------------

/// A partial map from variables to polarities: the signature of a
/// monotone sub-formula, plus the count `nu` of mapped variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignState {
    pos: Vec<u64>,
    neg: Vec<u64>,
    nu: u32,
    num_vars: u32,
}

impl SignState {
    pub fn new(num_vars: u32) -> SignState {
        let words = (num_vars as usize).div_ceil(64);
        SignState {
            pos: vec![0; words],
            neg: vec![0; words],
            nu: 0,
            num_vars,
        }
    }

    /// Builds the signature of a set of clauses, failing if they are not
    /// jointly monotone.
    pub fn from_clauses<'a>(
        num_vars: u32,
        clauses: impl IntoIterator<Item = &'a Clause>,
    ) -> Option<SignState> {
        let mut state = SignState::new(num_vars);
        let mut undo = Vec::new();
        for clause in clauses {
            if !state.is_compatible(clause) {
                return None;
            }
            state.include(clause, &mut undo);
        }
        Some(state)
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Fraction of the formula's variables mapped by this state.
    pub fn saturation(&self) -> f64 {
        f64::from(self.nu) / f64::from(self.num_vars)
    }

    pub fn sign_of(&self, var: u32) -> Option<Sign> {
        let (word, bit) = Self::slot(var);
        if self.pos[word] >> bit & 1 == 1 {
            Some(Sign::Positive)
        } else if self.neg[word] >> bit & 1 == 1 {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    fn slot(var: u32) -> (usize, u32) {
        ((var as usize - 1) / 64, (var - 1) % 64)
    }

    /// True iff no literal of `clause` clashes with a mapped polarity.
    pub fn is_compatible(&self, clause: &Clause) -> bool {
        clause.literals().iter().all(|lit| {
            let (word, bit) = Self::slot(lit.var());
            let clash = match lit.sign() {
                Sign::Positive => self.neg[word],
                Sign::Negative => self.pos[word],
            };
            clash >> bit & 1 == 0
        })
    }

    /// True iff `clause` is compatible and every one of its variables is
    /// already mapped: including it would flip subset parity without
    /// growing the variable count.
    pub fn is_fruitless(&self, clause: &Clause) -> bool {
        clause.literals().iter().all(|lit| {
            let (word, bit) = Self::slot(lit.var());
            let same = match lit.sign() {
                Sign::Positive => self.pos[word],
                Sign::Negative => self.neg[word],
            };
            same >> bit & 1 == 1
        })
    }

    /// Maps the clause's literals, pushing newly mapped variables onto
    /// `undo`. Returns how many were new. The clause must be compatible.
    pub fn include(&mut self, clause: &Clause, undo: &mut Vec<u32>) -> u32 {
        debug_assert!(self.is_compatible(clause));
        let mut added = 0;
        for lit in clause.literals() {
            let (word, bit) = Self::slot(lit.var());
            if (self.pos[word] | self.neg[word]) >> bit & 1 == 0 {
                match lit.sign() {
                    Sign::Positive => self.pos[word] |= 1 << bit,
                    Sign::Negative => self.neg[word] |= 1 << bit,
                }
                undo.push(lit.var());
                added += 1;
            }
        }
        self.nu += added;
        added
    }

    /// Unmaps the last `added` variables recorded on `undo`.
    pub fn rollback(&mut self, undo: &mut Vec<u32>, added: u32) {
        for _ in 0..added {
            let var = undo.pop().expect("rollback deeper than undo stack");
            let (word, bit) = Self::slot(var);
            self.pos[word] &= !(1 << bit);
            self.neg[word] &= !(1 << bit);
        }
        self.nu -= added;
    }
}

/// True iff `state` is compatible with `clause`.
pub fn is_compatible(state: &SignState, clause: &Clause) -> bool {
    state.is_compatible(clause)
}

/// True iff `clause` is fruitless for `state`.
pub fn is_fruitless(state: &SignState, clause: &Clause) -> bool {
    state.is_fruitless(clause)
}

/// True iff some clause at 1-based position `>= from` is fruitless for
/// `state`.
pub fn exists_fruitless_ahead(state: &SignState, formula: &Formula, from: usize) -> bool {
    debug_assert!(from >= 1 && from <= formula.num_clauses() + 1);
    formula.clauses()[from - 1..]
        .iter()
        .any(|clause| state.is_fruitless(clause))
}

// ---------------------------------------------------------------------------
// Parity tallies and the identity
// ---------------------------------------------------------------------------

/// Per-variable-count tallies of monotone sub-formulae with odd and even
/// clause counts. Arbitrary precision: the weights `2^(n-v)` and the
/// partial sums outgrow machine words long before the final count does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityTally {
    odd: Vec<BigUint>,
    even: Vec<BigUint>,
}

impl ParityTally {
    /// Zero tally for formulas over `num_vars` variables (entries for
    /// `v` in `0..=num_vars`).
    pub fn new(num_vars: u32) -> ParityTally {
        ParityTally {
            odd: vec![BigUint::zero(); num_vars as usize + 1],
            even: vec![BigUint::zero(); num_vars as usize + 1],
        }
    }

    pub fn num_vars(&self) -> u32 {
        (self.odd.len() - 1) as u32
    }

    /// Records one monotone sub-formula with `nu` variables.
    pub fn record(&mut self, nu: u32, odd_clause_count: bool) {
        self.add(nu, odd_clause_count, 1u32.into());
    }

    /// Adds `amount` sub-formulae at once.
    pub fn add(&mut self, nu: u32, odd_clause_count: bool, amount: BigUint) {
        if odd_clause_count {
            self.odd[nu as usize] += amount;
        } else {
            self.even[nu as usize] += amount;
        }
    }

    pub fn odd_at(&self, nu: u32) -> &BigUint {
        &self.odd[nu as usize]
    }

    pub fn even_at(&self, nu: u32) -> &BigUint {
        &self.even[nu as usize]
    }

    /// Entrywise addition; tallies from partitioned traversals merge
    /// associatively and commutatively.
    pub fn merge(&mut self, other: &ParityTally) {
        assert_eq!(self.odd.len(), other.odd.len());
        for (a, b) in self.odd.iter_mut().zip(&other.odd) {
            *a += b;
        }
        for (a, b) in self.even.iter_mut().zip(&other.even) {
            *a += b;
        }
    }

    fn clear_empty_entry(&mut self) {
        self.odd[0] = BigUint::zero();
        self.even[0] = BigUint::zero();
    }
}

/// Evaluates `2^n - sum over v in 1..=n of (O_v - E_v) * 2^(n-v)`.
///
/// The tally must exclude the empty sub-formula; the sum starts at
/// `v = 1`, so entries at `v = 0` are ignored either way. A result
/// outside `[0, 2^n]` means the tallies are inconsistent and is reported
/// as an error rather than clamped.
pub fn apply_identity(tally: &ParityTally, num_vars: u32) -> Result<BigUint> {
    assert_eq!(tally.num_vars(), num_vars, "tally sized for a different n");
    let mut total = BigInt::from(1u8) << num_vars;
    for v in 1..=num_vars {
        let weight = BigInt::from(1u8) << (num_vars - v);
        let diff = BigInt::from(tally.odd_at(v).clone()) - BigInt::from(tally.even_at(v).clone());
        total -= diff * weight;
    }
    let out_of_range =
        total.sign() == num_bigint::Sign::Minus || total > (BigInt::from(1u8) << num_vars);
    if out_of_range {
        return Err(Error::IdentityOutOfRange {
            value: total.to_string(),
            n: num_vars,
        });
    }
    Ok(total.into_parts().1)
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

/// Which engine produced a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    Exhaustive,
    Pruned,
    A1,
    A2,
}

impl std::fmt::Display for CountMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CountMode::Exhaustive => "exhaustive",
            CountMode::Pruned => "pruned",
            CountMode::A1 => "a1",
            CountMode::A2 => "a2",
        };
        f.write_str(name)
    }
}

fn serialize_biguint_as_string<S: serde::Serializer>(
    value: &BigUint,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&value.to_string())
}

/// A model count plus traversal instrumentation.
///
/// `nodes_visited` counts branch-tree nodes; for the split counter it is
/// the node count of the two nested enumerations laid out as one tree
/// over all `m` clause positions. `subtrees_pruned` counts abandoned
/// include-branches (fruitless prunes in pruned mode, saturation cutoffs
/// in split mode). Both counters saturate at `u64::MAX`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CountResult {
    #[serde(serialize_with = "serialize_biguint_as_string")]
    pub model_count: BigUint,
    pub mode: CountMode,
    pub exact: bool,
    pub nodes_visited: u64,
    pub subtrees_pruned: u64,
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// The saturation threshold `min(1, 2 * (log2 n)^(1/k) / n^(1/k))` above
/// which, in the random model, a fruitless clause exists ahead with
/// probability approaching 1. Clamped at 1 because saturation is a
/// fraction of variables; the raw expression exceeds 1 for small n.
pub fn critical_saturation(num_vars: u32, width: u32) -> Result<f64> {
    if num_vars < 2 {
        return Err(Error::TooFewVariables { n: num_vars });
    }
    assert!(width >= 1, "clause width must be at least 1");
    let n = f64::from(num_vars);
    let exponent = 1.0 / f64::from(width);
    Ok((2.0 * n.log2().powf(exponent) / n.powf(exponent)).min(1.0))
}

/// Probability that a uniformly drawn width-`k` clause is fruitless for
/// a state mapping `nu` of `n` variables: `C(nu, k) / (2^k * C(n, k))`,
/// as an exact rational. Zero when `nu < k`.
pub fn fruitless_probability_exact(num_vars: u32, width: u32, nu: u32) -> BigRational {
    assert!(width >= 1 && width <= num_vars, "width out of range");
    assert!(nu <= num_vars, "nu exceeds variable count");
    let denominator =
        BigInt::from(num_integer::binomial(BigUint::from(num_vars), BigUint::from(width)) << width);
    if nu < width {
        return BigRational::zero();
    }
    let numerator = BigInt::from(num_integer::binomial(
        BigUint::from(nu),
        BigUint::from(width),
    ));
    BigRational::new(numerator, denominator)
}

// ---------------------------------------------------------------------------
// Branch-tree walk (exhaustive and pruned modes)
// ---------------------------------------------------------------------------

struct Walker<'a> {
    formula: &'a Formula,
    prune: bool,
    state: SignState,
    undo: Vec<u32>,
    clause_count: u32,
    tally: ParityTally,
    nodes: u64,
    pruned: u64,
}

impl<'a> Walker<'a> {
    fn new(formula: &'a Formula, prune: bool) -> Walker<'a> {
        Walker {
            formula,
            prune,
            state: SignState::new(formula.num_vars()),
            undo: Vec::new(),
            clause_count: 0,
            tally: ParityTally::new(formula.num_vars()),
            nodes: 0,
            pruned: 0,
        }
    }

    fn resume(formula: &'a Formula, prune: bool, item: &WorkItem) -> Walker<'a> {
        Walker {
            formula,
            prune,
            state: item.state.clone(),
            undo: Vec::new(),
            clause_count: item.clause_count,
            tally: ParityTally::new(formula.num_vars()),
            nodes: 0,
            pruned: 0,
        }
    }

    /// Visits the node whose next clause position is `level` (1-based).
    /// Visits the subtree rooted at `level`. Skip decisions iterate in
    /// place, so recursion depth is the number of included clauses on
    /// the current path, not the clause count.
    fn walk(&mut self, mut level: usize) {
        loop {
            self.nodes = self.nodes.saturating_add(1);
            if level > self.formula.num_clauses() {
                // Leaf: one complete monotone sub-formula. The empty one
                // is excluded from tallies; the identity sums from v = 1.
                if self.state.nu() > 0 {
                    self.tally
                        .record(self.state.nu(), self.clause_count % 2 == 1);
                }
                return;
            }
            let clause = &self.formula.clauses()[level - 1];
            if self.state.is_compatible(clause) {
                let added = self.state.include(clause, &mut self.undo);
                self.clause_count += 1;
                if self.prune && exists_fruitless_ahead(&self.state, self.formula, level + 1) {
                    // Every superset reachable below can be paired with
                    // its fruitless-clause toggle, so the whole
                    // include-subtree cancels out of the tallies.
                    self.pruned += 1;
                } else {
                    self.walk(level + 1);
                }
                self.clause_count -= 1;
                self.state.rollback(&mut self.undo, added);
            }
            level += 1;
        }
    }

    /// Like [`Walker::walk`], but stops at `frontier` and emits work
    /// items instead of recursing past it. Nodes at levels before the
    /// frontier are counted here; frontier subtrees are counted by
    /// whoever runs the items.
    fn walk_prefix(&mut self, mut level: usize, frontier: usize, items: &mut Vec<WorkItem>) {
        loop {
            if level == frontier {
                items.push(WorkItem {
                    state: self.state.clone(),
                    clause_count: self.clause_count,
                    level,
                });
                return;
            }
            self.nodes = self.nodes.saturating_add(1);
            if level > self.formula.num_clauses() {
                if self.state.nu() > 0 {
                    self.tally
                        .record(self.state.nu(), self.clause_count % 2 == 1);
                }
                return;
            }
            let clause = &self.formula.clauses()[level - 1];
            if self.state.is_compatible(clause) {
                let added = self.state.include(clause, &mut self.undo);
                self.clause_count += 1;
                if self.prune && exists_fruitless_ahead(&self.state, self.formula, level + 1) {
                    self.pruned += 1;
                } else {
                    self.walk_prefix(level + 1, frontier, items);
                }
                self.clause_count -= 1;
                self.state.rollback(&mut self.undo, added);
            }
            level += 1;
        }
    }
}

struct WorkItem {
    state: SignState,
    clause_count: u32,
    level: usize,
}

fn branch_tree_count(formula: &Formula, prune: bool, threads: usize) -> (ParityTally, u64, u64) {
    let threads = threads.max(1);
    if threads == 1 {
        let mut walker = Walker::new(formula, prune);
        walker.walk(1);
        return (walker.tally, walker.nodes, walker.pruned);
    }

    // Partition at a shallow frontier: the prefix of the tree is walked
    // sequentially, every node at the frontier level becomes an
    // independent work item, and per-worker tallies merge entrywise.
    // Totals are identical to the single-threaded walk because every
    // node is counted exactly once on either side of the frontier.
    let m = formula.num_clauses();
    let depth = (threads * 8).next_power_of_two().trailing_zeros() as usize;
    let frontier = depth.min(m) + 1;

    let mut prefix = Walker::new(formula, prune);
    let mut items = Vec::new();
    prefix.walk_prefix(1, frontier, &mut items);

    let next = std::sync::atomic::AtomicUsize::new(0);
    let partials = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..threads.min(items.len().max(1)) {
            scope.spawn(|| {
                let mut local: Option<Walker> = None;
                loop {
                    let idx = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    let Some(item) = items.get(idx) else { break };
                    let mut walker = Walker::resume(formula, prune, item);
                    walker.walk(item.level);
                    match &mut local {
                        None => local = Some(walker),
                        Some(acc) => {
                            acc.tally.merge(&walker.tally);
                            acc.nodes = acc.nodes.saturating_add(walker.nodes);
                            acc.pruned += walker.pruned;
                        }
                    }
                }
                if let Some(walker) = local {
                    partials.lock().unwrap().push(walker);
                }
            });
        }
    });

    let mut tally = prefix.tally;
    let mut nodes = prefix.nodes;
    let mut pruned = prefix.pruned;
    for partial in partials.into_inner().unwrap() {
        tally.merge(&partial.tally);
        nodes = nodes.saturating_add(partial.nodes);
        pruned += partial.pruned;
    }
    (tally, nodes, pruned)
}

fn finish(
    formula: &Formula,
    mode: CountMode,
    mut tally: ParityTally,
    nodes: u64,
    pruned: u64,
) -> Result<CountResult> {
    tally.clear_empty_entry();
    let model_count = apply_identity(&tally, formula.num_vars())?;
    Ok(CountResult {
        model_count,
        mode,
        // The flag is mode-derived: the split modes stay flagged inexact
        // even on degenerate splits where the value is provably exact.
        exact: matches!(mode, CountMode::Exhaustive | CountMode::Pruned),
        nodes_visited: nodes,
        subtrees_pruned: pruned,
    })
}

/// Exact count by full branch-tree enumeration. Practical ceiling around
/// 25 clauses; the tree has up to `2^(m+1)` nodes.
pub fn signed_count_exhaustive(formula: &Formula) -> Result<CountResult> {
    signed_count_exhaustive_threaded(formula, 1)
}

/// [`signed_count_exhaustive`] with a partitioned traversal. Results are
/// bit-identical for every thread count.
pub fn signed_count_exhaustive_threaded(formula: &Formula, threads: usize) -> Result<CountResult> {
    let (tally, nodes, pruned) = branch_tree_count(formula, false, threads);
    debug_assert_eq!(pruned, 0);
    finish(formula, CountMode::Exhaustive, tally, nodes, pruned)
}

/// Exact count with fruitless-clause pruning. Same result as the
/// exhaustive engine on every input, never more nodes.
pub fn signed_count_pruned(formula: &Formula) -> Result<CountResult> {
    signed_count_pruned_threaded(formula, 1)
}

/// [`signed_count_pruned`] with a partitioned traversal.
pub fn signed_count_pruned_threaded(formula: &Formula, threads: usize) -> Result<CountResult> {
    let (tally, nodes, pruned) = branch_tree_count(formula, true, threads);
    finish(formula, CountMode::Pruned, tally, nodes, pruned)
}

// ---------------------------------------------------------------------------
// Split counter
// ---------------------------------------------------------------------------

/// Internal counters for the split DP: u64 with overflow detection, and
/// BigUint as the fallback when a tally outgrows it.
trait TallyCounter: Clone {
    fn of(value: u64) -> Self;
    fn is_nonzero(&self) -> bool;
    #[must_use]
    fn checked_add_assign(&mut self, other: &Self) -> bool;
    fn to_biguint(&self) -> BigUint;
    fn saturating_u64(&self) -> u64;
}

impl TallyCounter for u64 {
    fn of(value: u64) -> Self {
        value
    }
    fn is_nonzero(&self) -> bool {
        *self != 0
    }
    fn checked_add_assign(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }
    fn saturating_u64(&self) -> u64 {
        *self
    }
}

impl TallyCounter for BigUint {
    fn of(value: u64) -> Self {
        value.into()
    }
    fn is_nonzero(&self) -> bool {
        !Zero::is_zero(self)
    }
    fn checked_add_assign(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
    fn saturating_u64(&self) -> u64 {
        self.to_u64().unwrap_or(u64::MAX)
    }
}

/// A monotone signature packed for use as a hash key.
trait Signature: Clone + Eq + Hash {
    fn empty(num_vars: u32) -> Self;
    fn is_compatible(&self, clause: &Clause) -> bool;
    /// Signature extended by the clause, plus how many variables it adds.
    fn with_clause(&self, clause: &Clause) -> (Self, u32);
}

/// Signatures over at most 64 variables: positive polarities in the low
/// word, negative in the high word.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PackedSignature(u128);

impl Signature for PackedSignature {
    fn empty(_num_vars: u32) -> Self {
        PackedSignature(0)
    }

    fn is_compatible(&self, clause: &Clause) -> bool {
        clause.literals().iter().all(|lit| {
            let bit = u128::from(lit.var() - 1);
            let clash = match lit.sign() {
                Sign::Positive => bit + 64,
                Sign::Negative => bit,
            };
            self.0 >> clash & 1 == 0
        })
    }

    fn with_clause(&self, clause: &Clause) -> (Self, u32) {
        let mut bits = self.0;
        let mut added = 0;
        for lit in clause.literals() {
            let bit = u128::from(lit.var() - 1);
            if (bits >> bit | bits >> (bit + 64)) & 1 == 0 {
                added += 1;
            }
            bits |= match lit.sign() {
                Sign::Positive => 1 << bit,
                Sign::Negative => 1 << (bit + 64),
            };
        }
        (PackedSignature(bits), added)
    }
}

/// Signatures over any variable count: positive words then negative
/// words.
#[derive(Clone, PartialEq, Eq, Hash)]
struct WideSignature {
    words: Box<[u64]>,
}

impl WideSignature {
    fn half(&self) -> usize {
        self.words.len() / 2
    }
}

impl Signature for WideSignature {
    fn empty(num_vars: u32) -> Self {
        let words = (num_vars as usize).div_ceil(64);
        WideSignature {
            words: vec![0; words * 2].into_boxed_slice(),
        }
    }

    fn is_compatible(&self, clause: &Clause) -> bool {
        let half = self.half();
        clause.literals().iter().all(|lit| {
            let (word, bit) = SignState::slot(lit.var());
            let clash = match lit.sign() {
                Sign::Positive => self.words[half + word],
                Sign::Negative => self.words[word],
            };
            clash >> bit & 1 == 0
        })
    }

    fn with_clause(&self, clause: &Clause) -> (Self, u32) {
        let half = self.half();
        let mut words = self.words.clone();
        let mut added = 0;
        for lit in clause.literals() {
            let (word, bit) = SignState::slot(lit.var());
            if (words[word] | words[half + word]) >> bit & 1 == 0 {
                added += 1;
            }
            match lit.sign() {
                Sign::Positive => words[word] |= 1 << bit,
                Sign::Negative => words[half + word] |= 1 << bit,
            }
        }
        (WideSignature { words }, added)
    }
}

#[derive(Clone)]
struct DpCell<C> {
    nu: u32,
    odd: C,
    even: C,
}

enum DpOutcome {
    Done(ParityTally, u64, u64),
    CounterOverflow,
    TableOverflow(usize),
}

/// Level-synchronous enumeration of the split counter's two nested
/// loops, grouped by signature. Decision prefixes with equal signatures
/// behave identically from their level onward, so per-signature
/// (odd, even) prefix counts reproduce the nested-loop tallies and node
/// counts exactly while visiting each signature once per level.
fn split_dp<S: Signature, C: TallyCounter>(
    formula: &Formula,
    head_len: usize,
    crit: Option<f64>,
) -> DpOutcome {
    let n = formula.num_vars();
    let mut states: HashMap<S, DpCell<C>> = HashMap::new();
    states.insert(
        S::empty(n),
        DpCell {
            nu: 0,
            odd: C::of(0),
            even: C::of(1),
        },
    );

    let mut nodes: u64 = 0;
    let mut pruned: u64 = 0;

    for (idx, clause) in formula.clauses().iter().enumerate() {
        let in_head = idx < head_len;
        let mut next: HashMap<S, DpCell<C>> = HashMap::with_capacity(states.len() * 2);
        for (sig, cell) in states.drain() {
            nodes = nodes
                .saturating_add(cell.odd.saturating_u64())
                .saturating_add(cell.even.saturating_u64());

            if sig.is_compatible(clause) {
                let (included, added) = sig.with_clause(clause);
                let new_nu = cell.nu + added;
                let cut = match crit {
                    Some(threshold) if in_head => {
                        // Head subsets are enumerated only while strictly
                        // below the critical saturation.
                        f64::from(new_nu) / f64::from(n) >= threshold
                    }
                    _ => false,
                };
                if cut {
                    pruned = pruned
                        .saturating_add(cell.odd.saturating_u64())
                        .saturating_add(cell.even.saturating_u64());
                } else {
                    let entry = next.entry(included).or_insert_with(|| DpCell {
                        nu: new_nu,
                        odd: C::of(0),
                        even: C::of(0),
                    });
                    // Parity flips: odd prefixes feed even and vice versa.
                    if !entry.odd.checked_add_assign(&cell.even)
                        || !entry.even.checked_add_assign(&cell.odd)
                    {
                        return DpOutcome::CounterOverflow;
                    }
                }
            }

            match next.entry(sig) {
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(cell);
                }
                std::collections::hash_map::Entry::Occupied(mut slot) => {
                    let entry = slot.get_mut();
                    if !entry.odd.checked_add_assign(&cell.odd)
                        || !entry.even.checked_add_assign(&cell.even)
                    {
                        return DpOutcome::CounterOverflow;
                    }
                }
            }
        }
        if next.len() > STATE_TABLE_CEILING {
            return DpOutcome::TableOverflow(next.len());
        }
        states = next;
    }

    let mut tally = ParityTally::new(n);
    for (_, cell) in states.drain() {
        nodes = nodes
            .saturating_add(cell.odd.saturating_u64())
            .saturating_add(cell.even.saturating_u64());
        if cell.odd.is_nonzero() {
            tally.add(cell.nu, true, cell.odd.to_biguint());
        }
        if cell.even.is_nonzero() {
            tally.add(cell.nu, false, cell.even.to_biguint());
        }
    }
    DpOutcome::Done(tally, nodes, pruned)
}

fn run_split<S: Signature>(
    formula: &Formula,
    head_len: usize,
    crit: Option<f64>,
) -> Result<(ParityTally, u64, u64)> {
    let table_error = |size: usize| Error::CeilingExceeded {
        op: "count_random_a1",
        ceiling: STATE_TABLE_CEILING as u32,
        unit: "signature states",
        actual: size.min(u32::MAX as usize) as u32,
    };
    match split_dp::<S, u64>(formula, head_len, crit) {
        DpOutcome::Done(tally, nodes, pruned) => return Ok((tally, nodes, pruned)),
        DpOutcome::CounterOverflow => {}
        DpOutcome::TableOverflow(size) => return Err(table_error(size)),
    }
    match split_dp::<S, BigUint>(formula, head_len, crit) {
        DpOutcome::Done(tally, nodes, pruned) => Ok((tally, nodes, pruned)),
        DpOutcome::TableOverflow(size) => Err(table_error(size)),
        DpOutcome::CounterOverflow => unreachable!("big integer counters do not overflow"),
    }
}

/// The split counter: head clauses (the first `m - sigma*n`) are
/// enumerated only up to the critical saturation, tail clauses (the last
/// `sigma*n`) exhaustively, and each monotone merged pair is tallied.
///
/// When `m <= sigma*n` the head is empty, nothing is cut off, and the
/// result equals the exhaustive count on every input. Otherwise the
/// count is correct unless some discarded head subtree fails to contain
/// a fruitless clause; on random instances that happens with probability
/// roughly `n^(-sigma * log2 e)`, so `exact` is reported as `false`.
pub fn count_random_a1(formula: &Formula, sigma: u32) -> Result<CountResult> {
    count_random_a1_mode(formula, sigma, CountMode::A1)
}

pub(crate) fn count_random_a1_mode(
    formula: &Formula,
    sigma: u32,
    mode: CountMode,
) -> Result<CountResult> {
    if sigma == 0 {
        return Err(Error::SigmaZero);
    }
    let n = formula.num_vars();
    let m = formula.num_clauses();
    let head_len = m.saturating_sub(sigma as usize * n as usize);

    if head_len == 0 {
        // Degenerate split: the tail loop covers the whole lattice, so
        // reuse the plain branch tree. Node counts coincide with the DP.
        let (tally, nodes, pruned) = branch_tree_count(formula, false, 1);
        return finish(formula, mode, tally, nodes, pruned);
    }

    // The conservative width choice: the smallest clause width gives the
    // largest critical saturation, hence the least aggressive cutoff.
    let k_eff = formula.min_width().expect("head_len > 0 implies clauses");
    let crit = Some(critical_saturation(n, k_eff)?);

    let (tally, nodes, pruned) = if n <= 64 {
        run_split::<PackedSignature>(formula, head_len, crit)?
    } else {
        run_split::<WideSignature>(formula, head_len, crit)?
    };
    finish(formula, mode, tally, nodes, pruned).map_err(|err| match err {
        // With the cutoff active an out-of-range total is the heuristic
        // missing, not a tally bug.
        Error::IdentityOutOfRange { value, n } => Error::SplitCountOutOfRange { value, n },
        other => other,
    })
}
