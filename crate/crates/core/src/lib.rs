//! Exact #SAT model counting via signed enumeration of monotone
//! sub-formulae.
//!
//! The count of satisfying assignments of a CNF formula equals
//! `2^n - sum over v of (O_v - E_v) * 2^(n-v)`, where `O_v` / `E_v` count
//! the monotone sub-formulae (clause subsets in which every variable
//! keeps a single polarity) with `v` variables and an odd / even number
//! of clauses. This crate provides:
//!
//! * [`cnf`] — the CNF data model and [`dimacs`] file I/O;
//! * [`generator`] — seeded uniform random k-CNF instances;
//! * [`count`] — the counting engines: exhaustive enumeration, sound
//!   fruitless-clause pruning, and the head/tail split counter;
//! * [`inflation`] — the count-preserving random widening reduction and
//!   the counter built on top of it;
//! * [`oracle`] — independent brute-force ground truth;
//! * [`mod@bench`] — probability estimators and the sweep harness.

pub mod bench;
pub mod cnf;
pub mod count;
pub mod dimacs;
pub mod error;
pub mod generator;
pub mod inflation;
pub mod oracle;

pub use cnf::{Assignment, Clause, Formula, Literal, Sign};
pub use count::{CountMode, CountResult, ParityTally, SignState};
pub use error::{Error, Result};
