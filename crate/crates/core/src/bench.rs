//! Probability estimators and the benchmark sweep.
//!
//! The estimators measure, by Monte Carlo, the two quantities that drive
//! the split counter: the probability that a random clause is fruitless
//! for a sign state of a given size, and the probability that at least
//! one of `sigma*n` random clauses is fruitless for a state at the
//! critical saturation. The sweep runs the counting engines over a
//! parameter grid and emits one row per cell with measured node counts
//! and the closed-form prediction columns next to them.
//!
//! Measured probabilities in a row are taken at the critical-saturation
//! state `nu = ceil(s* . n)`. Estimator randomness is derived from the
//! cell seed, so a fixed grid and seed list reproduces identical output
//! bytes.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::count::{
    count_random_a1, critical_saturation, fruitless_probability_exact, signed_count_exhaustive,
    signed_count_pruned,
};
use crate::error::{Error, Result};
use crate::generator::{candidate_count, random_clause, random_formula, GeneratorConfig};
use crate::oracle::brute_force_count;

/// Fraction of `trials` random width-`k` clauses fruitless for a fixed
/// state mapping `nu` variables (all positive; the distribution only
/// depends on `nu`). Expectation is `C(nu, k) / (2^k * C(n, k))`.
pub fn estimate_fruitless_rate(
    num_vars: u32,
    width: u32,
    nu: u32,
    trials: u32,
    rng: &mut impl Rng,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::EmptySample);
    }
    assert!(nu <= num_vars, "nu exceeds variable count");
    let state = all_positive_state(num_vars, nu);
    let mut hits = 0u64;
    for _ in 0..trials {
        if state.is_fruitless(&random_clause(num_vars, width, rng)?) {
            hits += 1;
        }
    }
    Ok(hits as f64 / f64::from(trials))
}

/// Fraction of trials in which at least one of `sigma*n` random clauses
/// is fruitless for a state at the critical saturation. Lower-bounded in
/// the random model by `1 - n^(-sigma*log2(e))`.
pub fn estimate_prune_rate(
    num_vars: u32,
    width: u32,
    sigma: u32,
    trials: u32,
    rng: &mut impl Rng,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::EmptySample);
    }
    if sigma == 0 {
        return Err(Error::SigmaZero);
    }
    let nu = critical_nu(num_vars, width)?;
    if nu < width {
        return Err(Error::StateTooSmall { nu, k: width });
    }
    let state = all_positive_state(num_vars, nu);
    let draws = sigma as u64 * u64::from(num_vars);
    let mut hits = 0u64;
    for _ in 0..trials {
        for _ in 0..draws {
            if state.is_fruitless(&random_clause(num_vars, width, rng)?) {
                hits += 1;
                break;
            }
        }
    }
    Ok(hits as f64 / f64::from(trials))
}

fn all_positive_state(num_vars: u32, nu: u32) -> crate::count::SignState {
    let clauses: Vec<crate::cnf::Clause> = (1..=nu)
        .map(|v| crate::cnf::Clause::new(vec![crate::cnf::Literal::positive(v).unwrap()]).unwrap())
        .collect();
    crate::count::SignState::from_clauses(num_vars, clauses.iter())
        .expect("unit clauses of one polarity are jointly monotone")
}

/// Mapped-variable count at the critical saturation.
pub fn critical_nu(num_vars: u32, width: u32) -> Result<u32> {
    let crit = critical_saturation(num_vars, width)?;
    Ok(((crit * f64::from(num_vars)).ceil() as u32).min(num_vars))
}

/// Closed-form reference approximation `2^(-k(1 - log2 s))` of the
/// fruitless probability at saturation `s`. Reported for comparison,
/// never asserted.
pub fn fruitless_probability_approx(width: u32, saturation: f64) -> f64 {
    2f64.powf(-f64::from(width) * (1.0 - saturation.log2()))
}

/// Lower bound `1 - n^(-sigma*log2 e)` on the prune rate at or above the
/// critical saturation.
pub fn prune_rate_lower_bound(num_vars: u32, sigma: u32) -> f64 {
    1.0 - f64::from(num_vars).powf(-f64::from(sigma) * std::f64::consts::LOG2_E)
}

/// Pre-inequality exponent of the split counter's tail loop:
/// `log2(sigma*k)/k + 1/k - 1/(sigma*k^2)`.
pub fn inner_loop_exponent(width: u32, sigma: u32) -> f64 {
    let k = f64::from(width);
    let s = f64::from(sigma);
    (s * k).log2() / k + 1.0 / k - 1.0 / (s * k * k)
}

/// Grid specification for [`run_sweep`]. Cells are the cartesian product
/// `ns x ks x deltas x sigmas x seeds`, in that nesting order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SweepConfig {
    pub ns: Vec<u32>,
    pub ks: Vec<u32>,
    pub deltas: Vec<f64>,
    pub sigmas: Vec<u32>,
    pub seeds: Vec<u64>,
    /// Monte Carlo trials per estimator; at least 10^4 for the error
    /// bands documented in the row schema.
    #[serde(default = "default_trials")]
    pub trials: u32,
    /// Brute-force oracle cap on n.
    #[serde(default = "default_oracle_max_vars")]
    pub oracle_max_vars: u32,
    /// Branch-tree engine cap on m (exhaustive and pruned).
    #[serde(default = "default_tree_max_clauses")]
    pub tree_max_clauses: usize,
    /// Split-counter cap on n (its state table grows like 3^n).
    #[serde(default = "default_split_max_vars")]
    pub split_max_vars: u32,
}

fn default_trials() -> u32 {
    10_000
}
fn default_oracle_max_vars() -> u32 {
    20
}
fn default_tree_max_clauses() -> usize {
    22
}
fn default_split_max_vars() -> u32 {
    14
}

/// One sweep cell: parameters, measured counters, and the prediction
/// columns. Fields that a cell cannot produce (engine over its ceiling,
/// unsatisfiable parameters) stay `None` and serialize as null / empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchRow {
    pub n: u32,
    pub m: usize,
    pub k: u32,
    pub delta: f64,
    pub sigma: u32,
    pub seed: u64,
    pub nodes_exhaustive: Option<u64>,
    pub nodes_pruned: Option<u64>,
    pub nodes_a1: Option<u64>,
    pub count_agrees: Option<bool>,
    pub a1_agrees: Option<bool>,
    pub predicted_fruitless: Option<f64>,
    pub approx_fruitless: Option<f64>,
    pub measured_fruitless: Option<f64>,
    pub predicted_prune_lower_bound: Option<f64>,
    pub measured_prune_rate: Option<f64>,
    pub predicted_inner_exponent: Option<f64>,
}

/// Runs every cell of the grid: generate the instance, run the feasible
/// engines, measure the two probabilities, fill in the closed forms.
pub fn run_sweep(config: &SweepConfig) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &n in &config.ns {
        for &k in &config.ks {
            for &delta in &config.deltas {
                for &sigma in &config.sigmas {
                    for &seed in &config.seeds {
                        rows.push(run_cell(config, n, k, delta, sigma, seed));
                    }
                }
            }
        }
    }
    rows
}

fn run_cell(config: &SweepConfig, n: u32, k: u32, delta: f64, sigma: u32, seed: u64) -> BenchRow {
    let m = (delta * f64::from(n)).round().max(0.0) as usize;
    let mut row = BenchRow {
        n,
        m,
        k,
        delta,
        sigma,
        seed,
        nodes_exhaustive: None,
        nodes_pruned: None,
        nodes_a1: None,
        count_agrees: None,
        a1_agrees: None,
        predicted_fruitless: None,
        approx_fruitless: None,
        measured_fruitless: None,
        predicted_prune_lower_bound: None,
        measured_prune_rate: None,
        predicted_inner_exponent: None,
    };
    if k == 0 || k > n || n < 2 || sigma == 0 {
        return row;
    }

    row.predicted_inner_exponent = Some(inner_loop_exponent(k, sigma));
    row.predicted_prune_lower_bound = Some(prune_rate_lower_bound(n, sigma));
    if let Ok(nu) = critical_nu(n, k) {
        row.predicted_fruitless = fruitless_probability_exact(n, k, nu).to_f64();
        row.approx_fruitless = Some(fruitless_probability_approx(
            k,
            f64::from(nu) / f64::from(n),
        ));
        // Estimator stream is decoupled from the instance stream so that
        // adding engines never shifts the measurements.
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
        row.measured_fruitless = estimate_fruitless_rate(n, k, nu, config.trials, &mut rng).ok();
        row.measured_prune_rate = estimate_prune_rate(n, k, sigma, config.trials, &mut rng).ok();
    }

    if num_bigint::BigUint::from(m) > candidate_count(n, k) {
        return row;
    }
    let Ok(instance) = random_formula(&GeneratorConfig {
        num_vars: n,
        num_clauses: m,
        width: k,
        seed,
    }) else {
        return row;
    };

    let oracle = (n <= config.oracle_max_vars)
        .then(|| brute_force_count(&instance).ok())
        .flatten();

    let mut exact_counts = Vec::new();
    if m <= config.tree_max_clauses {
        if let Ok(result) = signed_count_exhaustive(&instance) {
            row.nodes_exhaustive = Some(result.nodes_visited);
            exact_counts.push(result.model_count);
        }
        if let Ok(result) = signed_count_pruned(&instance) {
            row.nodes_pruned = Some(result.nodes_visited);
            exact_counts.push(result.model_count);
        }
    }
    if let Some(oracle_count) = &oracle {
        if !exact_counts.is_empty() {
            row.count_agrees = Some(exact_counts.iter().all(|c| c == oracle_count));
        }
    }

    if n <= config.split_max_vars {
        match count_random_a1(&instance, sigma) {
            Ok(result) => {
                row.nodes_a1 = Some(result.nodes_visited);
                if let Some(oracle_count) = &oracle {
                    row.a1_agrees = Some(&result.model_count == oracle_count);
                }
            }
            // A cutoff that discards non-cancelling mass can push the
            // identity outside [0, 2^n]; that run is a definitive miss.
            Err(Error::SplitCountOutOfRange { .. }) => {
                row.a1_agrees = oracle.as_ref().map(|_| false);
            }
            Err(_) => {}
        }
    }
    row
}

const CSV_HEADER: &str = "n,m,k,delta,sigma,seed,nodesExhaustive,nodesPruned,nodesA1,\
countAgrees,a1Agrees,predictedFruitless,approxFruitless,measuredFruitless,\
predictedPruneLowerBound,measuredPruneRate,predictedInnerExponent";

fn push_opt_u64(out: &mut String, value: Option<u64>) {
    match value {
        Some(v) => {
            let _ = write!(out, ",{v}");
        }
        None => out.push(','),
    }
}

fn push_opt_bool(out: &mut String, value: Option<bool>) {
    match value {
        Some(v) => {
            let _ = write!(out, ",{v}");
        }
        None => out.push(','),
    }
}

fn push_opt_prob(out: &mut String, value: Option<f64>) {
    match value {
        Some(v) => {
            let _ = write!(out, ",{v:.6}");
        }
        None => out.push(','),
    }
}

/// Renders rows as CSV: probabilities with six fractional digits,
/// counters as integers, absent fields empty.
pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = write!(
            out,
            "{},{},{},{:.6},{},{}",
            row.n, row.m, row.k, row.delta, row.sigma, row.seed
        );
        push_opt_u64(&mut out, row.nodes_exhaustive);
        push_opt_u64(&mut out, row.nodes_pruned);
        push_opt_u64(&mut out, row.nodes_a1);
        push_opt_bool(&mut out, row.count_agrees);
        push_opt_bool(&mut out, row.a1_agrees);
        push_opt_prob(&mut out, row.predicted_fruitless);
        push_opt_prob(&mut out, row.approx_fruitless);
        push_opt_prob(&mut out, row.measured_fruitless);
        push_opt_prob(&mut out, row.predicted_prune_lower_bound);
        push_opt_prob(&mut out, row.measured_prune_rate);
        push_opt_prob(&mut out, row.predicted_inner_exponent);
        out.push('\n');
    }
    out
}

/// JSON alternative with identical field names.
pub fn rows_to_json(rows: &[BenchRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}
