//! Brute-force ground truth for testing and validation.
//!
//! Two independent routes to the model count:
//! * [`brute_force_count`] walks all `2^n` assignments and applies the
//!   satisfaction definition literally.
//! * [`brute_force_signed_sum`] walks all `2^m` clause subsets, tallies
//!   monotone ones by variable count and clause parity, and evaluates
//!   `|S| = sum over v of (E_v - O_v) * 2^(n-v)` including the empty
//!   subset at v = 0.
//!
//! The signed-sum route deliberately avoids the counting engine's
//! sign-state machinery so a bug there cannot hide in both
//! implementations. Clarity over speed throughout.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::cnf::{Assignment, Formula, Sign};
use crate::error::{Error, Result};

/// Hard ceiling on n for assignment enumeration.
pub const MAX_BRUTE_FORCE_VARS: u32 = 30;
/// Hard ceiling on m for subset enumeration.
pub const MAX_SIGNED_SUM_CLAUSES: u32 = 22;

/// Counts satisfying assignments by enumerating all `2^n` of them.
pub fn brute_force_count(formula: &Formula) -> Result<BigUint> {
    let n = formula.num_vars();
    if n > MAX_BRUTE_FORCE_VARS {
        return Err(Error::CeilingExceeded {
            op: "brute_force_count",
            ceiling: MAX_BRUTE_FORCE_VARS,
            unit: "variables",
            actual: n,
        });
    }
    let mut satisfying: u64 = 0;
    for index in 0..(1u64 << n) {
        if formula.evaluate(&Assignment::from_index(index, n)) {
            satisfying += 1;
        }
    }
    Ok(BigUint::from(satisfying))
}

/// Counts satisfying assignments by direct subset enumeration: every
/// clause subset is tested for monotonicity with a flat per-variable sign
/// scan, no incremental state.
pub fn brute_force_signed_sum(formula: &Formula) -> Result<BigUint> {
    let n = formula.num_vars();
    let m = formula.num_clauses();
    if m as u64 > u64::from(MAX_SIGNED_SUM_CLAUSES) {
        return Err(Error::CeilingExceeded {
            op: "brute_force_signed_sum",
            ceiling: MAX_SIGNED_SUM_CLAUSES,
            unit: "clauses",
            actual: m as u32,
        });
    }

    // odd[v], even[v]: monotone subsets with v variables and odd/even
    // clause count. The empty subset lands in even[0].
    let mut odd = vec![0u64; n as usize + 1];
    let mut even = vec![0u64; n as usize + 1];
    let mut signs: Vec<Option<Sign>> = vec![None; n as usize + 1];

    'subset: for subset in 0u64..(1u64 << m) {
        signs.fill(None);
        let mut vars = 0u32;
        let mut clause_count = 0u32;
        for (i, clause) in formula.clauses().iter().enumerate() {
            if subset >> i & 1 == 0 {
                continue;
            }
            clause_count += 1;
            for lit in clause.literals() {
                match signs[lit.var() as usize] {
                    None => {
                        signs[lit.var() as usize] = Some(lit.sign());
                        vars += 1;
                    }
                    Some(sign) if sign == lit.sign() => {}
                    Some(_) => continue 'subset,
                }
            }
        }
        if clause_count % 2 == 1 {
            odd[vars as usize] += 1;
        } else {
            even[vars as usize] += 1;
        }
    }

    let mut total = BigInt::zero();
    for v in 0..=n as usize {
        let weight = BigInt::from(1u8) << (n as usize - v);
        total += (BigInt::from(even[v]) - BigInt::from(odd[v])) * weight;
    }
    let (sign, magnitude) = total.into_parts();
    if sign == num_bigint::Sign::Minus {
        return Err(Error::IdentityOutOfRange {
            value: format!("-{magnitude}"),
            n,
        });
    }
    Ok(magnitude)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Clause;
    use crate::generator::{random_formula, GeneratorConfig};

    fn formula(n: u32, clause_codes: &[&[i64]]) -> Formula {
        let clauses = clause_codes
            .iter()
            .map(|codes| Clause::from_dimacs(codes).unwrap())
            .collect();
        Formula::new(n, clauses).unwrap()
    }

    #[test]
    fn empty_formula_counts_all_assignments() {
        let f = Formula::new(4, vec![]).unwrap();
        assert_eq!(brute_force_count(&f).unwrap(), BigUint::from(16u32));
        let f5 = Formula::new(5, vec![]).unwrap();
        assert_eq!(brute_force_signed_sum(&f5).unwrap(), BigUint::from(32u32));
    }

    #[test]
    fn contradictory_units_count_zero() {
        let f = formula(1, &[&[1], &[-1]]);
        assert_eq!(brute_force_count(&f).unwrap(), BigUint::zero());
        assert_eq!(brute_force_signed_sum(&f).unwrap(), BigUint::zero());
    }

    #[test]
    fn single_wide_clause() {
        let f = formula(3, &[&[1, 2, 3]]);
        assert_eq!(brute_force_count(&f).unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn single_clause_on_two_vars() {
        let f = formula(2, &[&[1, 2]]);
        assert_eq!(brute_force_signed_sum(&f).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn ceilings_are_enforced() {
        let f = Formula::new(31, vec![]).unwrap();
        assert!(brute_force_count(&f).is_err());
    }

    #[test]
    fn signed_sum_matches_assignment_enumeration_on_random_corpus() {
        for seed in 0..40u64 {
            let n = 4 + (seed % 7) as u32; // 4..=10
            let m = (seed % 17) as usize; // 0..=16
            let k = 2 + (seed % 3) as u32; // 2..=4, always <= n
            let f = random_formula(&GeneratorConfig {
                num_vars: n,
                num_clauses: m,
                width: k,
                seed,
            })
            .unwrap();
            assert_eq!(
                brute_force_signed_sum(&f).unwrap(),
                brute_force_count(&f).unwrap(),
                "disagreement at n={n} m={m} k={k} seed={seed}",
            );
        }
    }
}
