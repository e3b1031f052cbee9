//! DIMACS CNF reading and writing.
//!
//! Accepted input: `c` comment lines, one `p cnf <vars> <clauses>` header,
//! then one clause per line as nonzero integers terminated by `0`. Lines
//! may end in `\n` or `\r\n`. Clause order is preserved, so
//! `parse(write(f)) == f` including ordering.

use std::fmt::Write as _;

use crate::cnf::{Clause, Formula};
use crate::error::{Error, Result};

fn dimacs_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Dimacs {
        line,
        msg: msg.into(),
    }
}

/// Parses DIMACS CNF text into a [`Formula`].
pub fn parse_dimacs(text: &str) -> Result<Formula> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(dimacs_err(line_no, "second header line"));
            }
            let mut parts = line.split_whitespace();
            let (p, kind) = (parts.next(), parts.next());
            if p != Some("p") || kind != Some("cnf") {
                return Err(dimacs_err(line_no, format!("malformed header `{line}`")));
            }
            let num_vars: u32 = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| dimacs_err(line_no, "header variable count is not a number"))?;
            let num_clauses: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| dimacs_err(line_no, "header clause count is not a number"))?;
            if parts.next().is_some() {
                return Err(dimacs_err(line_no, "trailing tokens after header"));
            }
            header = Some((num_vars, num_clauses));
            continue;
        }

        let (num_vars, _) =
            header.ok_or_else(|| dimacs_err(line_no, "clause line before `p cnf` header"))?;

        let mut codes: Vec<i64> = Vec::new();
        let mut terminated = false;
        for token in line.split_whitespace() {
            if terminated {
                return Err(dimacs_err(line_no, "tokens after terminating 0"));
            }
            let code: i64 = token
                .parse()
                .map_err(|_| dimacs_err(line_no, format!("bad literal `{token}`")))?;
            if code == 0 {
                terminated = true;
            } else {
                codes.push(code);
            }
        }
        if !terminated {
            return Err(dimacs_err(line_no, "clause line not terminated by 0"));
        }
        if codes.is_empty() {
            return Err(dimacs_err(line_no, "empty clause"));
        }
        let clause = Clause::from_dimacs(&codes).map_err(|e| dimacs_err(line_no, e.to_string()))?;
        if clause.max_var() > num_vars {
            return Err(dimacs_err(
                line_no,
                format!(
                    "variable {} exceeds declared count {num_vars}",
                    clause.max_var()
                ),
            ));
        }
        clauses.push(clause);
    }

    let (num_vars, declared) = header.ok_or_else(|| dimacs_err(0, "missing `p cnf` header"))?;
    if clauses.len() != declared {
        return Err(Error::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        });
    }
    Formula::new(num_vars, clauses)
}

/// Serializes a formula to DIMACS text. Literals are written in each
/// clause's canonical (sorted by variable) order.
pub fn write_dimacs(formula: &Formula) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p cnf {} {}",
        formula.num_vars(),
        formula.num_clauses()
    );
    for clause in formula.clauses() {
        for lit in clause.literals() {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        let _ = writeln!(out, "0");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Sign;

    #[test]
    fn parses_simple_formula() {
        let f = parse_dimacs("p cnf 3 2\n1 -2 0\n2 3 0").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.num_clauses(), 2);
        let c0 = &f.clauses()[0];
        assert_eq!(c0.literals()[0].var(), 1);
        assert_eq!(c0.literals()[0].sign(), Sign::Positive);
        assert_eq!(c0.literals()[1].var(), 2);
        assert_eq!(c0.literals()[1].sign(), Sign::Negative);
    }

    #[test]
    fn rejects_empty_clause() {
        let err = parse_dimacs("p cnf 3 1\n0").unwrap_err();
        assert!(matches!(err, Error::Dimacs { line: 2, .. }), "{err}");
    }

    #[test]
    fn rejects_repeated_variable_in_clause() {
        assert!(parse_dimacs("p cnf 3 1\n1 -1 0").is_err());
        assert!(parse_dimacs("p cnf 3 1\n2 2 0").is_err());
    }

    #[test]
    fn rejects_duplicate_clause() {
        let err = parse_dimacs("p cnf 3 2\n1 2 0\n2 1 0").unwrap_err();
        assert_eq!(err, Error::DuplicateClause { position: 1 });
    }

    #[test]
    fn rejects_count_mismatch_and_bad_header() {
        assert_eq!(
            parse_dimacs("p cnf 3 2\n1 0"),
            Err(Error::ClauseCountMismatch {
                declared: 2,
                found: 1
            })
        );
        assert!(parse_dimacs("p dnf 3 0").is_err());
        assert!(parse_dimacs("1 0").is_err());
        assert!(parse_dimacs("").is_err());
    }

    #[test]
    fn rejects_out_of_range_variable() {
        assert!(parse_dimacs("p cnf 2 1\n1 3 0").is_err());
    }

    #[test]
    fn writes_single_clause() {
        let f = parse_dimacs("p cnf 1 1\n1 0").unwrap();
        assert_eq!(write_dimacs(&f), "p cnf 1 1\n1 0\n");
    }

    #[test]
    fn writes_empty_formula() {
        let f = Formula::new(2, vec![]).unwrap();
        assert_eq!(write_dimacs(&f), "p cnf 2 0\n");
    }

    #[test]
    fn accepts_comments_blank_lines_and_crlf() {
        let f = parse_dimacs("c a comment\r\n\r\np cnf 2 1\r\nc mid\r\n-1 2 0\r\n").unwrap();
        assert_eq!(f.num_clauses(), 1);
    }

    #[test]
    fn round_trips_a_seeded_instance() {
        let f = crate::generator::random_formula(&crate::generator::GeneratorConfig {
            num_vars: 10,
            num_clauses: 20,
            width: 3,
            seed: 17,
        })
        .unwrap();
        assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
    }

    proptest::proptest! {
        /// parse . write is the identity, clause order included.
        #[test]
        fn round_trip_is_identity(
            n in 1..=10u32,
            m in 0..=15usize,
            k in 1..=4u32,
            seed in proptest::prelude::any::<u64>(),
        ) {
            use num_traits::ToPrimitive;
            let k = k.min(n);
            let bound = crate::generator::candidate_count(n, k)
                .to_u64()
                .unwrap_or(u64::MAX);
            let m = (m as u64).min(bound) as usize;
            let f = crate::generator::random_formula(&crate::generator::GeneratorConfig {
                num_vars: n,
                num_clauses: m,
                width: k,
                seed,
            })
            .unwrap();
            proptest::prop_assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
        }
    }
}
