//! DIMACS CNF reading and writing.

use std::fmt;
use std::io::{self, Read, Write};

use thiserror::Error;

use crate::model::{Clause, Formula, Lit};
use crate::scan::{ScanError, ScanErrorKind, Scanner};

#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("line {line}: expected 'p cnf <vars> <clauses>' header, found '{found}'")]
    BadHeader { line: u64, found: String },
    #[error("line {line}: expected integer, found '{token}'")]
    ExpectedInteger { line: u64, token: String },
    #[error("line {line}: non-ASCII byte 0x{byte:02x} in input")]
    NonAscii { line: u64, byte: u8 },
    #[error("line {line}: input ends inside an unterminated clause")]
    UnterminatedClause { line: u64 },
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl From<ScanError> for DimacsError {
    fn from(e: ScanError) -> DimacsError {
        match e.kind {
            ScanErrorKind::Io(io) => DimacsError::Io(io),
            ScanErrorKind::NonAscii(byte) => DimacsError::NonAscii { line: e.line, byte },
            ScanErrorKind::BadInteger(token) => DimacsError::ExpectedInteger { line: e.line, token },
        }
    }
}

/// Non-fatal oddities found while parsing; the formula is still usable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DimacsWarning {
    /// A literal mentions a variable above the header's declared count.
    VarAboveDeclared { line: u64, var: u64, declared: u64 },
    /// The number of clauses read differs from the header.
    ClauseCountMismatch { declared: u64, actual: u64 },
}

impl fmt::Display for DimacsWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimacsWarning::VarAboveDeclared { line, var, declared } => write!(
                f,
                "line {line}: variable {var} exceeds the {declared} declared in the header"
            ),
            DimacsWarning::ClauseCountMismatch { declared, actual } => write!(
                f,
                "header declares {declared} clauses but the file contains {actual}"
            ),
        }
    }
}

pub struct ParsedCnf {
    pub formula: Formula,
    pub warnings: Vec<DimacsWarning>,
    /// Bytes pulled from the reader; for `--stats` style reporting.
    pub bytes_read: u64,
    /// High-water mark of the parser's input buffer. Stays at one chunk no
    /// matter how large the file — asserted by tests, not just promised.
    pub peak_buffered: usize,
}

/// Parse a DIMACS CNF file.
///
/// Comment lines (`c`) are skipped wherever they appear. Clauses may span
/// lines and are terminated by `0`. Variables above the declared count and
/// a wrong declared clause count are warnings, not errors.
pub fn parse_dimacs<R: Read>(input: R) -> Result<ParsedCnf, DimacsError> {
    let mut sc = Scanner::new(input);
    let mut tok = Vec::new();

    // Header: comments may precede it.
    let (declared_vars, declared_clauses) = loop {
        sc.skip_ws()?;
        match sc.peek()? {
            Some(b'c') => {
                sc.skip_rest_of_line()?;
            }
            Some(b'p') => {
                let line = sc.line();
                let mut fields = Vec::new();
                let mut tok = Vec::new();
                while sc.next_token(&mut tok, true)? {
                    fields.push(String::from_utf8_lossy(&tok).into_owned());
                }
                let counts: Option<(u64, u64)> = match fields.as_slice() {
                    [p, fmt, v, c] if p == "p" && fmt == "cnf" => {
                        match (v.parse::<u64>(), c.parse::<u64>()) {
                            (Ok(v), Ok(c)) => Some((v, c)),
                            _ => None,
                        }
                    }
                    _ => None,
                };
                match counts {
                    Some(vc) => break vc,
                    None => {
                        return Err(DimacsError::BadHeader {
                            line,
                            found: fields.join(" "),
                        })
                    }
                }
            }
            Some(_) => {
                sc.next_token(&mut tok, false)?;
                return Err(DimacsError::BadHeader {
                    line: sc.line(),
                    found: String::from_utf8_lossy(&tok).into_owned(),
                });
            }
            None => {
                return Err(DimacsError::BadHeader {
                    line: sc.line(),
                    found: String::new(),
                })
            }
        }
    };

    let mut clauses = Vec::new();
    let mut warnings = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut open = false;
    let mut warned_vars: Vec<u64> = Vec::new();

    loop {
        sc.skip_ws()?;
        match sc.peek()? {
            None => break,
            Some(b'c') => {
                sc.skip_rest_of_line()?;
                continue;
            }
            Some(_) => {}
        }
        let line = sc.line();
        sc.next_token(&mut tok, false)?;
        let value = sc.token_to_i64(&tok)?;
        if value == 0 {
            clauses.push(Clause::new(current.drain(..)));
            open = false;
        } else {
            let lit = Lit::new(value).expect("token_to_i64 excludes 0 here");
            if lit.var() > declared_vars && !warned_vars.contains(&lit.var()) {
                warned_vars.push(lit.var());
                warnings.push(DimacsWarning::VarAboveDeclared {
                    line,
                    var: lit.var(),
                    declared: declared_vars,
                });
            }
            current.push(lit);
            open = true;
        }
    }

    if open {
        return Err(DimacsError::UnterminatedClause { line: sc.line() });
    }
    if clauses.len() as u64 != declared_clauses {
        warnings.push(DimacsWarning::ClauseCountMismatch {
            declared: declared_clauses,
            actual: clauses.len() as u64,
        });
    }

    Ok(ParsedCnf {
        formula: Formula::with_declared(clauses, declared_vars, declared_clauses),
        warnings,
        bytes_read: sc.bytes_read(),
        peak_buffered: sc.peak_buffered(),
    })
}

/// Convenience wrapper for in-memory text.
pub fn parse_dimacs_str(text: &str) -> Result<ParsedCnf, DimacsError> {
    parse_dimacs(text.as_bytes())
}

/// Write a formula in DIMACS syntax, one clause per line.
pub fn serialize_dimacs<W: Write>(formula: &Formula, mut w: W) -> io::Result<()> {
    writeln!(
        w,
        "p cnf {} {}",
        formula.declared_vars(),
        formula.declared_clauses()
    )?;
    for clause in formula.clauses() {
        writeln!(w, "{clause}")?;
    }
    Ok(())
}

pub fn serialize_dimacs_string(formula: &Formula) -> String {
    let mut out = Vec::new();
    serialize_dimacs(formula, &mut out).expect("writing to Vec cannot fail");
    String::from_utf8(out).expect("DIMACS output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "c a small unsatisfiable formula\np cnf 3 5\n 1  2 0\n-1  2 0\n 1 -2 0\n-1  3 0\n-2 -3 0\n";

    #[test]
    fn parses_the_example_formula() {
        let parsed = parse_dimacs_str(EXAMPLE).unwrap();
        let f = &parsed.formula;
        assert!(parsed.warnings.is_empty());
        assert_eq!(f.len(), 5);
        assert_eq!(f.declared_vars(), 3);
        assert_eq!(f.declared_clauses(), 5);
        assert_eq!(f.clauses()[0], Clause::from_codes([1, 2]));
        assert_eq!(f.clauses()[4], Clause::from_codes([-2, -3]));
    }

    #[test]
    fn empty_formula_and_empty_clause() {
        let parsed = parse_dimacs_str("p cnf 0 0\n").unwrap();
        assert!(parsed.formula.is_empty());
        assert!(parsed.warnings.is_empty());

        let parsed = parse_dimacs_str("p cnf 1 1\n0\n").unwrap();
        assert_eq!(parsed.formula.clauses()[0], Clause::empty());
    }

    #[test]
    fn clauses_may_span_lines_and_comments_interleave() {
        let parsed = parse_dimacs_str("p cnf 2 1\n1\nc middle\n2\n0\n").unwrap();
        assert_eq!(parsed.formula.clauses()[0], Clause::from_codes([1, 2]));
    }

    #[test]
    fn oversized_variable_is_a_warning_not_an_error() {
        let parsed = parse_dimacs_str("p cnf 1 2\n1 0\n4 0\n").unwrap();
        assert_eq!(parsed.formula.len(), 2);
        assert_eq!(
            parsed.warnings,
            vec![DimacsWarning::VarAboveDeclared { line: 3, var: 4, declared: 1 }]
        );
    }

    #[test]
    fn clause_count_mismatch_is_a_warning() {
        let parsed = parse_dimacs_str("p cnf 1 3\n1 0\n").unwrap();
        assert_eq!(
            parsed.warnings,
            vec![DimacsWarning::ClauseCountMismatch { declared: 3, actual: 1 }]
        );
    }

    #[test]
    fn header_errors() {
        assert!(matches!(
            parse_dimacs_str("p cnf x 5\n1 0\n"),
            Err(DimacsError::BadHeader { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs_str("1 2 0\n"),
            Err(DimacsError::BadHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs_str(""),
            Err(DimacsError::BadHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs_str("p cnf 2 1 7\n1 0\n"),
            Err(DimacsError::BadHeader { .. })
        ));
        // Negative counts are not a valid header.
        assert!(matches!(
            parse_dimacs_str("p cnf -3 5\n"),
            Err(DimacsError::BadHeader { .. })
        ));
    }

    #[test]
    fn body_errors() {
        assert!(matches!(
            parse_dimacs_str("p cnf 2 1\n1 two 0\n"),
            Err(DimacsError::ExpectedInteger { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs_str("p cnf 2 1\n1 2\n"),
            Err(DimacsError::UnterminatedClause { .. })
        ));
        assert!(matches!(
            parse_dimacs(&[b'p', b' ', 0xFFu8][..]),
            Err(DimacsError::NonAscii { .. })
        ));
    }

    #[test]
    fn serialization_is_canonical_and_roundtrips() {
        let f = Formula::new(vec![Clause::from_codes([2, 1])]);
        assert_eq!(serialize_dimacs_string(&f), "p cnf 2 1\n1 2 0\n");

        let f = Formula::new(vec![]);
        assert_eq!(serialize_dimacs_string(&f), "p cnf 0 0\n");

        let original = parse_dimacs_str(EXAMPLE).unwrap().formula;
        let reparsed = parse_dimacs_str(&serialize_dimacs_string(&original))
            .unwrap()
            .formula;
        assert_eq!(original, reparsed);
    }

    #[test]
    fn comment_volume_does_not_grow_resident_memory() {
        let mut text = String::from("p cnf 1 1\n");
        for i in 0..40_000 {
            text.push_str(&format!("c filler comment number {i} with some padding text\n"));
        }
        text.push_str("1 0\n");
        let parsed = parse_dimacs_str(&text).unwrap();
        assert_eq!(parsed.formula.len(), 1);
        assert!(text.len() > 1_000_000);
        assert_eq!(parsed.bytes_read, text.len() as u64);
        assert!(parsed.peak_buffered <= crate::scan::CHUNK);
    }
}
