//! The GRIT and DRUP proof text formats.
//!
//! A GRIT file is a sequence of lines, each carrying exactly two zero
//! terminators and one of three actions:
//!
//! ```text
//! <id> <lits> 0 0            original clause (copied from the formula)
//! <id> <lits> 0 <ids> 0      clause derived by unit propagation over <ids>
//! 0 <ids> 0                  delete the named clauses
//! ```
//!
//! The split between the last two is purely positional: an empty id list
//! means "original". Tabs and spaces are interchangeable, tokens are
//! 7-bit ASCII decimal integers, and readers work line by line so a proof
//! never needs to fit in memory.
//!
//! DRUP lines carry a single zero terminator: `d <lits> 0` deletes a
//! clause by value, anything else adds one.

use std::fmt;
use std::io::{self, Read, Write};

use thiserror::Error;

use crate::model::{Clause, ClauseId, Lit};
use crate::scan::{ScanError, ScanErrorKind, Scanner};

/// One line of a GRIT proof.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ProofAction {
    /// Remove clauses from the live set. An empty list is a no-op.
    Delete(Vec<ClauseId>),
    /// Introduce a clause that must occur in the input formula.
    Original { id: ClauseId, clause: Clause },
    /// Introduce a derived clause; `antecedents` name the live clauses
    /// that make reverse unit propagation succeed, in replay order.
    Rup {
        id: ClauseId,
        clause: Clause,
        antecedents: Vec<ClauseId>,
    },
}

impl ProofAction {
    /// The id this action introduces, if any.
    pub fn introduces(&self) -> Option<ClauseId> {
        match self {
            ProofAction::Delete(_) => None,
            ProofAction::Original { id, .. } | ProofAction::Rup { id, .. } => Some(*id),
        }
    }

    pub fn is_empty_rup(&self) -> bool {
        matches!(self, ProofAction::Rup { clause, .. } if clause.is_empty())
    }
}

impl fmt::Debug for ProofAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut line = Vec::new();
        write_grit_action(&mut line, self).expect("writing to Vec cannot fail");
        write!(f, "{}", String::from_utf8_lossy(&line).trim_end())
    }
}

/// One line of a DRUP trace.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DrupAction {
    Add(Clause),
    Delete(Clause),
}

#[derive(Debug, Error)]
pub enum ProofParseError {
    #[error("line {line}: expected integer, found '{token}' (offset {offset})")]
    ExpectedInteger { line: u64, offset: u64, token: String },
    #[error("line {line}: clause id {value} is not positive (offset {offset})")]
    NonPositiveId { line: u64, offset: u64, value: i64 },
    #[error("line {line}: line ends before its zero terminators")]
    MissingTerminator { line: u64 },
    #[error("line {line}: unexpected trailing tokens after the final 0 (offset {offset})")]
    TrailingTokens { line: u64, offset: u64 },
    #[error("line {line}: non-ASCII byte 0x{byte:02x} (offset {offset})")]
    NonAscii { line: u64, offset: u64, byte: u8 },
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl From<ScanError> for ProofParseError {
    fn from(e: ScanError) -> ProofParseError {
        match e.kind {
            ScanErrorKind::Io(io) => ProofParseError::Io(io),
            ScanErrorKind::NonAscii(byte) => ProofParseError::NonAscii {
                line: e.line,
                offset: e.offset,
                byte,
            },
            ScanErrorKind::BadInteger(token) => ProofParseError::ExpectedInteger {
                line: e.line,
                offset: e.offset,
                token,
            },
        }
    }
}

/// Pull-based reader over a GRIT proof: an iterator of actions that holds
/// one line at a time plus a fixed-size input buffer.
pub struct GritReader<R> {
    sc: Scanner<R>,
    tok: Vec<u8>,
    failed: bool,
}

impl<R: Read> GritReader<R> {
    pub fn new(input: R) -> GritReader<R> {
        GritReader {
            sc: Scanner::new(input),
            tok: Vec::new(),
            failed: false,
        }
    }

    /// 1-based line number of the reader's current position.
    pub fn line(&self) -> u64 {
        self.sc.line()
    }

    pub fn bytes_read(&self) -> u64 {
        self.sc.bytes_read()
    }

    /// High-water mark of input bytes buffered at once.
    pub fn peak_buffered(&self) -> usize {
        self.sc.peak_buffered()
    }

    /// Next signed integer on the current line, `None` at end of line.
    fn next_int(&mut self) -> Result<Option<i64>, ProofParseError> {
        if !self.sc.next_token(&mut self.tok, true)? {
            return Ok(None);
        }
        Ok(Some(self.sc.token_to_i64(&self.tok)?))
    }

    fn require_int(&mut self) -> Result<i64, ProofParseError> {
        self.next_int()?.ok_or(ProofParseError::MissingTerminator {
            line: self.sc.line(),
        })
    }

    fn require_id(&mut self, value: i64) -> Result<ClauseId, ProofParseError> {
        u64::try_from(value)
            .ok()
            .and_then(ClauseId::new)
            .ok_or(ProofParseError::NonPositiveId {
                line: self.sc.line(),
                offset: self.sc.offset(),
                value,
            })
    }

    /// Ids up to (and consuming) a zero terminator.
    fn id_list(&mut self) -> Result<Vec<ClauseId>, ProofParseError> {
        let mut ids = Vec::new();
        loop {
            let v = self.require_int()?;
            if v == 0 {
                return Ok(ids);
            }
            ids.push(self.require_id(v)?);
        }
    }

    /// Literals up to (and consuming) a zero terminator.
    fn lit_list(&mut self) -> Result<Clause, ProofParseError> {
        let mut lits = Vec::new();
        loop {
            let v = self.require_int()?;
            if v == 0 {
                return Ok(Clause::new(lits));
            }
            lits.push(Lit::new(v).expect("token_to_i64 excludes 0 and i64::MIN"));
        }
    }

    fn end_of_line(&mut self) -> Result<(), ProofParseError> {
        if self.next_int()?.is_some() {
            return Err(ProofParseError::TrailingTokens {
                line: self.sc.line(),
                offset: self.sc.offset(),
            });
        }
        self.sc.bump()?; // the newline, if any
        Ok(())
    }

    fn next_action(&mut self) -> Result<Option<ProofAction>, ProofParseError> {
        // Find the first token, skipping blank lines.
        let first = loop {
            match self.next_int()? {
                Some(v) => break v,
                None => {
                    if self.sc.bump()?.is_none() {
                        return Ok(None);
                    }
                }
            }
        };

        let action = if first == 0 {
            ProofAction::Delete(self.id_list()?)
        } else {
            let id = self.require_id(first)?;
            let clause = self.lit_list()?;
            let antecedents = self.id_list()?;
            if antecedents.is_empty() {
                ProofAction::Original { id, clause }
            } else {
                ProofAction::Rup { id, clause, antecedents }
            }
        };
        self.end_of_line()?;
        Ok(Some(action))
    }
}

impl<R: Read> Iterator for GritReader<R> {
    type Item = Result<ProofAction, ProofParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        match self.next_action() {
            Ok(Some(a)) => Some(Ok(a)),
            Ok(None) => None,
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

/// Pull-based reader over a DRUP trace.
pub struct DrupReader<R> {
    sc: Scanner<R>,
    tok: Vec<u8>,
    failed: bool,
}

impl<R: Read> DrupReader<R> {
    pub fn new(input: R) -> DrupReader<R> {
        DrupReader {
            sc: Scanner::new(input),
            tok: Vec::new(),
            failed: false,
        }
    }

    pub fn line(&self) -> u64 {
        self.sc.line()
    }

    fn lit_list(&mut self, mut first: Option<Lit>) -> Result<Clause, ProofParseError> {
        let mut lits = Vec::new();
        if let Some(l) = first.take() {
            lits.push(l);
        }
        loop {
            let v = match self.sc.next_token(&mut self.tok, true)? {
                true => self.sc.token_to_i64(&self.tok)?,
                false => {
                    return Err(ProofParseError::MissingTerminator {
                        line: self.sc.line(),
                    })
                }
            };
            if v == 0 {
                break;
            }
            lits.push(Lit::new(v).expect("token_to_i64 excludes 0 and i64::MIN"));
        }
        // Nothing may follow the terminator.
        if self.sc.next_token(&mut self.tok, true)? {
            return Err(ProofParseError::TrailingTokens {
                line: self.sc.line(),
                offset: self.sc.offset(),
            });
        }
        self.sc.bump()?; // the newline, if any
        Ok(Clause::new(lits))
    }

    fn next_action(&mut self) -> Result<Option<DrupAction>, ProofParseError> {
        // First token of the line, skipping blank lines.
        loop {
            if !self.sc.next_token(&mut self.tok, true)? {
                if self.sc.bump()?.is_none() {
                    return Ok(None);
                }
                continue;
            }
            break;
        }
        if self.tok == b"d" {
            return Ok(Some(DrupAction::Delete(self.lit_list(None)?)));
        }
        let v = self.sc.token_to_i64(&self.tok)?;
        if v == 0 {
            // A lone zero adds the empty clause; enforce end of line.
            if self.sc.next_token(&mut self.tok, true)? {
                return Err(ProofParseError::TrailingTokens {
                    line: self.sc.line(),
                    offset: self.sc.offset(),
                });
            }
            self.sc.bump()?;
            return Ok(Some(DrupAction::Add(Clause::empty())));
        }
        let first = Lit::new(v).expect("non-zero");
        Ok(Some(DrupAction::Add(self.lit_list(Some(first))?)))
    }
}

impl<R: Read> Iterator for DrupReader<R> {
    type Item = Result<DrupAction, ProofParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        match self.next_action() {
            Ok(Some(a)) => Some(Ok(a)),
            Ok(None) => None,
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

/// Write one GRIT line in normal form: single spaces, trailing newline.
///
/// Note `Rup` with an empty antecedent list would re-parse as `Original`;
/// such an action is never valid (propagation over no antecedents fails),
/// so serialization rejects it in debug builds.
pub fn write_grit_action<W: Write>(mut w: W, action: &ProofAction) -> io::Result<()> {
    match action {
        ProofAction::Delete(ids) => {
            w.write_all(b"0")?;
            for id in ids {
                write!(w, " {id}")?;
            }
            w.write_all(b" 0\n")
        }
        ProofAction::Original { id, clause } => {
            write!(w, "{id}")?;
            for l in clause.iter() {
                write!(w, " {l}")?;
            }
            w.write_all(b" 0 0\n")
        }
        ProofAction::Rup { id, clause, antecedents } => {
            debug_assert!(!antecedents.is_empty(), "a Rup action needs antecedents");
            write!(w, "{id}")?;
            for l in clause.iter() {
                write!(w, " {l}")?;
            }
            w.write_all(b" 0")?;
            for a in antecedents {
                write!(w, " {a}")?;
            }
            w.write_all(b" 0\n")
        }
    }
}

pub fn serialize_grit<'a, W: Write>(
    actions: impl IntoIterator<Item = &'a ProofAction>,
    mut w: W,
) -> io::Result<()> {
    for action in actions {
        write_grit_action(&mut w, action)?;
    }
    Ok(())
}

pub fn serialize_grit_string(actions: &[ProofAction]) -> String {
    let mut out = Vec::new();
    serialize_grit(actions, &mut out).expect("writing to Vec cannot fail");
    String::from_utf8(out).expect("GRIT output is ASCII")
}

/// Write one DRUP line: `d` prefix for deletions, literals, single zero.
pub fn write_drup_action<W: Write>(mut w: W, action: &DrupAction) -> io::Result<()> {
    let clause = match action {
        DrupAction::Add(c) => c,
        DrupAction::Delete(c) => {
            w.write_all(b"d ")?;
            c
        }
    };
    for l in clause.iter() {
        write!(w, "{l} ")?;
    }
    w.write_all(b"0\n")
}

pub fn serialize_drup_string(actions: &[DrupAction]) -> String {
    let mut out = Vec::new();
    for a in actions {
        write_drup_action(&mut out, a).expect("writing to Vec cannot fail");
    }
    String::from_utf8(out).expect("DRUP output is ASCII")
}

/// Parse a GRIT proof held in memory, failing on the first bad line.
pub fn parse_grit_str(text: &str) -> Result<Vec<ProofAction>, ProofParseError> {
    GritReader::new(text.as_bytes()).collect()
}

/// Parse a DRUP trace held in memory, failing on the first bad line.
pub fn parse_drup_str(text: &str) -> Result<Vec<DrupAction>, ProofParseError> {
    DrupReader::new(text.as_bytes()).collect()
}
