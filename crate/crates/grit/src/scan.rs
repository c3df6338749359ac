//! Chunked byte scanner shared by the text-format parsers.
//!
//! Reads through a fixed-size buffer so that parsing a multi-gigabyte
//! proof never holds more than [`CHUNK`] bytes of input at once. The
//! high-water mark of the buffer is exposed so tests can assert the
//! streaming behaviour instead of trusting it.

use std::io::{self, Read};

/// Size of the read buffer. Small enough that "input is far larger than
/// anything buffered" is a meaningful, testable claim.
pub(crate) const CHUNK: usize = 8 * 1024;

/// Longest accepted token. An `i64` needs at most 20 characters; anything
/// longer is garbage and gets rejected before it can bloat memory.
pub(crate) const MAX_TOKEN: usize = 64;

#[derive(Debug)]
pub(crate) struct ScanError {
    pub kind: ScanErrorKind,
    pub line: u64,
    pub offset: u64,
}

#[derive(Debug)]
pub(crate) enum ScanErrorKind {
    Io(io::Error),
    NonAscii(u8),
    /// Token is not a decimal integer that fits in an `i64`.
    BadInteger(String),
}

pub(crate) struct Scanner<R> {
    src: R,
    buf: Box<[u8]>,
    pos: usize,
    len: usize,
    eof: bool,
    line: u64,
    offset: u64,
    bytes_read: u64,
    peak_buffered: usize,
}

impl<R: Read> Scanner<R> {
    pub fn new(src: R) -> Scanner<R> {
        Scanner {
            src,
            buf: vec![0u8; CHUNK].into_boxed_slice(),
            pos: 0,
            len: 0,
            eof: false,
            line: 1,
            offset: 0,
            bytes_read: 0,
            peak_buffered: 0,
        }
    }

    /// 1-based line number of the next unread byte.
    pub fn line(&self) -> u64 {
        self.line
    }

    /// Absolute byte offset of the next unread byte.
    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// Total bytes pulled from the underlying reader so far.
    pub fn bytes_read(&self) -> u64 {
        self.bytes_read
    }

    /// High-water mark of bytes resident in the scanner's buffer.
    pub fn peak_buffered(&self) -> usize {
        self.peak_buffered
    }

    fn err(&self, kind: ScanErrorKind) -> ScanError {
        ScanError {
            kind,
            line: self.line,
            offset: self.offset,
        }
    }

    fn fill(&mut self) -> io::Result<()> {
        if self.pos == self.len && !self.eof {
            self.pos = 0;
            self.len = 0;
            loop {
                match self.src.read(&mut self.buf) {
                    Ok(0) => {
                        self.eof = true;
                        break;
                    }
                    Ok(n) => {
                        self.len = n;
                        self.bytes_read += n as u64;
                        self.peak_buffered = self.peak_buffered.max(n);
                        break;
                    }
                    Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }

    pub fn peek(&mut self) -> Result<Option<u8>, ScanError> {
        self.fill().map_err(|e| self.err(ScanErrorKind::Io(e)))?;
        if self.pos < self.len {
            Ok(Some(self.buf[self.pos]))
        } else {
            Ok(None)
        }
    }

    pub fn bump(&mut self) -> Result<Option<u8>, ScanError> {
        let b = self.peek()?;
        if let Some(b) = b {
            self.pos += 1;
            self.offset += 1;
            if b == b'\n' {
                self.line += 1;
            }
        }
        Ok(b)
    }

    /// Skip spaces, tabs and carriage returns, staying on the current line.
    pub fn skip_inline_ws(&mut self) -> Result<(), ScanError> {
        while let Some(b) = self.peek()? {
            match b {
                b' ' | b'\t' | b'\r' => {
                    self.bump()?;
                }
                _ => break,
            }
        }
        Ok(())
    }

    /// Skip all whitespace including newlines.
    pub fn skip_ws(&mut self) -> Result<(), ScanError> {
        while let Some(b) = self.peek()? {
            if b.is_ascii_whitespace() {
                self.bump()?;
            } else {
                break;
            }
        }
        Ok(())
    }

    /// Consume the rest of the current line, including its newline.
    pub fn skip_rest_of_line(&mut self) -> Result<(), ScanError> {
        while let Some(b) = self.bump()? {
            if b == b'\n' {
                break;
            }
        }
        Ok(())
    }

    /// Read the next whitespace-delimited token into `tok`.
    ///
    /// With `inline` set, stops at end of line and returns `false` there
    /// (the newline itself is not consumed); otherwise skips newlines too
    /// and returns `false` only at end of input. Rejects non-ASCII bytes.
    pub fn next_token(&mut self, tok: &mut Vec<u8>, inline: bool) -> Result<bool, ScanError> {
        tok.clear();
        if inline {
            self.skip_inline_ws()?;
        } else {
            self.skip_ws()?;
        }
        match self.peek()? {
            None => return Ok(false),
            Some(b'\n') if inline => return Ok(false),
            Some(_) => {}
        }
        while let Some(b) = self.peek()? {
            if b.is_ascii_whitespace() {
                break;
            }
            if !b.is_ascii() {
                return Err(self.err(ScanErrorKind::NonAscii(b)));
            }
            if tok.len() >= MAX_TOKEN {
                let s = String::from_utf8_lossy(tok).into_owned();
                return Err(self.err(ScanErrorKind::BadInteger(s + "…")));
            }
            tok.push(b);
            self.bump()?;
        }
        Ok(true)
    }

    /// Parse a token produced by [`next_token`] as a decimal `i64`.
    ///
    /// `i64::MIN` is rejected along with everything else that is not a
    /// (possibly negative) decimal number in range: literals and ids must
    /// stay negatable / strictly positive respectively.
    pub fn token_to_i64(&self, tok: &[u8]) -> Result<i64, ScanError> {
        let ok = match tok {
            [] | [b'-'] => false,
            [b'-', digits @ ..] => digits.iter().all(u8::is_ascii_digit),
            digits => digits.iter().all(u8::is_ascii_digit),
        };
        let parsed = if ok {
            std::str::from_utf8(tok).ok().and_then(|s| s.parse::<i64>().ok())
        } else {
            None
        };
        match parsed {
            Some(v) if v != i64::MIN => Ok(v),
            _ => Err(self.err(ScanErrorKind::BadInteger(
                String::from_utf8_lossy(tok).into_owned(),
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_across_chunk_boundaries() {
        // Input large enough to span several 8 KiB chunks.
        let mut text = String::new();
        for i in 0..10_000 {
            text.push_str(&format!("{} ", i % 1000));
        }
        let mut sc = Scanner::new(text.as_bytes());
        let mut tok = Vec::new();
        let mut count = 0u32;
        while sc.next_token(&mut tok, false).unwrap() {
            sc.token_to_i64(&tok).unwrap();
            count += 1;
        }
        assert_eq!(count, 10_000);
        assert_eq!(sc.bytes_read(), text.len() as u64);
        assert!(sc.peak_buffered() <= CHUNK);
    }

    #[test]
    fn inline_mode_stops_at_newline() {
        let mut sc = Scanner::new(&b"1 2\n3"[..]);
        let mut tok = Vec::new();
        assert!(sc.next_token(&mut tok, true).unwrap());
        assert_eq!(tok, b"1");
        assert!(sc.next_token(&mut tok, true).unwrap());
        assert_eq!(tok, b"2");
        assert!(!sc.next_token(&mut tok, true).unwrap());
        assert_eq!(sc.bump().unwrap(), Some(b'\n'));
        assert_eq!(sc.line(), 2);
        assert!(sc.next_token(&mut tok, true).unwrap());
        assert_eq!(tok, b"3");
    }

    #[test]
    fn line_and_offset_track_position() {
        let mut sc = Scanner::new(&b"ab\ncd"[..]);
        assert_eq!((sc.line(), sc.offset()), (1, 0));
        sc.bump().unwrap();
        sc.bump().unwrap();
        sc.bump().unwrap();
        assert_eq!((sc.line(), sc.offset()), (2, 3));
    }

    #[test]
    fn rejects_non_ascii_and_bad_integers() {
        let mut sc = Scanner::new(&[0xC3u8, 0xA9][..]);
        let mut tok = Vec::new();
        let err = sc.next_token(&mut tok, false).unwrap_err();
        assert!(matches!(err.kind, ScanErrorKind::NonAscii(0xC3)));

        let sc = Scanner::new(&b""[..]);
        assert!(sc.token_to_i64(b"12x").is_err());
        assert!(sc.token_to_i64(b"-").is_err());
        assert!(sc.token_to_i64(b"99999999999999999999999").is_err());
        assert!(sc.token_to_i64(b"-9223372036854775808").is_err());
        assert_eq!(sc.token_to_i64(b"-9223372036854775807").unwrap(), -i64::MAX);
        assert_eq!(sc.token_to_i64(b"0").unwrap(), 0);
    }
}
