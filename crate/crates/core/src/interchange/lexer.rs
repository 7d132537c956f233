// SPDX-License-Identifier: Apache-2.0

//! Whitespace tokenizer shared by the LEF and DEF readers.
//!
//! `;`, `(` and `)` always form their own tokens, `#` starts a comment that
//! runs to the end of the line, and double-quoted strings are kept whole
//! (quotes stripped).

use super::{Format, ParseError, ParseWarning};

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub quoted: bool,
}

pub(crate) fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let bytes = line.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c == b'#' {
                break;
            } else if c == b'"' {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j] != b'"' {
                    j += 1;
                }
                out.push(Token {
                    text: &line[start..j],
                    line: lineno,
                    quoted: true,
                });
                i = j + 1;
            } else if c == b';' || c == b'(' || c == b')' {
                out.push(Token {
                    text: &line[i..i + 1],
                    line: lineno,
                    quoted: false,
                });
                i += 1;
            } else {
                let start = i;
                while i < bytes.len() {
                    let d = bytes[i];
                    if d.is_ascii_whitespace() || d == b';' || d == b'(' || d == b')' {
                        break;
                    }
                    i += 1;
                }
                out.push(Token {
                    text: &line[start..i],
                    line: lineno,
                    quoted: false,
                });
            }
        }
    }
    out
}

/// Cursor over a token list with error helpers bound to one input format.
pub(crate) struct Cursor<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    format: Format,
    pub warnings: Vec<ParseWarning>,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str, format: Format) -> Self {
        Cursor {
            tokens: tokenize(text),
            pos: 0,
            format,
            warnings: Vec::new(),
        }
    }

    pub fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(|t| t.text)
    }

    pub fn peek_at(&self, offset: usize) -> Option<&str> {
        self.tokens.get(self.pos + offset).map(|t| t.text)
    }

    pub fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map_or(0, |t| t.line)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn next(&mut self) -> Result<&'a str, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.text)
            }
            None => Err(self.error("unexpected end of input")),
        }
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.format, self.line(), msg)
    }

    pub fn warn(&mut self, line: usize, msg: impl Into<String>) {
        self.warnings.push(ParseWarning {
            line,
            message: msg.into(),
        });
    }

    pub fn expect(&mut self, want: &str) -> Result<(), ParseError> {
        let line = self.line();
        let got = self.next()?;
        if got == want {
            Ok(())
        } else {
            Err(ParseError::new(
                self.format,
                line,
                format!("expected `{want}`, found `{got}`"),
            ))
        }
    }

    pub fn eat(&mut self, want: &str) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn number<T: std::str::FromStr>(&mut self) -> Result<T, ParseError> {
        let line = self.line();
        let tok = self.next()?;
        tok.parse::<T>().map_err(|_| {
            ParseError::new(
                self.format,
                line,
                format!("expected a number, found `{tok}`"),
            )
        })
    }

    /// Skip up to and including the next `;`.
    pub fn skip_statement(&mut self) -> Result<(), ParseError> {
        loop {
            if self.next()? == ";" {
                return Ok(());
            }
        }
    }

    /// Skip up to and including `END <name>`.
    pub fn skip_block(&mut self, name: &str) -> Result<(), ParseError> {
        loop {
            let tok = self.next()?;
            if tok == "END" && self.peek() == Some(name) {
                self.pos += 1;
                return Ok(());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_punctuation_and_comments() {
        let toks = tokenize("WIDTH 0.14; # trailing\n( 1 2 )(3 4) \"a b\"");
        let texts: Vec<_> = toks.iter().map(|t| t.text).collect();
        assert_eq!(
            texts,
            ["WIDTH", "0.14", ";", "(", "1", "2", ")", "(", "3", "4", ")", "a b"]
        );
        assert_eq!(toks[3].line, 2);
        assert!(toks.last().unwrap().quoted);
    }
}
