//! Shared helpers for the line-oriented text formats.

use std::fmt;

/// A parse failure located at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl fmt::Display) -> Self {
        Self {
            line,
            column,
            message: message.to_string(),
        }
    }

    pub(crate) fn at(line: usize, tok: &Token<'_>, message: impl fmt::Display) -> Self {
        Self::new(line, tok.column, message)
    }
}

/// A whitespace-separated token with its 1-based column.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub column: usize,
}

/// Split a line into tokens, dropping everything from a `#` that starts a
/// token onwards.
pub(crate) fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b.is_ascii_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            if b == b'#' {
                return out;
            }
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

/// Iterate over the meaningful lines of `text`, checking the header first.
/// Yields `(line_number, tokens)` for every non-blank, non-comment line after
/// the header.
pub(crate) fn body_lines<'a>(
    text: &'a str,
    header: &str,
) -> Result<Vec<(usize, Vec<Token<'a>>)>, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, tokenize(l)));
    let mut seen_header = false;
    let mut out = Vec::new();
    for (no, toks) in lines.by_ref() {
        if toks.is_empty() {
            continue;
        }
        if !seen_header {
            let got: Vec<&str> = toks.iter().map(|t| t.text).collect();
            if got.join(" ") != header {
                return Err(ParseError::at(no, &toks[0], format!("expected header `{header}`")));
            }
            seen_header = true;
            continue;
        }
        out.push((no, toks));
    }
    if !seen_header {
        return Err(ParseError::new(1, 1, format!("missing header `{header}`")));
    }
    Ok(out)
}

pub(crate) fn parse_int(line: usize, tok: &Token<'_>) -> Result<i64, ParseError> {
    tok.text
        .parse()
        .map_err(|_| ParseError::at(line, tok, format!("expected integer, found `{}`", tok.text)))
}

pub(crate) fn expect_len(
    line: usize,
    toks: &[Token<'_>],
    n: usize,
    what: &str,
) -> Result<(), ParseError> {
    if toks.len() != n {
        let col = toks.get(n).or(toks.last()).map_or(1, |t| t.column);
        return Err(ParseError::new(
            line,
            col,
            format!("{what} expects {n} fields, found {}", toks.len()),
        ));
    }
    Ok(())
}
