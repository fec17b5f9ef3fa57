//! Plain-text formats for Petri nets (`.pn`) and statecharts (`.sc`).
//!
//! Both formats are newline-delimited UTF-8 with LF line endings.
//! Identifiers are nonempty and contain no whitespace; `#` starts a
//! comment; blank lines are ignored. Parsing is all-or-nothing: any error
//! yields the full list of diagnostics and no model. Serialization is
//! canonical, so golden tests can compare bytes.

mod pn_text;
mod sc_text;

pub use pn_text::{parse_petri_net, serialize_petri_net};
pub use sc_text::{parse_statechart, serialize_statechart};

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

/// A diagnostic with a 1-based position. Diagnostics raised against an
/// in-memory model rather than a file carry line and column 0.
#[derive(Debug, Clone)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub severity: Severity,
    pub message: String,
}

impl ParseDiagnostic {
    pub fn error_at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            line,
            column,
            severity: Severity::Error,
            message: message.into(),
        }
    }

    pub fn model_error(message: impl Into<String>) -> Self {
        ParseDiagnostic {
            line: 0,
            column: 0,
            severity: Severity::Error,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(
                f,
                "{}:{}: {}: {}",
                self.line, self.column, self.severity, self.message
            )
        } else {
            write!(f, "{}: {}", self.severity, self.message)
        }
    }
}

/// Splits a line into whitespace-separated tokens with their 1-based
/// character columns; truncates at the first `#`.
pub(crate) fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut tokens = Vec::new();
    let mut start = None;
    let mut col = 0;
    for (byte, ch) in line.char_indices() {
        col += 1;
        if ch == '#' {
            if let Some((s, c)) = start {
                tokens.push((c, &line[s..byte]));
            }
            return tokens;
        }
        if ch.is_whitespace() {
            if let Some((s, c)) = start.take() {
                tokens.push((c, &line[s..byte]));
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((s, c)) = start {
        tokens.push((c, &line[s..]));
    }
    tokens
}
