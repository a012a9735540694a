//! The `.dl` workspace format: frames, relations, functions, CABAs,
//! formulas, theories and derivations in one file.

mod lexer;
mod parser;
mod workspace;

use std::fmt;

use serde::Serialize;

pub use workspace::{
    buffer_workspace, CabaDecl, DeclKind, DerivationDecl, FormulaDecl, FunDecl, Over, RelBody,
    RelDecl, TheoryDecl, Workspace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
    /// Tokens that would have been accepted here; empty for name-resolution
    /// errors.
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// Every error found, in source order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseErrors(pub Vec<ParseError>);

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseErrors {}

/// Parses a whole workspace. After an error the parser skips to the next
/// top-level keyword and carries on, so several errors can be reported.
pub fn parse_workspace(text: &str) -> Result<Workspace, ParseErrors> {
    let toks = lexer::lex(text).map_err(|e| ParseErrors(vec![e]))?;
    let mut p = parser::Parser::new(toks);
    p.parse();
    if p.errors.is_empty() {
        Ok(p.ws)
    } else {
        Err(ParseErrors(p.errors))
    }
}
