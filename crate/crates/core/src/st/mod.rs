//! Lexer, parser and pretty-printer for the Structured Text subset:
//! assignments, sequences, `IF`/`ELSIF`/`ELSE` conditionals, `PROGRAM`
//! units with `VAR` blocks, and a single-task `CONFIGURATION`.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use thiserror::Error;

use crate::ir::{Formula, Ident, Pos, StFormula, StStatement, Term};

pub use parser::{parse_st, parse_st_expression, parse_st_formula, parse_st_statements, parse_st_term};
pub use printer::{print_st, print_st_formula, print_st_statement, print_st_term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Input,
    Output,
    Local,
    External,
}

impl VarKind {
    pub fn keyword(self) -> &'static str {
        match self {
            VarKind::Input => "VAR_INPUT",
            VarKind::Output => "VAR_OUTPUT",
            VarKind::Local => "VAR",
            VarKind::External => "VAR_EXTERNAL",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StType {
    LReal,
    Real,
    Bool,
}

impl fmt::Display for StType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StType::LReal => "LREAL",
            StType::Real => "REAL",
            StType::Bool => "BOOL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StVarBlock {
    pub kind: VarKind,
    pub decls: Vec<(Ident, StType)>,
}

/// Single resource, single task configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct StConfig {
    pub name: Ident,
    pub resource: Ident,
    /// Processor type after `ON`, e.g. `PLC`.
    pub processor: Ident,
    pub task: Ident,
    pub instance: Ident,
    /// Task interval in seconds.
    pub interval: f64,
    pub priority: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StUnit {
    pub program_name: Ident,
    pub var_blocks: Vec<StVarBlock>,
    pub body: StStatement,
    pub config: Option<StConfig>,
}

impl StUnit {
    pub fn declared(&self, kind: VarKind) -> impl Iterator<Item = &Ident> + '_ {
        self.var_blocks
            .iter()
            .filter(move |b| b.kind == kind)
            .flat_map(|b| b.decls.iter().map(|(x, _)| x))
    }

    pub fn declared_type(&self, x: &Ident) -> Option<StType> {
        self.var_blocks
            .iter()
            .flat_map(|b| b.decls.iter())
            .find(|(y, _)| y == x)
            .map(|(_, t)| *t)
    }

    pub fn is_declared(&self, x: &Ident) -> bool {
        self.declared_type(x).is_some()
    }
}

/// Result of parsing a standalone ST expression.
#[derive(Debug, Clone, PartialEq)]
pub enum StExpr {
    Term(Term),
    Formula(StFormula),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StError {
    #[error("{pos}: expected {expected}, found {found}")]
    Syntax {
        pos: Pos,
        expected: String,
        found: String,
    },
    #[error("{pos}: {construct} is outside the supported Structured Text subset")]
    Unsupported { pos: Pos, construct: String },
    #[error("{pos}: variable `{name}` is declared more than once")]
    DuplicateDeclaration { pos: Pos, name: Ident },
    #[error("{pos}: {message}")]
    Config { pos: Pos, message: String },
}

impl StError {
    pub fn pos(&self) -> Pos {
        match self {
            StError::Syntax { pos, .. }
            | StError::Unsupported { pos, .. }
            | StError::DuplicateDeclaration { pos, .. }
            | StError::Config { pos, .. } => *pos,
        }
    }

    /// Short rule name used in diagnostics.
    pub fn rule(&self) -> &'static str {
        match self {
            StError::Syntax { .. } => "st-syntax",
            StError::Unsupported { .. } => "st-subset",
            StError::DuplicateDeclaration { .. } => "st-declaration",
            StError::Config { .. } => "st-configuration",
        }
    }
}

pub(crate) fn wrap_st(f: Formula) -> StFormula {
    StFormula::new_unchecked(f)
}
