//! ASCII dL syntax for hybrid programs and safety formulas
//! `A -> [α] S`, plus conversion between raw dL programs and the
//! translatable [`HybridProgram`] fragment.

mod convert;
mod lexer;
mod parser;
mod printer;

use thiserror::Error;

use crate::ir::{Assignment, HpFormula, Ident, Pos, Term};

pub use convert::{detect_complement, lift, lower};
pub use parser::{parse_dl_document, parse_dl_formula, parse_dl_program, parse_dl_safety, parse_dl_term};
pub use printer::{print_dl_formula, print_dl_program, print_dl_safety, print_dl_term, print_hp};

/// Any program of the hybrid program language, as written in a `.dlhp`
/// file.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DlProgram {
    Assign(Assignment),
    /// `x := *`
    Nondet(Ident, Pos),
    /// `?φ`
    Test(HpFormula, Pos),
    Seq(Box<DlProgram>, Box<DlProgram>),
    Choice(Box<DlProgram>, Box<DlProgram>),
    Loop(Box<DlProgram>, Pos),
    Ode(OdeSystem),
}

/// `{x1' = θ1, ..., xn' = θn & Q}`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OdeSystem {
    pub equations: Vec<(Ident, Term)>,
    pub domain: Option<HpFormula>,
    pub pos: Pos,
}

impl DlProgram {
    pub fn seq(a: DlProgram, b: DlProgram) -> DlProgram {
        DlProgram::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: DlProgram, b: DlProgram) -> DlProgram {
        DlProgram::Choice(Box::new(a), Box::new(b))
    }

    /// Right-folded sequence; `None` when empty.
    pub fn sequence(parts: impl IntoIterator<Item = DlProgram>) -> Option<DlProgram> {
        let mut parts: Vec<_> = parts.into_iter().collect();
        let mut acc = parts.pop()?;
        while let Some(p) = parts.pop() {
            acc = DlProgram::seq(p, acc);
        }
        Some(acc)
    }

    /// Position of the first token of the program, when known.
    pub fn pos(&self) -> Pos {
        match self {
            DlProgram::Assign(a) => a.pos,
            DlProgram::Nondet(_, p) | DlProgram::Test(_, p) | DlProgram::Loop(_, p) => *p,
            DlProgram::Seq(a, _) | DlProgram::Choice(a, _) => a.pos(),
            DlProgram::Ode(o) => o.pos,
        }
    }

    /// Elements of the sequence spine, flattening nested sequences in both
    /// directions.
    pub fn flatten_seq(&self) -> Vec<&DlProgram> {
        let mut out = Vec::new();
        fn walk<'a>(p: &'a DlProgram, out: &mut Vec<&'a DlProgram>) {
            match p {
                DlProgram::Seq(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }
}

/// `A -> [α] S`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DlSafetyFormula {
    pub assumptions: HpFormula,
    pub program: DlProgram,
    pub safety: HpFormula,
}

/// Contents of a `.dlhp` file: either a full safety formula or a bare
/// program.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DlDocument {
    Safety(DlSafetyFormula),
    Program(DlProgram),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DlError {
    #[error("{pos}: expected {expected}, found {found}")]
    Syntax {
        pos: Pos,
        expected: String,
        found: String,
    },
    #[error("{pos}: {construct} is not supported")]
    Unsupported { pos: Pos, construct: String },
    /// The program is outside the PLC-translatable fragment.
    #[error("{pos}: not translatable: {reason}")]
    NotTranslatable { pos: Pos, reason: String },
}

impl DlError {
    pub fn pos(&self) -> Pos {
        match self {
            DlError::Syntax { pos, .. }
            | DlError::Unsupported { pos, .. }
            | DlError::NotTranslatable { pos, .. } => *pos,
        }
    }

    pub fn rule(&self) -> &'static str {
        match self {
            DlError::Syntax { .. } => "dl-syntax",
            DlError::Unsupported { .. } => "dl-unsupported",
            DlError::NotTranslatable { .. } => "dl-fragment",
        }
    }
}
