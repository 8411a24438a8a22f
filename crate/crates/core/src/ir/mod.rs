//! Shared abstract syntax and state types used by both frontends, the
//! compiler, the interpreters and the simulator.
//!
//! All values are immutable once built and are `Send + Sync`.

mod formula;
mod ident;
mod model;
mod pos;
mod program;
mod state;
mod term;

pub use formula::{CmpOp, Dialect, Formula, HpFormula, StFormula};
pub use ident::Ident;
pub use model::{Epsilon, PlantSpec, ScanCycleModel};
pub use pos::Pos;
pub use program::{Alternative, Assignment, GuardedChoice, HybridProgram, StStatement};
pub use state::State;
pub use term::{BinOp, Number, Term};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IrError {
    #[error("`{0}` is not a valid identifier")]
    InvalidIdent(String),
    #[error("`{0}` is a reserved keyword")]
    ReservedIdent(String),
    #[error("`{0}` is not a valid decimal literal")]
    InvalidNumber(String),
    #[error("connective {connective} is not part of the {dialect} dialect")]
    DialectViolation {
        connective: &'static str,
        dialect: Dialect,
    },
    #[error("unbound variable `{0}`")]
    UnboundVariable(Ident),
}
