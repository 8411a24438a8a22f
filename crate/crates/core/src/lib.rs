//! Bidirectional compilation between IEC 61131-3 Structured Text (ST) and the
//! PLC-translatable fragment of differential dynamic logic (dL) hybrid programs.
//!
//! The crate is organized bottom-up:
//!
//! - [`ir`]: the shared term, formula, program and state types.
//! - [`st`] and [`dl`]: parsers and pretty-printers for both surface syntaxes.
//! - [`compiler`]: the compilation rules in both directions, including the
//!   task/configuration layer.
//! - [`analysis`]: free/bound/must-bound variables, I/O classification,
//!   scan-cycle normal form validation and scan interval extraction.
//! - [`semantics`]: the ST small-step interpreter, the hybrid program
//!   reachable-set enumerator, random program generators and the
//!   differential tester tying them together.
//! - [`sim`]: scan-cycle simulation against ODE plants, safety monitoring
//!   and trace compliance checking.

pub mod analysis;
pub mod compiler;
pub mod dl;
pub mod ir;
mod lex;
pub mod semantics;
pub mod sim;
pub mod st;

pub use ir::{
    Alternative, Assignment, BinOp, CmpOp, Dialect, Epsilon, Formula, GuardedChoice, HpFormula,
    HybridProgram, Ident, IrError, Number, PlantSpec, Pos, ScanCycleModel, State, StFormula,
    StStatement, Term,
};
