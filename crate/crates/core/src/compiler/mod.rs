//! Compilation between ST and translatable hybrid programs: terms,
//! formulas, controller programs and the cyclic task configuration.

mod program;
mod task;

use std::fmt;

use crate::ir::Pos;

pub use program::{
    formula_hp_to_st, formula_st_to_hp, prog_hp_to_st, prog_st_to_hp, term_hp_to_st, term_st_to_hp,
};
pub use task::{task_hp_to_st, task_st_to_hp, task_st_to_model, CompileError, TaskNames};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub code: &'static str,
    pub message: String,
    pub pos: Pos,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pos.is_known() {
            write!(f, "{}: warning[{}]: {}", self.pos, self.code, self.message)
        } else {
            write!(f, "warning[{}]: {}", self.code, self.message)
        }
    }
}

/// Warnings raised while compiling. Empty for deterministic controllers
/// without input/output conflicts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompileDiagnostics {
    pub warnings: Vec<Warning>,
}

impl CompileDiagnostics {
    pub fn is_empty(&self) -> bool {
        self.warnings.is_empty()
    }

    pub(crate) fn warn(&mut self, code: &'static str, message: String, pos: Pos) {
        self.warnings.push(Warning { code, message, pos });
    }
}
