//! Static semantics of controllers (free, bound and must-bound variables),
//! input/output classification, scan cycle normal form validation and
//! extraction of the scan interval from the assumptions.

mod epsilon;
mod io;
mod normal_form;
mod oracle;
mod vars;

use thiserror::Error;

use crate::ir::{Number, Pos};

pub use epsilon::{extract_epsilon, model_epsilon};
pub use io::{classify_io, IoClassification};
pub use oracle::{behavioral_var_sets, BehavioralSets};
pub use normal_form::{plant_from_program, validate_scan_cycle_form};
pub use vars::{var_sets, VarSets};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("{pos}: not in scan cycle normal form: {reason}")]
    NotNormalForm { reason: String, pos: Pos },
    #[error("conflicting scan intervals: `{first:?}` and `{second:?}`")]
    ConflictingEpsilon { first: Number, second: Number },
}

impl AnalysisError {
    pub fn pos(&self) -> Pos {
        match self {
            AnalysisError::NotNormalForm { pos, .. } => *pos,
            AnalysisError::ConflictingEpsilon { .. } => Pos::default(),
        }
    }

    pub fn rule(&self) -> &'static str {
        match self {
            AnalysisError::NotNormalForm { .. } => "scan-cycle-form",
            AnalysisError::ConflictingEpsilon { .. } => "epsilon",
        }
    }
}
