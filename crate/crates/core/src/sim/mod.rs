//! Scan cycle simulation: numeric plant integration, cycle execution of an
//! ST controller, safety monitoring, trace files and compliance checking.

mod compliance;
mod inputs;
mod integrate;
mod run;
mod trace;

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::ir::Ident;
use crate::semantics::{EvalError, ExecError};

pub use compliance::{check_compliance, ComplianceReport, Instance};
pub use inputs::{ConstantInputs, CsvInputs, InputProvider, MixedInputs, UniformInputs};
pub use integrate::{integrate_plant, DomainExit, Integration, IntegratorConfig, Method};
pub use run::{check_assumptions, check_safety, simulate, CycleRecord, Phase, SimConfig, Violation};
pub use trace::{parse_trace, write_trace, Trace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("controller failed: {0}")]
    Exec(#[from] ExecError),
    #[error("no value for input `{name}` in cycle {cycle}")]
    MissingInput { cycle: usize, name: Ident },
    #[error("scan interval is symbolic and no value was supplied")]
    MissingEpsilon,
    #[error("`{name}` is {found} in the initial state but the scan interval is {epsilon}")]
    EpsilonMismatch { name: Ident, found: f64, epsilon: f64 },
    #[error("plant is not affine in its state; use the RK4 integrator")]
    NotAffine,
    #[error("initial state violates the assumptions")]
    AssumptionsViolated,
    #[error("trace: {0}")]
    Trace(String),
    #[error("trace is missing columns: {}", .0.join(", "))]
    SchemaError(Vec<String>),
    #[error("controller has unguarded alternatives; compliance needs a deterministic controller")]
    NondeterministicCtrl,
}

impl SimError {
    pub fn rule(&self) -> &'static str {
        match self {
            SimError::Eval(_) | SimError::Exec(_) => "evaluation",
            SimError::Analysis(e) => e.rule(),
            SimError::MissingInput { .. } => "missing-input",
            SimError::MissingEpsilon | SimError::EpsilonMismatch { .. } => "epsilon",
            SimError::NotAffine => "integrator",
            SimError::AssumptionsViolated => "assumptions",
            SimError::Trace(_) | SimError::SchemaError(_) => "trace-schema",
            SimError::NondeterministicCtrl => "nondeterministic-ctrl",
        }
    }
}
