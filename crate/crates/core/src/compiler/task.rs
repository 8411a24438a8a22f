use indexmap::IndexSet;
use thiserror::Error;

use crate::analysis::{classify_io, extract_epsilon, model_epsilon, AnalysisError};
use crate::dl::DlSafetyFormula;
use crate::ir::{
    CmpOp, Epsilon, HpFormula, HybridProgram, Ident, Number, PlantSpec, Pos, ScanCycleModel, Term,
};
use crate::st::{StConfig, StType, StUnit, StVarBlock, VarKind};

use super::{prog_hp_to_st, prog_st_to_hp, CompileDiagnostics};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error("scan interval is symbolic (`{0}`) and no value was supplied")]
    MissingEpsilon(Ident),
    #[error("scan interval {found} conflicts with {expected}")]
    EpsilonMismatch { expected: String, found: String },
    #[error("plant clock `{0}` is also a program variable")]
    PlantVariableClash(Ident),
    #[error("invalid scan interval {0}")]
    InvalidEpsilon(f64),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl CompileError {
    pub fn rule(&self) -> &'static str {
        match self {
            CompileError::MissingEpsilon(_) => "missing-epsilon",
            CompileError::EpsilonMismatch { .. } => "epsilon",
            CompileError::PlantVariableClash(_) => "plant-variable-clash",
            CompileError::InvalidEpsilon(_) => "epsilon",
            CompileError::Analysis(e) => e.rule(),
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            CompileError::Analysis(e) => e.pos(),
            _ => Pos::default(),
        }
    }
}

/// Names used for the generated program and configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskNames {
    pub program: Ident,
    pub config: Ident,
    pub resource: Ident,
    pub processor: Ident,
    pub task: Ident,
    pub instance: Ident,
}

impl Default for TaskNames {
    fn default() -> Self {
        let id = |s: &str| Ident::new(s).expect("valid default name");
        TaskNames {
            program: id("prog0"),
            config: id("Config0"),
            resource: id("Res0"),
            processor: id("PLC"),
            task: id("Main"),
            instance: id("Inst0"),
        }
    }
}

/// Generates a PLC program running the model's controller every `ε`
/// seconds. `epsilon` overrides the interval found in the model.
pub fn task_hp_to_st(
    m: &ScanCycleModel,
    names: &TaskNames,
    epsilon: Option<f64>,
) -> Result<(StUnit, CompileDiagnostics), CompileError> {
    let (body, mut diags) = prog_hp_to_st(&m.ctrl);
    let found = model_epsilon(m)?;
    let interval = match (epsilon, found) {
        (Some(e), Some(f)) if e != f => {
            diags.warn(
                "epsilon-override",
                format!("scan interval {e} s overrides {f} s from the model"),
                Pos::default(),
            );
            e
        }
        (Some(e), _) => e,
        (None, Some(f)) => f,
        (None, None) => {
            let Epsilon::Symbol(x) = m.epsilon() else {
                unreachable!("concrete bounds always yield a value")
            };
            return Err(CompileError::MissingEpsilon(x.clone()));
        }
    };
    if !(interval.is_finite() && interval > 0.0) {
        return Err(CompileError::InvalidEpsilon(interval));
    }

    let io = classify_io(&m.ctrl, &m.inputs, &m.plant);
    for x in &io.conflicts {
        diags.warn(
            "input-output-conflict",
            format!("`{x}` is read before it is written; declared as output only"),
            Pos::default(),
        );
    }
    let mut var_blocks = Vec::new();
    let mut block = |kind: VarKind, decls: Vec<(Ident, StType)>| {
        if !decls.is_empty() {
            var_blocks.push(StVarBlock { kind, decls });
        }
    };
    block(VarKind::Input, io.inputs.iter().map(|x| (x.clone(), StType::LReal)).collect());
    block(
        VarKind::Output,
        io.outputs.iter().map(|x| (x.clone(), output_type(&m.ctrl, x))).collect(),
    );
    block(VarKind::External, io.params.iter().map(|x| (x.clone(), StType::LReal)).collect());

    let unit = StUnit {
        program_name: names.program.clone(),
        var_blocks,
        body,
        config: Some(StConfig {
            name: names.config.clone(),
            resource: names.resource.clone(),
            processor: names.processor.clone(),
            task: names.task.clone(),
            instance: names.instance.clone(),
            interval,
            priority: 0,
        }),
    };
    Ok((unit, diags))
}

/// BOOL when every assignment to `x` is the literal 0 or 1.
fn output_type(ctrl: &HybridProgram, x: &Ident) -> StType {
    let boolean = ctrl
        .assignments()
        .into_iter()
        .filter(|a| a.target == *x)
        .all(|a| matches!(&a.value, Term::Num(n) if n.value() == 0.0 || n.value() == 1.0));
    if boolean {
        StType::Bool
    } else {
        StType::LReal
    }
}

/// Builds the scan cycle model for an ST program against an external plant.
///
/// Declared inputs that the plant evolves are not re-read nondeterministically.
/// When the plant bound is symbolic and the program has a configuration, the
/// conjunct `eps = <interval>` is appended to the assumptions unless present.
pub fn task_st_to_model(
    u: &StUnit,
    plant: PlantSpec,
    assumptions: HpFormula,
    safety: HpFormula,
) -> Result<ScanCycleModel, CompileError> {
    let ctrl = prog_st_to_hp(&u.body);
    let mut program_vars: IndexSet<Ident> = ctrl.vars();
    program_vars.extend(u.var_blocks.iter().flat_map(|b| b.decls.iter().map(|(x, _)| x.clone())));
    if program_vars.contains(&plant.clock) {
        return Err(CompileError::PlantVariableClash(plant.clock.clone()));
    }
    let inputs: Vec<Ident> = u
        .declared(VarKind::Input)
        .filter(|x| !plant.evolves(x))
        .cloned()
        .collect();
    let interval = u.config.as_ref().map(|c| c.interval);
    let assumptions = match (&plant.bound, interval) {
        (Epsilon::Value(n), Some(i)) if n.value() != i => {
            return Err(CompileError::EpsilonMismatch {
                expected: format!("plant bound {}", n.lexeme()),
                found: format!("task interval {i} s"),
            })
        }
        (Epsilon::Value(_), _) => assumptions,
        (Epsilon::Symbol(e), Some(i)) => match extract_epsilon(&assumptions, e)? {
            Some(n) if n.value() != i => {
                return Err(CompileError::EpsilonMismatch {
                    expected: format!("assumption {e} = {}", n.lexeme()),
                    found: format!("task interval {i} s"),
                })
            }
            Some(_) => assumptions,
            None => {
                let n = Number::from_value(i).map_err(|_| CompileError::InvalidEpsilon(i))?;
                let binding = HpFormula::cmp(CmpOp::Eq, Term::var(e), Term::Num(n));
                HpFormula::and(assumptions, binding)
            }
        },
        (Epsilon::Symbol(e), None) => {
            if extract_epsilon(&assumptions, e)?.is_none() {
                return Err(CompileError::MissingEpsilon(e.clone()));
            }
            assumptions
        }
    };
    Ok(ScanCycleModel {
        assumptions,
        inputs,
        ctrl,
        plant,
        safety,
    })
}

/// `A -> [{i := *; ctrl; t := 0; plant}*] S` for an ST program.
pub fn task_st_to_hp(
    u: &StUnit,
    plant: PlantSpec,
    assumptions: HpFormula,
    safety: HpFormula,
) -> Result<DlSafetyFormula, CompileError> {
    task_st_to_model(u, plant, assumptions, safety).map(|m| DlSafetyFormula::from_model(&m))
}
