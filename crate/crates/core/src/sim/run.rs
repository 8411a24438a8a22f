use crate::analysis::model_epsilon;
use crate::ir::{Epsilon, ScanCycleModel, State, StStatement};
use crate::semantics::{eval_formula, run_st, EvalError};

use super::{integrate_plant, DomainExit, InputProvider, IntegratorConfig, SimError};

#[derive(Debug, Clone, Default)]
pub struct SimConfig {
    pub integrator: IntegratorConfig,
    /// Overrides the scan interval from the model.
    pub epsilon: Option<f64>,
    pub check_assumptions: bool,
}

/// One scan cycle: sensor read, controller, plant evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleRecord {
    /// Numbered from 1.
    pub index: usize,
    pub t_abs: f64,
    pub pre: State,
    pub post_ctrl: State,
    pub post_plant: State,
    pub domain_exit: Option<DomainExit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Pre,
    PostPlant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub cycle: usize,
    pub phase: Phase,
    pub state: State,
}

pub fn check_assumptions(m: &ScanCycleModel, s: &State) -> Result<bool, EvalError> {
    eval_formula(&m.assumptions, s)
}

fn resolve_epsilon(m: &ScanCycleModel, initial: &State, cfg: &SimConfig) -> Result<f64, SimError> {
    if let Some(e) = cfg.epsilon {
        return Ok(e);
    }
    if let Some(e) = model_epsilon(m)? {
        return Ok(e);
    }
    match &m.plant.bound {
        Epsilon::Symbol(x) => initial.lookup(x.as_str()).ok_or(SimError::MissingEpsilon),
        Epsilon::Value(n) => Ok(n.value()),
    }
}

/// Runs `body` as the controller of `m` for up to `cycles` scan cycles.
/// Stops early when the plant leaves its evolution domain; the record of
/// that cycle is kept.
pub fn simulate(
    m: &ScanCycleModel,
    body: &StStatement,
    inputs: &mut dyn InputProvider,
    initial: &State,
    cycles: usize,
    cfg: &SimConfig,
) -> Result<Vec<CycleRecord>, SimError> {
    let eps = resolve_epsilon(m, initial, cfg)?;
    let mut state = initial.clone();
    if let Epsilon::Symbol(x) = &m.plant.bound {
        match state.lookup(x.as_str()) {
            Some(v) if v != eps => {
                return Err(SimError::EpsilonMismatch {
                    name: x.clone(),
                    found: v,
                    epsilon: eps,
                })
            }
            _ => state.insert(x.clone(), eps),
        }
    }
    if !state.contains(&m.plant.clock) {
        state.insert(m.plant.clock.clone(), 0.0);
    }
    if cfg.check_assumptions && !check_assumptions(m, &state)? {
        return Err(SimError::AssumptionsViolated);
    }

    let mut records = Vec::with_capacity(cycles);
    for index in 1..=cycles {
        let mut pre = state;
        for (x, v) in inputs.values(index, &m.inputs)? {
            pre.insert(x, v);
        }
        let post_ctrl = run_st(body, &pre)?;
        let start = post_ctrl.set(&m.plant.clock, 0.0);
        let out = integrate_plant(&m.plant, &start, eps, &cfg.integrator)?;
        let stop = out.domain_exit.is_some();
        state = out.state.clone();
        records.push(CycleRecord {
            index,
            t_abs: (index - 1) as f64 * eps,
            pre,
            post_ctrl,
            post_plant: out.state,
            domain_exit: out.domain_exit,
        });
        if stop {
            break;
        }
    }
    Ok(records)
}

/// States of the run at which `safety` fails, checked at the start of each
/// cycle and after each plant evolution.
pub fn check_safety(run: &[CycleRecord], safety: &crate::ir::Formula) -> Result<Vec<Violation>, EvalError> {
    let mut out = Vec::new();
    for r in run {
        for (phase, s) in [(Phase::Pre, &r.pre), (Phase::PostPlant, &r.post_plant)] {
            if !eval_formula(safety, s)? {
                out.push(Violation {
                    cycle: r.index,
                    phase,
                    state: s.clone(),
                });
            }
        }
    }
    Ok(out)
}
