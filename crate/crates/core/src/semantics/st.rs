use crate::ir::{Pos, State, StStatement};

use super::eval::{eval_formula, eval_term, ExecError};

/// Runs a statement to completion with a small-step machine: the current
/// configuration is a stack of pending statements and the context `σ`.
pub fn run_st(s: &StStatement, sigma: &State) -> Result<State, ExecError> {
    let mut state = sigma.clone();
    let mut pending: Vec<&StStatement> = vec![s];
    while let Some(next) = pending.pop() {
        match next {
            StStatement::Assign(a) => {
                let v = eval_term(&a.value, &state).map_err(|error| ExecError { pos: a.pos, error })?;
                state.insert(a.target.clone(), v);
            }
            StStatement::Seq(first, second) => {
                pending.push(second);
                pending.push(first);
            }
            StStatement::IfThenElse {
                cond,
                then,
                otherwise,
                pos,
            } => {
                if test(cond, &state, *pos)? {
                    pending.push(then);
                } else {
                    pending.push(otherwise);
                }
            }
            StStatement::IfThen { cond, then, pos } => {
                if test(cond, &state, *pos)? {
                    pending.push(then);
                }
            }
        }
    }
    Ok(state)
}

fn test(cond: &crate::ir::Formula, state: &State, pos: Pos) -> Result<bool, ExecError> {
    eval_formula(cond, state).map_err(|error| ExecError { pos, error })
}
