use indexmap::IndexSet;

use crate::dl::{lift, DlError, DlProgram, DlSafetyFormula, OdeSystem};
use crate::ir::{
    CmpOp, Epsilon, Formula, HpFormula, HybridProgram, Ident, PlantSpec, Pos, ScanCycleModel, Term,
};

use super::AnalysisError;

fn reject(reason: impl Into<String>, pos: Pos) -> AnalysisError {
    AnalysisError::NotNormalForm {
        reason: reason.into(),
        pos,
    }
}

/// Checks `A -> [{i := *; ...; ctrl; t := 0; {x' = f, t' = 1 & t <= eps & Q}}*] S`
/// and returns the structured model.
pub fn validate_scan_cycle_form(f: &DlSafetyFormula) -> Result<ScanCycleModel, AnalysisError> {
    let DlProgram::Loop(body, _) = &f.program else {
        return Err(reject("box body is not a loop", f.program.pos()));
    };
    let items = body.flatten_seq();

    let mut inputs: Vec<Ident> = Vec::new();
    let mut rest = &items[..];
    while let Some((DlProgram::Nondet(x, pos), tail)) = rest.split_first() {
        if inputs.contains(x) {
            return Err(reject(format!("input `{x}` is read twice"), *pos));
        }
        inputs.push(x.clone());
        rest = tail;
    }

    let (ode, rest) = match rest.split_last() {
        Some((DlProgram::Ode(o), init)) => (o, init),
        _ => {
            let pos = rest.last().map_or(body.pos(), |p| p.pos());
            return Err(match find_ode(rest) {
                Some(o) => reject("ODE outside plant", o.pos),
                None => reject("missing plant ODE at the end of the loop body", pos),
            });
        }
    };
    let (reset, ctrl_items) = match rest.split_last() {
        Some((DlProgram::Assign(a), init)) => (Some(a), init),
        _ => (None, rest),
    };
    let plant = plant_spec(ode, reset.map(|a| (&a.target, &a.value, a.pos)))?;
    let ctrl_items = match reset {
        Some(a) if a.target == plant.clock => ctrl_items,
        _ => return Err(reject("missing clock reset", ode.pos)),
    };

    if ctrl_items.is_empty() {
        return Err(reject("empty controller", ode.pos));
    }
    let ctrl = lift_items(ctrl_items)?;
    if inputs.contains(&plant.clock) || ctrl.vars().contains(&plant.clock) {
        let pos = ctrl_items[0].pos();
        return Err(reject("clock variable used by controller", pos));
    }
    Ok(ScanCycleModel {
        assumptions: f.assumptions.clone(),
        inputs,
        ctrl,
        plant,
        safety: f.safety.clone(),
    })
}

/// A plant given on its own, either `{odes & Q}` or `t := 0; {odes & Q}`.
pub fn plant_from_program(p: &DlProgram) -> Result<PlantSpec, AnalysisError> {
    match p.flatten_seq()[..] {
        [DlProgram::Ode(o)] => plant_spec(o, None),
        [DlProgram::Assign(a), DlProgram::Ode(o)] => {
            let plant = plant_spec(o, Some((&a.target, &a.value, a.pos)))?;
            if a.target != plant.clock {
                return Err(reject("missing clock reset", a.pos));
            }
            Ok(plant)
        }
        _ => Err(reject("plant must be an ODE, optionally preceded by the clock reset", p.pos())),
    }
}

fn find_ode<'a>(items: &[&'a DlProgram]) -> Option<&'a OdeSystem> {
    fn walk(p: &DlProgram) -> Option<&OdeSystem> {
        match p {
            DlProgram::Ode(o) => Some(o),
            DlProgram::Seq(a, b) | DlProgram::Choice(a, b) => walk(a).or_else(|| walk(b)),
            DlProgram::Loop(b, _) => walk(b),
            _ => None,
        }
    }
    items.iter().find_map(|p| walk(p))
}

fn lift_items(items: &[&DlProgram]) -> Result<HybridProgram, AnalysisError> {
    let parts = items
        .iter()
        .map(|p| lift(p))
        .collect::<Result<Vec<_>, DlError>>()
        .map_err(|e| match e {
            DlError::NotTranslatable { pos, reason } => reject(reason, pos),
            other => reject(other.to_string(), other.pos()),
        })?;
    Ok(HybridProgram::sequence(parts).expect("non-empty controller"))
}

/// Identifies the clock as the variable with `t' = 1` whose bound appears
/// as a domain conjunct. `reset` is the assignment preceding the ODE and
/// breaks ties between several candidate clocks.
fn plant_spec(ode: &OdeSystem, reset: Option<(&Ident, &Term, Pos)>) -> Result<PlantSpec, AnalysisError> {
    let mut seen = IndexSet::new();
    for (x, _) in &ode.equations {
        if !seen.insert(x) {
            return Err(reject(format!("duplicate ODE variable `{x}`"), ode.pos));
        }
    }
    let unit_rate: Vec<&Ident> = ode
        .equations
        .iter()
        .filter(|(_, rhs)| matches!(rhs, Term::Num(n) if n.value() == 1.0))
        .map(|(x, _)| x)
        .collect();
    if unit_rate.is_empty() {
        return Err(reject("missing clock equation", ode.pos));
    }
    let conjuncts: Vec<&Formula> = ode.domain.as_ref().map_or(vec![], |q| q.conjuncts());
    let bound_of = |clock: &Ident| -> Option<(usize, Epsilon)> {
        conjuncts.iter().enumerate().find_map(|(i, c)| {
            let bound = match c {
                Formula::Cmp(CmpOp::Le, Term::Var(t), b) | Formula::Cmp(CmpOp::Ge, b, Term::Var(t))
                    if t == clock =>
                {
                    b
                }
                _ => return None,
            };
            match bound {
                Term::Num(n) => Some((i, Epsilon::Value(n.clone()))),
                Term::Var(e) if e != clock => Some((i, Epsilon::Symbol(e.clone()))),
                _ => None,
            }
        })
    };
    let mut candidates: Vec<(&Ident, usize, Epsilon)> = unit_rate
        .iter()
        .filter_map(|c| bound_of(c).map(|(i, e)| (*c, i, e)))
        .collect();
    if candidates.is_empty() {
        return Err(reject("missing clock bound", ode.pos));
    }
    if candidates.len() > 1 {
        if let Some((target, _, _)) = reset {
            candidates.retain(|(c, _, _)| *c == target);
        }
    }
    let Some((clock, bound_index, bound)) = candidates.into_iter().next() else {
        return Err(reject("missing clock reset", ode.pos));
    };
    if let Some((target, value, pos)) = reset {
        let zero = matches!(value, Term::Num(n) if n.value() == 0.0);
        if target == clock && !zero {
            return Err(reject("clock must be reset to 0", pos));
        }
    }
    let domain = HpFormula::conjunction(
        conjuncts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != bound_index)
            .map(|(_, c)| HpFormula::new_unchecked((*c).clone())),
    );
    let odes = ode
        .equations
        .iter()
        .filter(|(x, _)| x != clock)
        .cloned()
        .collect();
    Ok(PlantSpec {
        odes,
        clock: clock.clone(),
        bound,
        domain,
    })
}
