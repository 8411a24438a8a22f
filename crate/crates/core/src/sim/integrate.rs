use indexmap::IndexSet;

use crate::ir::{BinOp, CmpOp, Formula, Ident, PlantSpec, State, Term};
use crate::semantics::{eval_formula, eval_term, EvalError};

use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rk4,
    /// Closed form; only for right-hand sides that do not depend on the
    /// evolving variables.
    Affine,
    /// Closed form when applicable, RK4 otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegratorConfig {
    pub substeps: usize,
    pub method: Method,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            substeps: 1000,
            method: Method::Auto,
        }
    }
}

/// First time, relative to the start of the evolution, at which the
/// domain constraint failed.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainExit {
    pub time: f64,
    pub conjunct: Formula,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integration {
    pub state: State,
    pub domain_exit: Option<DomainExit>,
}

/// Evolves the plant for `duration` from `s`. On a domain exit the state
/// at the exit time is returned.
pub fn integrate_plant(
    plant: &PlantSpec,
    s: &State,
    duration: f64,
    cfg: &IntegratorConfig,
) -> Result<Integration, SimError> {
    let evolving: IndexSet<Ident> = plant
        .state_vars()
        .cloned()
        .chain(std::iter::once(plant.clock.clone()))
        .collect();
    let affine = plant
        .odes
        .iter()
        .all(|(_, rhs)| evolving.iter().all(|x| !rhs.mentions(x)));
    match cfg.method {
        Method::Affine if !affine => Err(SimError::NotAffine),
        Method::Affine | Method::Auto if affine => integrate_affine(plant, s, duration, &evolving, cfg.substeps),
        _ => integrate_rk4(plant, s, duration, cfg.substeps),
    }
}

fn state_at(plant: &PlantSpec, s0: &State, rates: &[f64], t0: f64, tau: f64) -> State {
    let mut s = s0.clone();
    for ((x, _), c) in plant.odes.iter().zip(rates) {
        let x0 = s0.lookup(x.as_str()).unwrap_or(0.0);
        s.insert(x.clone(), x0 + c * tau);
    }
    s.insert(plant.clock.clone(), t0 + tau);
    s
}

fn integrate_affine(
    plant: &PlantSpec,
    s: &State,
    duration: f64,
    evolving: &IndexSet<Ident>,
    substeps: usize,
) -> Result<Integration, SimError> {
    let rates = plant
        .odes
        .iter()
        .map(|(_, rhs)| eval_term(rhs, s))
        .collect::<Result<Vec<f64>, _>>()?;
    let t0 = clock_value(plant, s)?;
    let mut start = s.clone();
    start.insert(plant.clock.clone(), t0);
    for (x, _) in &plant.odes {
        start.get(x).map_err(EvalError::from)?;
    }
    let end = state_at(plant, &start, &rates, t0, duration);

    let mut first_exit: Option<DomainExit> = None;
    for c in plant.domain.conjuncts() {
        let exit = if let Some((l, r, op)) = affine_atom(c, evolving) {
            let g0 = eval_term(l, &start)? - eval_term(r, &start)?;
            let g1 = eval_term(l, &end)? - eval_term(r, &end)?;
            affine_exit(op, g0, g1, duration)
        } else {
            grid_exit(c, |tau| state_at(plant, &start, &rates, t0, tau), duration, substeps)?
        };
        if let Some(time) = exit {
            if first_exit.as_ref().is_none_or(|e| time < e.time) {
                first_exit = Some(DomainExit {
                    time,
                    conjunct: c.clone(),
                });
            }
        }
    }
    Ok(match first_exit {
        Some(exit) => Integration {
            state: state_at(plant, &start, &rates, t0, exit.time),
            domain_exit: Some(exit),
        },
        None => Integration {
            state: end,
            domain_exit: None,
        },
    })
}

fn clock_value(plant: &PlantSpec, s: &State) -> Result<f64, SimError> {
    Ok(s.lookup(plant.clock.as_str()).unwrap_or(0.0))
}

/// `l op r` where both sides are affine in the evolving variables, so
/// `l - r` is affine in time along the closed-form solution.
fn affine_atom<'a>(f: &'a Formula, evolving: &IndexSet<Ident>) -> Option<(&'a Term, &'a Term, CmpOp)> {
    match f {
        Formula::Cmp(op, l, r) if is_affine(l, evolving) && is_affine(r, evolving) => Some((l, r, *op)),
        _ => None,
    }
}

fn is_affine(t: &Term, vars: &IndexSet<Ident>) -> bool {
    let constant = |t: &Term| vars.iter().all(|x| !t.mentions(x));
    match t {
        Term::Num(_) | Term::Var(_) => true,
        Term::Neg(u) => is_affine(u, vars),
        Term::Bin(BinOp::Add | BinOp::Sub, l, r) => is_affine(l, vars) && is_affine(r, vars),
        Term::Bin(BinOp::Mul, l, r) => {
            (constant(l) && is_affine(r, vars)) || (constant(r) && is_affine(l, vars))
        }
        Term::Bin(BinOp::Div, l, r) => constant(r) && is_affine(l, vars),
        Term::Bin(BinOp::Pow, ..) => constant(t),
    }
}

/// Earliest time in `[0, d]` at which `g(τ) op 0` fails for affine `g`
/// with `g(0) = g0` and `g(d) = g1`.
fn affine_exit(op: CmpOp, g0: f64, g1: f64, d: f64) -> Option<f64> {
    if !op.holds(g0, 0.0) {
        return Some(0.0);
    }
    if op.holds(g1, 0.0) {
        // Endpoints satisfy a convex condition; only `=` and `!=` can fail
        // in between.
        return match op {
            CmpOp::Eq if g0 != g1 => Some(0.0),
            CmpOp::Ne if (g0 < 0.0) != (g1 < 0.0) => Some(crossing(g0, g1, d)),
            _ => None,
        };
    }
    match op {
        CmpOp::Eq => Some(0.0),
        _ => Some(crossing(g0, g1, d)),
    }
}

fn crossing(g0: f64, g1: f64, d: f64) -> f64 {
    if g1 == g0 {
        return d;
    }
    (d * g0 / (g0 - g1)).clamp(0.0, d)
}

fn grid_exit(
    c: &Formula,
    at: impl Fn(f64) -> State,
    duration: f64,
    n: usize,
) -> Result<Option<f64>, SimError> {
    let n = n.max(1);
    for k in 0..=n {
        let tau = duration * k as f64 / n as f64;
        if !eval_formula(c, &at(tau))? {
            return Ok(Some(tau));
        }
        if duration == 0.0 {
            break;
        }
    }
    Ok(None)
}

fn integrate_rk4(plant: &PlantSpec, s: &State, duration: f64, substeps: usize) -> Result<Integration, SimError> {
    let n = substeps.max(1);
    let t0 = clock_value(plant, s)?;
    let mut state = s.clone();
    state.insert(plant.clock.clone(), t0);
    let vars: Vec<&Ident> = plant.state_vars().collect();
    let mut x: Vec<f64> = vars
        .iter()
        .map(|v| state.get(v).map_err(EvalError::from))
        .collect::<Result<_, _>>()?;

    let check = |st: &State, tau: f64| -> Result<Option<DomainExit>, SimError> {
        for c in plant.domain.conjuncts() {
            if !eval_formula(c, st)? {
                return Ok(Some(DomainExit {
                    time: tau,
                    conjunct: c.clone(),
                }));
            }
        }
        Ok(None)
    };
    if let Some(exit) = check(&state, 0.0)? {
        return Ok(Integration {
            state,
            domain_exit: Some(exit),
        });
    }
    if duration == 0.0 {
        return Ok(Integration {
            state,
            domain_exit: None,
        });
    }

    let h = duration / n as f64;
    let deriv = |xs: &[f64], tau: f64, base: &State| -> Result<Vec<f64>, SimError> {
        let mut st = base.clone();
        for (v, val) in vars.iter().zip(xs) {
            st.insert((*v).clone(), *val);
        }
        st.insert(plant.clock.clone(), t0 + tau);
        plant
            .odes
            .iter()
            .map(|(_, rhs)| eval_term(rhs, &st).map_err(SimError::from))
            .collect()
    };
    let axpy = |a: &[f64], k: &[f64], f: f64| -> Vec<f64> { a.iter().zip(k).map(|(a, k)| a + f * k).collect() };
    for step in 0..n {
        let tau = duration * step as f64 / n as f64;
        let k1 = deriv(&x, tau, &state)?;
        let k2 = deriv(&axpy(&x, &k1, h / 2.0), tau + h / 2.0, &state)?;
        let k3 = deriv(&axpy(&x, &k2, h / 2.0), tau + h / 2.0, &state)?;
        let k4 = deriv(&axpy(&x, &k3, h), tau + h, &state)?;
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let next_tau = duration * (step + 1) as f64 / n as f64;
        for (v, val) in vars.iter().zip(&x) {
            state.insert((*v).clone(), *val);
        }
        state.insert(plant.clock.clone(), t0 + next_tau);
        if let Some(exit) = check(&state, next_tau)? {
            return Ok(Integration {
                state,
                domain_exit: Some(exit),
            });
        }
    }
    Ok(Integration {
        state,
        domain_exit: None,
    })
}
