use indexmap::IndexSet;

use crate::ir::{Alternative, HybridProgram, State};

use super::eval::{eval_formula, eval_term, ExecError};

/// Set of final states, deduplicated by exact bit pattern.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReachSet {
    states: IndexSet<State>,
}

impl ReachSet {
    pub fn contains(&self, s: &State) -> bool {
        self.states.contains(s)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &State> + '_ {
        self.states.iter()
    }

    /// The only reachable state, when there is exactly one.
    pub fn single(&self) -> Option<&State> {
        if self.states.len() == 1 {
            self.states.first()
        } else {
            None
        }
    }
}

impl IntoIterator for ReachSet {
    type Item = State;
    type IntoIter = indexmap::set::IntoIter<State>;

    fn into_iter(self) -> Self::IntoIter {
        self.states.into_iter()
    }
}

/// Exact set of states reachable by running `p` from `sigma`. Failed tests
/// contribute nothing.
pub fn hp_reachable(p: &HybridProgram, sigma: &State) -> Result<ReachSet, ExecError> {
    let mut start = IndexSet::new();
    start.insert(sigma.clone());
    Ok(ReachSet {
        states: reach(p, start)?,
    })
}

fn reach(p: &HybridProgram, from: IndexSet<State>) -> Result<IndexSet<State>, ExecError> {
    match p {
        HybridProgram::Assign(a) => from
            .into_iter()
            .map(|mut s| {
                let v = eval_term(&a.value, &s).map_err(|error| ExecError { pos: a.pos, error })?;
                s.insert(a.target.clone(), v);
                Ok(s)
            })
            .collect(),
        HybridProgram::Seq(a, b) => reach(b, reach(a, from)?),
        HybridProgram::Choice(c) => {
            let mut pass = IndexSet::new();
            let mut fail = IndexSet::new();
            for s in &from {
                let holds = eval_formula(&c.guard, s).map_err(|error| ExecError { pos: c.pos, error })?;
                if holds {
                    pass.insert(s.clone());
                } else {
                    fail.insert(s.clone());
                }
            }
            let mut out = reach(&c.then, pass)?;
            match &c.otherwise {
                Alternative::Else(q) => out.extend(reach(q, fail)?),
                Alternative::Skip => out.extend(fail),
                Alternative::Default(q) => out.extend(reach(q, from)?),
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::{lift, parse_dl_program};
    use crate::ir::Ident;

    fn state(pairs: &[(&str, f64)]) -> State {
        pairs.iter().map(|(k, v)| (Ident::new(k).unwrap(), *v)).collect()
    }

    fn reach_of(src: &str, s: &State) -> ReachSet {
        hp_reachable(&lift(&parse_dl_program(src).unwrap()).unwrap(), s).unwrap()
    }

    #[test]
    fn complemented_choice_is_deterministic() {
        let r = reach_of("{?x>=1; y:=1; ++ ?!(x>=1); y:=0;}", &state(&[("x", 2.0), ("y", 9.0)]));
        assert_eq!(r.single(), Some(&state(&[("x", 2.0), ("y", 1.0)])));
    }

    #[test]
    fn default_branch_is_always_open() {
        let r = reach_of("{?x>=1; y:=1; ++ y:=0;}", &state(&[("x", 2.0), ("y", 9.0)]));
        assert_eq!(r.len(), 2);
        assert!(r.contains(&state(&[("x", 2.0), ("y", 0.0)])));
        let r = reach_of("{?x>=1; y:=1; ++ y:=0;}", &state(&[("x", 0.0), ("y", 9.0)]));
        assert_eq!(r.single(), Some(&state(&[("x", 0.0), ("y", 0.0)])));
    }

    #[test]
    fn duplicates_collapse() {
        let r = reach_of("{?x>=1; y:=1; ++ y:=1;}", &state(&[("x", 2.0), ("y", 9.0)]));
        assert_eq!(r.len(), 1);
    }
}
