use indexmap::IndexSet;

use crate::ir::{HybridProgram, Ident, State};
use crate::semantics::{hp_reachable, ReachSet};

/// Free and bound variables observed by running a program, as opposed to
/// the syntactic sets of [`var_sets`](super::var_sets).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BehavioralSets {
    pub free: IndexSet<Ident>,
    pub bound: IndexSet<Ident>,
}

/// Brute-force approximation of the semantic variable sets on the given
/// sample states.
///
/// `x` is bound if some run from a sample changes it. `x` is free if for a
/// sample `σ` and a perturbation `σ[x ↦ v]` one side has a final state that
/// the other side cannot reproduce on all variables other than `x`, where
/// `x` itself must also agree unless both runs leave it untouched.
/// Samples on which the program fails to evaluate are skipped.
pub fn behavioral_var_sets(
    p: &HybridProgram,
    vars: &[Ident],
    samples: &[State],
    perturbations: &[f64],
) -> BehavioralSets {
    let mut out = BehavioralSets::default();
    for sigma in samples {
        let Ok(reach) = hp_reachable(p, sigma) else { continue };
        for omega in reach.iter() {
            for (x, v) in omega.iter() {
                if sigma.lookup(x.as_str()).is_none_or(|u| u.to_bits() != v.to_bits()) {
                    out.bound.insert(x.clone());
                }
            }
        }
        for x in vars {
            if out.free.contains(x) {
                continue;
            }
            for &v in perturbations {
                let tilde = sigma.set(x, v);
                if tilde == *sigma {
                    continue;
                }
                let Ok(reach_tilde) = hp_reachable(p, &tilde) else { continue };
                if !covers(x, sigma, &reach, &tilde, &reach_tilde) || !covers(x, &tilde, &reach_tilde, sigma, &reach) {
                    out.free.insert(x.clone());
                    break;
                }
            }
        }
    }
    // keep occurrence order stable across calls
    out.free.sort_by(|a, b| vars.iter().position(|v| v == a).cmp(&vars.iter().position(|v| v == b)));
    out.bound.sort();
    out
}

/// Every outcome from `s` is matched by an outcome from `t`.
fn covers(x: &Ident, s: &State, rs: &ReachSet, t: &State, rt: &ReachSet) -> bool {
    let same = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(a), Some(b)) => a.to_bits() == b.to_bits(),
        (None, None) => true,
        _ => false,
    };
    rs.iter().all(|w| {
        rt.iter().any(|wt| {
            let rest = w
                .iter()
                .filter(|(y, _)| *y != x)
                .all(|(y, v)| same(Some(v), wt.lookup(y.as_str())))
                && w.len() == wt.len();
            let at_x = w.lookup(x.as_str());
            let at_x_t = wt.lookup(x.as_str());
            let untouched = same(at_x, s.lookup(x.as_str())) && same(at_x_t, t.lookup(x.as_str()));
            rest && (same(at_x, at_x_t) || untouched)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::prog_st_to_hp;
    use crate::st::parse_st_statements;

    fn id(s: &str) -> Ident {
        Ident::new(s).unwrap()
    }

    fn sets(src: &str) -> BehavioralSets {
        let p = prog_st_to_hp(&parse_st_statements(src).unwrap());
        let vars = [id("x"), id("y"), id("z")];
        let samples: Vec<State> = [(1.0, 2.0, 3.0), (-1.0, 0.0, 5.0), (0.5, 0.5, -2.0)]
            .iter()
            .map(|&(a, b, c)| [(id("x"), a), (id("y"), b), (id("z"), c)].into_iter().collect())
            .collect();
        behavioral_var_sets(&p, &vars, &samples, &[0.0, 1.0, -3.0, 7.5])
    }

    fn names(s: &IndexSet<Ident>) -> Vec<&str> {
        s.iter().map(|x| x.as_str()).collect()
    }

    #[test]
    fn assignments() {
        let b = sets("x := y + 1;");
        assert_eq!(names(&b.free), ["y"]);
        assert_eq!(names(&b.bound), ["x"]);
    }

    #[test]
    fn overwritten_reads_are_not_free() {
        let b = sets("x := 0; y := x;");
        assert!(b.free.is_empty());
    }

    #[test]
    fn self_assignment_is_neither() {
        let b = sets("x := x;");
        assert!(b.free.is_empty());
        assert!(b.bound.is_empty());
    }

    #[test]
    fn guards_are_free() {
        let b = sets("IF (z > 2) THEN x := 1; END_IF;");
        assert_eq!(names(&b.free), ["z"]);
        assert_eq!(names(&b.bound), ["x"]);
    }
}
