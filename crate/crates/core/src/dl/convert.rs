use crate::ir::{
    Alternative, CmpOp, Formula, GuardedChoice, HpFormula, HybridProgram, Pos, ScanCycleModel, Term,
};

use super::{DlError, DlProgram, DlSafetyFormula, OdeSystem};

/// Expands guarded choices into explicit tests.
pub fn lower(p: &HybridProgram) -> DlProgram {
    match p {
        HybridProgram::Assign(a) => DlProgram::Assign(a.clone()),
        HybridProgram::Seq(a, b) => DlProgram::seq(lower(a), lower(b)),
        HybridProgram::Choice(c) => {
            let guard = DlProgram::Test(c.guard.clone(), c.pos);
            let left = DlProgram::seq(guard, lower(&c.then));
            let negated = || DlProgram::Test(HpFormula::not(c.guard.clone()), c.pos);
            let right = match &c.otherwise {
                Alternative::Else(q) => DlProgram::seq(negated(), lower(q)),
                Alternative::Skip => negated(),
                Alternative::Default(q) => lower(q),
            };
            DlProgram::choice(left, right)
        }
    }
}

/// Recovers a [`HybridProgram`] from a loop- and ODE-free dL program in
/// which every test guards the left branch of a choice.
pub fn lift(p: &DlProgram) -> Result<HybridProgram, DlError> {
    match p {
        DlProgram::Assign(a) => Ok(HybridProgram::Assign(a.clone())),
        DlProgram::Seq(a, b) => Ok(HybridProgram::seq(lift(a)?, lift(b)?)),
        DlProgram::Choice(l, r) => {
            let (guard, then, pos) = match &**l {
                DlProgram::Seq(t, body) => match &**t {
                    DlProgram::Test(g, pos) => (g, lift(body)?, *pos),
                    _ => return Err(unguarded(l)),
                },
                DlProgram::Test(_, pos) => {
                    return Err(DlError::NotTranslatable {
                        pos: *pos,
                        reason: "guarded branch has no statements".into(),
                    })
                }
                _ => return Err(unguarded(l)),
            };
            let otherwise = match &**r {
                DlProgram::Test(h, _) if detect_complement(guard, h) => Alternative::Skip,
                DlProgram::Seq(t, body)
                    if matches!(&**t, DlProgram::Test(h, _) if detect_complement(guard, h)) =>
                {
                    Alternative::Else(Box::new(lift(body)?))
                }
                other => Alternative::Default(Box::new(lift(other)?)),
            };
            Ok(HybridProgram::Choice(GuardedChoice {
                guard: guard.clone(),
                then: Box::new(then),
                otherwise,
                pos,
            }))
        }
        DlProgram::Test(_, pos) => Err(DlError::NotTranslatable {
            pos: *pos,
            reason: "test outside guarded choice".into(),
        }),
        DlProgram::Nondet(x, pos) => Err(DlError::NotTranslatable {
            pos: *pos,
            reason: format!("nondeterministic assignment to `{x}` outside input section"),
        }),
        DlProgram::Loop(_, pos) => Err(DlError::NotTranslatable {
            pos: *pos,
            reason: "nested loop".into(),
        }),
        DlProgram::Ode(o) => Err(DlError::NotTranslatable {
            pos: o.pos,
            reason: "ODE outside plant".into(),
        }),
    }
}

fn unguarded(branch: &DlProgram) -> DlError {
    DlError::NotTranslatable {
        pos: branch.pos(),
        reason: "choice branch does not start with a test".into(),
    }
}

/// True when `h` is syntactically the negation of `g` (or vice versa),
/// ignoring double negations.
pub fn detect_complement(g: &Formula, h: &Formula) -> bool {
    fn strip(f: &Formula) -> &Formula {
        match f {
            Formula::Not(inner) => match &**inner {
                Formula::Not(x) => strip(x),
                _ => f,
            },
            _ => f,
        }
    }
    fn negates(a: &Formula, b: &Formula) -> bool {
        matches!(strip(a), Formula::Not(inner) if strip(inner) == strip(b))
    }
    negates(h, g) || negates(g, h)
}

impl DlSafetyFormula {
    /// `A -> [{i1 := *; ...; ctrl; t := 0; {odes, t' = 1 & t <= ε & Q}}*] S`
    pub fn from_model(m: &ScanCycleModel) -> DlSafetyFormula {
        let plant = &m.plant;
        let mut equations = plant.odes.clone();
        equations.push((plant.clock.clone(), Term::num("1").expect("literal")));
        let bound = HpFormula::cmp(CmpOp::Le, Term::var(&plant.clock), plant.bound.as_term());
        let domain = if *plant.domain == Formula::True {
            bound
        } else {
            let rest = plant.domain.conjuncts().into_iter().cloned().map(HpFormula::new_unchecked);
            HpFormula::conjunction(std::iter::once(bound).chain(rest))
        };
        let mut parts: Vec<DlProgram> = m
            .inputs
            .iter()
            .map(|x| DlProgram::Nondet(x.clone(), Pos::default()))
            .collect();
        parts.push(lower(&m.ctrl));
        parts.push(DlProgram::Assign(crate::ir::Assignment::new(
            plant.clock.clone(),
            Term::num("0").expect("literal"),
        )));
        parts.push(DlProgram::Ode(OdeSystem {
            equations,
            domain: Some(domain),
            pos: Pos::default(),
        }));
        let body = DlProgram::sequence(parts).expect("non-empty");
        DlSafetyFormula {
            assumptions: m.assumptions.clone(),
            program: DlProgram::Loop(Box::new(body), Pos::default()),
            safety: m.safety.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_dl_program;
    use super::*;
    use crate::dl::parse_dl_formula;

    #[test]
    fn lift_recognizes_all_alternatives() {
        let p = parse_dl_program(
            "{?x > 0; y := 1; ++ ?!(x > 0); y := 2;}
             {?x > 1; y := 3; ++ ?!(x > 1);}
             {?x > 2; y := 4; ++ y := 5;}",
        )
        .unwrap();
        let hp = lift(&p).unwrap();
        assert_eq!(hp.choice_count(), 3);
        assert!(!hp.is_fully_complemented());
        assert_eq!(lower(&hp), p);
    }

    #[test]
    fn complement_ignores_double_negation() {
        let g = parse_dl_formula("x > 0").unwrap();
        let h = parse_dl_formula("!(!(!(x > 0)))").unwrap();
        assert!(detect_complement(&g, &h));
        let g2 = parse_dl_formula("!(x > 0)").unwrap();
        assert!(detect_complement(&g2, &g));
        assert!(!detect_complement(&g, &g));
        assert!(!detect_complement(&g, &parse_dl_formula("x <= 0").unwrap()));
    }

    #[test]
    fn lift_rejects_untranslatable_programs() {
        for (src, reason) in [
            ("?x > 0; y := 1;", "test outside"),
            ("y := *;", "nondeterministic"),
            ("{y := 1;}*", "nested loop"),
            ("{y' = 1}", "ODE outside plant"),
        ] {
            let e = lift(&parse_dl_program(src).unwrap()).unwrap_err();
            assert!(e.to_string().contains(reason), "{e}");
        }
    }
}
