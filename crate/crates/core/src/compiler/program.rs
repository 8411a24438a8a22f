use crate::ir::{
    Alternative, Formula, GuardedChoice, HpFormula, HybridProgram, StFormula, StStatement, Term,
};

use super::CompileDiagnostics;

/// Terms are shared between the dialects; only the printed spelling of
/// `Pow` differs.
pub fn term_st_to_hp(t: &Term) -> Term {
    t.clone()
}

pub fn term_hp_to_st(t: &Term) -> Term {
    t.clone()
}

/// `XOR` is rewritten to `(¬φ ∧ ψ) ∨ (¬ψ ∧ φ)`.
pub fn formula_st_to_hp(f: &StFormula) -> HpFormula {
    HpFormula::new_unchecked(st_to_hp(f))
}

/// `→` becomes `¬φ ∨ ψ` and `↔` becomes `(¬φ ∧ ¬ψ) ∨ (φ ∧ ψ)`.
pub fn formula_hp_to_st(f: &HpFormula) -> StFormula {
    StFormula::new_unchecked(hp_to_st(f))
}

fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

fn and(l: Formula, r: Formula) -> Formula {
    Formula::And(Box::new(l), Box::new(r))
}

fn or(l: Formula, r: Formula) -> Formula {
    Formula::Or(Box::new(l), Box::new(r))
}

fn st_to_hp(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Cmp(op, l, r) => Formula::Cmp(*op, term_st_to_hp(l), term_st_to_hp(r)),
        Formula::Not(g) => not(st_to_hp(g)),
        Formula::And(l, r) => and(st_to_hp(l), st_to_hp(r)),
        Formula::Or(l, r) => or(st_to_hp(l), st_to_hp(r)),
        Formula::Xor(l, r) => {
            let (a, b) = (st_to_hp(l), st_to_hp(r));
            or(and(not(a.clone()), b.clone()), and(not(b), a))
        }
        Formula::Imply(..) | Formula::Equiv(..) => unreachable!("not an ST connective"),
    }
}

fn hp_to_st(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Cmp(op, l, r) => Formula::Cmp(*op, term_hp_to_st(l), term_hp_to_st(r)),
        Formula::Not(g) => not(hp_to_st(g)),
        Formula::And(l, r) => and(hp_to_st(l), hp_to_st(r)),
        Formula::Or(l, r) => or(hp_to_st(l), hp_to_st(r)),
        Formula::Imply(l, r) => or(not(hp_to_st(l)), hp_to_st(r)),
        Formula::Equiv(l, r) => {
            let (a, b) = (hp_to_st(l), hp_to_st(r));
            or(and(not(a.clone()), not(b.clone())), and(a, b))
        }
        Formula::Xor(..) => unreachable!("not a hybrid program connective"),
    }
}

/// Conditionals become complemented guarded choices.
pub fn prog_st_to_hp(s: &StStatement) -> HybridProgram {
    match s {
        StStatement::Assign(a) => HybridProgram::Assign(a.clone()),
        StStatement::Seq(a, b) => HybridProgram::seq(prog_st_to_hp(a), prog_st_to_hp(b)),
        StStatement::IfThenElse {
            cond,
            then,
            otherwise,
            pos,
        } => HybridProgram::Choice(GuardedChoice {
            guard: formula_st_to_hp(cond),
            then: Box::new(prog_st_to_hp(then)),
            otherwise: Alternative::Else(Box::new(prog_st_to_hp(otherwise))),
            pos: *pos,
        }),
        StStatement::IfThen { cond, then, pos } => HybridProgram::Choice(GuardedChoice {
            guard: formula_st_to_hp(cond),
            then: Box::new(prog_st_to_hp(then)),
            otherwise: Alternative::Skip,
            pos: *pos,
        }),
    }
}

/// Guarded choices become conditionals. An unguarded default `β` becomes
/// the ELSE branch, which gives the guarded branch priority; this is
/// reported as a warning.
pub fn prog_hp_to_st(p: &HybridProgram) -> (StStatement, CompileDiagnostics) {
    let mut diags = CompileDiagnostics::default();
    let s = hp_to_st_prog(p, &mut diags);
    (s, diags)
}

fn hp_to_st_prog(p: &HybridProgram, diags: &mut CompileDiagnostics) -> StStatement {
    match p {
        HybridProgram::Assign(a) => StStatement::Assign(a.clone()),
        HybridProgram::Seq(a, b) => StStatement::Seq(
            Box::new(hp_to_st_prog(a, diags)),
            Box::new(hp_to_st_prog(b, diags)),
        ),
        HybridProgram::Choice(c) => {
            let cond = formula_hp_to_st(&c.guard);
            let then = Box::new(hp_to_st_prog(&c.then, diags));
            match &c.otherwise {
                Alternative::Skip => StStatement::IfThen {
                    cond,
                    then,
                    pos: c.pos,
                },
                Alternative::Else(q) => StStatement::IfThenElse {
                    cond,
                    then,
                    otherwise: Box::new(hp_to_st_prog(q, diags)),
                    pos: c.pos,
                },
                Alternative::Default(q) => {
                    diags.warn(
                        "linearized-choice",
                        "unguarded alternative compiled as ELSE branch; the guarded branch takes priority"
                            .to_string(),
                        c.pos,
                    );
                    StStatement::IfThenElse {
                        cond,
                        then,
                        otherwise: Box::new(hp_to_st_prog(q, diags)),
                        pos: c.pos,
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::{lift, parse_dl_formula, parse_dl_program};
    use crate::st::{parse_st_formula, parse_st_statements, print_st_formula, print_st_statement};

    #[test]
    fn xor_rewrite() {
        let f = parse_st_formula("a > 0 XOR b > 0").unwrap();
        let g = formula_st_to_hp(&f);
        let expected = parse_dl_formula("!(a > 0) & b > 0 | !(b > 0) & a > 0").unwrap();
        assert_eq!(g, expected);
    }

    #[test]
    fn implication_and_equivalence_rewrites() {
        let f = formula_hp_to_st(&parse_dl_formula("a > 0 -> b > 0").unwrap());
        assert_eq!(print_st_formula(&f), "NOT(a > 0) OR b > 0");
        let f = formula_hp_to_st(&parse_dl_formula("a > 0 <-> b != 0").unwrap());
        assert_eq!(print_st_formula(&f), "NOT(a > 0) AND NOT(b <> 0) OR a > 0 AND b <> 0");
    }

    #[test]
    fn conditionals_round_trip() {
        let s = parse_st_statements(
            "IF a > 0 THEN x := 1; ELSE IF b > 0 THEN y := 2; END_IF; END_IF; z := x;",
        )
        .unwrap();
        let p = prog_st_to_hp(&s);
        assert!(p.is_fully_complemented());
        let (back, diags) = prog_hp_to_st(&p);
        assert!(diags.is_empty());
        assert_eq!(back, s);
    }

    #[test]
    fn default_branch_is_linearized_with_warning() {
        let p = lift(&parse_dl_program("{?x >= 1; y := 1; ++ y := 0;}").unwrap()).unwrap();
        let (s, diags) = prog_hp_to_st(&p);
        assert_eq!(diags.warnings.len(), 1);
        assert_eq!(diags.warnings[0].code, "linearized-choice");
        assert_eq!(print_st_statement(&s), "IF (x >= 1) THEN\n  y := 1;\nELSE\n  y := 0;\nEND_IF;\n");
    }
}
