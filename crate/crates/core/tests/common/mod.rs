#![allow(dead_code)]

use std::path::PathBuf;

use stdl_core::ir::{Alternative, Formula, GuardedChoice, HpFormula, HybridProgram, StFormula, StStatement};

pub fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

/// Rewrites XOR, implication and equivalence into AND/OR/NOT the same way
/// the compilers do.
pub fn expand(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Cmp(..) => f.clone(),
        Formula::Not(a) => not(expand(a)),
        Formula::And(a, b) => and(expand(a), expand(b)),
        Formula::Or(a, b) => or(expand(a), expand(b)),
        Formula::Xor(a, b) => {
            let (a, b) = (expand(a), expand(b));
            or(and(not(a.clone()), b.clone()), and(not(b), a))
        }
        Formula::Imply(a, b) => or(not(expand(a)), expand(b)),
        Formula::Equiv(a, b) => {
            let (a, b) = (expand(a), expand(b));
            or(and(not(a.clone()), not(b.clone())), and(a, b))
        }
    }
}

/// XOR-free form of an ST statement.
pub fn normalize_st(s: &StStatement) -> StStatement {
    let cond = |c: &StFormula| StFormula::new(expand(c)).unwrap();
    match s {
        StStatement::Assign(_) => s.clone(),
        StStatement::Seq(a, b) => StStatement::Seq(Box::new(normalize_st(a)), Box::new(normalize_st(b))),
        StStatement::IfThenElse { cond: c, then, otherwise, pos } => StStatement::IfThenElse {
            cond: cond(c),
            then: Box::new(normalize_st(then)),
            otherwise: Box::new(normalize_st(otherwise)),
            pos: *pos,
        },
        StStatement::IfThen { cond: c, then, pos } => StStatement::IfThen {
            cond: cond(c),
            then: Box::new(normalize_st(then)),
            pos: *pos,
        },
    }
}

/// Implication- and equivalence-free form of a hybrid program.
pub fn normalize_hp(p: &HybridProgram) -> HybridProgram {
    match p {
        HybridProgram::Assign(_) => p.clone(),
        HybridProgram::Seq(a, b) => HybridProgram::Seq(Box::new(normalize_hp(a)), Box::new(normalize_hp(b))),
        HybridProgram::Choice(c) => HybridProgram::Choice(GuardedChoice {
            guard: HpFormula::new(expand(&c.guard)).unwrap(),
            then: Box::new(normalize_hp(&c.then)),
            otherwise: match &c.otherwise {
                Alternative::Else(q) => Alternative::Else(Box::new(normalize_hp(q))),
                Alternative::Default(q) => Alternative::Default(Box::new(normalize_hp(q))),
                Alternative::Skip => Alternative::Skip,
            },
            pos: c.pos,
        }),
    }
}

pub fn has_default(p: &HybridProgram) -> bool {
    match p {
        HybridProgram::Assign(_) => false,
        HybridProgram::Seq(a, b) => has_default(a) || has_default(b),
        HybridProgram::Choice(c) => {
            has_default(&c.then)
                || match &c.otherwise {
                    Alternative::Default(_) => true,
                    Alternative::Else(q) => has_default(q),
                    Alternative::Skip => false,
                }
        }
    }
}

use stdl_core::analysis::validate_scan_cycle_form;
use stdl_core::dl::parse_dl_safety;
use stdl_core::ir::{Ident, ScanCycleModel, State};
use stdl_core::sim::ConstantInputs;

pub fn model(name: &str) -> ScanCycleModel {
    validate_scan_cycle_form(&parse_dl_safety(&corpus(name)).unwrap()).unwrap()
}

pub fn id(s: &str) -> Ident {
    Ident::new(s).unwrap()
}

pub fn state(pairs: &[(&str, f64)]) -> State {
    pairs.iter().map(|(k, v)| (id(k), *v)).collect()
}

/// Thresholds of the two-tank plant.
pub const PARAMS: [(&str, f64); 7] = [
    ("HH", 1000.0),
    ("H1", 800.0),
    ("L1", 500.0),
    ("LL", 250.0),
    ("L2", 500.0),
    ("H2", 800.0),
    ("FL", 0.1),
];

/// Tank 1 close to its trigger level with only the inflow valve open.
pub fn overflow_scenario() -> (State, ConstantInputs) {
    let mut s: Vec<(&str, f64)> = PARAMS.to_vec();
    s.extend([("x1", 790.0), ("x2", 600.0), ("V1", 1.0), ("V2", 0.0), ("P", 0.0), ("eps", 10.0)]);
    let inputs = ConstantInputs([(id("f1"), 40.0), (id("f2"), 30.0)].into_iter().collect());
    (state(&s), inputs)
}
