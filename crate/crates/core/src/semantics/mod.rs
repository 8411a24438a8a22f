//! Reference semantics: term and formula evaluation, the small-step ST
//! interpreter, the exact reachable-set enumerator for translatable hybrid
//! programs, random program generators and the differential tester.

mod difftest;
mod eval;
mod gen;
mod hp;
mod st;

pub use difftest::{check_expressions, check_hp_to_st, check_st_to_hp, difftest, run_trial, DiffReport, Failure, FailureKind, TrialResult};
pub use eval::{eval_formula, eval_term, EvalError, ExecError};
pub use gen::{gen_hp, gen_hp_formula, gen_st, gen_st_formula, gen_term, GenConfig, GenWeights, Generator};
pub use hp::{hp_reachable, ReachSet};
pub use st::run_st;
