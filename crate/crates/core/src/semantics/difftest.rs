use std::fmt;

use crate::compiler::{
    formula_hp_to_st, formula_st_to_hp, prog_hp_to_st, prog_st_to_hp, term_hp_to_st, term_st_to_hp,
};
use crate::dl::{print_dl_formula, print_dl_term, print_hp};
use crate::ir::State;
use crate::st::{print_st_formula, print_st_statement, print_st_term};

use super::{eval_formula, eval_term, hp_reachable, run_st, GenConfig, Generator};

/// Attempts at drawing a trial whose source side evaluates without error.
const MAX_ATTEMPTS: usize = 1000;

/// `None` to redraw, `Some(None)` on agreement, `Some(Some(why))` on a mismatch.
type ExprCheck<'c> = dyn FnMut(&mut Generator<'_>, &State) -> Option<Option<String>> + 'c;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FailureKind {
    /// ST run not reachable by the compiled hybrid program.
    StToHp,
    /// Run of the compiled ST program not reachable by the source.
    HpToSt,
    /// Term or formula evaluates differently after compilation.
    Expression,
    /// Deterministic hybrid program with a non-singleton or different
    /// reachable set.
    Determinism,
}

impl FailureKind {
    pub fn code(self) -> char {
        match self {
            FailureKind::StToHp => 'a',
            FailureKind::HpToSt => 'b',
            FailureKind::Expression => 'c',
            FailureKind::Determinism => 'd',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub kind: FailureKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub seed: u64,
    pub failures: Vec<Failure>,
}

impl TrialResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiffReport {
    pub trials: Vec<TrialResult>,
}

impl DiffReport {
    pub fn total(&self) -> usize {
        self.trials.len()
    }

    pub fn failed(&self) -> usize {
        self.trials.iter().filter(|t| !t.passed()).count()
    }

    pub fn passed(&self) -> bool {
        self.failed() == 0
    }
}

impl fmt::Display for TrialResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return writeln!(f, "PASS seed={}", self.seed);
        }
        let mut kinds: Vec<char> = self.failures.iter().map(|x| x.kind.code()).collect();
        kinds.dedup();
        let kinds: Vec<String> = kinds.iter().map(char::to_string).collect();
        writeln!(f, "FAIL seed={} kind={}", self.seed, kinds.join(","))?;
        for x in &self.failures {
            for line in x.detail.lines() {
                writeln!(f, "  {line}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.trials {
            write!(f, "{t}")?;
        }
        writeln!(f, "total={} failed={}", self.total(), self.failed())
    }
}

/// Runs `n` independent trials with seeds `cfg.seed`, `cfg.seed + 1`, ...
pub fn difftest(cfg: &GenConfig, n: usize) -> DiffReport {
    DiffReport {
        trials: (0..n as u64)
            .map(|i| run_trial(cfg, cfg.seed.wrapping_add(i)))
            .collect(),
    }
}

/// All four checks for one seed. Each check draws from its own stream so
/// that it can also be run on its own.
pub fn run_trial(cfg: &GenConfig, seed: u64) -> TrialResult {
    let mut failures = Vec::new();
    failures.extend(check_st_to_hp(cfg, seed));
    failures.extend(check_hp_to_st(cfg, seed));
    failures.extend(check_expressions(cfg, seed));
    TrialResult { seed, failures }
}

fn exhausted(kind: FailureKind) -> Vec<Failure> {
    vec![Failure {
        kind,
        detail: format!("no error-free trial within {MAX_ATTEMPTS} attempts"),
    }]
}

/// A random ST program and state: the ST run must be reachable by the
/// compiled hybrid program.
pub fn check_st_to_hp(cfg: &GenConfig, seed: u64) -> Vec<Failure> {
    let mut g = Generator::with_stream(cfg, seed, 1);
    for _ in 0..MAX_ATTEMPTS {
        let s = g.st(cfg.max_depth);
        let sigma = g.state();
        let Ok(out) = run_st(&s, &sigma) else { continue };
        let p = prog_st_to_hp(&s);
        let context = || format!("program:\n{}state: {sigma}", print_st_statement(&s));
        let fail = |detail: String| {
            vec![Failure {
                kind: FailureKind::StToHp,
                detail,
            }]
        };
        return match hp_reachable(&p, &sigma) {
            Err(e) => fail(format!("compiled program failed: {e}\n{}", context())),
            Ok(r) if !r.contains(&out) => fail(format!("ST result {out} not reachable\n{}", context())),
            Ok(_) => vec![],
        };
    }
    exhausted(FailureKind::StToHp)
}

/// A random hybrid program and state: the compiled ST run must be reachable
/// by the source, and deterministic sources must reach exactly that state.
pub fn check_hp_to_st(cfg: &GenConfig, seed: u64) -> Vec<Failure> {
    let mut g = Generator::with_stream(cfg, seed, 2);
    for _ in 0..MAX_ATTEMPTS {
        let p = g.hp(cfg.max_depth);
        let sigma = g.state();
        let Ok(reach) = hp_reachable(&p, &sigma) else { continue };
        let (s, _) = prog_hp_to_st(&p);
        let context = || format!("program:\n{}state: {sigma}", print_hp(&p));
        let out = match run_st(&s, &sigma) {
            Ok(out) => out,
            Err(e) => {
                return vec![Failure {
                    kind: FailureKind::HpToSt,
                    detail: format!("compiled program failed: {e}\n{}", context()),
                }]
            }
        };
        let mut failures = Vec::new();
        if !reach.contains(&out) {
            failures.push(Failure {
                kind: FailureKind::HpToSt,
                detail: format!("ST result {out} not reachable\n{}", context()),
            });
        }
        if p.is_fully_complemented() && reach.single() != Some(&out) {
            failures.push(Failure {
                kind: FailureKind::Determinism,
                detail: format!(
                    "deterministic program reached {} states; ST result {out}\n{}",
                    reach.len(),
                    context()
                ),
            });
        }
        return failures;
    }
    exhausted(FailureKind::HpToSt)
}

/// Terms and formulas of both dialects evaluate identically after
/// compilation.
pub fn check_expressions(cfg: &GenConfig, seed: u64) -> Vec<Failure> {
    let mut g = Generator::with_stream(cfg, seed, 3);
    let mut failures = Vec::new();
    let mut fail = |detail: String| {
        failures.push(Failure {
            kind: FailureKind::Expression,
            detail,
        })
    };
    let sample = |g: &mut Generator<'_>, check: &mut ExprCheck<'_>| {
        for _ in 0..MAX_ATTEMPTS {
            let sigma = g.state();
            match check(g, &sigma) {
                None => continue,
                Some(result) => return result,
            }
        }
        Some(format!("no error-free expression within {MAX_ATTEMPTS} attempts"))
    };

    let td = cfg.term_depth;
    let fd = cfg.formula_depth;
    let checks: [(&str, &mut ExprCheck<'_>); 4] = [
        ("ST term", &mut |g, sigma| {
            let t = g.term(td);
            let a = eval_term(&t, sigma).ok()?;
            Some(match eval_term(&term_st_to_hp(&t), sigma) {
                Ok(b) if a.to_bits() == b.to_bits() => None,
                other => Some(format!("{} = {a} but compiled gives {other:?} in {sigma}", print_st_term(&t))),
            })
        }),
        ("HP term", &mut |g, sigma| {
            let t = g.term(td);
            let a = eval_term(&t, sigma).ok()?;
            Some(match eval_term(&term_hp_to_st(&t), sigma) {
                Ok(b) if a.to_bits() == b.to_bits() => None,
                other => Some(format!("{} = {a} but compiled gives {other:?} in {sigma}", print_dl_term(&t))),
            })
        }),
        ("ST formula", &mut |g, sigma| {
            let f = g.st_formula(fd);
            let a = eval_formula(&f, sigma).ok()?;
            Some(match eval_formula(&formula_st_to_hp(&f), sigma) {
                Ok(b) if a == b => None,
                other => Some(format!("{} is {a} but compiled gives {other:?} in {sigma}", print_st_formula(&f))),
            })
        }),
        ("HP formula", &mut |g, sigma| {
            let f = g.hp_formula(fd);
            let a = eval_formula(&f, sigma).ok()?;
            Some(match eval_formula(&formula_hp_to_st(&f), sigma) {
                Ok(b) if a == b => None,
                other => Some(format!("{} is {a} but compiled gives {other:?} in {sigma}", print_dl_formula(&f))),
            })
        }),
    ];
    for (what, check) in checks {
        if let Some(msg) = sample(&mut g, check) {
            fail(format!("{what}: {msg}"));
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_run() {
        let r = difftest(&GenConfig::default(), 0);
        assert_eq!(r.to_string(), "total=0 failed=0\n");
    }

    #[test]
    fn small_run_passes() {
        let r = difftest(&GenConfig::default().with_seed(7), 200);
        assert!(r.passed(), "{r}");
        assert!(r.to_string().starts_with("PASS seed=7\n"));
    }
}
