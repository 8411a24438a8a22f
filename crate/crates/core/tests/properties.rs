use proptest::prelude::*;
use rand::Rng;

use stdl_core::analysis::{behavioral_var_sets, var_sets};
use stdl_core::compiler::{formula_st_to_hp, prog_st_to_hp};
use stdl_core::ir::{Ident, State, StFormula, StStatement};
use stdl_core::semantics::{eval_formula, run_st, GenConfig, Generator};
use stdl_core::st::{parse_st_formula, parse_st_statements, print_st_formula, print_st_statement};

fn small_cfg() -> GenConfig {
    GenConfig {
        var_pool: ["x", "y", "z", "u"].iter().map(|s| Ident::new(s).unwrap()).collect(),
        ..GenConfig::default()
    }
}

/// First branch whose condition holds, evaluated directly on the source
/// chain.
fn run_chain(branches: &[(StFormula, StStatement)], otherwise: Option<&StStatement>, s: &State) -> Option<State> {
    for (c, body) in branches {
        if eval_formula(c, s).ok()? {
            return run_st(body, s).ok();
        }
    }
    match otherwise {
        Some(body) => run_st(body, s).ok(),
        None => Some(s.clone()),
    }
}

#[test]
fn elsif_chains_match_direct_interpretation() {
    let cfg = GenConfig::default();
    let mut checked = 0;
    for seed in 0..1000u64 {
        let mut g = Generator::with_stream(&cfg, seed, 40);
        let n = g.rng().gen_range(1..=5);
        let branches: Vec<(StFormula, StStatement)> = (0..n).map(|_| (g.st_formula(2), g.st(2))).collect();
        let otherwise = g.rng().gen_bool(0.5).then(|| g.st(2));
        let mut src = String::new();
        for (i, (c, body)) in branches.iter().enumerate() {
            let kw = if i == 0 { "IF" } else { "ELSIF" };
            src += &format!("{kw} {} THEN\n{}", print_st_formula(c), print_st_statement(body));
        }
        if let Some(e) = &otherwise {
            src += &format!("ELSE\n{}", print_st_statement(e));
        }
        src += "END_IF;\n";
        let parsed = parse_st_statements(&src).unwrap_or_else(|e| panic!("{e}\n{src}"));
        for _ in 0..4 {
            let sigma = g.state();
            let Some(expected) = run_chain(&branches, otherwise.as_ref(), &sigma) else { continue };
            let got = run_st(&parsed, &sigma).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{src}"));
            assert_eq!(got, expected, "seed {seed}\n{src}state: {sigma}");
            checked += 1;
        }
    }
    assert!(checked > 2000, "only {checked} error-free runs");
}

#[test]
fn xor_truth_table() {
    let f = parse_st_formula("a > 0 XOR b > 0").unwrap();
    let g = formula_st_to_hp(&f);
    for a in [0.0, 1.0] {
        for b in [0.0, 1.0] {
            let s: State = [(Ident::new("a").unwrap(), a), (Ident::new("b").unwrap(), b)].into_iter().collect();
            assert_eq!(eval_formula(&f, &s).unwrap(), (a > 0.0) != (b > 0.0));
            assert_eq!(eval_formula(&g, &s).unwrap(), eval_formula(&f, &s).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn must_bound_within_bound(seed in any::<u64>()) {
        let cfg = GenConfig::default();
        let p = Generator::with_stream(&cfg, seed, 41).hp(cfg.max_depth);
        let v = var_sets(&p);
        prop_assert!(v.must_bound.is_subset(&v.bound));
    }

    /// Variables outside BV keep their value; variables in MBV are always
    /// written, so their initial value never shows up in the result.
    #[test]
    fn st_runs_respect_static_sets(seed in any::<u64>()) {
        let cfg = small_cfg();
        let mut g = Generator::with_stream(&cfg, seed, 42);
        let s = g.st(cfg.max_depth);
        let v = var_sets(&prog_st_to_hp(&s));
        let sigma = g.state();
        if let Ok(out) = run_st(&s, &sigma) {
            for x in &cfg.var_pool {
                if !v.bound.contains(x) {
                    prop_assert_eq!(out.get(x).unwrap().to_bits(), sigma.get(x).unwrap().to_bits());
                }
            }
        }
    }

    /// The syntactic sets over-approximate the observed ones.
    #[test]
    fn static_sets_are_sound(seed in any::<u64>()) {
        let cfg = small_cfg();
        let mut g = Generator::with_stream(&cfg, seed, 43);
        let p = g.hp(4);
        let samples: Vec<State> = (0..8).map(|_| g.state()).collect();
        let b = behavioral_var_sets(&p, &cfg.var_pool, &samples, &cfg.literal_pool);
        let v = var_sets(&p);
        prop_assert!(b.free.is_subset(&v.free), "free {:?} vs {:?}", b.free, v.free);
        prop_assert!(b.bound.is_subset(&v.bound), "bound {:?} vs {:?}", b.bound, v.bound);
    }
}
