mod common;

use common::{corpus, squash};
use stdl_core::analysis::{plant_from_program, validate_scan_cycle_form};
use stdl_core::compiler::{prog_hp_to_st, prog_st_to_hp, task_hp_to_st, task_st_to_hp, CompileError, TaskNames};
use stdl_core::dl::{parse_dl_formula, parse_dl_program, parse_dl_safety, print_dl_safety};
use stdl_core::ir::{Ident, State};
use stdl_core::semantics::{hp_reachable, run_st};
use stdl_core::st::{parse_st, parse_st_statements, print_st, print_st_statement};

fn state(pairs: &[(&str, f64)]) -> State {
    pairs.iter().map(|(k, v)| (Ident::new(k).unwrap(), *v)).collect()
}

#[test]
fn water_tank_compiles_to_golden_model() {
    let unit = parse_st(&corpus("water_tank.st")).unwrap();
    let plant = plant_from_program(&parse_dl_program(&corpus("water_tank_plant.dlhp")).unwrap()).unwrap();
    let a = parse_dl_formula(&corpus("water_tank_assumptions.dlhp")).unwrap();
    let s = parse_dl_formula(&corpus("water_tank_safety.dlhp")).unwrap();
    let compiled = task_st_to_hp(&unit, plant, a, s).unwrap();
    let golden = parse_dl_safety(&corpus("water_tank.dlhp")).unwrap();
    assert_eq!(compiled, golden, "\n{}", print_dl_safety(&compiled));
}

#[test]
fn safe_controller_compiles_to_golden_listing() {
    let m = validate_scan_cycle_form(&parse_dl_safety(&corpus("water_tank_safe.dlhp")).unwrap()).unwrap();
    let (unit, _) = task_hp_to_st(&m, &TaskNames::default(), Some(1.0)).unwrap();
    let golden = corpus("water_tank_safe_ctrl.st");
    assert_eq!(squash(&print_st_statement(&unit.body)), squash(&golden));
    assert_eq!(unit.config.as_ref().unwrap().interval, 1.0);
}

#[test]
fn symbolic_interval_needs_a_value() {
    let m = validate_scan_cycle_form(&parse_dl_safety(&corpus("water_tank_safe.dlhp")).unwrap()).unwrap();
    assert!(matches!(
        task_hp_to_st(&m, &TaskNames::default(), None),
        Err(CompileError::MissingEpsilon(_))
    ));
}

#[test]
fn golden_model_yields_its_own_interval() {
    let m = validate_scan_cycle_form(&parse_dl_safety(&corpus("water_tank.dlhp")).unwrap()).unwrap();
    let (unit, diags) = task_hp_to_st(&m, &TaskNames::default(), None).unwrap();
    assert!(diags.is_empty());
    let original = parse_st(&corpus("water_tank.st")).unwrap();
    assert_eq!(unit.body, original.body);
    assert_eq!(unit.config, original.config);
}

#[test]
fn corpus_files_are_print_parse_fixpoints() {
    for name in ["water_tank.dlhp", "water_tank_safe.dlhp"] {
        let f = parse_dl_safety(&corpus(name)).unwrap();
        let printed = print_dl_safety(&f);
        assert_eq!(parse_dl_safety(&printed).unwrap(), f, "{name}");
        assert_eq!(print_dl_safety(&parse_dl_safety(&printed).unwrap()), printed, "{name}");
    }
    let u = parse_st(&corpus("water_tank.st")).unwrap();
    let printed = print_st(&u);
    assert_eq!(parse_st(&printed).unwrap(), u);
    assert_eq!(print_st(&parse_st(&printed).unwrap()), printed);
    let body = parse_st_statements(&corpus("water_tank_safe_ctrl.st")).unwrap();
    assert_eq!(parse_st_statements(&print_st_statement(&body)).unwrap(), body);
    let p = parse_dl_program(&corpus("water_tank_plant.dlhp")).unwrap();
    let printed = stdl_core::dl::print_dl_program(&p);
    assert_eq!(parse_dl_program(&printed).unwrap(), p);
    for name in ["water_tank_assumptions.dlhp", "water_tank_safety.dlhp"] {
        let f = parse_dl_formula(&corpus(name)).unwrap();
        let printed = stdl_core::dl::print_dl_formula(&f);
        assert_eq!(parse_dl_formula(&printed).unwrap(), f);
    }
}

#[test]
fn hand_stepped_water_tank_cycle() {
    let body = parse_st(&corpus("water_tank.st")).unwrap().body;
    let sigma = state(&[
        ("x1", 900.0),
        ("H1", 800.0),
        ("L1", 500.0),
        ("x2", 600.0),
        ("L2", 500.0),
        ("LL", 250.0),
        ("FL", 0.1),
        ("H2", 800.0),
        ("f2", 30.0),
        ("V1", 1.0),
        ("V2", 1.0),
        ("P", 1.0),
    ]);
    let out = run_st(&body, &sigma).unwrap();
    assert_eq!(out.lookup("V1"), Some(0.0));
    assert_eq!(out.lookup("V2"), Some(1.0));
    assert_eq!(out.lookup("P"), Some(1.0));
    let reach = hp_reachable(&prog_st_to_hp(&body), &sigma).unwrap();
    assert_eq!(reach.single(), Some(&out));
}

#[test]
fn plant_clock_clash_is_rejected() {
    let src = "PROGRAM p VAR_OUTPUT t : REAL; END_VAR t := 1; END_PROGRAM";
    let unit = parse_st(src).unwrap();
    let plant = plant_from_program(&parse_dl_program(&corpus("water_tank_plant.dlhp")).unwrap()).unwrap();
    let tt = parse_dl_formula("true").unwrap();
    assert!(matches!(
        task_st_to_hp(&unit, plant, tt.clone(), tt),
        Err(CompileError::PlantVariableClash(_))
    ));
}

#[test]
fn hp_to_st_inverts_st_to_hp_on_corpus() {
    let body = parse_st(&corpus("water_tank.st")).unwrap().body;
    let (back, diags) = prog_hp_to_st(&prog_st_to_hp(&body));
    assert!(diags.is_empty());
    assert_eq!(back, body);
}
