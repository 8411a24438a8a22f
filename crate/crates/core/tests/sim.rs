mod common;

use common::{corpus, id, model, overflow_scenario, state, PARAMS};
use stdl_core::analysis::classify_io;
use stdl_core::compiler::prog_hp_to_st;
use stdl_core::dl::parse_dl_program;
use stdl_core::ir::ScanCycleModel;
use stdl_core::sim::{
    check_compliance, check_safety, parse_trace, simulate, write_trace, ConstantInputs, IntegratorConfig, Method,
    Phase, SimConfig, SimError, Trace, UniformInputs,
};
use stdl_core::st::{parse_st, parse_st_statements};

fn affine() -> SimConfig {
    SimConfig {
        integrator: IntegratorConfig {
            substeps: 1000,
            method: Method::Affine,
        },
        ..SimConfig::default()
    }
}

fn safe_trace(m: &ScanCycleModel, cycles: usize) -> Trace {
    let body = parse_st_statements(&corpus("water_tank_safe_ctrl.st")).unwrap();
    let (s0, mut inputs) = overflow_scenario();
    let run = simulate(m, &body, &mut inputs, &s0, cycles, &affine()).unwrap();
    parse_trace(&write_trace(m, &run)).unwrap()
}

fn flip(trace: &mut Trace, rows: impl IntoIterator<Item = usize>) {
    for r in rows {
        let v = trace.rows[r - 1].1.get_mut(&id("V1")).unwrap();
        *v = 1.0 - *v;
    }
}

#[test]
fn original_controller_overflows_in_first_cycle() {
    let m = model("water_tank_safe.dlhp");
    let body = parse_st(&corpus("water_tank.st")).unwrap().body;
    let (s0, mut inputs) = overflow_scenario();
    let run = simulate(&m, &body, &mut inputs, &s0, 3, &affine()).unwrap();
    let v = check_safety(&run, &m.safety).unwrap();
    assert_eq!(v[0].cycle, 1);
    assert_eq!(v[0].phase, Phase::PostPlant);
    assert_eq!(v[0].state.lookup("x1"), Some(1190.0));
}

#[test]
fn safe_controller_keeps_levels_in_scenario() {
    let m = model("water_tank_safe.dlhp");
    let body = parse_st_statements(&corpus("water_tank_safe_ctrl.st")).unwrap();
    let (s0, mut inputs) = overflow_scenario();
    let run = simulate(&m, &body, &mut inputs, &s0, 100, &affine()).unwrap();
    assert_eq!(run.len(), 100);
    assert!(check_safety(&run, &m.safety).unwrap().is_empty());
}

#[test]
fn clock_discipline_and_parameter_frame() {
    let m = model("water_tank_safe.dlhp");
    let body = prog_hp_to_st(&m.ctrl).0;
    let (s0, _) = overflow_scenario();
    let ranges = [(id("f1"), (0.0, 50.0)), (id("f2"), (0.0, 50.0))].into_iter().collect();
    let mut inputs = UniformInputs::new(ranges, 3);
    let run = simulate(&m, &body, &mut inputs, &s0, 50, &SimConfig::default()).unwrap();
    for (i, r) in run.iter().enumerate() {
        assert_eq!(r.index, i + 1);
        assert_eq!(r.t_abs, i as f64 * 10.0);
        assert_eq!(r.post_plant.lookup("t"), Some(10.0));
        for (p, v) in PARAMS {
            assert_eq!(r.post_plant.lookup(p), Some(v));
        }
    }
}

#[test]
fn rk4_agrees_with_closed_form() {
    let m = model("water_tank_safe.dlhp");
    let body = prog_hp_to_st(&m.ctrl).0;
    let (s0, mut a) = overflow_scenario();
    let (_, mut b) = overflow_scenario();
    let rk4 = SimConfig {
        integrator: IntegratorConfig {
            substeps: 1000,
            method: Method::Rk4,
        },
        ..SimConfig::default()
    };
    let x = simulate(&m, &body, &mut a, &s0, 30, &affine()).unwrap();
    let y = simulate(&m, &body, &mut b, &s0, 30, &rk4).unwrap();
    for (p, q) in x.iter().zip(&y) {
        for v in ["x1", "x2"] {
            let (u, w) = (p.post_plant.lookup(v).unwrap(), q.post_plant.lookup(v).unwrap());
            assert!((u - w).abs() <= 1e-9 * u.abs().max(1.0), "{v}: {u} vs {w}");
        }
    }
}

#[test]
fn domain_exit_stops_the_run() {
    let m = model("water_tank_safe.dlhp");
    // drains tank 1 through the pump regardless of its level
    let body = parse_st_statements("V1 := 0; V2 := 1; P := 1;").unwrap();
    let mut s0 = state(&PARAMS);
    for (k, v) in [("x1", 100.0), ("x2", 0.0), ("V1", 0.0), ("V2", 0.0), ("P", 0.0), ("eps", 10.0)] {
        s0.insert(id(k), v);
    }
    let mut inputs = ConstantInputs([(id("f1"), 0.0), (id("f2"), 30.0)].into_iter().collect());
    let run = simulate(&m, &body, &mut inputs, &s0, 10, &affine()).unwrap();
    assert_eq!(run.len(), 1);
    let exit = run[0].domain_exit.as_ref().unwrap();
    assert!((exit.time - 100.0 / 30.0).abs() < 1e-12);
    assert!(run[0].post_plant.lookup("x1").unwrap().abs() < 1e-9);
}

#[test]
fn missing_input_is_an_error() {
    let m = model("water_tank_safe.dlhp");
    let body = prog_hp_to_st(&m.ctrl).0;
    let (s0, _) = overflow_scenario();
    let mut inputs = ConstantInputs([(id("f1"), 1.0)].into_iter().collect());
    assert!(matches!(
        simulate(&m, &body, &mut inputs, &s0, 1, &affine()),
        Err(SimError::MissingInput { cycle: 1, .. })
    ));
}

#[test]
fn self_generated_trace_complies() {
    let m = model("water_tank_safe.dlhp");
    let trace = safe_trace(&m, 60);
    let io = classify_io(&m.ctrl, &m.inputs, &m.plant);
    let r = check_compliance(&m.ctrl, &io, &trace, 1e-9).unwrap();
    assert!(r.is_compliant(), "{r}");
    assert_eq!(r, check_compliance(&m.ctrl, &io, &trace, 1e-9).unwrap());
}

#[test]
fn flipped_rows_form_instances() {
    let m = model("water_tank_safe.dlhp");
    let mut trace = safe_trace(&m, 60);
    flip(&mut trace, [10, 11, 12, 40]);
    let io = classify_io(&m.ctrl, &m.inputs, &m.plant);
    let r = check_compliance(&m.ctrl, &io, &trace, 1e-9).unwrap();
    assert_eq!(r.ranges(), [(10, 12), (40, 40)]);
}

#[test]
fn open_valve_against_closing_guard_is_flagged() {
    let m = model("water_tank_safe.dlhp");
    let mut trace = safe_trace(&m, 5);
    // f1 > (HH - x1)/eps holds in every row; the controller must close V1
    trace.rows[2].1.insert(id("V1"), 1.0);
    let io = classify_io(&m.ctrl, &m.inputs, &m.plant);
    let r = check_compliance(&m.ctrl, &io, &trace, 1e-9).unwrap();
    assert_eq!(r.ranges(), [(3, 3)]);
    assert_eq!(r.instances[0].first, [(id("V1"), 0.0, 1.0)]);
}

#[test]
fn compliance_needs_all_columns() {
    let m = model("water_tank_safe.dlhp");
    let trace = parse_trace("cycle,x1,V1\n1,0,0\n").unwrap();
    let io = classify_io(&m.ctrl, &m.inputs, &m.plant);
    let Err(SimError::SchemaError(missing)) = check_compliance(&m.ctrl, &io, &trace, 1e-9) else {
        panic!("expected a schema error")
    };
    assert!(missing.contains(&"f2".to_string()) && missing.contains(&"eps".to_string()));
}

#[test]
fn compliance_rejects_unguarded_alternatives() {
    let p = stdl_core::dl::lift(&parse_dl_program("?x > 0; y := 1; ++ y := 2;").unwrap()).unwrap();
    let m = model("water_tank_safe.dlhp");
    let io = classify_io(&p, &[], &m.plant);
    let trace = parse_trace("cycle,x,y\n1,1,1\n").unwrap();
    assert_eq!(check_compliance(&p, &io, &trace, 1e-9), Err(SimError::NondeterministicCtrl));
}
