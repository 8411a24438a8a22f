use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    p.display().to_string()
}

fn stdl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stdl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SCENARIO: [&str; 26] = [
    "--set", "x1=790", "--set", "x2=600", "--set", "V1=1", "--set", "V2=0", "--set", "P=0", "--set", "HH=1000",
    "--set", "H1=800", "--set", "L1=500", "--set", "LL=250", "--set", "L2=500", "--set", "H2=800", "--set", "FL=0.1",
    "--set", "eps=10",
];

#[test]
fn st2hp_writes_golden_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.dlhp");
    let o = stdl(&[
        "st2hp",
        &corpus("water_tank.st"),
        "--plant",
        &corpus("water_tank_plant.dlhp"),
        "--assumptions",
        &corpus("water_tank_assumptions.dlhp"),
        "--safety",
        &corpus("water_tank_safety.dlhp"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("outputs = {V1, P, V2}"));
    let written = stdl_core::dl::parse_dl_safety(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let golden = stdl_core::dl::parse_dl_safety(&std::fs::read_to_string(corpus("water_tank.dlhp")).unwrap()).unwrap();
    assert_eq!(written, golden);
}

#[test]
fn st2hp_without_plant_is_a_usage_error() {
    let o = stdl(&["st2hp", &corpus("water_tank.st")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn st2hp_reports_clock_clash_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let st = dir.path().join("clash.st");
    std::fs::write(&st, "PROGRAM p\n  VAR_OUTPUT t : REAL; END_VAR\n  t := 1;\nEND_PROGRAM\n").unwrap();
    let safety = dir.path().join("s.dlhp");
    std::fs::write(&safety, "true").unwrap();
    let s = safety.to_str().unwrap();
    let o = stdl(&["st2hp", st.to_str().unwrap(), "--plant", &corpus("water_tank_plant.dlhp"), "--assumptions", s, "--safety", s]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("clash.st:1:1: error["), "{err}");
}

#[test]
fn parse_errors_carry_file_line_column_and_rule() {
    let dir = tempfile::tempdir().unwrap();
    let st = dir.path().join("bad.st");
    std::fs::write(&st, "PROGRAM p\n  WHILE x > 0 DO x := 0; END_WHILE;\nEND_PROGRAM\n").unwrap();
    let o = stdl(&["analyze", st.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("bad.st:2:3: error[st-subset]"), "{err}");
}

#[test]
fn hp2st_needs_epsilon_for_symbolic_interval() {
    let o = stdl(&["hp2st", &corpus("water_tank_safe.dlhp")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error[missing-epsilon]"));

    let o = stdl(&["hp2st", &corpus("water_tank_safe.dlhp"), "--epsilon", "1"]);
    assert!(o.status.success());
    let unit = stdl_core::st::parse_st(&stdout(&o)).unwrap();
    assert_eq!(unit.config.unwrap().interval, 1.0);
    assert!(stderr(&o).contains("warning[input-output-conflict]"));
}

#[test]
fn hp2st_minimal_unit() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.dlhp");
    std::fs::write(&m, "true -> [{x := 1; t := 0; {y' = x, t' = 1 & t <= 0.05}}*] y >= 0").unwrap();
    let o = stdl(&["hp2st", m.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("T#50 ms"), "{text}");
    assert!(stdl_core::st::parse_st(&text).is_ok());
}

#[test]
fn analyze_prints_sets() {
    let o = stdl(&["analyze", &corpus("water_tank.dlhp")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("BV  = {V1, P, V2}"), "{text}");
    assert!(text.contains("inputs  = {x1, x2, f1, f2}"), "{text}");
    assert!(text.contains("epsilon = 1"));
}

#[test]
fn difftest_summary() {
    let o = stdl(&["difftest", "--n", "200", "--seed", "1", "--depth", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "total=200 failed=0");
}

#[test]
fn simulate_flags_overflow_of_original_controller() {
    let (model, st) = (corpus("water_tank_safe.dlhp"), corpus("water_tank.st"));
    let mut args = vec!["simulate", "--model", &model, "--st", &st];
    args.extend(SCENARIO);
    args.extend(["--const", "f1=40", "--const", "f2=30", "--cycles", "3"]);
    let o = stdl(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("safety violated in cycle 1 (post_plant)"));
}

#[test]
fn simulate_then_comply_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let model = corpus("water_tank_safe.dlhp");
    let mut args = vec!["simulate", "--model", &model, "--out", trace.to_str().unwrap()];
    args.extend(SCENARIO);
    args.extend(["--uniform", "f1=0:50", "--uniform", "f2=0:50", "--seed", "4", "--cycles", "40"]);
    let o = stdl(&args);
    assert!(o.status.success(), "{}", stderr(&o));

    let o = stdl(&["comply", "--model", &model, "--trace", trace.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("instances=0"));

    let first = std::fs::read(&trace).unwrap();
    stdl(&args);
    assert_eq!(std::fs::read(&trace).unwrap(), first, "simulation is not reproducible");
}

#[test]
fn comply_reports_injected_instances() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let model = corpus("water_tank_safe.dlhp");
    let mut args = vec!["simulate", "--model", &model, "--out", trace.to_str().unwrap()];
    args.extend(SCENARIO);
    args.extend(["--const", "f1=40", "--const", "f2=30", "--cycles", "50"]);
    assert!(stdl(&args).status.success());

    let text = std::fs::read_to_string(&trace).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let col = lines[0].split(',').position(|c| c == "V1").unwrap();
    for row in [10, 11, 12, 40] {
        let mut cells: Vec<String> = lines[row].split(',').map(str::to_string).collect();
        cells[col] = if cells[col] == "0" { "1".into() } else { "0".into() };
        lines[row] = cells.join(",");
    }
    std::fs::write(&trace, lines.join("\n")).unwrap();

    let o = stdl(&["comply", "--model", &model, "--trace", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("noncompliant cycles 10..=12"), "{text}");
    assert!(text.contains("noncompliant cycles 40..=40"), "{text}");
    assert!(text.contains("instances=2"));
}

#[test]
fn comply_missing_columns() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    std::fs::write(&trace, "cycle,x1\n1,0\n").unwrap();
    let o = stdl(&["comply", "--model", &corpus("water_tank_safe.dlhp"), "--trace", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error[trace-schema]"));
}
