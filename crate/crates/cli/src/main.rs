use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stdl_core::analysis::{classify_io, model_epsilon, plant_from_program, validate_scan_cycle_form, var_sets, VarSets};
use stdl_core::compiler::{prog_hp_to_st, prog_st_to_hp, task_hp_to_st, task_st_to_model, TaskNames};
use stdl_core::dl::{lift, parse_dl_document, parse_dl_formula, parse_dl_program, print_dl_safety, DlDocument, DlSafetyFormula};
use stdl_core::ir::{Ident, Pos, ScanCycleModel, State, StStatement};
use stdl_core::semantics::{difftest, GenConfig};
use stdl_core::sim::{
    check_compliance, check_safety, parse_trace, simulate, write_trace, ConstantInputs, CsvInputs, IntegratorConfig,
    Method, MixedInputs, Phase, SimConfig, UniformInputs,
};
use stdl_core::st::{parse_st, parse_st_statements, print_st, VarKind};

#[derive(Parser)]
#[command(name = "stdl", version, about = "Compile between Structured Text and dL hybrid programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile an ST program and a plant into a dL safety formula.
    St2hp {
        st: PathBuf,
        #[arg(long)]
        plant: PathBuf,
        #[arg(long)]
        assumptions: PathBuf,
        #[arg(long)]
        safety: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a scan cycle model into an ST program with its configuration.
    Hp2st {
        model: PathBuf,
        /// Scan interval in seconds; required when the model leaves it symbolic.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "prog0")]
        program: String,
        #[arg(long, default_value = "Main")]
        task: String,
        #[arg(long, default_value = "Config0")]
        config: String,
        #[arg(long, default_value = "Res0")]
        resource: String,
        #[arg(long, default_value = "PLC")]
        processor: String,
        #[arg(long, default_value = "Inst0")]
        instance: String,
    },
    /// Print variable sets and I/O classification of an ST or dL file.
    Analyze { file: PathBuf },
    /// Run the differential test suite of both compilers.
    Difftest {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        depth: u32,
        /// Print every trial, not only failures.
        #[arg(long)]
        verbose: bool,
    },
    /// Simulate a controller in closed loop with the model's plant.
    Simulate {
        #[arg(long)]
        model: PathBuf,
        /// ST controller; defaults to the compiled controller of the model.
        #[arg(long)]
        st: Option<PathBuf>,
        /// Initial value, NAME=VALUE.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
        /// Input held constant in every cycle, NAME=VALUE.
        #[arg(long = "const", value_name = "NAME=VALUE")]
        constant: Vec<String>,
        /// Input drawn uniformly each cycle, NAME=LO:HI.
        #[arg(long, value_name = "NAME=LO:HI")]
        uniform: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-cycle inputs with a `cycle` column.
        #[arg(long)]
        inputs_csv: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        cycles: usize,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        substeps: usize,
        #[arg(long, value_enum, default_value_t = Integrator::Auto)]
        integrator: Integrator,
        /// Fail unless the initial state satisfies the assumptions.
        #[arg(long)]
        check_assumptions: bool,
        /// Trace CSV; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a recorded trace against the model's controller.
    Comply {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Integrator {
    Rk4,
    Affine,
    Auto,
}

/// `file:line:col: error[rule]: message`
struct Diag {
    file: String,
    pos: Pos,
    rule: &'static str,
    message: String,
}

impl fmt::Display for Diag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (line, col) = if self.pos.is_known() { (self.pos.line, self.pos.col) } else { (1, 1) };
        write!(f, "{}:{line}:{col}: error[{}]: {}", self.file, self.rule, self.message)
    }
}

fn diag(file: &Path, pos: Pos, rule: &'static str, err: impl fmt::Display) -> Diag {
    let msg = err.to_string();
    let prefix = format!("{pos}: ");
    let message = msg.strip_prefix(&prefix).map(str::to_string).unwrap_or(msg);
    Diag {
        file: file.display().to_string(),
        pos,
        rule,
        message,
    }
}

type Run = Result<ExitCode, Diag>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(d) => {
            eprintln!("{d}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Run {
    match cmd {
        Command::St2hp {
            st,
            plant,
            assumptions,
            safety,
            out,
        } => st2hp(&st, &plant, &assumptions, &safety, out.as_deref()),
        Command::Hp2st {
            model,
            epsilon,
            out,
            program,
            task,
            config,
            resource,
            processor,
            instance,
        } => {
            let name = |s: &str| Ident::new(s).map_err(|e| diag(Path::new("<args>"), Pos::default(), "usage", e));
            let names = TaskNames {
                program: name(&program)?,
                config: name(&config)?,
                resource: name(&resource)?,
                processor: name(&processor)?,
                task: name(&task)?,
                instance: name(&instance)?,
            };
            hp2st(&model, epsilon, &names, out.as_deref())
        }
        Command::Analyze { file } => analyze(&file),
        Command::Difftest { n, seed, depth, verbose } => {
            let cfg = GenConfig {
                seed,
                max_depth: depth,
                ..GenConfig::default()
            };
            let report = difftest(&cfg, n);
            if verbose {
                print!("{report}");
            } else {
                for t in report.trials.iter().filter(|t| !t.failures.is_empty()) {
                    print!("{t}");
                }
                println!("total={} failed={}", report.total(), report.failed());
            }
            Ok(exit(report.failed() == 0))
        }
        Command::Simulate {
            model,
            st,
            set,
            constant,
            uniform,
            seed,
            inputs_csv,
            cycles,
            epsilon,
            substeps,
            integrator,
            check_assumptions,
            out,
        } => {
            let method = match integrator {
                Integrator::Rk4 => Method::Rk4,
                Integrator::Affine => Method::Affine,
                Integrator::Auto => Method::Auto,
            };
            let cfg = SimConfig {
                integrator: IntegratorConfig { substeps, method },
                epsilon,
                check_assumptions,
            };
            let args = SimArgs {
                set,
                constant,
                uniform,
                seed,
                inputs_csv,
                cycles,
            };
            simulate_cmd(&model, st.as_deref(), &args, &cfg, out.as_deref())
        }
        Command::Comply { model, trace, tolerance } => comply(&model, &trace, tolerance),
    }
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn read(path: &Path) -> Result<String, Diag> {
    std::fs::read_to_string(path).map_err(|e| diag(path, Pos::default(), "io", e))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Diag> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| diag(p, Pos::default(), "io", e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn st2hp(st: &Path, plant: &Path, assumptions: &Path, safety: &Path, out: Option<&Path>) -> Run {
    let unit = parse_st(&read(st)?).map_err(|e| diag(st, e.pos(), e.rule(), &e))?;
    let plant_prog = parse_dl_program(&read(plant)?).map_err(|e| diag(plant, e.pos(), e.rule(), &e))?;
    let plant_spec = plant_from_program(&plant_prog).map_err(|e| diag(plant, e.pos(), e.rule(), &e))?;
    let a = parse_dl_formula(&read(assumptions)?).map_err(|e| diag(assumptions, e.pos(), e.rule(), &e))?;
    let s = parse_dl_formula(&read(safety)?).map_err(|e| diag(safety, e.pos(), e.rule(), &e))?;
    let m = task_st_to_model(&unit, plant_spec, a, s).map_err(|e| diag(st, e.pos(), e.rule(), &e))?;
    eprint!("{}", io_summary(&m));
    emit(out, &print_dl_safety(&DlSafetyFormula::from_model(&m)))?;
    Ok(ExitCode::SUCCESS)
}

fn load_model(path: &Path) -> Result<ScanCycleModel, Diag> {
    let doc = parse_dl_document(&read(path)?).map_err(|e| diag(path, e.pos(), e.rule(), &e))?;
    let DlDocument::Safety(f) = doc else {
        return Err(diag(path, Pos::default(), "scan-cycle-form", "expected a formula `A -> [{...}*] S`"));
    };
    validate_scan_cycle_form(&f).map_err(|e| diag(path, e.pos(), e.rule(), &e))
}

fn hp2st(model: &Path, epsilon: Option<f64>, names: &TaskNames, out: Option<&Path>) -> Run {
    let m = load_model(model)?;
    let (unit, diags) = task_hp_to_st(&m, names, epsilon).map_err(|e| diag(model, e.pos(), e.rule(), &e))?;
    for w in &diags.warnings {
        let (line, col) = if w.pos.is_known() { (w.pos.line, w.pos.col) } else { (1, 1) };
        eprintln!("{}:{line}:{col}: warning[{}]: {}", model.display(), w.code, w.message);
    }
    emit(out, &print_st(&unit))?;
    Ok(ExitCode::SUCCESS)
}

fn list(xs: impl IntoIterator<Item = impl fmt::Display>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn var_summary(v: &VarSets) -> String {
    format!("FV  = {}\nBV  = {}\nMBV = {}\n", list(&v.free), list(&v.bound), list(&v.must_bound))
}

fn io_summary(m: &ScanCycleModel) -> String {
    let io = classify_io(&m.ctrl, &m.inputs, &m.plant);
    let mut s = String::new();
    let _ = writeln!(s, "inputs  = {}", list(&io.inputs));
    let _ = writeln!(s, "outputs = {}", list(&io.outputs));
    let _ = writeln!(s, "params  = {}", list(&io.params));
    if !io.conflicts.is_empty() {
        let _ = writeln!(s, "conflicts = {}", list(&io.conflicts));
    }
    s
}

fn analyze(file: &Path) -> Run {
    let src = read(file)?;
    let is_st = file.extension().is_some_and(|e| e.eq_ignore_ascii_case("st"));
    if is_st {
        let body = parse_st_body(file, &src)?;
        print!("{}", var_summary(&var_sets(&prog_st_to_hp(&body))));
        if let Ok(u) = parse_st(&src) {
            for kind in [VarKind::Input, VarKind::Output, VarKind::External] {
                let names: Vec<&Ident> = u.declared(kind).collect();
                if !names.is_empty() {
                    println!("{} {}", kind.keyword(), list(names));
                }
            }
            if let Some(c) = &u.config {
                println!("interval = {} s", c.interval);
            }
        }
        return Ok(ExitCode::SUCCESS);
    }
    match parse_dl_document(&src).map_err(|e| diag(file, e.pos(), e.rule(), &e))? {
        DlDocument::Safety(f) => {
            let m = validate_scan_cycle_form(&f).map_err(|e| diag(file, e.pos(), e.rule(), &e))?;
            print!("{}", var_summary(&var_sets(&m.ctrl)));
            print!("{}", io_summary(&m));
            println!("clock   = {}", m.plant.clock);
            match model_epsilon(&m).map_err(|e| diag(file, e.pos(), e.rule(), &e))? {
                Some(e) => println!("epsilon = {e}"),
                None => println!("epsilon = {} (unbound)", m.plant.bound),
            }
        }
        DlDocument::Program(p) => {
            let hp = lift(&p).map_err(|e| diag(file, e.pos(), e.rule(), &e))?;
            print!("{}", var_summary(&var_sets(&hp)));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Accepts a full `PROGRAM ... END_PROGRAM` unit or a bare statement list.
fn parse_st_body(file: &Path, src: &str) -> Result<StStatement, Diag> {
    match parse_st(src) {
        Ok(u) => Ok(u.body),
        Err(unit_err) => match parse_st_statements(src) {
            Ok(s) => Ok(s),
            Err(stmt_err) => {
                let e = if src.contains("END_PROGRAM") { unit_err } else { stmt_err };
                Err(diag(file, e.pos(), e.rule(), &e))
            }
        },
    }
}

struct SimArgs {
    set: Vec<String>,
    constant: Vec<String>,
    uniform: Vec<String>,
    seed: u64,
    inputs_csv: Option<PathBuf>,
    cycles: usize,
}

fn usage(msg: impl fmt::Display) -> Diag {
    diag(Path::new("<args>"), Pos::default(), "usage", msg)
}

fn binding(arg: &str) -> Result<(Ident, &str), Diag> {
    let (k, v) = arg.split_once('=').ok_or_else(|| usage(format!("expected NAME=VALUE, got `{arg}`")))?;
    let id = Ident::new(k.trim()).map_err(|e| usage(format!("`{k}`: {e}")))?;
    Ok((id, v.trim()))
}

fn number(s: &str) -> Result<f64, Diag> {
    s.parse().map_err(|_| usage(format!("`{s}` is not a number")))
}

fn simulate_cmd(model: &Path, st: Option<&Path>, a: &SimArgs, cfg: &SimConfig, out: Option<&Path>) -> Run {
    let m = load_model(model)?;
    let body = match st {
        Some(p) => parse_st_body(p, &read(p)?)?,
        None => prog_hp_to_st(&m.ctrl).0,
    };
    let mut initial = State::new();
    for arg in &a.set {
        let (k, v) = binding(arg)?;
        initial.insert(k, number(v)?);
    }
    let mut constants = BTreeMap::new();
    for arg in &a.constant {
        let (k, v) = binding(arg)?;
        constants.insert(k, number(v)?);
    }
    let mut ranges = BTreeMap::new();
    for arg in &a.uniform {
        let (k, v) = binding(arg)?;
        let (lo, hi) = v.split_once(':').ok_or_else(|| usage(format!("expected LO:HI, got `{v}`")))?;
        ranges.insert(k, (number(lo)?, number(hi)?));
    }
    let mut providers: Vec<Box<dyn stdl_core::sim::InputProvider>> = Vec::new();
    if let Some(p) = &a.inputs_csv {
        providers.push(Box::new(CsvInputs::parse(&read(p)?).map_err(|e| diag(p, Pos::default(), e.rule(), e))?));
    }
    providers.push(Box::new(ConstantInputs(constants)));
    providers.push(Box::new(UniformInputs::new(ranges, a.seed)));
    let mut inputs = MixedInputs(providers);

    let run = simulate(&m, &body, &mut inputs, &initial, a.cycles, cfg).map_err(|e| diag(model, Pos::default(), e.rule(), e))?;
    emit(out, &write_trace(&m, &run))?;
    let violations = check_safety(&run, &m.safety).map_err(|e| diag(model, Pos::default(), "evaluation", e))?;
    eprintln!("cycles={}", run.len());
    if let Some(exit) = run.last().and_then(|r| r.domain_exit.as_ref()) {
        eprintln!("domain exit in cycle {} at t={}", run.len(), exit.time);
    }
    for v in &violations {
        let phase = match v.phase {
            Phase::Pre => "pre",
            Phase::PostPlant => "post_plant",
        };
        eprintln!("safety violated in cycle {} ({phase}): {}", v.cycle, v.state);
    }
    eprintln!("violations={}", violations.len());
    Ok(exit(violations.is_empty()))
}

fn comply(model: &Path, trace: &Path, tolerance: f64) -> Run {
    let m = load_model(model)?;
    let t = parse_trace(&read(trace)?).map_err(|e| diag(trace, Pos::default(), e.rule(), e))?;
    let io = classify_io(&m.ctrl, &m.inputs, &m.plant);
    let report = check_compliance(&m.ctrl, &io, &t, tolerance).map_err(|e| diag(trace, Pos::default(), e.rule(), e))?;
    print!("{report}");
    Ok(exit(report.is_compliant()))
}
