use std::fmt::Write;

use crate::ir::{BinOp, CmpOp, Formula, StFormula, StStatement, Term};

use super::{StConfig, StType, StUnit, StVarBlock};

const INDENT: &str = "  ";

pub fn print_st(unit: &StUnit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "PROGRAM {}", unit.program_name);
    for block in &unit.var_blocks {
        let _ = writeln!(out, "{INDENT}{}", var_block(block));
    }
    statement(&unit.body, 1, &mut out);
    out.push_str("END_PROGRAM\n");
    if let Some(c) = &unit.config {
        out.push('\n');
        config(c, unit.program_name.as_str(), &mut out);
    }
    out
}

/// Statement list, one statement per line.
pub fn print_st_statement(s: &StStatement) -> String {
    let mut out = String::new();
    statement(s, 0, &mut out);
    out
}

pub fn print_st_term(t: &Term) -> String {
    let mut out = String::new();
    term(t, 0, &mut out);
    out
}

pub fn print_st_formula(f: &StFormula) -> String {
    let mut out = String::new();
    formula(f.as_formula(), 0, &mut out);
    out
}

/// `VAR_INPUT a, b : REAL; c : BOOL; END_VAR`, grouping consecutive
/// declarations of the same type.
fn var_block(b: &StVarBlock) -> String {
    let mut out = String::from(b.kind.keyword());
    let mut i = 0;
    while i < b.decls.len() {
        let ty: StType = b.decls[i].1;
        let mut j = i;
        while j < b.decls.len() && b.decls[j].1 == ty {
            j += 1;
        }
        let names: Vec<String> = b.decls[i..j].iter().map(|(x, _)| x.to_string()).collect();
        let _ = write!(out, " {} : {ty};", names.join(", "));
        i = j;
    }
    out.push_str(" END_VAR");
    out
}

fn config(c: &StConfig, program: &str, out: &mut String) {
    let _ = writeln!(out, "CONFIGURATION {}", c.name);
    let _ = writeln!(out, "{INDENT}RESOURCE {} ON {}", c.resource, c.processor);
    let _ = writeln!(
        out,
        "{INDENT}{INDENT}TASK {}(INTERVAL := {}, PRIORITY := {});",
        c.task,
        duration(c.interval),
        c.priority
    );
    let _ = writeln!(
        out,
        "{INDENT}{INDENT}PROGRAM {} WITH {} : {};",
        c.instance, c.task, program
    );
    let _ = writeln!(out, "{INDENT}END_RESOURCE");
    out.push_str("END_CONFIGURATION\n");
}

/// `T#<seconds> s`, or milliseconds when that avoids a fraction.
pub(crate) fn duration(secs: f64) -> String {
    if secs.fract() == 0.0 {
        format!("T#{secs} s")
    } else {
        let ms = secs * 1000.0;
        if ms.fract() == 0.0 && format!("{ms}").parse::<f64>().map(|m| m / 1000.0) == Ok(secs) {
            format!("T#{ms} ms")
        } else {
            format!("T#{secs} s")
        }
    }
}

fn statement(s: &StStatement, depth: usize, out: &mut String) {
    let ind = INDENT.repeat(depth);
    match s {
        StStatement::Assign(a) => {
            let _ = writeln!(out, "{ind}{} := {};", a.target, print_st_term(&a.value));
        }
        StStatement::Seq(..) => {
            for part in s.flatten() {
                statement(part, depth, out);
            }
        }
        StStatement::IfThenElse {
            cond,
            then,
            otherwise,
            ..
        } => {
            let _ = writeln!(out, "{ind}IF ({}) THEN", print_st_formula(cond));
            statement(then, depth + 1, out);
            let _ = writeln!(out, "{ind}ELSE");
            statement(otherwise, depth + 1, out);
            let _ = writeln!(out, "{ind}END_IF;");
        }
        StStatement::IfThen { cond, then, .. } => {
            let _ = writeln!(out, "{ind}IF ({}) THEN", print_st_formula(cond));
            statement(then, depth + 1, out);
            let _ = writeln!(out, "{ind}END_IF;");
        }
    }
}

// Term precedence: 1 additive, 2 multiplicative, 3 power (left assoc),
// 4 unary minus, 5 atoms.
fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Num(_) | Term::Var(_) => 5,
        Term::Neg(_) => 4,
        Term::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Term::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Term::Bin(BinOp::Pow, ..) => 3,
    }
}

fn term(t: &Term, min: u8, out: &mut String) {
    let parens = term_prec(t) < min;
    if parens {
        out.push('(');
    }
    match t {
        Term::Num(n) => out.push_str(n.lexeme()),
        Term::Var(x) => out.push_str(x.as_str()),
        Term::Neg(inner) => {
            out.push('-');
            if matches!(**inner, Term::Neg(_)) {
                out.push('(');
                term(inner, 0, out);
                out.push(')');
            } else {
                term(inner, 5, out);
            }
        }
        Term::Bin(op, l, r) => {
            let p = term_prec(t);
            operand(l, p, out);
            out.push_str(match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "*",
                BinOp::Div => "/",
                BinOp::Pow => "**",
            });
            operand(r, p + 1, out);
        }
    }
    if parens {
        out.push(')');
    }
}

/// Negated operands are always parenthesized so `a-(-b)` never prints as
/// `a--b`.
fn operand(t: &Term, min: u8, out: &mut String) {
    if matches!(t, Term::Neg(_)) {
        out.push('(');
        term(t, 0, out);
        out.push(')');
    } else {
        term(t, min, out);
    }
}

fn cmp_symbol(op: CmpOp) -> &'static str {
    match op {
        CmpOp::Eq => "=",
        CmpOp::Ne => "<>",
        CmpOp::Gt => ">",
        CmpOp::Ge => ">=",
        CmpOp::Lt => "<",
        CmpOp::Le => "<=",
    }
}

// Formula precedence: 1 OR/XOR, 2 AND, 3 atoms (comparisons, constants,
// parenthesized NOT).
fn formula_prec(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) | Formula::Xor(..) => 1,
        Formula::And(..) => 2,
        _ => 3,
    }
}

fn formula(f: &Formula, min: u8, out: &mut String) {
    let parens = formula_prec(f) < min;
    if parens {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("TRUE"),
        Formula::False => out.push_str("FALSE"),
        Formula::Cmp(op, l, r) => {
            term(l, 0, out);
            let _ = write!(out, " {} ", cmp_symbol(*op));
            term(r, 0, out);
        }
        Formula::Not(inner) => {
            out.push_str("NOT(");
            formula(inner, 0, out);
            out.push(')');
        }
        Formula::And(l, r) => {
            formula(l, 2, out);
            out.push_str(" AND ");
            formula(r, 3, out);
        }
        Formula::Or(l, r) => {
            formula(l, 1, out);
            out.push_str(" OR ");
            formula(r, 2, out);
        }
        Formula::Xor(l, r) => {
            formula(l, 1, out);
            out.push_str(" XOR ");
            formula(r, 2, out);
        }
        Formula::Imply(..) | Formula::Equiv(..) => {
            unreachable!("StFormula never contains implication or equivalence")
        }
    }
    if parens {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_st, parse_st_formula, parse_st_term};
    use super::*;

    #[test]
    fn compact_arithmetic() {
        for src in ["V1*f1-V2*P*f2", "(HH-x1)/eps", "a-(b-c)", "a**b**c", "a**(b**c)", "-(x**2)", "a-(-b)", "-(-x)"] {
            let t = parse_st_term(src).unwrap();
            assert_eq!(print_st_term(&t), src);
        }
    }

    #[test]
    fn formula_parenthesization() {
        for src in ["a > 1 OR b > 1 AND c > 1", "(a > 1 OR b > 1) AND c > 1", "NOT(a > 1 XOR b > 1)", "a > 1 OR (b > 1 OR c > 1)"] {
            let f = parse_st_formula(src).unwrap();
            assert_eq!(print_st_formula(&f), src);
        }
    }

    #[test]
    fn durations() {
        assert_eq!(duration(1.0), "T#1 s");
        assert_eq!(duration(0.05), "T#50 ms");
        assert_eq!(duration(10.0), "T#10 s");
    }

    #[test]
    fn unit_round_trip() {
        let src = "PROGRAM prog0
  VAR_INPUT x1, x2 : REAL; f : LREAL; END_VAR
  VAR_OUTPUT V1 : BOOL; END_VAR
  IF (x1 >= 3) THEN
    V1 := 0;
  ELSE
    IF (x2 <= 1) THEN
      V1 := 1;
    END_IF;
  END_IF;
END_PROGRAM

CONFIGURATION Config0
  RESOURCE Res0 ON PLC
    TASK Main(INTERVAL := T#1 s, PRIORITY := 0);
    PROGRAM Inst0 WITH Main : prog0;
  END_RESOURCE
END_CONFIGURATION
";
        let u = parse_st(src).unwrap();
        assert_eq!(print_st(&u), src);
    }
}
