use std::fmt::Write;

use crate::ir::{BinOp, CmpOp, Formula, HpFormula, HybridProgram, Term};

use super::{lower, DlProgram, DlSafetyFormula, OdeSystem};

const INDENT: &str = "  ";

pub fn print_dl_term(t: &Term) -> String {
    let mut out = String::new();
    term(t, 0, &mut out);
    out
}

pub fn print_dl_formula(f: &HpFormula) -> String {
    let mut out = String::new();
    formula(f.as_formula(), 0, &mut out);
    out
}

/// Multi-line listing that parses back to the same tree.
pub fn print_dl_program(p: &DlProgram) -> String {
    let mut out = String::new();
    seq_items(p, 0, &mut out);
    out
}

pub fn print_hp(p: &HybridProgram) -> String {
    print_dl_program(&lower(p))
}

pub fn print_dl_safety(f: &DlSafetyFormula) -> String {
    let mut out = String::new();
    formula(f.assumptions.as_formula(), 3, &mut out);
    out.push_str("\n  -> [\n");
    seq_items(&f.program, 2, &mut out);
    out.push_str("     ] ");
    let s = f.safety.as_formula();
    if formula_prec(s) < 5 {
        out.push('(');
        formula(s, 0, &mut out);
        out.push(')');
    } else {
        formula(s, 0, &mut out);
    }
    out.push('\n');
    out
}

fn seq_items(p: &DlProgram, depth: usize, out: &mut String) {
    let mut cur = p;
    while let DlProgram::Seq(a, b) = cur {
        item(a, depth, out);
        cur = b;
    }
    item(cur, depth, out);
}

fn item(p: &DlProgram, depth: usize, out: &mut String) {
    let ind = INDENT.repeat(depth);
    match p {
        DlProgram::Assign(a) => {
            let _ = writeln!(out, "{ind}{} := {};", a.target, print_dl_term(&a.value));
        }
        DlProgram::Nondet(x, _) => {
            let _ = writeln!(out, "{ind}{x} := *;");
        }
        DlProgram::Test(f, _) => {
            let _ = writeln!(out, "{ind}?{};", print_dl_formula(f));
        }
        DlProgram::Ode(o) => {
            let _ = writeln!(out, "{ind}{}", ode(o));
        }
        DlProgram::Seq(..) => {
            let _ = writeln!(out, "{ind}{{");
            seq_items(p, depth + 1, out);
            let _ = writeln!(out, "{ind}}}");
        }
        DlProgram::Choice(..) => {
            let _ = writeln!(out, "{ind}{{");
            choice_body(p, depth, out);
            let _ = writeln!(out, "{ind}}}");
        }
        DlProgram::Loop(body, _) => {
            let _ = writeln!(out, "{ind}{{");
            if matches!(**body, DlProgram::Choice(..)) {
                choice_body(body, depth, out);
            } else {
                seq_items(body, depth + 1, out);
            }
            let _ = writeln!(out, "{ind}}}*");
        }
    }
}

/// Branches of a right-nested choice at `depth + 1`, separated by `++` at
/// `depth`.
fn choice_body(p: &DlProgram, depth: usize, out: &mut String) {
    let ind = INDENT.repeat(depth);
    let mut cur = p;
    let mut first = true;
    loop {
        let (branch, rest) = match cur {
            DlProgram::Choice(a, b) => (&**a, Some(&**b)),
            other => (other, None),
        };
        if !first {
            let _ = writeln!(out, "{ind}++");
        }
        first = false;
        if matches!(branch, DlProgram::Choice(..)) {
            item(branch, depth + 1, out);
        } else {
            seq_items(branch, depth + 1, out);
        }
        match rest {
            Some(r) => cur = r,
            None => break,
        }
    }
}

fn ode(o: &OdeSystem) -> String {
    let eqs: Vec<String> = o
        .equations
        .iter()
        .map(|(x, t)| format!("{x}' = {}", print_dl_term(t)))
        .collect();
    match &o.domain {
        Some(q) => format!("{{{} & {}}}", eqs.join(", "), print_dl_formula(q)),
        None => format!("{{{}}}", eqs.join(", ")),
    }
}

// Term precedence: 1 additive, 2 multiplicative, 3 unary minus, 4 power
// (right assoc), 5 atoms.
fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Num(_) | Term::Var(_) => 5,
        Term::Neg(_) => 3,
        Term::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Term::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Term::Bin(BinOp::Pow, ..) => 4,
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
                term(inner, 4, out);
            }
        }
        Term::Bin(op, l, r) => {
            let (lmin, rmin) = match op {
                BinOp::Pow => (5, 4),
                _ => (term_prec(t), term_prec(t) + 1),
            };
            operand(l, lmin, out);
            out.push_str(match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "*",
                BinOp::Div => "/",
                BinOp::Pow => "^",
            });
            operand(r, rmin, out);
        }
    }
    if parens {
        out.push(')');
    }
}

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
        CmpOp::Ne => "!=",
        CmpOp::Gt => ">",
        CmpOp::Ge => ">=",
        CmpOp::Lt => "<",
        CmpOp::Le => "<=",
    }
}

// Formula precedence: 1 `<->`, 2 `->` (right assoc), 3 `|`, 4 `&`,
// 5 atoms and `!(...)`.
fn formula_prec(f: &Formula) -> u8 {
    match f {
        Formula::Equiv(..) => 1,
        Formula::Imply(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        _ => 5,
    }
}

fn formula(f: &Formula, min: u8, out: &mut String) {
    let parens = formula_prec(f) < min;
    if parens {
        out.push('(');
    }
    let binary = |l: &Formula, sym: &str, lmin: u8, r: &Formula, rmin: u8, out: &mut String| {
        formula(l, lmin, out);
        let _ = write!(out, " {sym} ");
        formula(r, rmin, out);
    };
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Cmp(op, l, r) => {
            term(l, 0, out);
            let _ = write!(out, " {} ", cmp_symbol(*op));
            term(r, 0, out);
        }
        Formula::Not(inner) => {
            out.push_str("!(");
            formula(inner, 0, out);
            out.push(')');
        }
        Formula::Equiv(l, r) => binary(l, "<->", 1, r, 2, out),
        Formula::Imply(l, r) => binary(l, "->", 3, r, 2, out),
        Formula::Or(l, r) => binary(l, "|", 3, r, 4, out),
        Formula::And(l, r) => binary(l, "&", 4, r, 5, out),
        Formula::Xor(..) => unreachable!("HpFormula never contains XOR"),
    }
    if parens {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_dl_formula, parse_dl_program, parse_dl_safety, parse_dl_term};
    use super::*;

    #[test]
    fn terms_round_trip() {
        for src in ["-x^2", "(-x)^2", "a^b^c", "(a^b)^c", "a^(-b)", "a-(b-c)", "V1*f1-V2*P*f2", "(HH-x1)/eps", "-(-x)", "-(a+b)"] {
            assert_eq!(print_dl_term(&parse_dl_term(src).unwrap()), src);
        }
    }

    #[test]
    fn formulas_round_trip() {
        for src in ["a > 1 -> b > 1 -> c > 1", "(a > 1 -> b > 1) -> c > 1", "a = 1 | b != 1 & c < 1", "!(a <= 1) <-> true"] {
            assert_eq!(print_dl_formula(&parse_dl_formula(src).unwrap()), src);
        }
    }

    #[test]
    fn programs_round_trip() {
        for src in [
            "x := 1; y := 2;",
            "{x := 1; y := 2;} z := 3;",
            "{?a > 0; x := 1; ++ ?!(a > 0);} y := *;",
            "{{a := 1; ++ b := 1;} ++ c := 1;}",
            "{x := *; {x' = x, t' = 1 & t <= 1}}*",
            "{?true; ++ x := 1;}*",
        ] {
            let p = parse_dl_program(src).unwrap();
            let printed = print_dl_program(&p);
            assert_eq!(parse_dl_program(&printed).unwrap(), p, "{printed}");
        }
    }

    #[test]
    fn safety_round_trip() {
        let f = parse_dl_safety("(a > 0 -> b > 0) -> [{x := *; x := x + 1;}*] x > 0 & b > 0").unwrap();
        let printed = print_dl_safety(&f);
        assert_eq!(parse_dl_safety(&printed).unwrap(), f, "{printed}");
    }
}
