use crate::ir::{Assignment, BinOp, CmpOp, Formula, Ident, Number, Pos, StFormula, StStatement, Term};

use super::lexer::{tokenize, Tok};
use super::{wrap_st, StConfig, StError, StExpr, StType, StUnit, StVarBlock, VarKind};

/// Statements the subset deliberately excludes, reported by name.
const UNSUPPORTED_STATEMENTS: &[(&str, &str)] = &[
    ("WHILE", "WHILE loop"),
    ("FOR", "FOR loop"),
    ("REPEAT", "REPEAT loop"),
    ("CASE", "CASE statement"),
    ("EXIT", "EXIT statement"),
    ("RETURN", "RETURN statement"),
];

const UNSUPPORTED_UNITS: &[&str] = &["FUNCTION", "FUNCTION_BLOCK", "TYPE", "STRUCT"];

/// Parses a complete `PROGRAM ... END_PROGRAM` unit with an optional
/// trailing `CONFIGURATION`.
pub fn parse_st(src: &str) -> Result<StUnit, StError> {
    let mut p = Parser::new(src)?;
    let unit = p.unit()?;
    p.expect_eof()?;
    Ok(unit)
}

/// Parses a bare statement list, e.g. the body of a program.
pub fn parse_st_statements(src: &str) -> Result<StStatement, StError> {
    let mut p = Parser::new(src)?;
    let body = p.statements("statement")?;
    p.expect_eof()?;
    Ok(body)
}

/// Parses either an arithmetic term or a condition.
pub fn parse_st_expression(src: &str) -> Result<StExpr, StError> {
    let mut p = Parser::new(src)?;
    let (e, _) = p.expr()?;
    p.expect_eof()?;
    Ok(match e {
        Expr::Term(t) => StExpr::Term(t),
        Expr::Formula(f) => StExpr::Formula(wrap_st(f)),
    })
}

pub fn parse_st_term(src: &str) -> Result<Term, StError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_st_formula(src: &str) -> Result<StFormula, StError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

enum Expr {
    Term(Term),
    Formula(Formula),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, StError> {
        Ok(Parser {
            toks: tokenize(src)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn advance(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>) -> StError {
        StError::Syntax {
            pos: self.pos(),
            expected: expected.into(),
            found: self.peek().describe(),
        }
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<Pos, StError> {
        let pos = self.pos();
        if self.eat_kw(kw) {
            Ok(pos)
        } else {
            Err(self.error(format!("`{kw}`")))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), StError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn expect_eof(&self) -> Result<(), StError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn ident(&mut self) -> Result<(Ident, Pos), StError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Word(w) => match Ident::new(&w) {
                Ok(id) => {
                    self.advance();
                    Ok((id, pos))
                }
                Err(_) => Err(StError::Syntax {
                    pos,
                    expected: "identifier".into(),
                    found: format!("keyword `{w}`"),
                }),
            },
            _ => Err(self.error("identifier")),
        }
    }

    // ---- units ----

    fn unit(&mut self) -> Result<StUnit, StError> {
        for kw in UNSUPPORTED_UNITS {
            if self.at_kw(kw) {
                return Err(StError::Unsupported {
                    pos: self.pos(),
                    construct: format!("{kw} declaration"),
                });
            }
        }
        self.expect_kw("PROGRAM")?;
        let (program_name, _) = self.ident()?;
        let mut var_blocks: Vec<StVarBlock> = Vec::new();
        let mut seen: Vec<Ident> = Vec::new();
        while let Some(kind) = self.var_block_kind() {
            self.advance();
            let mut decls = Vec::new();
            while !self.at_kw("END_VAR") {
                let mut names = vec![self.ident()?];
                while self.eat(&Tok::Comma) {
                    names.push(self.ident()?);
                }
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.var_type()?;
                if *self.peek() == Tok::Assign {
                    return Err(StError::Unsupported {
                        pos: self.pos(),
                        construct: "initial value in declaration".into(),
                    });
                }
                self.expect(Tok::Semi, "`;`")?;
                for (name, pos) in names {
                    if seen.contains(&name) {
                        return Err(StError::DuplicateDeclaration { pos, name });
                    }
                    seen.push(name.clone());
                    decls.push((name, ty));
                }
            }
            self.expect_kw("END_VAR")?;
            self.eat(&Tok::Semi);
            var_blocks.push(StVarBlock { kind, decls });
        }
        for kw in ["VAR_IN_OUT", "VAR_TEMP", "VAR_GLOBAL"] {
            if self.at_kw(kw) {
                return Err(StError::Unsupported {
                    pos: self.pos(),
                    construct: format!("{kw} block"),
                });
            }
        }
        let body = self.statements("statement")?;
        self.expect_kw("END_PROGRAM")?;
        self.eat(&Tok::Semi);
        let config = if self.at_kw("CONFIGURATION") {
            Some(self.config(&program_name)?)
        } else {
            None
        };
        Ok(StUnit {
            program_name,
            var_blocks,
            body,
            config,
        })
    }

    fn var_block_kind(&self) -> Option<VarKind> {
        [VarKind::Input, VarKind::Output, VarKind::Local, VarKind::External]
            .into_iter()
            .find(|k| self.at_kw(k.keyword()))
    }

    fn var_type(&mut self) -> Result<StType, StError> {
        let pos = self.pos();
        let ty = match self.peek() {
            Tok::Word(w) => match w.to_ascii_uppercase().as_str() {
                "LREAL" => StType::LReal,
                "REAL" => StType::Real,
                "BOOL" => StType::Bool,
                _ => {
                    return Err(StError::Unsupported {
                        pos,
                        construct: format!("type `{w}`"),
                    })
                }
            },
            _ => return Err(self.error("type")),
        };
        self.advance();
        Ok(ty)
    }

    fn config(&mut self, program: &Ident) -> Result<StConfig, StError> {
        self.expect_kw("CONFIGURATION")?;
        let (name, _) = self.ident()?;
        self.expect_kw("RESOURCE")?;
        let (resource, _) = self.ident()?;
        self.expect_kw("ON")?;
        let (processor, _) = self.ident()?;
        self.expect_kw("TASK")?;
        let (task, _) = self.ident()?;
        self.expect(Tok::LParen, "`(`")?;
        let mut interval = None;
        let mut priority = None;
        loop {
            let pos = self.pos();
            if self.eat_kw("INTERVAL") {
                self.expect(Tok::Assign, "`:=`")?;
                match self.advance() {
                    (Tok::Duration(v), _) => interval = Some(v),
                    (tok, pos) => {
                        return Err(StError::Syntax {
                            pos,
                            expected: "duration literal such as `T#1 s`".into(),
                            found: tok.describe(),
                        })
                    }
                }
            } else if self.eat_kw("PRIORITY") {
                self.expect(Tok::Assign, "`:=`")?;
                match self.advance() {
                    (Tok::Number(n), pos) => {
                        priority = Some(n.parse::<u32>().map_err(|_| StError::Syntax {
                            pos,
                            expected: "non-negative integer priority".into(),
                            found: format!("`{n}`"),
                        })?)
                    }
                    (tok, pos) => {
                        return Err(StError::Syntax {
                            pos,
                            expected: "integer priority".into(),
                            found: tok.describe(),
                        })
                    }
                }
            } else {
                return Err(StError::Syntax {
                    pos,
                    expected: "`INTERVAL` or `PRIORITY`".into(),
                    found: self.peek().describe(),
                });
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        let close = self.pos();
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Semi, "`;`")?;
        let interval = interval.ok_or_else(|| StError::Config {
            pos: close,
            message: "task is missing INTERVAL".into(),
        })?;
        if interval <= 0.0 {
            return Err(StError::Config {
                pos: close,
                message: "task interval must be positive".into(),
            });
        }
        let priority = priority.unwrap_or(0);
        self.expect_kw("PROGRAM")?;
        let (instance, _) = self.ident()?;
        self.expect_kw("WITH")?;
        let (with_task, with_pos) = self.ident()?;
        if with_task != task {
            return Err(StError::Config {
                pos: with_pos,
                message: format!("program instance refers to unknown task `{with_task}`"),
            });
        }
        self.expect(Tok::Colon, "`:`")?;
        let (prog, prog_pos) = self.ident()?;
        if &prog != program {
            return Err(StError::Config {
                pos: prog_pos,
                message: format!("configuration instantiates `{prog}` but the program is `{program}`"),
            });
        }
        self.expect(Tok::Semi, "`;`")?;
        if self.at_kw("TASK") || self.at_kw("PROGRAM") {
            return Err(StError::Unsupported {
                pos: self.pos(),
                construct: "more than one task or program instance".into(),
            });
        }
        self.expect_kw("END_RESOURCE")?;
        self.eat(&Tok::Semi);
        if self.at_kw("RESOURCE") {
            return Err(StError::Unsupported {
                pos: self.pos(),
                construct: "more than one resource".into(),
            });
        }
        self.expect_kw("END_CONFIGURATION")?;
        self.eat(&Tok::Semi);
        Ok(StConfig {
            name,
            resource,
            processor,
            task,
            instance,
            interval,
            priority,
        })
    }

    // ---- statements ----

    fn at_statement_end(&self) -> bool {
        *self.peek() == Tok::Eof
            || ["END_PROGRAM", "END_IF", "ELSE", "ELSIF"]
                .iter()
                .any(|k| self.at_kw(k))
    }

    /// One or more statements up to a block terminator.
    fn statements(&mut self, expected: &str) -> Result<StStatement, StError> {
        let mut stmts = Vec::new();
        while !self.at_statement_end() {
            stmts.push(self.statement()?);
        }
        StStatement::sequence(stmts).ok_or_else(|| self.error(expected))
    }

    /// Like `statements`, but an empty list is allowed.
    fn optional_statements(&mut self) -> Result<Option<StStatement>, StError> {
        if self.at_statement_end() {
            Ok(None)
        } else {
            self.statements("statement").map(Some)
        }
    }

    fn statement(&mut self) -> Result<StStatement, StError> {
        let pos = self.pos();
        if let Tok::Word(w) = self.peek() {
            let upper = w.to_ascii_uppercase();
            if let Some((_, name)) = UNSUPPORTED_STATEMENTS.iter().find(|(k, _)| *k == upper) {
                return Err(StError::Unsupported {
                    pos,
                    construct: (*name).to_string(),
                });
            }
            if upper == "IF" {
                return self.if_statement();
            }
        }
        if *self.peek() == Tok::Semi {
            return Err(self.error("statement"));
        }
        let (target, _) = self.ident()?;
        if *self.peek() == Tok::LParen {
            return Err(StError::Unsupported {
                pos,
                construct: format!("call of `{target}`"),
            });
        }
        self.expect(Tok::Assign, "`:=`")?;
        let value = self.term()?;
        self.expect(Tok::Semi, "`;`")?;
        Ok(StStatement::Assign(Assignment { target, value, pos }))
    }

    fn if_statement(&mut self) -> Result<StStatement, StError> {
        let pos = self.expect_kw("IF")?;
        let cond = self.formula()?;
        self.expect_kw("THEN")?;
        let then = self.statements("statement after THEN")?;
        let mut arms = vec![(cond, then, pos)];
        let mut otherwise = None;
        loop {
            let arm_pos = self.pos();
            if self.eat_kw("ELSIF") {
                let cond = self.formula()?;
                self.expect_kw("THEN")?;
                let body = self.statements("statement after THEN")?;
                arms.push((cond, body, arm_pos));
            } else if self.eat_kw("ELSE") {
                otherwise = self.optional_statements()?;
                break;
            } else {
                break;
            }
        }
        self.expect_kw("END_IF")?;
        self.expect(Tok::Semi, "`;` after END_IF")?;
        let mut acc = otherwise;
        while let Some((cond, then, pos)) = arms.pop() {
            acc = Some(match acc {
                Some(otherwise) => StStatement::IfThenElse {
                    cond,
                    then: Box::new(then),
                    otherwise: Box::new(otherwise),
                    pos,
                },
                None => StStatement::IfThen {
                    cond,
                    then: Box::new(then),
                    pos,
                },
            });
        }
        Ok(acc.expect("at least one arm"))
    }

    // ---- expressions ----

    fn term(&mut self) -> Result<Term, StError> {
        let (e, pos) = self.expr()?;
        as_term(e, pos)
    }

    fn formula(&mut self) -> Result<StFormula, StError> {
        let (e, pos) = self.expr()?;
        as_formula(e, pos).map(wrap_st)
    }

    fn expr(&mut self) -> Result<(Expr, Pos), StError> {
        let (mut lhs, pos) = self.and_expr()?;
        loop {
            let xor = if self.at_kw("OR") {
                false
            } else if self.at_kw("XOR") {
                true
            } else {
                break;
            };
            self.advance();
            let l = as_formula(lhs, pos)?;
            let (rhs, rpos) = self.and_expr()?;
            let r = as_formula(rhs, rpos)?;
            lhs = Expr::Formula(if xor {
                Formula::Xor(Box::new(l), Box::new(r))
            } else {
                Formula::Or(Box::new(l), Box::new(r))
            });
        }
        Ok((lhs, pos))
    }

    fn and_expr(&mut self) -> Result<(Expr, Pos), StError> {
        let (mut lhs, pos) = self.not_expr()?;
        while self.at_kw("AND") {
            self.advance();
            let l = as_formula(lhs, pos)?;
            let (rhs, rpos) = self.not_expr()?;
            let r = as_formula(rhs, rpos)?;
            lhs = Expr::Formula(Formula::And(Box::new(l), Box::new(r)));
        }
        Ok((lhs, pos))
    }

    fn not_expr(&mut self) -> Result<(Expr, Pos), StError> {
        let pos = self.pos();
        if self.eat_kw("NOT") {
            let (inner, ipos) = self.not_expr()?;
            let f = as_formula(inner, ipos)?;
            return Ok((Expr::Formula(Formula::Not(Box::new(f))), pos));
        }
        self.cmp_expr()
    }

    fn cmp_expr(&mut self) -> Result<(Expr, Pos), StError> {
        let (lhs, pos) = self.add_expr()?;
        let Some(op) = cmp_op(self.peek()) else {
            return Ok((lhs, pos));
        };
        self.advance();
        let l = as_term(lhs, pos)?;
        let (rhs, rpos) = self.add_expr()?;
        let r = as_term(rhs, rpos)?;
        if cmp_op(self.peek()).is_some() {
            return Err(self.error("a logical operator (comparisons do not chain)"));
        }
        Ok((Expr::Formula(Formula::Cmp(op, l, r)), pos))
    }

    fn add_expr(&mut self) -> Result<(Expr, Pos), StError> {
        let (mut lhs, pos) = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.advance();
            lhs = self.binary(op, lhs, pos, Self::mul_expr)?;
        }
        Ok((lhs, pos))
    }

    fn mul_expr(&mut self) -> Result<(Expr, Pos), StError> {
        let (mut lhs, pos) = self.pow_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Word(w) if w.eq_ignore_ascii_case("MOD") => {
                    return Err(StError::Unsupported {
                        pos: self.pos(),
                        construct: "MOD operator".into(),
                    })
                }
                _ => break,
            };
            self.advance();
            lhs = self.binary(op, lhs, pos, Self::pow_expr)?;
        }
        Ok((lhs, pos))
    }

    fn pow_expr(&mut self) -> Result<(Expr, Pos), StError> {
        let (mut lhs, pos) = self.unary_expr()?;
        while *self.peek() == Tok::Power {
            self.advance();
            lhs = self.binary(BinOp::Pow, lhs, pos, Self::unary_expr)?;
        }
        Ok((lhs, pos))
    }

    fn binary(
        &mut self,
        op: BinOp,
        lhs: Expr,
        pos: Pos,
        operand: fn(&mut Self) -> Result<(Expr, Pos), StError>,
    ) -> Result<Expr, StError> {
        let l = as_term(lhs, pos)?;
        let (rhs, rpos) = operand(self)?;
        let r = as_term(rhs, rpos)?;
        Ok(Expr::Term(Term::bin(op, l, r)))
    }

    fn unary_expr(&mut self) -> Result<(Expr, Pos), StError> {
        let pos = self.pos();
        if self.eat(&Tok::Minus) {
            let (inner, ipos) = self.unary_expr()?;
            return Ok((Expr::Term(Term::neg(as_term(inner, ipos)?)), pos));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<(Expr, Pos), StError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Number(n) => {
                self.advance();
                let num = Number::new(&n).map_err(|_| StError::Syntax {
                    pos,
                    expected: "decimal literal".into(),
                    found: format!("`{n}`"),
                })?;
                Ok((Expr::Term(Term::Num(num)), pos))
            }
            Tok::LParen => {
                self.advance();
                let (e, _) = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok((e, pos))
            }
            Tok::Word(w) if w.eq_ignore_ascii_case("TRUE") => {
                self.advance();
                Ok((Expr::Formula(Formula::True), pos))
            }
            Tok::Word(w) if w.eq_ignore_ascii_case("FALSE") => {
                self.advance();
                Ok((Expr::Formula(Formula::False), pos))
            }
            Tok::Word(_) => {
                let (x, _) = self.ident()?;
                if *self.peek() == Tok::LParen {
                    return Err(StError::Unsupported {
                        pos,
                        construct: format!("call of `{x}`"),
                    });
                }
                Ok((Expr::Term(Term::Var(x)), pos))
            }
            _ => Err(self.error("expression")),
        }
    }
}

fn cmp_op(t: &Tok) -> Option<CmpOp> {
    Some(match t {
        Tok::Eq => CmpOp::Eq,
        Tok::Ne => CmpOp::Ne,
        Tok::Lt => CmpOp::Lt,
        Tok::Le => CmpOp::Le,
        Tok::Gt => CmpOp::Gt,
        Tok::Ge => CmpOp::Ge,
        _ => return None,
    })
}

fn as_term(e: Expr, pos: Pos) -> Result<Term, StError> {
    match e {
        Expr::Term(t) => Ok(t),
        Expr::Formula(_) => Err(StError::Syntax {
            pos,
            expected: "arithmetic expression".into(),
            found: "condition".into(),
        }),
    }
}

fn as_formula(e: Expr, pos: Pos) -> Result<Formula, StError> {
    match e {
        Expr::Formula(f) => Ok(f),
        Expr::Term(_) => Err(StError::Syntax {
            pos,
            expected: "condition".into(),
            found: "arithmetic expression".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> Ident {
        Ident::new(s).unwrap()
    }

    #[test]
    fn precedence_and_before_or() {
        let f = parse_st_formula("a > 1 OR b > 1 AND c > 1").unwrap();
        assert!(matches!(f.as_formula(), Formula::Or(_, r) if matches!(**r, Formula::And(..))));
    }

    #[test]
    fn power_is_left_associative_and_binds_tighter_than_minus_operand() {
        let t = parse_st_term("a ** b ** c").unwrap();
        match t {
            Term::Bin(BinOp::Pow, l, _) => assert!(matches!(*l, Term::Bin(BinOp::Pow, ..))),
            other => panic!("{other:?}"),
        }
        let t = parse_st_term("-x ** 2").unwrap();
        assert!(matches!(t, Term::Bin(BinOp::Pow, l, _) if matches!(*l, Term::Neg(_))));
    }

    #[test]
    fn elsif_chain_desugars_to_nested_else() {
        let s = parse_st_statements(
            "IF a > 0 THEN x := 1; ELSIF a < 0 THEN x := 2; ELSE x := 3; END_IF;",
        )
        .unwrap();
        let StStatement::IfThenElse { otherwise, .. } = s else { panic!() };
        assert!(matches!(*otherwise, StStatement::IfThenElse { .. }));
    }

    #[test]
    fn empty_else_is_dropped() {
        let s = parse_st_statements("IF a > 0 THEN x := 1; ELSE END_IF;").unwrap();
        assert!(matches!(s, StStatement::IfThen { .. }));
    }

    #[test]
    fn bare_term_condition_is_rejected() {
        let e = parse_st_statements("IF a THEN x := 1; END_IF;").unwrap_err();
        assert!(matches!(e, StError::Syntax { .. }), "{e}");
    }

    #[test]
    fn unsupported_constructs_are_named() {
        let e = parse_st_statements("x := 1;\nWHILE x < 2 DO x := 3; END_WHILE;").unwrap_err();
        assert_eq!(e, StError::Unsupported { pos: Pos::new(2, 1), construct: "WHILE loop".into() });
        assert_eq!((e.pos().line, e.pos().col), (2, 1));
        let e = parse_st_statements("TON1(IN := x);").unwrap_err();
        assert!(matches!(e, StError::Unsupported { .. }));
        let e = parse_st("PROGRAM p VAR x : INT; END_VAR x := 1; END_PROGRAM").unwrap_err();
        assert!(e.to_string().contains("INT"), "{e}");
    }

    #[test]
    fn duplicate_declarations() {
        let e = parse_st("PROGRAM p VAR_INPUT x : REAL; END_VAR VAR_OUTPUT x : BOOL; END_VAR x := 1; END_PROGRAM")
            .unwrap_err();
        assert!(matches!(e, StError::DuplicateDeclaration { ref name, .. } if *name == id("x")));
    }

    #[test]
    fn configuration() {
        let u = parse_st(
            "PROGRAM prog0 VAR_OUTPUT y : BOOL; END_VAR y := 1; END_PROGRAM
             CONFIGURATION Config0 RESOURCE Res0 ON PLC
               TASK Main(INTERVAL := T#50ms, PRIORITY := 2);
               PROGRAM Inst0 WITH Main : prog0;
             END_RESOURCE END_CONFIGURATION",
        )
        .unwrap();
        let c = u.config.unwrap();
        assert_eq!(c.interval, 0.05);
        assert_eq!(c.priority, 2);
        assert_eq!(c.processor, id("PLC"));
    }

    #[test]
    fn keyword_as_identifier_is_an_error() {
        assert!(parse_st_statements("THEN := 1;").is_err());
        assert!(parse_st_statements("x := 1").is_err());
    }
}
