use crate::ir::{Assignment, BinOp, CmpOp, Formula, HpFormula, Ident, Number, Pos, Term};

use super::lexer::{tokenize, Tok};
use super::{DlDocument, DlError, DlProgram, DlSafetyFormula, OdeSystem};

pub fn parse_dl_program(src: &str) -> Result<DlProgram, DlError> {
    let mut p = Parser::new(src)?;
    let prog = p.program()?;
    p.expect_eof()?;
    Ok(prog)
}

/// `A -> [α] S`. The assumption is parsed at disjunction level, so an
/// implication inside it must be parenthesized.
pub fn parse_dl_safety(src: &str) -> Result<DlSafetyFormula, DlError> {
    let mut p = Parser::new(src)?;
    let f = p.safety()?;
    p.expect_eof()?;
    Ok(f)
}

/// A safety formula if the text contains a box modality, otherwise a bare
/// program.
pub fn parse_dl_document(src: &str) -> Result<DlDocument, DlError> {
    let p = Parser::new(src)?;
    if p.toks.iter().any(|(t, _)| *t == Tok::LBracket) {
        parse_dl_safety(src).map(DlDocument::Safety)
    } else {
        parse_dl_program(src).map(DlDocument::Program)
    }
}

pub fn parse_dl_formula(src: &str) -> Result<HpFormula, DlError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

pub fn parse_dl_term(src: &str) -> Result<Term, DlError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

enum Expr {
    Term(Term),
    Formula(Formula),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

fn wrap(f: Formula) -> HpFormula {
    HpFormula::new_unchecked(f)
}

impl Parser {
    fn new(src: &str) -> Result<Self, DlError> {
        Ok(Parser {
            toks: tokenize(src)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.at + n).min(self.toks.len() - 1);
        &self.toks[i].0
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

    fn error(&self, expected: impl Into<String>) -> DlError {
        DlError::Syntax {
            pos: self.pos(),
            expected: expected.into(),
            found: self.peek().describe(),
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

    fn expect(&mut self, tok: Tok) -> Result<Pos, DlError> {
        let pos = self.pos();
        if self.eat(&tok) {
            Ok(pos)
        } else {
            Err(self.error(format!("`{}`", tok.symbol())))
        }
    }

    fn expect_eof(&self) -> Result<(), DlError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn ident(&mut self) -> Result<(Ident, Pos), DlError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(w) => match Ident::new(&w) {
                Ok(id) => {
                    self.advance();
                    Ok((id, pos))
                }
                Err(_) => Err(DlError::Syntax {
                    pos,
                    expected: "identifier".into(),
                    found: format!("keyword `{w}`"),
                }),
            },
            _ => Err(self.error("identifier")),
        }
    }

    // ---- safety formulas ----

    fn safety(&mut self) -> Result<DlSafetyFormula, DlError> {
        let (a, apos) = self.or_expr()?;
        let assumptions = wrap(as_formula(a, apos)?);
        self.expect(Tok::Imply)?;
        self.expect(Tok::LBracket)?;
        let program = self.program()?;
        self.expect(Tok::RBracket)?;
        let safety = self.formula()?;
        Ok(DlSafetyFormula {
            assumptions,
            program,
            safety,
        })
    }

    // ---- programs ----

    fn program(&mut self) -> Result<DlProgram, DlError> {
        let first = self.sequence()?;
        if self.eat(&Tok::Choice) {
            let rest = self.program()?;
            return Ok(DlProgram::choice(first, rest));
        }
        Ok(first)
    }

    fn at_sequence_end(&self) -> bool {
        matches!(
            self.peek(),
            Tok::RBrace | Tok::RBracket | Tok::Choice | Tok::Eof
        )
    }

    fn sequence(&mut self) -> Result<DlProgram, DlError> {
        let mut items = Vec::new();
        while !self.at_sequence_end() {
            items.push(self.item()?);
        }
        DlProgram::sequence(items).ok_or_else(|| self.error("program"))
    }

    /// Atomic programs end in `;`, which may be omitted before `}`, `]` or
    /// `++`. Blocks, loops and ODEs take an optional `;`.
    fn item(&mut self) -> Result<DlProgram, DlError> {
        let pos = self.pos();
        let prog = match self.peek() {
            Tok::LBrace if matches!(self.peek_at(2), Tok::Prime) => {
                let ode = self.ode()?;
                self.eat(&Tok::Semi);
                return Ok(ode);
            }
            Tok::LBrace => {
                self.advance();
                let inner = self.program()?;
                self.expect(Tok::RBrace)?;
                let prog = if self.eat(&Tok::Star) {
                    DlProgram::Loop(Box::new(inner), pos)
                } else {
                    inner
                };
                if *self.peek() == Tok::Caret {
                    return Err(DlError::Unsupported {
                        pos: self.pos(),
                        construct: "game dual `^@`".into(),
                    });
                }
                self.eat(&Tok::Semi);
                return Ok(prog);
            }
            Tok::Question => {
                self.advance();
                DlProgram::Test(self.formula()?, pos)
            }
            Tok::Ident(_) => {
                let (target, _) = self.ident()?;
                if *self.peek() == Tok::Prime {
                    return Err(DlError::Syntax {
                        pos: self.pos(),
                        expected: "`:=` (differential equations must be enclosed in braces)".into(),
                        found: "`'`".into(),
                    });
                }
                self.expect(Tok::Assign)?;
                if self.eat(&Tok::Star) {
                    DlProgram::Nondet(target, pos)
                } else {
                    let value = self.term()?;
                    DlProgram::Assign(Assignment { target, value, pos })
                }
            }
            _ => return Err(self.error("program")),
        };
        if !self.eat(&Tok::Semi) && !self.at_sequence_end() {
            return Err(self.error("`;`"));
        }
        Ok(prog)
    }

    fn ode(&mut self) -> Result<DlProgram, DlError> {
        let pos = self.expect(Tok::LBrace)?;
        let mut equations = Vec::new();
        loop {
            let (x, xpos) = self.ident()?;
            self.expect(Tok::Prime)?;
            self.expect(Tok::Eq)?;
            let rhs = self.term()?;
            if equations.iter().any(|(y, _)| *y == x) {
                return Err(DlError::Syntax {
                    pos: xpos,
                    expected: "distinct differential variables".into(),
                    found: format!("second equation for `{x}`"),
                });
            }
            equations.push((x, rhs));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        let domain = if self.eat(&Tok::And) {
            Some(self.formula()?)
        } else {
            None
        };
        self.expect(Tok::RBrace)?;
        Ok(DlProgram::Ode(OdeSystem {
            equations,
            domain,
            pos,
        }))
    }

    // ---- formulas and terms ----

    fn term(&mut self) -> Result<Term, DlError> {
        let (e, pos) = self.add_expr()?;
        as_term(e, pos)
    }

    fn formula(&mut self) -> Result<HpFormula, DlError> {
        let (e, pos) = self.equiv_expr()?;
        as_formula(e, pos).map(wrap)
    }

    fn equiv_expr(&mut self) -> Result<(Expr, Pos), DlError> {
        let (mut lhs, pos) = self.imply_expr()?;
        while self.eat(&Tok::Equiv) {
            let l = as_formula(lhs, pos)?;
            let (rhs, rpos) = self.imply_expr()?;
            let r = as_formula(rhs, rpos)?;
            lhs = Expr::Formula(Formula::Equiv(Box::new(l), Box::new(r)));
        }
        Ok((lhs, pos))
    }

    fn imply_expr(&mut self) -> Result<(Expr, Pos), DlError> {
        let (lhs, pos) = self.or_expr()?;
        if self.eat(&Tok::Imply) {
            let l = as_formula(lhs, pos)?;
            let (rhs, rpos) = self.imply_expr()?;
            let r = as_formula(rhs, rpos)?;
            return Ok((Expr::Formula(Formula::Imply(Box::new(l), Box::new(r))), pos));
        }
        Ok((lhs, pos))
    }

    fn or_expr(&mut self) -> Result<(Expr, Pos), DlError> {
        let (mut lhs, pos) = self.and_expr()?;
        while self.eat(&Tok::Or) {
            let l = as_formula(lhs, pos)?;
            let (rhs, rpos) = self.and_expr()?;
            let r = as_formula(rhs, rpos)?;
            lhs = Expr::Formula(Formula::Or(Box::new(l), Box::new(r)));
        }
        Ok((lhs, pos))
    }

    fn and_expr(&mut self) -> Result<(Expr, Pos), DlError> {
        let (mut lhs, pos) = self.not_expr()?;
        while self.eat(&Tok::And) {
            let l = as_formula(lhs, pos)?;
            let (rhs, rpos) = self.not_expr()?;
            let r = as_formula(rhs, rpos)?;
            lhs = Expr::Formula(Formula::And(Box::new(l), Box::new(r)));
        }
        Ok((lhs, pos))
    }

    fn not_expr(&mut self) -> Result<(Expr, Pos), DlError> {
        let pos = self.pos();
        if self.eat(&Tok::Not) {
            let (inner, ipos) = self.not_expr()?;
            let f = as_formula(inner, ipos)?;
            return Ok((Expr::Formula(Formula::Not(Box::new(f))), pos));
        }
        if matches!(self.peek(), Tok::LBracket) {
            return Err(DlError::Unsupported {
                pos,
                construct: "nested box modality".into(),
            });
        }
        self.cmp_expr()
    }

    fn cmp_expr(&mut self) -> Result<(Expr, Pos), DlError> {
        let (lhs, pos) = self.add_expr()?;
        let Some(op) = cmp_op(self.peek()) else {
            return Ok((lhs, pos));
        };
        self.advance();
        let l = as_term(lhs, pos)?;
        let (rhs, rpos) = self.add_expr()?;
        let r = as_term(rhs, rpos)?;
        if cmp_op(self.peek()).is_some() {
            return Err(self.error("a logical connective (comparisons do not chain)"));
        }
        Ok((Expr::Formula(Formula::Cmp(op, l, r)), pos))
    }

    fn add_expr(&mut self) -> Result<(Expr, Pos), DlError> {
        let (mut lhs, pos) = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.advance();
            let l = as_term(lhs, pos)?;
            let (rhs, rpos) = self.mul_expr()?;
            lhs = Expr::Term(Term::bin(op, l, as_term(rhs, rpos)?));
        }
        Ok((lhs, pos))
    }

    fn mul_expr(&mut self) -> Result<(Expr, Pos), DlError> {
        let (mut lhs, pos) = self.unary_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.advance();
            let l = as_term(lhs, pos)?;
            let (rhs, rpos) = self.unary_expr()?;
            lhs = Expr::Term(Term::bin(op, l, as_term(rhs, rpos)?));
        }
        Ok((lhs, pos))
    }

    /// Unary minus binds looser than `^`: `-x^2` is `-(x^2)`.
    fn unary_expr(&mut self) -> Result<(Expr, Pos), DlError> {
        let pos = self.pos();
        if self.eat(&Tok::Minus) {
            let (inner, ipos) = self.unary_expr()?;
            return Ok((Expr::Term(Term::neg(as_term(inner, ipos)?)), pos));
        }
        self.pow_expr()
    }

    fn pow_expr(&mut self) -> Result<(Expr, Pos), DlError> {
        let (base, pos) = self.primary()?;
        if self.eat(&Tok::Caret) {
            let b = as_term(base, pos)?;
            let (exp, epos) = self.unary_expr()?;
            return Ok((Expr::Term(Term::bin(BinOp::Pow, b, as_term(exp, epos)?)), pos));
        }
        Ok((base, pos))
    }

    fn primary(&mut self) -> Result<(Expr, Pos), DlError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Number(n) => {
                self.advance();
                let num = Number::new(&n).map_err(|_| DlError::Syntax {
                    pos,
                    expected: "decimal literal".into(),
                    found: format!("`{n}`"),
                })?;
                Ok((Expr::Term(Term::Num(num)), pos))
            }
            Tok::LParen => {
                self.advance();
                let (e, _) = self.equiv_expr()?;
                self.expect(Tok::RParen)?;
                Ok((e, pos))
            }
            Tok::Ident(w) if w == "true" => {
                self.advance();
                Ok((Expr::Formula(Formula::True), pos))
            }
            Tok::Ident(w) if w == "false" => {
                self.advance();
                Ok((Expr::Formula(Formula::False), pos))
            }
            Tok::Ident(_) => {
                let (x, _) = self.ident()?;
                if *self.peek() == Tok::LParen {
                    return Err(DlError::Unsupported {
                        pos,
                        construct: format!("function symbol `{x}(...)`"),
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

fn as_term(e: Expr, pos: Pos) -> Result<Term, DlError> {
    match e {
        Expr::Term(t) => Ok(t),
        Expr::Formula(_) => Err(DlError::Syntax {
            pos,
            expected: "term".into(),
            found: "formula".into(),
        }),
    }
}

fn as_formula(e: Expr, pos: Pos) -> Result<Formula, DlError> {
    match e {
        Expr::Formula(f) => Ok(f),
        Expr::Term(_) => Err(DlError::Syntax {
            pos,
            expected: "formula".into(),
            found: "term".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choice_binds_looser_than_sequence() {
        let p = parse_dl_program("x := 1; y := 2 ++ z := 3;").unwrap();
        let DlProgram::Choice(l, _) = p else { panic!() };
        assert!(matches!(*l, DlProgram::Seq(..)));
    }

    #[test]
    fn choice_is_right_associative() {
        let p = parse_dl_program("a := 1; ++ b := 1; ++ c := 1;").unwrap();
        let DlProgram::Choice(_, r) = p else { panic!() };
        assert!(matches!(*r, DlProgram::Choice(..)));
    }

    #[test]
    fn power_and_unary_minus() {
        let t = parse_dl_term("-x^2").unwrap();
        assert!(matches!(t, Term::Neg(ref i) if matches!(**i, Term::Bin(BinOp::Pow, ..))));
        let t = parse_dl_term("a^b^c").unwrap();
        assert!(matches!(t, Term::Bin(BinOp::Pow, _, ref r) if matches!(**r, Term::Bin(BinOp::Pow, ..))));
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_dl_formula("a > 0 -> b > 0 -> c > 0").unwrap();
        assert!(matches!(f.as_formula(), Formula::Imply(_, r) if matches!(**r, Formula::Imply(..))));
    }

    #[test]
    fn safety_formula_with_loop_and_ode() {
        let f = parse_dl_safety(
            "x >= 0 & eps >= 0 -> [{u := *; ?x < 5; x := x + 1; t := 0; {x' = u, t' = 1 & t <= eps}}*] x >= 0",
        )
        .unwrap();
        let DlProgram::Loop(body, _) = &f.program else { panic!() };
        let items = body.flatten_seq();
        assert_eq!(items.len(), 5);
        assert!(matches!(items[4], DlProgram::Ode(o) if o.equations.len() == 2 && o.domain.is_some()));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_dl_program("x := 1;\ny := ;").unwrap_err();
        assert_eq!((e.pos().line, e.pos().col), (2, 6));
        assert!(parse_dl_program("x' = 1").is_err());
        assert!(parse_dl_formula("f(x) > 0").is_err());
    }
}
