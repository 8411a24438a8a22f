use thiserror::Error;

use crate::ir::{BinOp, Formula, Ident, IrError, Pos, State, Term};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Ident),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{base} raised to {exponent} is undefined over the reals")]
    DomainError { base: f64, exponent: f64 },
}

/// Evaluation error raised while executing the statement at `pos`.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{pos}: {error}")]
pub struct ExecError {
    pub pos: Pos,
    pub error: EvalError,
}

impl From<IrError> for EvalError {
    fn from(e: IrError) -> Self {
        match e {
            IrError::UnboundVariable(x) => EvalError::UnboundVariable(x),
            other => unreachable!("state lookups only fail on unbound names: {other}"),
        }
    }
}

pub fn eval_term(t: &Term, s: &State) -> Result<f64, EvalError> {
    Ok(match t {
        Term::Num(n) => n.value(),
        Term::Var(x) => s.get(x)?,
        Term::Neg(inner) => -eval_term(inner, s)?,
        Term::Bin(op, l, r) => {
            let a = eval_term(l, s)?;
            let b = eval_term(r, s)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    a / b
                }
                BinOp::Pow => {
                    if a < 0.0 && b.fract() != 0.0 {
                        return Err(EvalError::DomainError { base: a, exponent: b });
                    }
                    if a == 0.0 && b < 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    a.powf(b)
                }
            }
        }
    })
}

/// Two-valued evaluation. Both operands of every connective are evaluated,
/// so an error anywhere in the formula is always reported.
pub fn eval_formula(f: &Formula, s: &State) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Cmp(op, l, r) => op.holds(eval_term(l, s)?, eval_term(r, s)?),
        Formula::Not(g) => !eval_formula(g, s)?,
        Formula::And(l, r) => {
            let (a, b) = (eval_formula(l, s)?, eval_formula(r, s)?);
            a && b
        }
        Formula::Or(l, r) => {
            let (a, b) = (eval_formula(l, s)?, eval_formula(r, s)?);
            a || b
        }
        Formula::Imply(l, r) => {
            let (a, b) = (eval_formula(l, s)?, eval_formula(r, s)?);
            !a || b
        }
        Formula::Equiv(l, r) => eval_formula(l, s)? == eval_formula(r, s)?,
        Formula::Xor(l, r) => eval_formula(l, s)? != eval_formula(r, s)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::parse_dl_term;
    use crate::st::{parse_st_formula, parse_st_term};

    fn state(pairs: &[(&str, f64)]) -> State {
        pairs.iter().map(|(k, v)| (Ident::new(k).unwrap(), *v)).collect()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(eval_term(&parse_st_term("x+3").unwrap(), &state(&[("x", 2.0)])).unwrap(), 5.0);
        let st = eval_term(&parse_st_term("2**3").unwrap(), &State::new()).unwrap();
        let hp = eval_term(&parse_dl_term("2^3").unwrap(), &State::new()).unwrap();
        assert_eq!(st.to_bits(), hp.to_bits());
        assert_eq!(st, 8.0);
        let s = state(&[("x1", 790.0), ("HH", 1000.0), ("eps", 10.0)]);
        assert_eq!(eval_term(&parse_st_term("(HH-x1)/eps").unwrap(), &s).unwrap(), 21.0);
    }

    #[test]
    fn errors() {
        let s = state(&[("x", 0.0), ("y", -2.0)]);
        assert_eq!(eval_term(&parse_st_term("1/x").unwrap(), &s), Err(EvalError::DivisionByZero));
        assert!(matches!(eval_term(&parse_st_term("y**0.5").unwrap(), &s), Err(EvalError::DomainError { .. })));
        assert_eq!(eval_term(&parse_st_term("y**2").unwrap(), &s).unwrap(), 4.0);
        assert!(matches!(eval_term(&parse_st_term("z").unwrap(), &s), Err(EvalError::UnboundVariable(_))));
        let f = parse_st_formula("TRUE OR 1/x > 0").unwrap();
        assert_eq!(eval_formula(&f, &s), Err(EvalError::DivisionByZero));
    }

    #[test]
    fn connectives() {
        let s = state(&[("x1", 900.0), ("H1", 800.0)]);
        assert!(!eval_formula(&parse_st_formula("TRUE AND FALSE").unwrap(), &s).unwrap());
        assert!(eval_formula(&parse_st_formula("x1 >= H1").unwrap(), &s).unwrap());
        assert!(eval_formula(&parse_st_formula("TRUE XOR FALSE").unwrap(), &s).unwrap());
    }
}
