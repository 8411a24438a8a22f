use std::fmt;
use std::hash::{Hash, Hasher};

use indexmap::IndexSet;

use super::{Ident, IrError};

/// A non-negative decimal literal. The source lexeme is retained so that
/// printing is lossless; the value is derived from it once.
#[derive(Clone)]
pub struct Number {
    lexeme: Box<str>,
    value: f64,
}

impl Number {
    pub fn new(lexeme: &str) -> Result<Number, IrError> {
        if !is_decimal_lexeme(lexeme) {
            return Err(IrError::InvalidNumber(lexeme.to_string()));
        }
        let value = lexeme
            .parse::<f64>()
            .map_err(|_| IrError::InvalidNumber(lexeme.to_string()))?;
        Ok(Number {
            lexeme: lexeme.into(),
            value,
        })
    }

    /// Literal for a finite, non-negative value using the shortest decimal
    /// form that reads back to the same bits.
    pub fn from_value(value: f64) -> Result<Number, IrError> {
        if !value.is_finite() || value.is_sign_negative() {
            return Err(IrError::InvalidNumber(value.to_string()));
        }
        Number::new(&format!("{value}"))
    }

    pub fn lexeme(&self) -> &str {
        &self.lexeme
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

/// `digits [ '.' digits ] [ ('e'|'E') ['+'|'-'] digits ]`
pub(crate) fn is_decimal_lexeme(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        *i > start
    };
    if !digits(&mut i) {
        return false;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        if !digits(&mut i) {
            return false;
        }
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        if !digits(&mut i) {
            return false;
        }
    }
    i == b.len()
}

impl PartialEq for Number {
    fn eq(&self, other: &Number) -> bool {
        self.lexeme == other.lexeme
    }
}

impl Eq for Number {}

impl Hash for Number {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.lexeme.hash(state)
    }
}

impl fmt::Debug for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lexeme)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Arithmetic term shared by both dialects. Operator spelling differs only at
/// print time (`^` in dL, `**` in ST).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Num(Number),
    Var(Ident),
    Neg(Box<Term>),
    Bin(BinOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn num(lexeme: &str) -> Result<Term, IrError> {
        Number::new(lexeme).map(Term::Num)
    }

    /// A literal for any finite value; negative values become `Neg(Num)`.
    pub fn from_value(value: f64) -> Result<Term, IrError> {
        if value.is_sign_negative() && value != 0.0 {
            Ok(Term::neg(Term::Num(Number::from_value(-value)?)))
        } else {
            Ok(Term::Num(Number::from_value(value.abs())?))
        }
    }

    pub fn var(name: &Ident) -> Term {
        Term::Var(name.clone())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(t: Term) -> Term {
        Term::Neg(Box::new(t))
    }

    pub fn bin(op: BinOp, l: Term, r: Term) -> Term {
        Term::Bin(op, Box::new(l), Box::new(r))
    }

    /// Identifiers occurring in the term, in order of first occurrence.
    pub fn vars(&self) -> IndexSet<Ident> {
        let mut out = IndexSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut IndexSet<Ident>) {
        match self {
            Term::Num(_) => {}
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Neg(t) => t.collect_vars(out),
            Term::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn mentions(&self, x: &Ident) -> bool {
        match self {
            Term::Num(_) => false,
            Term::Var(y) => y == x,
            Term::Neg(t) => t.mentions(x),
            Term::Bin(_, l, r) => l.mentions(x) || r.mentions(x),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Num(_) | Term::Var(_) => 1,
            Term::Neg(t) => 1 + t.size(),
            Term::Bin(_, l, r) => 1 + l.size() + r.size(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> Ident {
        Ident::new(s).unwrap()
    }

    #[test]
    fn lexemes() {
        for ok in ["0", "12", "0.5", "1e3", "2.5E-3", "7e+2"] {
            assert!(is_decimal_lexeme(ok), "{ok}");
        }
        for bad in ["", ".5", "1.", "e3", "1e", "-1", "1_000", "0x10"] {
            assert!(!is_decimal_lexeme(bad), "{bad}");
        }
    }

    #[test]
    fn number_keeps_lexeme() {
        let n = Number::new("1.50").unwrap();
        assert_eq!(n.lexeme(), "1.50");
        assert_eq!(n.value(), 1.5);
        assert_ne!(n, Number::new("1.5").unwrap());
    }

    #[test]
    fn literal_from_value_round_trips() {
        for v in [0.0, 1.0, 0.1, 21.0, 1e-7, 123456.789] {
            let n = Number::from_value(v).unwrap();
            assert_eq!(n.value().to_bits(), v.to_bits());
        }
        assert_eq!(
            Term::from_value(-2.0).unwrap(),
            Term::neg(Term::num("2").unwrap())
        );
    }

    #[test]
    fn collect_vars_in_order() {
        let t = Term::bin(BinOp::Add, Term::var(&id("x")), Term::num("3").unwrap());
        assert_eq!(t.vars().into_iter().collect::<Vec<_>>(), vec![id("x")]);
        let t = Term::bin(
            BinOp::Div,
            Term::bin(BinOp::Sub, Term::var(&id("HH")), Term::var(&id("x1"))),
            Term::var(&id("eps")),
        );
        assert_eq!(
            t.vars().into_iter().collect::<Vec<_>>(),
            vec![id("HH"), id("x1"), id("eps")]
        );
    }
}
