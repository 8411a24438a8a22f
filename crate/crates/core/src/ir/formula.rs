use std::fmt;
use std::ops::Deref;

use indexmap::IndexSet;

use super::{Ident, IrError, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    Hp,
    St,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::Hp => "hybrid program",
            Dialect::St => "structured text",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Gt,
    Ge,
    Lt,
    Le,
}

impl CmpOp {
    pub fn holds(self, l: f64, r: f64) -> bool {
        match self {
            CmpOp::Eq => l == r,
            CmpOp::Ne => l != r,
            CmpOp::Gt => l > r,
            CmpOp::Ge => l >= r,
            CmpOp::Lt => l < r,
            CmpOp::Le => l <= r,
        }
    }
}

/// Quantifier- and modality-free formula over [`Term`]s.
///
/// The raw tree admits every connective of both dialects; the dialect
/// restriction is carried by the [`HpFormula`] and [`StFormula`] wrappers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Cmp(CmpOp, Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// Hybrid program dialect only.
    Imply(Box<Formula>, Box<Formula>),
    /// Hybrid program dialect only.
    Equiv(Box<Formula>, Box<Formula>),
    /// Structured text dialect only.
    Xor(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn vars(&self) -> IndexSet<Ident> {
        let mut out = IndexSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut IndexSet<Ident>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Cmp(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Imply(l, r)
            | Formula::Equiv(l, r)
            | Formula::Xor(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn mentions(&self, x: &Ident) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Cmp(_, l, r) => l.mentions(x) || r.mentions(x),
            Formula::Not(f) => f.mentions(x),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Imply(l, r)
            | Formula::Equiv(l, r)
            | Formula::Xor(l, r) => l.mentions(x) || r.mentions(x),
        }
    }

    /// First connective that is not part of `dialect`, if any.
    fn foreign_connective(&self, dialect: Dialect) -> Option<&'static str> {
        match (self, dialect) {
            (Formula::Imply(..), Dialect::St) => Some("implication"),
            (Formula::Equiv(..), Dialect::St) => Some("equivalence"),
            (Formula::Xor(..), Dialect::Hp) => Some("XOR"),
            (Formula::True | Formula::False | Formula::Cmp(..), _) => None,
            (Formula::Not(f), d) => f.foreign_connective(d),
            (
                Formula::And(l, r)
                | Formula::Or(l, r)
                | Formula::Imply(l, r)
                | Formula::Equiv(l, r)
                | Formula::Xor(l, r),
                d,
            ) => l.foreign_connective(d).or_else(|| r.foreign_connective(d)),
        }
    }

    /// Top-level conjuncts, flattening nested conjunctions left to right.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::Cmp(_, l, r) => 1 + l.size() + r.size(),
            Formula::Not(f) => 1 + f.size(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Imply(l, r)
            | Formula::Equiv(l, r)
            | Formula::Xor(l, r) => 1 + l.size() + r.size(),
        }
    }
}

macro_rules! dialect_formula {
    ($(#[$doc:meta])* $name:ident, $dialect:expr) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub struct $name(Formula);

        impl $name {
            pub const DIALECT: Dialect = $dialect;

            pub fn new(f: Formula) -> Result<Self, IrError> {
                match f.foreign_connective($dialect) {
                    Some(connective) => Err(IrError::DialectViolation {
                        connective,
                        dialect: $dialect,
                    }),
                    None => Ok($name(f)),
                }
            }

            /// Callers guarantee the tree only uses connectives of this dialect.
            pub(crate) fn new_unchecked(f: Formula) -> Self {
                debug_assert!(f.foreign_connective($dialect).is_none());
                $name(f)
            }

            pub fn tt() -> Self {
                $name(Formula::True)
            }

            pub fn ff() -> Self {
                $name(Formula::False)
            }

            pub fn cmp(op: CmpOp, l: Term, r: Term) -> Self {
                $name(Formula::Cmp(op, l, r))
            }

            #[allow(clippy::should_implement_trait)]
            pub fn not(f: Self) -> Self {
                $name(Formula::Not(Box::new(f.0)))
            }

            pub fn and(l: Self, r: Self) -> Self {
                $name(Formula::And(Box::new(l.0), Box::new(r.0)))
            }

            pub fn or(l: Self, r: Self) -> Self {
                $name(Formula::Or(Box::new(l.0), Box::new(r.0)))
            }

            /// Left-associated conjunction; `tt()` for an empty list.
            pub fn conjunction(parts: impl IntoIterator<Item = Self>) -> Self {
                parts
                    .into_iter()
                    .reduce(|acc, f| Self::and(acc, f))
                    .unwrap_or_else(Self::tt)
            }

            pub fn as_formula(&self) -> &Formula {
                &self.0
            }

            pub fn into_formula(self) -> Formula {
                self.0
            }
        }

        impl Deref for $name {
            type Target = Formula;

            fn deref(&self) -> &Formula {
                &self.0
            }
        }

        impl TryFrom<Formula> for $name {
            type Error = IrError;

            fn try_from(f: Formula) -> Result<Self, IrError> {
                $name::new(f)
            }
        }
    };
}

dialect_formula!(
    /// A formula in the hybrid program dialect: may use implication and
    /// equivalence, never XOR.
    HpFormula,
    Dialect::Hp
);
dialect_formula!(
    /// A formula in the structured text dialect: may use XOR, never
    /// implication or equivalence.
    StFormula,
    Dialect::St
);

impl HpFormula {
    pub fn imply(l: HpFormula, r: HpFormula) -> HpFormula {
        HpFormula(Formula::Imply(Box::new(l.0), Box::new(r.0)))
    }

    pub fn equiv(l: HpFormula, r: HpFormula) -> HpFormula {
        HpFormula(Formula::Equiv(Box::new(l.0), Box::new(r.0)))
    }
}

impl StFormula {
    pub fn xor(l: StFormula, r: StFormula) -> StFormula {
        StFormula(Formula::Xor(Box::new(l.0), Box::new(r.0)))
    }
}
