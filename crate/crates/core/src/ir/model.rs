use std::fmt;

use super::{HpFormula, HybridProgram, Ident, Number, Term};

/// The scan interval bound appearing in the plant's `t <= ε` conjunct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Epsilon {
    Value(Number),
    Symbol(Ident),
}

impl Epsilon {
    pub fn as_term(&self) -> Term {
        match self {
            Epsilon::Value(n) => Term::Num(n.clone()),
            Epsilon::Symbol(x) => Term::Var(x.clone()),
        }
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Epsilon::Value(n) => f.write_str(n.lexeme()),
            Epsilon::Symbol(x) => write!(f, "{x}"),
        }
    }
}

/// `t := 0; {x' = f(x,u), t' = 1 & t <= ε & Q}`.
///
/// `odes` excludes the clock equation and `domain` excludes the `t <= ε`
/// conjunct; both are implied by `clock` and `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlantSpec {
    pub odes: Vec<(Ident, Term)>,
    pub clock: Ident,
    pub bound: Epsilon,
    pub domain: HpFormula,
}

impl PlantSpec {
    /// Variables evolved by the plant, excluding the clock.
    pub fn state_vars(&self) -> impl Iterator<Item = &Ident> + '_ {
        self.odes.iter().map(|(x, _)| x)
    }

    pub fn evolves(&self, x: &Ident) -> bool {
        self.odes.iter().any(|(y, _)| y == x)
    }
}

/// A hybrid program in scan cycle normal form together with its safety
/// contract: `A -> [{i:=*; ctrl; plant}*] S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScanCycleModel {
    pub assumptions: HpFormula,
    pub inputs: Vec<Ident>,
    pub ctrl: HybridProgram,
    pub plant: PlantSpec,
    pub safety: HpFormula,
}

impl ScanCycleModel {
    pub fn epsilon(&self) -> &Epsilon {
        &self.plant.bound
    }
}
