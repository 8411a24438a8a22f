use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::{Ident, IrError};

/// Total map from variable names to 64-bit reals.
///
/// Equality and hashing compare the exact bit pattern of every binding, so
/// `-0.0 != 0.0` and `NaN == NaN` when the payloads agree.
#[derive(Clone, Default)]
pub struct State {
    vars: BTreeMap<Ident, f64>,
}

impl State {
    pub fn new() -> Self {
        State::default()
    }

    pub fn get(&self, x: &Ident) -> Result<f64, IrError> {
        self.vars
            .get(x)
            .copied()
            .ok_or_else(|| IrError::UnboundVariable(x.clone()))
    }

    pub fn lookup(&self, x: &str) -> Option<f64> {
        self.vars.get(x).copied()
    }

    /// A new state that agrees with `self` except at `x`.
    #[must_use]
    pub fn set(&self, x: &Ident, v: f64) -> State {
        let mut next = self.clone();
        next.insert(x.clone(), v);
        next
    }

    pub fn insert(&mut self, x: Ident, v: f64) {
        self.vars.insert(x, v);
    }

    pub fn contains(&self, x: &Ident) -> bool {
        self.vars.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ident, f64)> + '_ {
        self.vars.iter().map(|(k, v)| (k, *v))
    }

    pub fn names(&self) -> impl Iterator<Item = &Ident> + '_ {
        self.vars.keys()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }
}

impl FromIterator<(Ident, f64)> for State {
    fn from_iter<I: IntoIterator<Item = (Ident, f64)>>(iter: I) -> Self {
        State {
            vars: iter.into_iter().collect(),
        }
    }
}

impl PartialEq for State {
    fn eq(&self, other: &State) -> bool {
        self.vars.len() == other.vars.len()
            && self
                .vars
                .iter()
                .zip(other.vars.iter())
                .all(|((k1, v1), (k2, v2))| k1 == k2 && v1.to_bits() == v2.to_bits())
    }
}

impl Eq for State {}

impl Hash for State {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for (k, v) in &self.vars {
            k.hash(state);
            v.to_bits().hash(state);
        }
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        f.write_str("}")
    }
}
