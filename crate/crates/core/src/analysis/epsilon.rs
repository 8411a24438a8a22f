use crate::ir::{CmpOp, Epsilon, Formula, Ident, Number, ScanCycleModel, Term};

use super::AnalysisError;

/// Looks for a top-level conjunct `eps = n` or `n = eps` in the
/// assumptions. `None` means the interval is only symbolic.
pub fn extract_epsilon(assumptions: &Formula, eps: &Ident) -> Result<Option<Number>, AnalysisError> {
    let mut found: Option<Number> = None;
    for c in assumptions.conjuncts() {
        let n = match c {
            Formula::Cmp(CmpOp::Eq, Term::Var(x), Term::Num(n))
            | Formula::Cmp(CmpOp::Eq, Term::Num(n), Term::Var(x))
                if x == eps =>
            {
                n
            }
            _ => continue,
        };
        match &found {
            Some(prev) if prev.value() != n.value() => {
                return Err(AnalysisError::ConflictingEpsilon {
                    first: prev.clone(),
                    second: n.clone(),
                })
            }
            Some(_) => {}
            None => found = Some(n.clone()),
        }
    }
    Ok(found)
}

/// The concrete scan interval of a model, if one is determined.
pub fn model_epsilon(m: &ScanCycleModel) -> Result<Option<f64>, AnalysisError> {
    match &m.plant.bound {
        Epsilon::Value(n) => Ok(Some(n.value())),
        Epsilon::Symbol(x) => Ok(extract_epsilon(&m.assumptions, x)?.map(|n| n.value())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::parse_dl_formula;

    fn eps() -> Ident {
        Ident::new("eps").unwrap()
    }

    fn extract(src: &str) -> Result<Option<f64>, AnalysisError> {
        extract_epsilon(&parse_dl_formula(src).unwrap(), &eps()).map(|n| n.map(|n| n.value()))
    }

    #[test]
    fn finds_either_orientation() {
        assert_eq!(extract("x >= 0 & eps = 1").unwrap(), Some(1.0));
        assert_eq!(extract("0.5 = eps & x >= 0").unwrap(), Some(0.5));
    }

    #[test]
    fn bounds_only_is_symbolic() {
        assert_eq!(extract("eps >= 0 & FL > 0").unwrap(), None);
        assert_eq!(extract("eps = 1 | x > 0").unwrap(), None);
    }

    #[test]
    fn conflicting_values() {
        assert!(matches!(extract("eps = 1 & eps = 2"), Err(AnalysisError::ConflictingEpsilon { .. })));
        assert_eq!(extract("eps = 1 & eps = 1.0").unwrap(), Some(1.0));
    }
}
