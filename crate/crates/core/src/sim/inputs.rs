use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ir::Ident;

use super::{SimError, Trace};

/// Supplies sensor readings at the start of each scan cycle.
pub trait InputProvider {
    /// Value of `name` in cycle `cycle` (numbered from 1), or `None` if this
    /// provider does not know the input.
    fn value(&mut self, cycle: usize, name: &Ident) -> Option<f64>;

    fn values(&mut self, cycle: usize, names: &[Ident]) -> Result<Vec<(Ident, f64)>, SimError> {
        names
            .iter()
            .map(|x| {
                self.value(cycle, x)
                    .map(|v| (x.clone(), v))
                    .ok_or_else(|| SimError::MissingInput {
                        cycle,
                        name: x.clone(),
                    })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct ConstantInputs(pub BTreeMap<Ident, f64>);

impl InputProvider for ConstantInputs {
    fn value(&mut self, _cycle: usize, name: &Ident) -> Option<f64> {
        self.0.get(name).copied()
    }
}

/// Independent draws from `U[lo, hi]` per input and cycle.
#[derive(Debug, Clone)]
pub struct UniformInputs {
    ranges: BTreeMap<Ident, (f64, f64)>,
    rng: ChaCha8Rng,
}

impl UniformInputs {
    pub fn new(ranges: BTreeMap<Ident, (f64, f64)>, seed: u64) -> Self {
        UniformInputs {
            ranges,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl InputProvider for UniformInputs {
    fn value(&mut self, _cycle: usize, name: &Ident) -> Option<f64> {
        let &(lo, hi) = self.ranges.get(name)?;
        Some(if lo < hi { self.rng.gen_range(lo..=hi) } else { lo })
    }
}

/// Per-cycle values read from a CSV table with a `cycle` column.
#[derive(Debug, Clone, Default)]
pub struct CsvInputs {
    rows: BTreeMap<usize, BTreeMap<Ident, f64>>,
}

impl CsvInputs {
    pub fn from_trace(trace: &Trace) -> Self {
        CsvInputs {
            rows: trace
                .rows
                .iter()
                .map(|(c, row)| (*c as usize, row.clone()))
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, SimError> {
        Ok(CsvInputs::from_trace(&super::parse_trace(text)?))
    }
}

impl InputProvider for CsvInputs {
    fn value(&mut self, cycle: usize, name: &Ident) -> Option<f64> {
        self.rows.get(&cycle)?.get(name).copied()
    }
}

/// Asks each provider in turn; the first that knows an input wins.
#[derive(Default)]
pub struct MixedInputs(pub Vec<Box<dyn InputProvider>>);

impl InputProvider for MixedInputs {
    fn value(&mut self, cycle: usize, name: &Ident) -> Option<f64> {
        self.0.iter_mut().find_map(|p| p.value(cycle, name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> Ident {
        Ident::new(s).unwrap()
    }

    #[test]
    fn uniform_is_seeded_and_bounded() {
        let ranges: BTreeMap<_, _> = [(id("f1"), (0.0, 50.0))].into_iter().collect();
        let mut a = UniformInputs::new(ranges.clone(), 7);
        let mut b = UniformInputs::new(ranges, 7);
        for c in 1..100 {
            let v = a.value(c, &id("f1")).unwrap();
            assert!((0.0..=50.0).contains(&v));
            assert_eq!(v.to_bits(), b.value(c, &id("f1")).unwrap().to_bits());
        }
    }

    #[test]
    fn missing_input_is_reported() {
        let mut p = MixedInputs(vec![Box::new(ConstantInputs(
            [(id("f1"), 1.0)].into_iter().collect(),
        ))]);
        assert_eq!(
            p.values(3, &[id("f1"), id("f2")]),
            Err(SimError::MissingInput { cycle: 3, name: id("f2") })
        );
    }

    #[test]
    fn csv_rows_by_cycle() {
        let mut p = CsvInputs::parse("# readings\ncycle,f1\n1,2.5\n2,3\n").unwrap();
        assert_eq!(p.value(2, &id("f1")), Some(3.0));
        assert_eq!(p.value(3, &id("f1")), None);
    }
}
