use indexmap::IndexSet;

use crate::ir::{HybridProgram, Ident, PlantSpec};

use super::var_sets;

/// Variable roles for the generated PLC program.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IoClassification {
    pub inputs: IndexSet<Ident>,
    pub outputs: IndexSet<Ident>,
    pub params: IndexSet<Ident>,
    /// Outputs that are also read before being written, or declared as
    /// inputs. They are kept as outputs only.
    pub conflicts: IndexSet<Ident>,
}

/// Outputs are the bound variables; inputs are plant state read by the
/// controller followed by the declared inputs; everything else that is free
/// (other than the clock) is a parameter.
pub fn classify_io(ctrl: &HybridProgram, declared_inputs: &[Ident], plant: &PlantSpec) -> IoClassification {
    let vs = var_sets(ctrl);
    let outputs = vs.bound;
    let mut candidates: IndexSet<Ident> = plant
        .state_vars()
        .filter(|x| vs.free.contains(*x))
        .cloned()
        .collect();
    candidates.extend(declared_inputs.iter().cloned());
    let conflicts: IndexSet<Ident> = outputs
        .iter()
        .filter(|x| vs.free.contains(*x) || declared_inputs.contains(x))
        .cloned()
        .collect();
    let inputs: IndexSet<Ident> = candidates
        .into_iter()
        .filter(|x| !outputs.contains(x))
        .collect();
    let params = vs
        .free
        .into_iter()
        .filter(|x| !inputs.contains(x) && !outputs.contains(x) && *x != plant.clock)
        .collect();
    IoClassification {
        inputs,
        outputs,
        params,
        conflicts,
    }
}
