use std::fmt;

use crate::analysis::IoClassification;
use crate::ir::{HybridProgram, Ident, State};
use crate::semantics::hp_reachable;

use super::{SimError, Trace};

/// Maximal run of consecutive rows whose recorded actuator values differ
/// from the model's.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub start_cycle: u64,
    pub end_cycle: u64,
    /// `(actuator, expected, recorded)` for the first row of the run.
    pub first: Vec<(Ident, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplianceReport {
    pub rows: usize,
    pub instances: Vec<Instance>,
}

impl ComplianceReport {
    pub fn is_compliant(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn ranges(&self) -> Vec<(u64, u64)> {
        self.instances.iter().map(|i| (i.start_cycle, i.end_cycle)).collect()
    }
}

impl fmt::Display for ComplianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# actuator values before the first row are taken from that row")?;
        for i in &self.instances {
            write!(f, "noncompliant cycles {}..={}:", i.start_cycle, i.end_cycle)?;
            for (x, e, r) in &i.first {
                write!(f, " {x} expected {e} recorded {r};")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "rows={} instances={}", self.rows, self.instances.len())
    }
}

/// Replays `ctrl` on every trace row and reports where the recorded
/// actuator values disagree with it.
///
/// The controller sees the row's sensor and parameter values together
/// with the actuator values recorded in the previous row.
pub fn check_compliance(
    ctrl: &HybridProgram,
    io: &IoClassification,
    trace: &Trace,
    tolerance: f64,
) -> Result<ComplianceReport, SimError> {
    if !ctrl.is_fully_complemented() {
        return Err(SimError::NondeterministicCtrl);
    }
    let missing: Vec<String> = io
        .inputs
        .iter()
        .chain(&io.outputs)
        .chain(&io.params)
        .filter(|x| !trace.columns.contains(x))
        .map(|x| x.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(SimError::SchemaError(missing));
    }

    let mut report = ComplianceReport {
        rows: trace.rows.len(),
        instances: Vec::new(),
    };
    let mut prev = trace.rows.first().map(|(_, r)| r);
    let mut open: Option<Instance> = None;
    for (cycle, row) in &trace.rows {
        let mut sigma: State = row.iter().map(|(k, v)| (k.clone(), *v)).collect();
        let mut recorded = Vec::new();
        for y in &io.outputs {
            let Some(&now) = row.get(y) else {
                return Err(SimError::Trace(format!("cycle {cycle}: no value for {y}")));
            };
            let before = prev.and_then(|p| p.get(y)).copied().unwrap_or(now);
            sigma.insert(y.clone(), before);
            recorded.push((y, now));
        }
        let reach = hp_reachable(ctrl, &sigma)?;
        let after = reach.single().ok_or(SimError::NondeterministicCtrl)?;
        let diffs: Vec<(Ident, f64, f64)> = recorded
            .into_iter()
            .filter_map(|(y, now)| {
                let e = after.lookup(y.as_str()).unwrap_or(f64::NAN);
                let ok = (e - now).abs() <= tolerance * e.abs().max(1.0);
                (!ok).then(|| (y.clone(), e, now))
            })
            .collect();
        match (&mut open, diffs.is_empty()) {
            (Some(i), false) => i.end_cycle = *cycle,
            (None, false) => {
                open = Some(Instance {
                    start_cycle: *cycle,
                    end_cycle: *cycle,
                    first: diffs,
                })
            }
            (Some(_), true) => report.instances.extend(open.take()),
            (None, true) => {}
        }
        prev = Some(row);
    }
    report.instances.extend(open);
    Ok(report)
}
