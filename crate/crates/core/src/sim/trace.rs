use std::collections::BTreeMap;

use indexmap::IndexSet;

use crate::analysis::var_sets;
use crate::ir::{Ident, ScanCycleModel};

use super::{CycleRecord, SimError};

/// A recorded PLC run: one row per scan cycle.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    /// Variable columns, excluding `cycle`.
    pub columns: Vec<Ident>,
    pub rows: Vec<(u64, BTreeMap<Ident, f64>)>,
}

/// Writes a run as CSV. Actuator columns hold the values written by the
/// controller in that cycle, every other column the value at scan start.
pub fn write_trace(m: &ScanCycleModel, run: &[CycleRecord]) -> String {
    let outputs = var_sets(&m.ctrl).bound;
    let mut columns: IndexSet<Ident> = m.plant.state_vars().cloned().collect();
    columns.extend(m.inputs.iter().cloned());
    columns.extend(outputs.iter().cloned());
    if let Some(first) = run.first() {
        let mut rest: Vec<&Ident> = first.pre.names().filter(|x| !columns.contains(*x)).collect();
        rest.sort();
        columns.extend(rest.into_iter().cloned());
    }
    columns.shift_remove(&m.plant.clock);

    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("cycle".to_string()).chain(columns.iter().map(|c| c.to_string()));
    w.write_record(header).expect("in-memory write");
    for r in run {
        let mut row = vec![r.index.to_string()];
        for c in &columns {
            let src = if outputs.contains(c) { &r.post_ctrl } else { &r.pre };
            row.push(src.lookup(c.as_str()).map(|v| v.to_string()).unwrap_or_default());
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// Reads a trace. Lines starting with `#` are ignored; a `cycle` column
/// is required and must be strictly increasing.
pub fn parse_trace(text: &str) -> Result<Trace, SimError> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let err = |e: csv::Error| SimError::Trace(e.to_string());
    let header = r.headers().map_err(err)?.clone();
    let cycle_col = header
        .iter()
        .position(|h| h == "cycle")
        .ok_or_else(|| SimError::SchemaError(vec!["cycle".into()]))?;
    let mut columns = Vec::new();
    for (i, h) in header.iter().enumerate() {
        if i != cycle_col {
            let id = Ident::new(h).map_err(|e| SimError::Trace(format!("column `{h}`: {e}")))?;
            columns.push((i, id));
        }
    }

    let mut rows: Vec<(u64, BTreeMap<Ident, f64>)> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(err)?;
        let line = rec.position().map_or(0, |p| p.line());
        let cycle: u64 = rec[cycle_col]
            .parse()
            .map_err(|_| SimError::Trace(format!("line {line}: bad cycle number `{}`", &rec[cycle_col])))?;
        if rows.last().is_some_and(|(c, _)| *c >= cycle) {
            return Err(SimError::Trace(format!("line {line}: cycle numbers must increase")));
        }
        let mut row = BTreeMap::new();
        for (i, id) in &columns {
            let cell = rec.get(*i).unwrap_or("");
            if cell.is_empty() {
                continue;
            }
            let v = cell
                .parse::<f64>()
                .map_err(|_| SimError::Trace(format!("line {line}: bad value `{cell}` for {id}")))?;
            row.insert(id.clone(), v);
        }
        rows.push((cycle, row));
    }
    Ok(Trace {
        columns: columns.into_iter().map(|(_, c)| c).collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_skips_comments_and_checks_order() {
        let t = parse_trace("# plc log\ncycle, x, V\n1, 2.5, 0\n2, 3, 1\n").unwrap();
        assert_eq!(t.columns.len(), 2);
        assert_eq!(t.rows[1].1[&Ident::new("V").unwrap()], 1.0);
        assert!(parse_trace("cycle,x\n2,1\n1,1\n").is_err());
        assert!(matches!(parse_trace("x\n1\n"), Err(SimError::SchemaError(_))));
        assert!(parse_trace("cycle,x\n1,abc\n").is_err());
    }
}
