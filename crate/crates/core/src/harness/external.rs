use std::ops::Range;
use std::path::Path;

use super::HarnessError;
use crate::engine::Qty;

/// Whether an external stream carries order quantities or action indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamKind {
    Orders,
    Actions,
}

/// Per-step, per-cell decisions supplied from a file: columns
/// `step, warehouse, sku` and either `order` or `action`. Steps are absolute
/// and must cover every cell of every step in the run range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalStream {
    pub kind: StreamKind,
    range: Range<usize>,
    cells: usize,
    values: Vec<u64>,
}

impl ExternalStream {
    pub fn read(path: &Path, sku_ids: &[String], echelons: usize, range: Range<usize>) -> Result<Self, HarnessError> {
        let mut r = csv::Reader::from_path(path)?;
        let headers = r.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h.trim() == name);
        let bad = |row: usize, message: String| HarnessError::External { row, message };
        let (step_c, wh_c, sku_c) = match (col("step"), col("warehouse"), col("sku")) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(bad(0, "header must name step, warehouse and sku".into())),
        };
        let (kind, val_c) = match (col("order"), col("action")) {
            (Some(c), None) => (StreamKind::Orders, c),
            (None, Some(c)) => (StreamKind::Actions, c),
            _ => return Err(bad(0, "header must name exactly one of order or action".into())),
        };
        let n = sku_ids.len();
        let cells = n * echelons;
        let steps = range.len();
        let mut values = vec![0; steps * cells];
        let mut seen = vec![false; steps * cells];
        for (k, rec) in r.records().enumerate() {
            let row = k + 1;
            let rec = rec?;
            let field = |c: usize| rec.get(c).unwrap_or("").trim();
            let int = |c: usize, what: &str| -> Result<u64, HarnessError> {
                field(c)
                    .parse::<u64>()
                    .map_err(|_| bad(row, format!("{what} `{}` is not a non-negative integer", field(c))))
            };
            let t = int(step_c, "step")? as usize;
            let i = int(wh_c, "warehouse")? as usize;
            let v = int(val_c, if kind == StreamKind::Orders { "order" } else { "action" })?;
            if !range.contains(&t) {
                return Err(bad(
                    row,
                    format!("step {t} outside the run range {}..{}", range.start, range.end),
                ));
            }
            if i >= echelons {
                return Err(bad(row, format!("warehouse {i} out of range (task has {echelons})")));
            }
            let j = sku_ids
                .iter()
                .position(|s| s == field(sku_c))
                .ok_or_else(|| bad(row, format!("unknown sku `{}`", field(sku_c))))?;
            let at = (t - range.start) * cells + i * n + j;
            if std::mem::replace(&mut seen[at], true) {
                return Err(bad(
                    row,
                    format!("duplicate entry for step {t}, warehouse {i}, sku {}", sku_ids[j]),
                ));
            }
            values[at] = v;
        }
        if let Some(at) = seen.iter().position(|s| !s) {
            let (t, c) = (range.start + at / cells, at % cells);
            return Err(bad(
                0,
                format!("no entry for step {t}, warehouse {}, sku {}", c / n, sku_ids[c % n]),
            ));
        }
        Ok(Self {
            kind,
            range,
            cells,
            values,
        })
    }

    /// The row of decisions for absolute step `t`.
    pub fn at(&self, t: usize) -> &[Qty] {
        let k = t - self.range.start;
        &self.values[k * self.cells..(k + 1) * self.cells]
    }

    pub fn range(&self) -> Range<usize> {
        self.range.clone()
    }
}
