use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::Qty;

/// Solved per-cell parameters, laid out warehouse-major like the engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolicyParams {
    BaseStock(Vec<Qty>),
    Ss(Vec<(Qty, Qty)>),
}

impl PolicyParams {
    pub fn cells(&self) -> usize {
        match self {
            Self::BaseStock(z) => z.len(),
            Self::Ss(p) => p.len(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParamsError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Invalid { row: usize, message: String },
}

#[derive(Serialize, Deserialize)]
struct ZRow {
    warehouse: usize,
    sku_id: String,
    z: Qty,
}

#[derive(Serialize, Deserialize)]
struct SsRow {
    warehouse: usize,
    sku_id: String,
    s: Qty,
    #[serde(rename = "S")]
    big_s: Qty,
}

/// Writes `warehouse,sku_id,z` or `warehouse,sku_id,s,S` rows.
pub fn write_params(out: impl io::Write, params: &PolicyParams, sku_ids: &[String]) -> Result<(), ParamsError> {
    let mut w = csv::Writer::from_writer(out);
    let n = sku_ids.len();
    match params {
        PolicyParams::BaseStock(z) => {
            for (c, &z) in z.iter().enumerate() {
                w.serialize(ZRow {
                    warehouse: c / n,
                    sku_id: sku_ids[c % n].clone(),
                    z,
                })?;
            }
        }
        PolicyParams::Ss(p) => {
            for (c, &(s, big_s)) in p.iter().enumerate() {
                w.serialize(SsRow {
                    warehouse: c / n,
                    sku_id: sku_ids[c % n].clone(),
                    s,
                    big_s,
                })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a parameter file written by [`write_params`] for a task with the
/// given SKU ids and echelon count. Every cell must appear exactly once.
pub fn read_params(path: &Path, sku_ids: &[String], echelons: usize) -> Result<PolicyParams, ParamsError> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    let is_ss = headers.iter().any(|h| h == "S");
    let n = sku_ids.len();
    let cells = n * echelons;
    let mut seen = vec![false; cells];
    let mut z = vec![0; cells];
    let mut ss = vec![(0, 0); cells];
    for (k, rec) in r.records().enumerate() {
        let row = k + 1;
        let rec = rec?;
        let invalid = |message: String| ParamsError::Invalid { row, message };
        let (warehouse, id) = if is_ss {
            let r: SsRow = rec.deserialize(Some(&headers))?;
            if r.s > r.big_s {
                return Err(invalid(format!("s={} exceeds S={}", r.s, r.big_s)));
            }
            let c = locate(r.warehouse, &r.sku_id, sku_ids, echelons).map_err(invalid)?;
            ss[c] = (r.s, r.big_s);
            (r.warehouse, c)
        } else {
            let r: ZRow = rec.deserialize(Some(&headers))?;
            let c = locate(r.warehouse, &r.sku_id, sku_ids, echelons).map_err(invalid)?;
            z[c] = r.z;
            (r.warehouse, c)
        };
        if std::mem::replace(&mut seen[id], true) {
            return Err(invalid(format!(
                "duplicate entry for warehouse {warehouse}, sku {}",
                sku_ids[id % n]
            )));
        }
    }
    if let Some(c) = seen.iter().position(|s| !s) {
        return Err(ParamsError::Invalid {
            row: 0,
            message: format!("missing parameters for warehouse {}, sku {}", c / n, sku_ids[c % n]),
        });
    }
    Ok(if is_ss {
        PolicyParams::Ss(ss)
    } else {
        PolicyParams::BaseStock(z)
    })
}

fn locate(warehouse: usize, id: &str, sku_ids: &[String], echelons: usize) -> Result<usize, String> {
    if warehouse >= echelons {
        return Err(format!("warehouse {warehouse} out of range (task has {echelons})"));
    }
    let j = sku_ids
        .iter()
        .position(|s| s == id)
        .ok_or_else(|| format!("unknown sku `{id}`"))?;
    Ok(warehouse * sku_ids.len() + j)
}
