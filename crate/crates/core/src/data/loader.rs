//! SKU series CSV ingestion.
//!
//! Two layouts are accepted:
//!
//! * one wide file with columns `sku_id, t, demand[, price, cost, lead_time, vol]`;
//! * a directory holding `demand.csv` (`sku_id, t, demand`) and optionally
//!   `price.csv`, `cost.csv`, `lead_time.csv` (`sku_id, t, <kind>`) and
//!   `vol.csv` (`sku_id, vol`).
//!
//! Rows are reported 1-based, counting data rows only (the header is not a row).

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rust_decimal::Decimal;

use super::{SkuColumns, SkuSeries};
use crate::engine::Qty;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: row {row}: {message}")]
    Csv { path: PathBuf, row: usize, message: String },
    #[error("{path}: row {row}: expected {expected} fields, found {found}")]
    Ragged {
        path: PathBuf,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{path}: missing required column `{column}`")]
    MissingColumn { path: PathBuf, column: &'static str },
    #[error("{path}: row {row}, column {column}: {reason} (value `{value}`)")]
    Invalid {
        path: PathBuf,
        row: usize,
        column: String,
        value: String,
        reason: &'static str,
    },
    #[error("{path}: row {row}: duplicate entry for sku {sku} at t={t}")]
    Duplicate {
        path: PathBuf,
        row: usize,
        sku: String,
        t: usize,
    },
    #[error("sku {sku} has no {column} value at t={t}")]
    MissingStep {
        sku: String,
        column: &'static str,
        t: usize,
    },
    #[error("found {found} SKUs, at least {required} required")]
    TooFewSkus { found: usize, required: usize },
    #[error("file contains no data rows")]
    Empty,
}

impl LoadError {
    /// Data row the error points at, when it points at one.
    pub fn row(&self) -> Option<usize> {
        match self {
            LoadError::Csv { row, .. }
            | LoadError::Ragged { row, .. }
            | LoadError::Invalid { row, .. }
            | LoadError::Duplicate { row, .. } => Some(*row),
            _ => None,
        }
    }
}

/// Values used for columns absent from the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadDefaults {
    pub price: Decimal,
    pub cost: Decimal,
    pub lead_time: u32,
    pub volume: u32,
}

impl Default for LoadDefaults {
    fn default() -> Self {
        Self {
            price: Decimal::from(10),
            cost: Decimal::from(5),
            lead_time: 1,
            volume: 1,
        }
    }
}

/// Loads `sku_count` SKUs (in order of first appearance) from a wide CSV file
/// or a per-kind directory. Missing optional columns take `LoadDefaults`.
pub fn load_series(path: impl AsRef<Path>, sku_count: usize) -> Result<SkuSeries, LoadError> {
    load_series_with(path, sku_count, LoadDefaults::default())
}

pub fn load_series_with(
    path: impl AsRef<Path>,
    sku_count: usize,
    defaults: LoadDefaults,
) -> Result<SkuSeries, LoadError> {
    let path = path.as_ref();
    let mut table = Table::default();
    if path.is_dir() {
        table.read(&path.join("demand.csv"), &[Kind::Demand])?;
        for kind in [Kind::Price, Kind::Cost, Kind::LeadTime] {
            let file = path.join(format!("{}.csv", kind.column()));
            if file.exists() {
                table.read(&file, &[kind])?;
            }
        }
        let vol = path.join("vol.csv");
        if vol.exists() {
            table.read_volumes(&vol)?;
        }
    } else {
        table.read(
            path,
            &[Kind::Demand, Kind::Price, Kind::Cost, Kind::LeadTime, Kind::Volume],
        )?;
    }
    table.finish(sku_count, defaults)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Demand,
    Price,
    Cost,
    LeadTime,
    Volume,
}

impl Kind {
    fn column(self) -> &'static str {
        match self {
            Kind::Demand => "demand",
            Kind::Price => "price",
            Kind::Cost => "cost",
            Kind::LeadTime => "lead_time",
            Kind::Volume => "vol",
        }
    }
}

#[derive(Default)]
struct SkuRows {
    demand: HashMap<usize, Qty>,
    price: HashMap<usize, Decimal>,
    cost: HashMap<usize, Decimal>,
    lead_time: HashMap<usize, u32>,
    volume: Option<u32>,
}

#[derive(Default)]
struct Table {
    order: Vec<String>,
    skus: HashMap<String, SkuRows>,
    horizon: usize,
    seen: Vec<Kind>,
}

fn open(path: &Path) -> Result<csv::Reader<std::fs::File>, LoadError> {
    let file = std::fs::File::open(path).map_err(|source| LoadError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn parse<T: FromStr>(path: &Path, row: usize, column: &str, raw: &str, reason: &'static str) -> Result<T, LoadError> {
    raw.parse().map_err(|_| LoadError::Invalid {
        path: path.to_owned(),
        row,
        column: column.to_owned(),
        value: raw.to_owned(),
        reason,
    })
}

impl Table {
    fn entry(&mut self, sku: &str) -> &mut SkuRows {
        if !self.skus.contains_key(sku) {
            self.order.push(sku.to_owned());
        }
        self.skus.entry(sku.to_owned()).or_default()
    }

    fn read(&mut self, path: &Path, kinds: &[Kind]) -> Result<(), LoadError> {
        let mut rdr = open(path)?;
        let headers = rdr
            .headers()
            .map_err(|e| LoadError::Csv {
                path: path.to_owned(),
                row: 0,
                message: e.to_string(),
            })?
            .clone();
        let find = |name: &str| headers.iter().position(|h| h == name);
        let sku_col = find("sku_id").ok_or(LoadError::MissingColumn {
            path: path.to_owned(),
            column: "sku_id",
        })?;
        let t_col = find("t").ok_or(LoadError::MissingColumn {
            path: path.to_owned(),
            column: "t",
        })?;
        let mut columns = Vec::new();
        for &kind in kinds {
            match find(kind.column()) {
                Some(idx) => columns.push((kind, idx)),
                None if kind == Kind::Demand => {
                    return Err(LoadError::MissingColumn {
                        path: path.to_owned(),
                        column: "demand",
                    })
                }
                None => {}
            }
        }
        self.seen.extend(columns.iter().map(|(k, _)| *k));

        let mut rows = 0;
        for (idx, rec) in rdr.records().enumerate() {
            let row = idx + 1;
            let rec = rec.map_err(|e| LoadError::Csv {
                path: path.to_owned(),
                row,
                message: e.to_string(),
            })?;
            if rec.len() != headers.len() {
                return Err(LoadError::Ragged {
                    path: path.to_owned(),
                    row,
                    expected: headers.len(),
                    found: rec.len(),
                });
            }
            rows += 1;
            let sku = &rec[sku_col];
            let t: usize = parse(path, row, "t", &rec[t_col], "step index must be a non-negative integer")?;
            self.horizon = self.horizon.max(t + 1);
            for &(kind, col) in &columns {
                let raw = &rec[col];
                let name = kind.column();
                let dup = || LoadError::Duplicate {
                    path: path.to_owned(),
                    row,
                    sku: sku.to_owned(),
                    t,
                };
                match kind {
                    Kind::Demand => {
                        let v: i64 = parse(path, row, name, raw, "demand must be an integer")?;
                        if v < 0 {
                            return Err(LoadError::Invalid {
                                path: path.to_owned(),
                                row,
                                column: name.to_owned(),
                                value: raw.to_owned(),
                                reason: "demand must be non-negative",
                            });
                        }
                        if self.entry(sku).demand.insert(t, v as Qty).is_some() {
                            return Err(dup());
                        }
                    }
                    Kind::Price | Kind::Cost => {
                        let v: Decimal = parse(path, row, name, raw, "not a decimal number")?;
                        if v.is_sign_negative() {
                            return Err(LoadError::Invalid {
                                path: path.to_owned(),
                                row,
                                column: name.to_owned(),
                                value: raw.to_owned(),
                                reason: "prices must be non-negative",
                            });
                        }
                        let e = self.entry(sku);
                        let map = if kind == Kind::Price { &mut e.price } else { &mut e.cost };
                        if map.insert(t, v).is_some() {
                            return Err(dup());
                        }
                    }
                    Kind::LeadTime => {
                        let v: u32 = parse(path, row, name, raw, "lead time must be a non-negative integer")?;
                        if self.entry(sku).lead_time.insert(t, v).is_some() {
                            return Err(dup());
                        }
                    }
                    Kind::Volume => {
                        let v: u32 = parse(path, row, name, raw, "unit volume must be a positive integer")?;
                        if v == 0 {
                            return Err(LoadError::Invalid {
                                path: path.to_owned(),
                                row,
                                column: name.to_owned(),
                                value: raw.to_owned(),
                                reason: "unit volume must be a positive integer",
                            });
                        }
                        self.entry(sku).volume = Some(v);
                    }
                }
            }
        }
        if rows == 0 {
            return Err(LoadError::Empty);
        }
        Ok(())
    }

    fn read_volumes(&mut self, path: &Path) -> Result<(), LoadError> {
        let mut rdr = open(path)?;
        let headers = rdr
            .headers()
            .map_err(|e| LoadError::Csv {
                path: path.to_owned(),
                row: 0,
                message: e.to_string(),
            })?
            .clone();
        let find = |name: &'static str| {
            headers.iter().position(|h| h == name).ok_or(LoadError::MissingColumn {
                path: path.to_owned(),
                column: name,
            })
        };
        let (sku_col, vol_col) = (find("sku_id")?, find("vol")?);
        for (idx, rec) in rdr.records().enumerate() {
            let row = idx + 1;
            let rec = rec.map_err(|e| LoadError::Csv {
                path: path.to_owned(),
                row,
                message: e.to_string(),
            })?;
            if rec.len() != headers.len() {
                return Err(LoadError::Ragged {
                    path: path.to_owned(),
                    row,
                    expected: headers.len(),
                    found: rec.len(),
                });
            }
            let v: u32 = parse(
                path,
                row,
                "vol",
                &rec[vol_col],
                "unit volume must be a positive integer",
            )?;
            if v == 0 {
                return Err(LoadError::Invalid {
                    path: path.to_owned(),
                    row,
                    column: "vol".into(),
                    value: "0".into(),
                    reason: "unit volume must be a positive integer",
                });
            }
            self.entry(&rec[sku_col]).volume = Some(v);
        }
        Ok(())
    }

    fn finish(mut self, sku_count: usize, defaults: LoadDefaults) -> Result<SkuSeries, LoadError> {
        if self.order.len() < sku_count {
            return Err(LoadError::TooFewSkus {
                found: self.order.len(),
                required: sku_count,
            });
        }
        let h = self.horizon;
        let has = |k: Kind| self.seen.contains(&k);
        let (has_price, has_cost, has_lead) = (has(Kind::Price), has(Kind::Cost), has(Kind::LeadTime));
        let mut cols = Vec::with_capacity(sku_count);
        for id in self.order.iter().take(sku_count) {
            let rows = self.skus.remove(id).expect("sku recorded on first sight");
            let series = |map: &HashMap<usize, Qty>, column| {
                (0..h)
                    .map(|t| {
                        map.get(&t).copied().ok_or_else(|| LoadError::MissingStep {
                            sku: id.clone(),
                            column,
                            t,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            };
            let dec = |map: &HashMap<usize, Decimal>, present: bool, default: Decimal, column| {
                (0..h)
                    .map(|t| match map.get(&t) {
                        Some(v) => Ok(*v),
                        None if !present => Ok(default),
                        None => Err(LoadError::MissingStep {
                            sku: id.clone(),
                            column,
                            t,
                        }),
                    })
                    .collect::<Result<Vec<_>, _>>()
            };
            let lead_time = (0..h)
                .map(|t| match rows.lead_time.get(&t) {
                    Some(v) => Ok(*v),
                    None if !has_lead => Ok(defaults.lead_time),
                    None => Err(LoadError::MissingStep {
                        sku: id.clone(),
                        column: "lead_time",
                        t,
                    }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            cols.push(SkuColumns {
                id: id.clone(),
                demand: series(&rows.demand, "demand")?,
                price: dec(&rows.price, has_price, defaults.price, "price")?,
                cost: dec(&rows.cost, has_cost, defaults.cost, "cost")?,
                lead_time,
                volume: rows.volume.unwrap_or(defaults.volume),
            });
        }
        SkuSeries::from_skus(cols).map_err(|e| LoadError::Csv {
            path: PathBuf::new(),
            row: 0,
            message: e.to_string(),
        })
    }
}

/// Writes a series in the wide layout accepted by [`load_series`].
pub fn write_series(series: &SkuSeries, path: impl AsRef<Path>) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["sku_id", "t", "demand", "price", "cost", "lead_time", "vol"])?;
    for j in 0..series.skus() {
        for t in 0..series.horizon() {
            w.write_record([
                series.ids()[j].clone(),
                t.to_string(),
                series.demand(t, j).to_string(),
                series.price(t, j).to_string(),
                series.cost(t, j).to_string(),
                series.lead_time(t, j).to_string(),
                series.volume(j).to_string(),
            ])?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn identity_load() {
        let f = file("sku_id,t,demand\na,0,4\na,1,5\na,2,6\n");
        let s = load_series(f.path(), 1).unwrap();
        assert_eq!(s.sku(0).demand, vec![4, 5, 6]);
        assert_eq!(s.horizon(), 3);
    }

    #[test]
    fn missing_vol_defaults_to_one() {
        let f = file("sku_id,t,demand,price,cost,lead_time\na,0,4,10,6,2\nb,0,1,3,2,1\n");
        let s = load_series(f.path(), 2).unwrap();
        assert_eq!(s.volumes(), &[1, 1]);
        assert_eq!(s.lead_time(0, 0), 2);
    }

    #[test]
    fn negative_demand_cites_row() {
        let mut body = String::from("sku_id,t,demand\n");
        for t in 0..10 {
            let d = if t == 6 { -1 } else { 3 };
            body.push_str(&format!("a,{t},{d}\n"));
        }
        let f = file(&body);
        let err = load_series(f.path(), 1).unwrap_err();
        assert_eq!(err.row(), Some(7), "{err}");
        assert!(err.to_string().contains("row 7"));
    }

    #[test]
    fn ragged_row_rejected() {
        let f = file("sku_id,t,demand\na,0,4\na,1\n");
        let err = load_series(f.path(), 1).unwrap_err();
        assert!(matches!(err, LoadError::Ragged { row: 2, .. }), "{err}");
    }

    #[test]
    fn too_few_skus() {
        let f = file("sku_id,t,demand\na,0,4\n");
        assert!(matches!(
            load_series(f.path(), 2).unwrap_err(),
            LoadError::TooFewSkus { found: 1, required: 2 }
        ));
    }

    #[test]
    fn missing_step_reported() {
        let f = file("sku_id,t,demand\na,0,4\na,2,4\n");
        assert!(matches!(
            load_series(f.path(), 1).unwrap_err(),
            LoadError::MissingStep { t: 1, .. }
        ));
    }

    #[test]
    fn directory_layout() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("demand.csv"), "sku_id,t,demand\na,0,4\na,1,5\n").unwrap();
        std::fs::write(dir.path().join("price.csv"), "sku_id,t,price\na,0,9.5\na,1,9.75\n").unwrap();
        std::fs::write(dir.path().join("vol.csv"), "sku_id,vol\na,3\n").unwrap();
        let s = load_series(dir.path(), 1).unwrap();
        assert_eq!(s.price(1, 0).to_string(), "9.75");
        assert_eq!(s.volume(0), 3);
        assert_eq!(s.cost(0, 0), LoadDefaults::default().cost);
    }

    #[test]
    fn write_then_load() {
        let f = file("sku_id,t,demand,price,cost,lead_time,vol\na,0,4,10.5,6,2,1\na,1,0,10.5,6,3,1\nb,0,7,2,1,1,2\nb,1,8,2,1,1,2\n");
        let s = load_series(f.path(), 2).unwrap();
        let out = tempfile::NamedTempFile::new().unwrap();
        write_series(&s, out.path()).unwrap();
        assert_eq!(load_series(out.path(), 2).unwrap(), s);
    }
}
