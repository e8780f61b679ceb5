//! Run reports: per-warehouse CSV ledgers plus static HTML rendered from
//! them.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::{HarnessError, RunResult};
use crate::engine::Qty;

/// Run metadata stored next to the ledgers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub task: String,
    pub policy: String,
    pub split: String,
    pub seed: u64,
    pub echelons: usize,
    pub skus: usize,
    pub start: usize,
    pub end: usize,
    pub metric: Decimal,
    pub wall_clock_secs: f64,
    pub memory_bytes: usize,
}

pub const META_FILE: &str = "run.toml";

/// One ledger row: a (step, SKU) pair of one warehouse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub step: usize,
    pub sku_id: String,
    pub demand: Qty,
    pub sale: Qty,
    pub arrival: Qty,
    pub received: Qty,
    pub replenish: Qty,
    pub overflow: Qty,
    pub inventory: Qty,
    pub in_transit: Qty,
    pub income: Decimal,
    pub procurement: Decimal,
    pub overflow_cost: Decimal,
    pub order_cost: Decimal,
    pub holding: Decimal,
    pub backlog: Decimal,
    pub profit: Decimal,
}

const QTY_COLUMNS: [&str; 8] = [
    "demand",
    "sale",
    "arrival",
    "received",
    "replenish",
    "overflow",
    "inventory",
    "in_transit",
];
const MONEY_COLUMNS: [&str; 7] = [
    "income",
    "procurement",
    "overflow_cost",
    "order_cost",
    "holding",
    "backlog",
    "profit",
];

impl ReportRow {
    fn quantities(&self) -> [Qty; 8] {
        [
            self.demand,
            self.sale,
            self.arrival,
            self.received,
            self.replenish,
            self.overflow,
            self.inventory,
            self.in_transit,
        ]
    }

    fn money(&self) -> [Decimal; 7] {
        [
            self.income,
            self.procurement,
            self.overflow_cost,
            self.order_cost,
            self.holding,
            self.backlog,
            self.profit,
        ]
    }
}

pub fn ledger_path(dir: &Path, warehouse: usize) -> PathBuf {
    dir.join(format!("warehouse_{warehouse}.csv"))
}

fn page_name(warehouse: usize) -> String {
    format!("warehouse_{warehouse}.html")
}

/// Writes one CSV ledger per warehouse (rows ordered by step, then SKU) and
/// the run metadata. Deterministic for a deterministic run.
pub fn write_ledgers(run: &RunResult, dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)?;
    let n = run.skus;
    for i in 0..run.echelons {
        let file = fs::File::create(ledger_path(dir, i))?;
        let mut w = csv::Writer::from_writer(BufWriter::new(file));
        for rec in &run.records {
            for j in 0..n {
                let c = i * n + j;
                w.serialize(ReportRow {
                    step: rec.t,
                    sku_id: run.sku_ids[j].clone(),
                    demand: rec.demand[c],
                    sale: rec.sale[c],
                    arrival: rec.arrival[c],
                    received: rec.received[c],
                    replenish: rec.order[c],
                    overflow: rec.overflow(c),
                    inventory: rec.inventory[c],
                    in_transit: rec.in_transit[c],
                    income: rec.income[c],
                    procurement: rec.procurement[c],
                    overflow_cost: rec.overflow_cost[c],
                    order_cost: rec.order_cost[c],
                    holding: rec.holding[c],
                    backlog: rec.backlog[c],
                    profit: rec.profit[c],
                })?;
            }
        }
        w.flush()?;
    }
    let meta = RunMeta {
        task: run.task.clone(),
        policy: run.policy.clone(),
        split: run.split.to_string(),
        seed: run.seed,
        echelons: run.echelons,
        skus: run.skus,
        start: run.range.start,
        end: run.range.end,
        metric: run.metric,
        wall_clock_secs: run.wall_clock.as_secs_f64(),
        memory_bytes: run.memory_bytes,
    };
    let text = toml::to_string_pretty(&meta).map_err(|e| HarnessError::Report(e.to_string()))?;
    fs::write(dir.join(META_FILE), text)?;
    Ok(())
}

pub fn read_meta(dir: &Path) -> Result<RunMeta, HarnessError> {
    let text = fs::read_to_string(dir.join(META_FILE))?;
    toml::from_str(&text).map_err(|e| HarnessError::Report(format!("{}: {e}", dir.join(META_FILE).display())))
}

pub fn read_ledger(dir: &Path, warehouse: usize) -> Result<Vec<ReportRow>, HarnessError> {
    let mut r = csv::Reader::from_path(ledger_path(dir, warehouse))?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

/// The evaluation metric recomputed from the ledgers alone: total profit
/// over every row of every warehouse, divided by the agent count.
pub fn metric_from_ledgers(dir: &Path) -> Result<Decimal, HarnessError> {
    let meta = read_meta(dir)?;
    let mut total = Decimal::ZERO;
    for i in 0..meta.echelons {
        total += read_ledger(dir, i)?.iter().map(|r| r.profit).sum::<Decimal>();
    }
    Ok(total / Decimal::from(meta.echelons * meta.skus))
}

/// Writes the ledgers and renders the HTML pages from them.
pub fn emit_report(run: &RunResult, dir: &Path) -> Result<(), HarnessError> {
    write_ledgers(run, dir)?;
    render_html(dir)
}

#[derive(Default, Clone)]
struct Totals {
    qty: [u128; 8],
    money: [Decimal; 7],
}

impl Totals {
    fn add(&mut self, r: &ReportRow) {
        for (a, b) in self.qty.iter_mut().zip(r.quantities()) {
            *a += b as u128;
        }
        for (a, b) in self.money.iter_mut().zip(r.money()) {
            *a += b;
        }
    }

    fn cells(&self, out: &mut String) {
        for q in self.qty {
            let _ = write!(out, "<td>{q}</td>");
        }
        for m in self.money {
            let _ = write!(out, "<td>{m}</td>");
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

const STYLE: &str = "body{font-family:sans-serif;margin:1.5em}table{border-collapse:collapse;font-size:12px}\
td,th{border:1px solid #ccc;padding:2px 6px;text-align:right}th{background:#eee;position:sticky;top:0}\
tr.total td{font-weight:bold;background:#f6f6f6}td.id{text-align:left}";

fn header(out: &mut String, first: &[&str]) {
    out.push_str("<tr>");
    for h in first.iter().chain(&QTY_COLUMNS).chain(&MONEY_COLUMNS) {
        let _ = write!(out, "<th>{h}</th>");
    }
    out.push_str("</tr>\n");
}

fn page(title: &str, body: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>{t}</title><style>{STYLE}</style></head>\n<body><h1>{t}</h1>\n{body}</body></html>\n",
        t = escape(title)
    )
}

/// Renders `index.html` and one page per warehouse from the CSV ledgers in
/// `dir`. Every figure on the pages is read from or summed over the CSVs.
pub fn render_html(dir: &Path) -> Result<(), HarnessError> {
    let meta = read_meta(dir)?;
    let mut summary = Vec::with_capacity(meta.echelons);
    let mut grand = Decimal::ZERO;
    for i in 0..meta.echelons {
        let rows = read_ledger(dir, i)?;
        let mut total = Totals::default();
        let mut per_step: Vec<(usize, Totals)> = Vec::new();
        let mut body = String::new();
        let _ = writeln!(
            body,
            "<p><a href=\"index.html\">summary</a></p>\n<h2>Per step</h2>\n<table>"
        );
        for r in &rows {
            total.add(r);
            match per_step.last_mut() {
                Some((t, acc)) if *t == r.step => acc.add(r),
                _ => {
                    let mut acc = Totals::default();
                    acc.add(r);
                    per_step.push((r.step, acc));
                }
            }
        }
        header(&mut body, &["step"]);
        for (t, acc) in &per_step {
            let _ = write!(body, "<tr><td>{t}</td>");
            acc.cells(&mut body);
            body.push_str("</tr>\n");
        }
        body.push_str("<tr class=\"total\"><td>total</td>");
        total.cells(&mut body);
        body.push_str("</tr>\n</table>\n<h2>Per step and SKU</h2>\n<table>\n");
        header(&mut body, &["step", "sku_id"]);
        for r in &rows {
            let _ = write!(
                body,
                "<tr><td>{}</td><td class=\"id\">{}</td>",
                r.step,
                escape(&r.sku_id)
            );
            for q in r.quantities() {
                let _ = write!(body, "<td>{q}</td>");
            }
            for m in r.money() {
                let _ = write!(body, "<td>{m}</td>");
            }
            body.push_str("</tr>\n");
        }
        body.push_str("<tr class=\"total\"><td>total</td><td></td>");
        total.cells(&mut body);
        body.push_str("</tr>\n</table>\n");
        let title = format!("{} / warehouse {i}", meta.task);
        let mut f = BufWriter::new(fs::File::create(dir.join(page_name(i)))?);
        f.write_all(page(&title, &body).as_bytes())?;
        f.flush()?;
        grand += total.money[6];
        summary.push(total);
    }

    let agents = meta.echelons * meta.skus;
    let mut body = String::new();
    let _ = writeln!(body, "<table>");
    for (k, v) in [
        ("task", meta.task.clone()),
        ("policy", meta.policy.clone()),
        ("split", meta.split.clone()),
        ("seed", meta.seed.to_string()),
        ("steps", format!("{}..{}", meta.start, meta.end)),
        ("agents", agents.to_string()),
        ("total profit", grand.to_string()),
        ("mean profit per agent", (grand / Decimal::from(agents)).to_string()),
    ] {
        let _ = writeln!(body, "<tr><th>{k}</th><td class=\"id\">{}</td></tr>", escape(&v));
    }
    body.push_str("</table>\n<h2>Warehouses</h2>\n<table>\n");
    header(&mut body, &["warehouse"]);
    for (i, total) in summary.iter().enumerate() {
        let _ = write!(body, "<tr><td><a href=\"{}\">{i}</a></td>", page_name(i));
        total.cells(&mut body);
        body.push_str("</tr>\n");
    }
    body.push_str("</table>\n");
    fs::write(
        dir.join("index.html"),
        page(&format!("{} / {}", meta.task, meta.policy), &body),
    )?;
    Ok(())
}
