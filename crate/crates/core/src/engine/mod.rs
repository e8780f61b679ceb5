//! Discrete-time multi-echelon inventory dynamics.
//!
//! Every step runs five phases in a fixed order:
//!
//! 1. **Replenish**: the orders `R` placed by echelon `i` become the demand of
//!    echelon `i + 1` at the next step. The topmost echelon orders from an
//!    unconstrained factory that ships the full quantity immediately.
//! 2. **Sell**: `S = min(D, I)` against start-of-step inventory. Unmet demand
//!    is lost and charged the backlog cost.
//! 3. **Arrive**: shipments due this step leave the pipeline (`A`).
//! 4. **Receive**: a warehouse with free volume `W - Σ vol·I` accepts
//!    `B = floor(A·γ)` with `γ = min(free / Σ vol·A, 1)` under the uniform
//!    strategy; the remainder overflows and is destroyed.
//! 5. **Update**: `I ← I - S + B`.
//!
//! Shipments created by a sale of echelon `i + 1` (or by the factory) enter
//! echelon `i`'s pipeline right after the Sell phase with arrival step
//! `t + L`, where `L` is the lead time sampled at shipment creation. With
//! `L ≥ 1` this is indistinguishable from scheduling them in the Update
//! phase; a lead time of zero delivers in the same step's Arrive phase.
//!
//! [`step`] is the production path working on dense matrices.
//! [`step_scalar_reference`] implements the same contract with plain per-cell
//! loops and is used as a correctness oracle.

mod matrix;
mod pipeline;
mod profit;
mod scalar;
mod warmup;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

pub use matrix::step;
pub use pipeline::Pipeline;
pub use profit::{profit, CellFlows, ProfitBreakdown};
pub use scalar::step_scalar_reference;
pub use warmup::{cover_level, warmup, warmup_observed, CoverRule};

use crate::data::SkuSeries;

/// Integer unit count.
pub type Qty = u64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("order matrix has {got} entries, expected {expected}")]
    OrderShape { expected: usize, got: usize },
    #[error("negative order {value} at warehouse {warehouse}, sku {sku}")]
    NegativeOrder { warehouse: usize, sku: usize, value: i64 },
    #[error("step {t} is outside the series horizon of {horizon} steps")]
    HorizonExceeded { t: usize, horizon: usize },
    #[error("configuration mismatch: {0}")]
    Config(String),
}

/// How a warehouse rations arrivals against its free volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcceptStrategy {
    /// Every SKU receives the same fraction `γ` of its arrivals.
    #[default]
    UniformProportional,
    /// Nothing is received; every arrival overflows.
    RejectAll,
    /// Capacity is ignored and every arrival is received.
    AcceptAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarehouseConfig {
    /// Storage volume `W`.
    pub capacity: u64,
    #[serde(default)]
    pub accept: AcceptStrategy,
}

impl WarehouseConfig {
    pub fn new(capacity: u64) -> Self {
        Self {
            capacity,
            accept: AcceptStrategy::default(),
        }
    }
}

/// A per-unit charge that is either fixed or proportional to a price.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Charge {
    Fixed(Decimal),
    /// Fraction of the unit margin `p - c` (clamped at zero).
    MarginShare(Decimal),
    /// Fraction of the procurement cost `c`.
    CostShare(Decimal),
}

impl Charge {
    fn resolve(self, price: Decimal, cost: Decimal) -> Decimal {
        let v = match self {
            Charge::Fixed(v) => v,
            Charge::MarginShare(r) => r * (price - cost),
            Charge::CostShare(r) => r * cost,
        };
        v.max(Decimal::ZERO)
    }
}

/// Cost parameters of one echelon. Selling price and procurement cost come
/// from the SKU series; the other four charges are resolved against them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostParams {
    /// `o`, charged once per step in which an order is placed.
    pub order_cost: Decimal,
    /// `h`, per unit held at the end of a step.
    pub holding_cost: Decimal,
    /// `k`, per unit of unmet demand.
    pub backlog: Charge,
    /// `v`, per unit of overflow.
    pub overflow: Charge,
}

impl CostParams {
    #[inline]
    pub fn resolve(&self, price: Decimal, cost: Decimal) -> UnitCosts {
        UnitCosts {
            price,
            procurement: cost,
            overflow: self.overflow.resolve(price, cost),
            order: self.order_cost,
            holding: self.holding_cost,
            backlog: self.backlog.resolve(price, cost),
        }
    }
}

/// Fully resolved unit costs of one cell at one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UnitCosts {
    pub price: Decimal,
    pub procurement: Decimal,
    pub overflow: Decimal,
    pub order: Decimal,
    pub holding: Decimal,
    pub backlog: Decimal,
}

/// Simulation state. Matrices are row-major with one row per echelon
/// (row 0 faces consumers) and one column per SKU.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvState {
    pub t: usize,
    warehouses: usize,
    skus: usize,
    pub inventory: Vec<Qty>,
    pub pipeline: Pipeline,
    /// Demand each cell faces at step `t`. Rows above 0 carry the orders
    /// placed downstream at `t - 1`; row 0 is refreshed from the series at
    /// the start of every step.
    pub pending_demand: Vec<Qty>,
}

impl EnvState {
    pub fn new(warehouses: usize, skus: usize, t: usize) -> Self {
        assert!(
            warehouses >= 1 && skus >= 1,
            "state needs at least one warehouse and one SKU"
        );
        let cells = warehouses * skus;
        Self {
            t,
            warehouses,
            skus,
            inventory: vec![0; cells],
            pipeline: Pipeline::new(cells, t),
            pending_demand: vec![0; cells],
        }
    }

    pub fn warehouses(&self) -> usize {
        self.warehouses
    }

    pub fn skus(&self) -> usize {
        self.skus
    }

    pub fn cells(&self) -> usize {
        self.warehouses * self.skus
    }

    #[inline]
    pub fn cell(&self, warehouse: usize, sku: usize) -> usize {
        warehouse * self.skus + sku
    }

    pub fn in_transit(&self) -> &[Qty] {
        self.pipeline.in_transit()
    }

    /// Bytes held by the state's matrices.
    pub fn allocated_bytes(&self) -> usize {
        2 * self.cells() * std::mem::size_of::<Qty>() + self.pipeline.allocated_bytes()
    }
}

/// Per-warehouse acceptance ratio `γ = accepted / incoming`, kept as an
/// exact fraction. `incoming == 0` means nothing arrived (`γ = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AcceptRatio {
    pub accepted: u64,
    pub incoming: u64,
}

impl AcceptRatio {
    pub fn as_f64(self) -> f64 {
        if self.incoming == 0 {
            1.0
        } else {
            self.accepted as f64 / self.incoming as f64
        }
    }

    pub fn within_unit_interval(self) -> bool {
        self.accepted <= self.incoming
    }
}

/// Ledger of one step: flows and profit components per cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub t: usize,
    pub warehouses: usize,
    pub skus: usize,
    pub demand: Vec<Qty>,
    pub sale: Vec<Qty>,
    pub arrival: Vec<Qty>,
    pub received: Vec<Qty>,
    pub order: Vec<Qty>,
    /// End-of-step inventory.
    pub inventory: Vec<Qty>,
    /// End-of-step in-transit quantity.
    pub in_transit: Vec<Qty>,
    pub income: Vec<Decimal>,
    pub procurement: Vec<Decimal>,
    pub overflow_cost: Vec<Decimal>,
    pub order_cost: Vec<Decimal>,
    pub holding: Vec<Decimal>,
    pub backlog: Vec<Decimal>,
    pub profit: Vec<Decimal>,
    /// Free volume `max(0, W - Σ vol·I)` at the start of the step, per warehouse.
    pub free_volume: Vec<u64>,
    pub accept_ratio: Vec<AcceptRatio>,
}

impl StepRecord {
    pub fn cells(&self) -> usize {
        self.warehouses * self.skus
    }

    pub fn total_profit(&self) -> Decimal {
        self.profit.iter().sum()
    }

    pub fn overflow(&self, cell: usize) -> Qty {
        self.arrival[cell] - self.received[cell]
    }

    pub fn breakdown(&self, cell: usize) -> ProfitBreakdown {
        ProfitBreakdown {
            income: self.income[cell],
            procurement: self.procurement[cell],
            overflow: self.overflow_cost[cell],
            order: self.order_cost[cell],
            holding: self.holding[cell],
            backlog: self.backlog[cell],
        }
    }

    pub fn allocated_bytes(&self) -> usize {
        let cells = self.cells();
        7 * cells * std::mem::size_of::<Qty>() + 7 * cells * std::mem::size_of::<Decimal>()
    }
}

/// Everything a step needs besides the state and the orders.
#[derive(Debug, Clone, Copy)]
pub struct Environment<'a> {
    pub series: &'a SkuSeries,
    /// One entry per echelon.
    pub costs: &'a [CostParams],
    /// One entry per echelon.
    pub warehouses: &'a [WarehouseConfig],
}

impl<'a> Environment<'a> {
    pub fn new(series: &'a SkuSeries, costs: &'a [CostParams], warehouses: &'a [WarehouseConfig]) -> Self {
        Self {
            series,
            costs,
            warehouses,
        }
    }

    pub(crate) fn check(&self, state: &EnvState, orders: &[Qty]) -> Result<(), EngineError> {
        let m = state.warehouses();
        if self.costs.len() != m || self.warehouses.len() != m {
            return Err(EngineError::Config(format!(
                "{m} echelons but {} cost sets and {} warehouse configs",
                self.costs.len(),
                self.warehouses.len()
            )));
        }
        if self.series.skus() != state.skus() {
            return Err(EngineError::Config(format!(
                "state has {} SKUs, series has {}",
                state.skus(),
                self.series.skus()
            )));
        }
        if orders.len() != state.cells() {
            return Err(EngineError::OrderShape {
                expected: state.cells(),
                got: orders.len(),
            });
        }
        if state.t >= self.series.horizon() {
            return Err(EngineError::HorizonExceeded {
                t: state.t,
                horizon: self.series.horizon(),
            });
        }
        Ok(())
    }
}

/// Validates a signed order matrix (as produced by external callers) and
/// converts it to unit counts.
pub fn orders_from_signed(skus: usize, orders: &[i64]) -> Result<Vec<Qty>, EngineError> {
    orders
        .iter()
        .enumerate()
        .map(|(cell, &v)| {
            u64::try_from(v).map_err(|_| EngineError::NegativeOrder {
                warehouse: cell / skus,
                sku: cell % skus,
                value: v,
            })
        })
        .collect()
}

/// Signature shared by both step implementations.
pub type StepFn = fn(&mut EnvState, &[Qty], &Environment<'_>) -> Result<StepRecord, EngineError>;

/// Which step implementation to drive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    #[default]
    Matrix,
    Scalar,
}

impl EngineKind {
    pub fn step_fn(self) -> StepFn {
        match self {
            EngineKind::Matrix => step,
            EngineKind::Scalar => step_scalar_reference,
        }
    }
}

impl std::str::FromStr for EngineKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "matrix" => Ok(EngineKind::Matrix),
            "scalar" => Ok(EngineKind::Scalar),
            _ => Err(format!("unknown engine `{s}` (expected matrix or scalar)")),
        }
    }
}

/// A replenishment rule: fills `orders` (one entry per cell) from the state
/// at the start of a step.
pub trait OrderRule {
    fn orders(&mut self, state: &EnvState, series: &SkuSeries, orders: &mut [Qty]);
}

impl<F> OrderRule for F
where
    F: FnMut(&EnvState, &SkuSeries, &mut [Qty]),
{
    fn orders(&mut self, state: &EnvState, series: &SkuSeries, orders: &mut [Qty]) {
        self(state, series, orders)
    }
}

#[cfg(test)]
mod tests;
