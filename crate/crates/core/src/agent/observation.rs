use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;
use serde::Serialize;

use super::DemandHistory;
use crate::engine::{EnvState, Environment};

/// One observation column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    InStock,
    Price,
    Cost,
    DemandMean,
    DemandStd,
    HoldingCost,
    OrderCost,
    LeadTime,
    WarehouseInStock,
    /// `(W − Σ vol·I) / W`.
    WarehouseRemainingSpace,
    /// `Σ (p − c)·I` over the warehouse.
    WarehouseProfitInStock,
    WarehouseInTransit,
    /// `Σ (p − c)·T` over the warehouse.
    WarehouseProfitInTransit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureScope {
    Sku,
    Warehouse,
}

impl Feature {
    pub const SKU: [Feature; 8] = [
        Feature::InStock,
        Feature::Price,
        Feature::Cost,
        Feature::DemandMean,
        Feature::DemandStd,
        Feature::HoldingCost,
        Feature::OrderCost,
        Feature::LeadTime,
    ];
    pub const WAREHOUSE: [Feature; 5] = [
        Feature::WarehouseInStock,
        Feature::WarehouseRemainingSpace,
        Feature::WarehouseProfitInStock,
        Feature::WarehouseInTransit,
        Feature::WarehouseProfitInTransit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::InStock => "in_stock",
            Feature::Price => "price",
            Feature::Cost => "cost",
            Feature::DemandMean => "demand_mean",
            Feature::DemandStd => "demand_std",
            Feature::HoldingCost => "holding_cost",
            Feature::OrderCost => "order_cost",
            Feature::LeadTime => "lead_time",
            Feature::WarehouseInStock => "warehouse_in_stock",
            Feature::WarehouseRemainingSpace => "warehouse_remaining_space",
            Feature::WarehouseProfitInStock => "warehouse_profit_in_stock",
            Feature::WarehouseInTransit => "warehouse_in_transit",
            Feature::WarehouseProfitInTransit => "warehouse_profit_in_transit",
        }
    }

    pub fn scope(self) -> FeatureScope {
        if Feature::SKU.contains(&self) {
            FeatureScope::Sku
        } else {
            FeatureScope::Warehouse
        }
    }
}

/// Manifest row describing one observation column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeatureInfo {
    pub index: usize,
    pub name: &'static str,
    pub scope: FeatureScope,
}

/// Which features each agent observes, in order, and the trailing window
/// the demand statistics cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationSpec {
    pub features: Vec<Feature>,
    pub demand_window: usize,
}

impl Default for ObservationSpec {
    fn default() -> Self {
        Self {
            features: Feature::SKU.iter().chain(&Feature::WAREHOUSE).copied().collect(),
            demand_window: 21,
        }
    }
}

struct WarehouseTotals {
    in_stock: f64,
    remaining_space: f64,
    profit_in_stock: f64,
    in_transit: f64,
    profit_in_transit: f64,
}

fn f(d: Decimal) -> f64 {
    d.to_f64().unwrap_or(0.0)
}

impl ObservationSpec {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn manifest(&self) -> Vec<FeatureInfo> {
        self.features
            .iter()
            .enumerate()
            .map(|(index, &ft)| FeatureInfo {
                index,
                name: ft.name(),
                scope: ft.scope(),
            })
            .collect()
    }

    /// Row-major `agents × features` matrix. Prices, costs and lead times
    /// are those of the step about to run (the last step once the horizon is
    /// exhausted).
    pub fn observe(&self, state: &EnvState, env: &Environment<'_>, history: &DemandHistory) -> Vec<f64> {
        let series = env.series;
        let n = state.skus();
        let t = state.t.min(series.horizon().saturating_sub(1));
        let prices = series.price_at(t);
        let costs = series.cost_at(t);
        let leads = series.lead_time_at(t);
        let transit = state.in_transit();
        let needs_totals = self.features.iter().any(|f| f.scope() == FeatureScope::Warehouse);

        let mut out = Vec::with_capacity(state.cells() * self.len());
        for i in 0..state.warehouses() {
            let row = i * n..(i + 1) * n;
            let totals = needs_totals.then(|| {
                let mut in_stock = 0u128;
                let mut in_transit = 0u128;
                let mut used = 0u128;
                let mut profit_stock = Decimal::ZERO;
                let mut profit_transit = Decimal::ZERO;
                for j in 0..n {
                    let (inv, tr) = (state.inventory[i * n + j], transit[i * n + j]);
                    in_stock += inv as u128;
                    in_transit += tr as u128;
                    used += inv as u128 * series.volume(j) as u128;
                    let margin = prices[j] - costs[j];
                    if inv > 0 {
                        profit_stock += margin * Decimal::from(inv);
                    }
                    if tr > 0 {
                        profit_transit += margin * Decimal::from(tr);
                    }
                }
                let w = env.warehouses[i].capacity;
                WarehouseTotals {
                    in_stock: in_stock as f64,
                    remaining_space: if w == 0 {
                        0.0
                    } else {
                        (w as f64 - used as f64) / w as f64
                    },
                    profit_in_stock: f(profit_stock),
                    in_transit: in_transit as f64,
                    profit_in_transit: f(profit_transit),
                }
            });
            let cost = &env.costs[i];
            for (j, c) in row.enumerate() {
                let (mean, std) = history.mean_std(c, self.demand_window);
                for &ft in &self.features {
                    let tot = totals.as_ref();
                    out.push(match ft {
                        Feature::InStock => state.inventory[c] as f64,
                        Feature::Price => f(prices[j]),
                        Feature::Cost => f(costs[j]),
                        Feature::DemandMean => mean,
                        Feature::DemandStd => std,
                        Feature::HoldingCost => f(cost.holding_cost),
                        Feature::OrderCost => f(cost.order_cost),
                        Feature::LeadTime => leads[j] as f64,
                        Feature::WarehouseInStock => tot.map_or(0.0, |w| w.in_stock),
                        Feature::WarehouseRemainingSpace => tot.map_or(0.0, |w| w.remaining_space),
                        Feature::WarehouseProfitInStock => tot.map_or(0.0, |w| w.profit_in_stock),
                        Feature::WarehouseInTransit => tot.map_or(0.0, |w| w.in_transit),
                        Feature::WarehouseProfitInTransit => tot.map_or(0.0, |w| w.profit_in_transit),
                    });
                }
            }
        }
        out
    }
}
