use std::ops::Range;

use super::{step, EngineError, EnvState, Environment, OrderRule, Qty, StepRecord};
use crate::data::SkuSeries;

/// `ceil(mean(demand) · (mean(lead_time) + 1))` over paired samples.
/// Returns 0 for an empty window.
pub fn cover_level(demand: &[Qty], lead_time: &[u32]) -> Qty {
    debug_assert_eq!(demand.len(), lead_time.len());
    let len = demand.len() as u128;
    if len == 0 {
        return 0;
    }
    let d: u128 = demand.iter().map(|&q| q as u128).sum();
    let l: u128 = lead_time.iter().map(|&q| q as u128).sum();
    // (d / len) * (l / len + 1) = d * (l + len) / len^2
    let num = d * (l + len);
    let den = len * len;
    num.div_ceil(den) as Qty
}

/// Default warmup rule: order up to a per-SKU cover level whenever the
/// inventory position `I + T` falls below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverRule {
    /// One level per cell.
    pub levels: Vec<Qty>,
}

impl CoverRule {
    /// Levels from the demand and lead times observed over `window`, shared by
    /// every echelon.
    pub fn for_window(series: &SkuSeries, warehouses: usize, window: Range<usize>) -> Self {
        let per_sku: Vec<Qty> = (0..series.skus())
            .map(|j| {
                let d: Vec<Qty> = window.clone().map(|t| series.demand(t, j)).collect();
                let l: Vec<u32> = window.clone().map(|t| series.lead_time(t, j)).collect();
                cover_level(&d, &l)
            })
            .collect();
        let levels = (0..warehouses).flat_map(|_| per_sku.iter().copied()).collect();
        Self { levels }
    }
}

impl OrderRule for CoverRule {
    fn orders(&mut self, state: &EnvState, _series: &SkuSeries, orders: &mut [Qty]) {
        let inv = &state.inventory;
        let transit = state.in_transit();
        for (c, out) in orders.iter_mut().enumerate() {
            let position = inv[c] + transit[c];
            *out = self.levels[c].saturating_sub(position);
        }
    }
}

/// Runs `length` steps under `rule`, discarding the ledgers.
pub fn warmup(
    state: &mut EnvState,
    rule: &mut dyn OrderRule,
    length: usize,
    env: &Environment<'_>,
) -> Result<(), EngineError> {
    warmup_observed(state, rule, length, env, |_| {})
}

/// [`warmup`], handing every step's ledger to `observe` before dropping it.
pub fn warmup_observed(
    state: &mut EnvState,
    rule: &mut dyn OrderRule,
    length: usize,
    env: &Environment<'_>,
    mut observe: impl FnMut(&StepRecord),
) -> Result<(), EngineError> {
    let mut orders = vec![0; state.cells()];
    for _ in 0..length {
        rule.orders(state, env.series, &mut orders);
        observe(&step(state, &orders, env)?);
    }
    Ok(())
}
