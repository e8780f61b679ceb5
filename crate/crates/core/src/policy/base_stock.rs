use rust_decimal::Decimal;

use super::sandbox::SkuSandbox;
use crate::data::SkuSeries;
use crate::engine::{CostParams, EnvState, OrderRule, ProfitBreakdown, Qty};
use crate::tasks::{SeriesView, Split, Task};

/// Order-up-to rule: `max(0, z − I − T)`.
#[inline]
pub fn base_stock_order(level: Qty, inventory: Qty, in_transit: Qty) -> Qty {
    level.saturating_sub(inventory + in_transit)
}

/// The objective the base stock level maximizes: income minus procurement
/// minus holding. Order, backlog and overflow costs are not part of it.
pub fn base_stock_objective(p: &ProfitBreakdown) -> Decimal {
    p.income - p.procurement - p.holding
}

/// Candidate levels for one SKU: `0..=min(ceil(cap · mean), saturation)`.
pub fn base_stock_candidates(sandbox: &SkuSandbox, mean_demand: f64, cap: u32) -> std::ops::RangeInclusive<Qty> {
    let grid_top = (cap as f64 * mean_demand).ceil().max(0.0) as Qty;
    0..=grid_top.min(sandbox.saturation_level())
}

/// Best level for one SKU: exhaustive over the candidate grid, ties to the
/// smaller level.
pub fn solve_base_stock_sku(sandbox: &SkuSandbox, mean_demand: f64, cap: u32) -> (Qty, Decimal) {
    let mut best = (0, Decimal::MIN);
    for z in base_stock_candidates(sandbox, mean_demand, cap) {
        let score = base_stock_objective(&sandbox.run(|i, t| base_stock_order(z, i, t)));
        if score > best.1 {
            best = (z, score);
        }
    }
    best
}

/// Base stock levels for every (echelon, SKU) cell, each solved on its own
/// SKU's window against that echelon's costs. All echelons see the
/// consumer demand of the view.
pub fn solve_base_stock(view: &SeriesView<'_>, costs: &[CostParams], cap: u32) -> Vec<Qty> {
    let n = view.skus();
    let mut levels = vec![0; costs.len() * n];
    for j in 0..n {
        let window = view.sku(j);
        let mean = view.mean_demand(j);
        for (i, c) in costs.iter().enumerate() {
            let sandbox = SkuSandbox::new(&window, c);
            levels[i * n + j] = solve_base_stock_sku(&sandbox, mean, cap).0;
        }
    }
    levels
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseStockMode {
    Static,
    Dynamic { interval: usize },
}

/// Fixed per-cell base stock levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseStockPolicy {
    pub levels: Vec<Qty>,
}

impl BaseStockPolicy {
    /// Levels fitted on the task's training split.
    pub fn fit_static(task: &Task) -> Self {
        let levels = solve_base_stock(&task.view(Split::Train), task.costs(), task.spec.policy.base_stock_cap);
        Self { levels }
    }
}

impl OrderRule for BaseStockPolicy {
    fn orders(&mut self, state: &EnvState, _: &SkuSeries, orders: &mut [Qty]) {
        let transit = state.in_transit();
        for (c, out) in orders.iter_mut().enumerate() {
            *out = base_stock_order(self.levels[c], state.inventory[c], transit[c]);
        }
    }
}

/// Base stock levels refitted every `interval` steps on everything observed
/// so far. Starts from the training-split fit.
#[derive(Debug, Clone)]
pub struct DynamicBaseStock<'a> {
    task: &'a Task,
    interval: usize,
    start: usize,
    policy: BaseStockPolicy,
    refreshes: Vec<(usize, Vec<Qty>)>,
}

impl<'a> DynamicBaseStock<'a> {
    /// `start` is the first step the policy acts on.
    pub fn new(task: &'a Task, start: usize, interval: usize) -> Self {
        Self::with_levels(task, start, interval, BaseStockPolicy::fit_static(task).levels)
    }

    /// Starts from the given levels instead of a fresh training fit.
    pub fn with_levels(task: &'a Task, start: usize, interval: usize, levels: Vec<Qty>) -> Self {
        assert!(interval >= 1, "refresh interval must be at least one step");
        Self {
            task,
            interval,
            start,
            policy: BaseStockPolicy { levels },
            refreshes: Vec::new(),
        }
    }

    pub fn levels(&self) -> &[Qty] {
        &self.policy.levels
    }

    /// `(step, levels)` of every refresh so far.
    pub fn refreshes(&self) -> &[(usize, Vec<Qty>)] {
        &self.refreshes
    }
}

impl OrderRule for DynamicBaseStock<'_> {
    fn orders(&mut self, state: &EnvState, series: &SkuSeries, orders: &mut [Qty]) {
        let t = state.t;
        if t > self.start && (t - self.start).is_multiple_of(self.interval) {
            let history = self.task.history_before(t);
            let levels = solve_base_stock(&history, self.task.costs(), self.task.spec.policy.base_stock_cap);
            self.refreshes.push((t, levels.clone()));
            self.policy.levels = levels;
        }
        self.policy.orders(state, series, orders);
    }
}
