use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;

use super::sandbox::SkuSandbox;
use crate::data::SkuSeries;
use crate::engine::{CostParams, EnvState, OrderRule, Qty};
use crate::tasks::{PolicySettings, SeriesView, SkuWindow};

/// Reorder rule: order up to `S` once the position `I + T` is at or below `s`.
#[inline]
pub fn ss_order(s: Qty, big_s: Qty, inventory: Qty, in_transit: Qty) -> Qty {
    let position = inventory + in_transit;
    if position <= s {
        big_s.saturating_sub(position)
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsMode {
    Static,
    Hindsight,
}

/// Distinct levels `round(m · mean)` for `m` in `0, step, 2·step, …, max`.
pub fn ss_levels(mean_demand: f64, settings: &PolicySettings) -> Vec<Qty> {
    let count = (settings.ss_max / settings.ss_step).floor().to_usize().unwrap_or(0);
    let mut levels: Vec<Qty> = (0..=count)
        .map(|k| {
            let m = (settings.ss_step * Decimal::from(k)).to_f64().unwrap_or(0.0);
            (m * mean_demand).round().max(0.0) as Qty
        })
        .collect();
    levels.sort_unstable();
    levels.dedup();
    levels
}

/// All `(s, S)` with `s ≤ S` drawn from the union of the level sets.
pub fn ss_pairs(level_sets: &[Vec<Qty>]) -> Vec<(Qty, Qty)> {
    let mut levels: Vec<Qty> = level_sets.iter().flatten().copied().collect();
    levels.sort_unstable();
    levels.dedup();
    let mut pairs = Vec::with_capacity(levels.len() * (levels.len() + 1) / 2);
    for (a, &big_s) in levels.iter().enumerate() {
        for &s in &levels[..=a] {
            pairs.push((s, big_s));
        }
    }
    pairs
}

/// Best pair on the sandbox by full profit. Pairs are visited in `(S, s)`
/// order and only a strict improvement replaces the incumbent, so ties keep
/// the smallest `S`, then the smallest `s`.
pub fn solve_ss_sku(sandbox: &SkuSandbox, pairs: &[(Qty, Qty)]) -> ((Qty, Qty), Decimal) {
    let mut best = ((0, 0), Decimal::MIN);
    for &(s, big_s) in pairs {
        let score = sandbox.run(|i, t| ss_order(s, big_s, i, t)).total();
        if score > best.1 {
            best = ((s, big_s), score);
        }
    }
    best
}

fn mean_of(window: &SkuWindow) -> f64 {
    let d = &window.eval.demand;
    if d.is_empty() {
        0.0
    } else {
        d.iter().sum::<Qty>() as f64 / d.len() as f64
    }
}

/// Per-cell `(s, S)` fitted on `fit`. In hindsight mode the candidates also
/// include the grid anchored on `anchor` (the training view), so the
/// hindsight pair scores at least as well on `fit` as any static pair.
pub fn solve_ss(
    fit: &SeriesView<'_>,
    anchor: Option<&SeriesView<'_>>,
    costs: &[CostParams],
    settings: &PolicySettings,
) -> Vec<(Qty, Qty)> {
    let n = fit.skus();
    let mut params = vec![(0, 0); costs.len() * n];
    for j in 0..n {
        let window = fit.sku(j);
        let mut sets = vec![ss_levels(mean_of(&window), settings)];
        if let Some(a) = anchor {
            sets.push(ss_levels(a.mean_demand(j), settings));
        }
        let pairs = ss_pairs(&sets);
        for (i, c) in costs.iter().enumerate() {
            let sandbox = SkuSandbox::new(&window, c);
            params[i * n + j] = solve_ss_sku(&sandbox, &pairs).0;
        }
    }
    params
}

/// Fixed per-cell `(s, S)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsPolicy {
    pub params: Vec<(Qty, Qty)>,
    pub mode: SsMode,
}

impl OrderRule for SsPolicy {
    fn orders(&mut self, state: &EnvState, _: &SkuSeries, orders: &mut [Qty]) {
        let transit = state.in_transit();
        for (c, out) in orders.iter_mut().enumerate() {
            let (s, big_s) = self.params[c];
            *out = ss_order(s, big_s, state.inventory[c], transit[c]);
        }
    }
}
