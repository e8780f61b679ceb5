//! Single-SKU, capacity-free simulation used to score policy parameters.
//!
//! Reproduces the engine's dynamics for one consumer-facing SKU whose
//! warehouse never rations arrivals: the same cover-rule warmup, the same
//! phase order and the same profit terms (overflow is always zero).

use rust_decimal::Decimal;

use crate::data::SkuColumns;
use crate::engine::{cover_level, CostParams, ProfitBreakdown, Qty, UnitCosts};
use crate::tasks::SkuWindow;

/// State at the first evaluated step: on-hand units and shipments due at
/// offsets relative to that step.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WarmStart {
    pub inventory: Qty,
    pub due: Vec<(usize, Qty)>,
}

impl WarmStart {
    pub fn in_transit(&self) -> Qty {
        self.due.iter().map(|(_, q)| q).sum()
    }
}

/// Runs the cover-rule warmup over `warm` starting from an empty state.
pub fn warm_start(warm: &SkuColumns) -> WarmStart {
    let steps = warm.horizon();
    if steps == 0 {
        return WarmStart::default();
    }
    let level = cover_level(&warm.demand, &warm.lead_time);
    let max_lead = warm.lead_time.iter().copied().max().unwrap_or(0) as usize;
    let mut due = vec![0 as Qty; steps + max_lead + 1];
    let mut inv: Qty = 0;
    let mut transit: Qty = 0;
    for t in 0..steps {
        let order = level.saturating_sub(inv + transit);
        let sold = warm.demand[t].min(inv);
        if order > 0 {
            due[t + warm.lead_time[t] as usize] += order;
            transit += order;
        }
        let arrived = std::mem::take(&mut due[t]);
        transit -= arrived;
        inv = inv - sold + arrived;
    }
    WarmStart {
        inventory: inv,
        due: due[steps..]
            .iter()
            .enumerate()
            .filter(|(_, &q)| q > 0)
            .map(|(k, &q)| (k, q))
            .collect(),
    }
}

/// Scores order rules for one SKU over its evaluation window.
#[derive(Debug, Clone)]
pub struct SkuSandbox {
    demand: Vec<Qty>,
    lead_time: Vec<u32>,
    units: Vec<UnitCosts>,
    start: WarmStart,
    horizon_pad: usize,
}

impl SkuSandbox {
    pub fn new(window: &SkuWindow, costs: &CostParams) -> Self {
        let eval = &window.eval;
        let start = warm_start(&window.warm);
        let max_lead = eval.lead_time.iter().copied().max().unwrap_or(0) as usize;
        let max_due = start.due.iter().map(|(k, _)| *k).max().unwrap_or(0);
        Self {
            demand: eval.demand.clone(),
            lead_time: eval.lead_time.clone(),
            units: eval
                .price
                .iter()
                .zip(&eval.cost)
                .map(|(&p, &c)| costs.resolve(p, c))
                .collect(),
            start,
            horizon_pad: max_lead.max(max_due) + 1,
        }
    }

    pub fn steps(&self) -> usize {
        self.demand.len()
    }

    pub fn demand(&self) -> &[Qty] {
        &self.demand
    }

    pub fn lead_time(&self) -> &[u32] {
        &self.lead_time
    }

    pub fn start(&self) -> &WarmStart {
        &self.start
    }

    /// Simulates the window under `rule(inventory, in_transit) -> order` and
    /// returns the summed profit components.
    pub fn run(&self, mut rule: impl FnMut(Qty, Qty) -> Qty) -> ProfitBreakdown {
        let steps = self.steps();
        let mut due = vec![0 as Qty; steps + self.horizon_pad];
        let mut transit: Qty = 0;
        for &(k, q) in &self.start.due {
            due[k] += q;
            transit += q;
        }
        let mut inv = self.start.inventory;
        let mut total = ProfitBreakdown::default();
        for t in 0..steps {
            let order = rule(inv, transit);
            let demand = self.demand[t];
            let sold = demand.min(inv);
            if order > 0 {
                due[t + self.lead_time[t] as usize] += order;
                transit += order;
            }
            let arrived = std::mem::take(&mut due[t]);
            transit -= arrived;
            inv = inv - sold + arrived;

            let u = &self.units[t];
            if sold > 0 {
                let s = Decimal::from(sold);
                total.income += u.price * s;
                total.procurement += u.procurement * s;
            }
            if order > 0 {
                total.order += u.order;
            }
            if inv > 0 {
                total.holding += u.holding * Decimal::from(inv);
            }
            if demand > sold {
                total.backlog += u.backlog * Decimal::from(demand - sold);
            }
        }
        total
    }

    /// Smallest level at or above which a base stock rule meets every
    /// demand it can still influence, so larger levels only add holding.
    pub fn saturation_level(&self) -> Qty {
        let steps = self.steps();
        if steps == 0 {
            return 0;
        }
        let max_lead = self.lead_time.iter().copied().max().unwrap_or(0) as usize;
        let width = max_lead + 2;
        let prefix: Vec<Qty> = std::iter::once(0)
            .chain(self.demand.iter().scan(0, |acc, &d| {
                *acc += d;
                Some(*acc)
            }))
            .collect();
        let window = |a: usize, b: usize| prefix[b.min(steps)] - prefix[a.min(steps)];
        let covering = (0..steps).map(|t| window(t, t + width)).max().unwrap_or(0);
        let ramp = self.start.inventory + self.start.in_transit() + window(0, max_lead + 1);
        covering.max(ramp)
    }
}
