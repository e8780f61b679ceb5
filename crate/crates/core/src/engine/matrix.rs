use rust_decimal::Decimal;

use super::{AcceptRatio, AcceptStrategy, EngineError, EnvState, Environment, Qty, StepRecord};

/// Advances `state` by one step under `orders` (one entry per cell, row-major
/// by echelon) and returns the step's ledger.
///
/// The state is left untouched when an error is returned.
pub fn step(state: &mut EnvState, orders: &[Qty], env: &Environment<'_>) -> Result<StepRecord, EngineError> {
    env.check(state, orders)?;
    let t = state.t;
    let m = state.warehouses();
    let n = state.skus();
    let cells = m * n;
    let series = env.series;
    let volumes = series.volumes();

    // Replenish: consumer demand for row 0, downstream orders already sit in
    // the upper rows.
    state.pending_demand[..n].copy_from_slice(series.demand_at(t));
    let demand = state.pending_demand.clone();

    // Sell.
    let sale: Vec<Qty> = demand.iter().zip(&state.inventory).map(|(&d, &i)| d.min(i)).collect();

    // Shipments out of upstream sales (the factory fills the top row's orders).
    let leads = series.lead_time_at(t);
    for i in 0..m {
        let source = if i + 1 < m {
            &sale[(i + 1) * n..(i + 2) * n]
        } else {
            &orders[i * n..(i + 1) * n]
        };
        for (j, (&qty, &lead)) in source.iter().zip(leads).enumerate() {
            if qty > 0 {
                state.pipeline.schedule(i * n + j, t + lead as usize, qty);
            }
        }
    }

    // Arrive.
    let arrival = state.pipeline.take_due(t);

    // Receive.
    let mut received = vec![0; cells];
    let mut free_volume = Vec::with_capacity(m);
    let mut accept_ratio = Vec::with_capacity(m);
    for (i, wh) in env.warehouses.iter().enumerate() {
        let row = i * n..(i + 1) * n;
        let stored = weighted_sum(&state.inventory[row.clone()], volumes);
        let incoming = weighted_sum(&arrival[row.clone()], volumes);
        let free = (wh.capacity as u128).saturating_sub(stored);
        free_volume.push(free as u64);
        let out = &mut received[row.clone()];
        let inc = &arrival[row];
        match wh.accept {
            AcceptStrategy::AcceptAll => {
                out.copy_from_slice(inc);
                accept_ratio.push(ratio(incoming, incoming));
            }
            AcceptStrategy::RejectAll => {
                accept_ratio.push(ratio(0, incoming));
            }
            AcceptStrategy::UniformProportional => {
                if free >= incoming {
                    out.copy_from_slice(inc);
                    accept_ratio.push(ratio(incoming, incoming));
                } else {
                    for (b, &a) in out.iter_mut().zip(inc) {
                        *b = (a as u128 * free / incoming) as Qty;
                    }
                    accept_ratio.push(ratio(free, incoming));
                }
            }
        }
    }

    // Update.
    for ((inv, &s), &b) in state.inventory.iter_mut().zip(&sale).zip(&received) {
        *inv = *inv - s + b;
    }
    state.pending_demand[n..].copy_from_slice(&orders[..cells - n]);
    state.t = t + 1;

    // Profit.
    let prices = series.price_at(t);
    let unit_costs = series.cost_at(t);
    let mut income = Vec::with_capacity(cells);
    let mut procurement = Vec::with_capacity(cells);
    let mut overflow_cost = Vec::with_capacity(cells);
    let mut order_cost = Vec::with_capacity(cells);
    let mut holding = Vec::with_capacity(cells);
    let mut backlog = Vec::with_capacity(cells);
    let mut profit = Vec::with_capacity(cells);
    for (i, params) in env.costs.iter().enumerate() {
        for j in 0..n {
            let c = i * n + j;
            let u = params.resolve(prices[j], unit_costs[j]);
            let sold = Decimal::from(sale[c]);
            let inc = u.price * sold;
            let proc = u.procurement * sold;
            let over = match arrival[c] - received[c] {
                0 => Decimal::ZERO,
                q => u.overflow * Decimal::from(q),
            };
            let ord = if orders[c] > 0 { u.order } else { Decimal::ZERO };
            let hold = u.holding * Decimal::from(state.inventory[c]);
            let back = match demand[c] - sale[c] {
                0 => Decimal::ZERO,
                q => u.backlog * Decimal::from(q),
            };
            profit.push(inc - proc - over - ord - hold - back);
            income.push(inc);
            procurement.push(proc);
            overflow_cost.push(over);
            order_cost.push(ord);
            holding.push(hold);
            backlog.push(back);
        }
    }

    Ok(StepRecord {
        t,
        warehouses: m,
        skus: n,
        demand,
        sale,
        arrival,
        received,
        order: orders.to_vec(),
        inventory: state.inventory.clone(),
        in_transit: state.pipeline.in_transit().to_vec(),
        income,
        procurement,
        overflow_cost,
        order_cost,
        holding,
        backlog,
        profit,
        free_volume,
        accept_ratio,
    })
}

#[inline]
fn weighted_sum(qty: &[Qty], volumes: &[u32]) -> u128 {
    qty.iter().zip(volumes).map(|(&q, &v)| q as u128 * v as u128).sum()
}

fn ratio(accepted: u128, incoming: u128) -> AcceptRatio {
    AcceptRatio {
        accepted: accepted as u64,
        incoming: incoming as u64,
    }
}
