use rust_decimal::Decimal;

use super::{AcceptRatio, AcceptStrategy, EngineError, EnvState, Environment, Qty, StepRecord};

/// Reference implementation of [`super::step`] written as plain per-cell
/// loops. It shares no intermediate buffers with the matrix path and is only
/// meant for cross-checking it.
pub fn step_scalar_reference(
    state: &mut EnvState,
    orders: &[Qty],
    env: &Environment<'_>,
) -> Result<StepRecord, EngineError> {
    env.check(state, orders)?;
    let t = state.t;
    let m = state.warehouses();
    let n = state.skus();
    let cells = m * n;
    let series = env.series;

    let mut rec = StepRecord {
        t,
        warehouses: m,
        skus: n,
        demand: vec![0; cells],
        sale: vec![0; cells],
        arrival: vec![0; cells],
        received: vec![0; cells],
        order: vec![0; cells],
        inventory: vec![0; cells],
        in_transit: vec![0; cells],
        income: vec![Decimal::ZERO; cells],
        procurement: vec![Decimal::ZERO; cells],
        overflow_cost: vec![Decimal::ZERO; cells],
        order_cost: vec![Decimal::ZERO; cells],
        holding: vec![Decimal::ZERO; cells],
        backlog: vec![Decimal::ZERO; cells],
        profit: vec![Decimal::ZERO; cells],
        free_volume: vec![0; m],
        accept_ratio: Vec::with_capacity(m),
    };

    for i in 0..m {
        for j in 0..n {
            let c = i * n + j;
            rec.order[c] = orders[c];
            rec.demand[c] = if i == 0 {
                series.demand(t, j)
            } else {
                state.pending_demand[c]
            };
            let on_hand = state.inventory[c];
            rec.sale[c] = if rec.demand[c] < on_hand {
                rec.demand[c]
            } else {
                on_hand
            };
        }
    }

    for i in 0..m {
        for j in 0..n {
            let shipped = if i == m - 1 {
                orders[i * n + j]
            } else {
                rec.sale[(i + 1) * n + j]
            };
            if shipped > 0 {
                let arrives = t + series.lead_time(t, j) as usize;
                state.pipeline.schedule(i * n + j, arrives, shipped);
            }
        }
    }

    for c in 0..cells {
        rec.arrival[c] = state.pipeline.take_due_cell(c, t);
    }
    state.pipeline.advance(t);

    for i in 0..m {
        let wh = env.warehouses[i];
        let mut stored: u128 = 0;
        let mut incoming: u128 = 0;
        for j in 0..n {
            let vol = series.volume(j) as u128;
            stored += vol * state.inventory[i * n + j] as u128;
            incoming += vol * rec.arrival[i * n + j] as u128;
        }
        let free = (wh.capacity as u128).saturating_sub(stored);
        rec.free_volume[i] = free as u64;
        let (num, den) = match wh.accept {
            AcceptStrategy::AcceptAll => (incoming, incoming),
            AcceptStrategy::RejectAll => (0, incoming),
            AcceptStrategy::UniformProportional if free < incoming => (free, incoming),
            AcceptStrategy::UniformProportional => (incoming, incoming),
        };
        rec.accept_ratio.push(AcceptRatio {
            accepted: num as u64,
            incoming: den as u64,
        });
        for j in 0..n {
            let a = rec.arrival[i * n + j];
            rec.received[i * n + j] = if num == den {
                a
            } else {
                ((a as u128 * num) / den) as Qty
            };
        }
    }

    for c in 0..cells {
        state.inventory[c] = state.inventory[c] + rec.received[c] - rec.sale[c];
        rec.inventory[c] = state.inventory[c];
        rec.in_transit[c] = state.pipeline.shipments(c).map(|(_, q)| q).sum();
    }
    for c in 0..cells {
        state.pending_demand[c] = if c < n { rec.demand[c] } else { orders[c - n] };
    }
    state.t = t + 1;

    for i in 0..m {
        let params = env.costs[i];
        for j in 0..n {
            let c = i * n + j;
            let u = params.resolve(series.price(t, j), series.cost(t, j));
            rec.income[c] = u.price * Decimal::from(rec.sale[c]);
            rec.procurement[c] = u.procurement * Decimal::from(rec.sale[c]);
            rec.overflow_cost[c] = u.overflow * Decimal::from(rec.arrival[c] - rec.received[c]);
            rec.order_cost[c] = if rec.order[c] > 0 { u.order } else { Decimal::ZERO };
            rec.holding[c] = u.holding * Decimal::from(rec.inventory[c]);
            rec.backlog[c] = u.backlog * Decimal::from(rec.demand[c] - rec.sale[c]);
            rec.profit[c] = rec.income[c]
                - (rec.procurement[c] + rec.overflow_cost[c] + rec.order_cost[c] + rec.holding[c] + rec.backlog[c]);
        }
    }

    Ok(rec)
}
