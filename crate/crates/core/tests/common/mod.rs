//! Random engine instances shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rust_decimal::Decimal;

use invsim::data::{SkuColumns, SkuSeries};
use invsim::engine::{AcceptStrategy, Charge, CostParams, EnvState, Environment, StepRecord, WarehouseConfig};
use invsim::Qty;

pub struct Instance {
    pub series: SkuSeries,
    pub costs: Vec<CostParams>,
    pub warehouses: Vec<WarehouseConfig>,
    pub state: EnvState,
    /// One order matrix per step.
    pub orders: Vec<Vec<Qty>>,
}

impl Instance {
    pub fn env(&self) -> Environment<'_> {
        Environment::new(&self.series, &self.costs, &self.warehouses)
    }

    pub fn steps(&self) -> usize {
        self.orders.len()
    }
}

fn cents(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Decimal {
    Decimal::new(rng.gen_range(lo..=hi), 2)
}

/// A random instance with `m` echelons, `n` SKUs and `t` steps. Capacities
/// range from scarce to ample so that every receive branch is exercised.
pub fn fuzz_instance(seed: u64, m: usize, n: usize, t: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let skus = (0..n)
        .map(|j| {
            let cost: Vec<Decimal> = (0..t).map(|_| cents(&mut rng, 50, 2_000)).collect();
            let price = cost.iter().map(|c| c + cents(&mut rng, -100, 1_500)).collect();
            let max_lead = rng.gen_range(0..=4);
            SkuColumns {
                id: format!("sku{j}"),
                demand: (0..t)
                    .map(|_| if rng.gen_bool(0.2) { 0 } else { rng.gen_range(0..=30) })
                    .collect(),
                price,
                cost,
                lead_time: (0..t).map(|_| rng.gen_range(0..=max_lead)).collect(),
                volume: rng.gen_range(1..=3),
            }
        })
        .collect();
    let series = SkuSeries::from_skus(skus).expect("well-formed columns");
    let costs = (0..m)
        .map(|_| CostParams {
            order_cost: cents(&mut rng, 0, 2_000),
            holding_cost: Decimal::new(rng.gen_range(0..=50), 3),
            backlog: match rng.gen_range(0..3) {
                0 => Charge::Fixed(cents(&mut rng, 0, 300)),
                1 => Charge::MarginShare(Decimal::new(rng.gen_range(0..=10), 1)),
                _ => Charge::CostShare(Decimal::new(rng.gen_range(0..=10), 1)),
            },
            overflow: Charge::CostShare(Decimal::new(rng.gen_range(0..=10), 1)),
        })
        .collect();
    let warehouses = (0..m)
        .map(|_| WarehouseConfig {
            capacity: [0, 10, 50, 200, 1_000, 100_000][rng.gen_range(0..6)] * n as u64 / 4,
            accept: match rng.gen_range(0..6) {
                0 => AcceptStrategy::RejectAll,
                1 => AcceptStrategy::AcceptAll,
                _ => AcceptStrategy::UniformProportional,
            },
        })
        .collect();
    let mut state = EnvState::new(m, n, 0);
    for c in 0..m * n {
        state.inventory[c] = rng.gen_range(0..=60);
        state.pending_demand[c] = rng.gen_range(0..=20);
        for _ in 0..rng.gen_range(0..3) {
            state.pipeline.schedule(c, rng.gen_range(0..6), rng.gen_range(1..=25));
        }
    }
    let orders = (0..t)
        .map(|_| {
            (0..m * n)
                .map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(0..=40) })
                .collect()
        })
        .collect();
    Instance {
        series,
        costs,
        warehouses,
        state,
        orders,
    }
}

/// Checks one step's ledger against the state before and after it.
pub fn check_conservation(
    inst: &Instance,
    before: &EnvState,
    rec: &StepRecord,
    after: &EnvState,
) -> Result<(), String> {
    let (m, n) = (before.warehouses(), before.skus());
    let vol = inst.series.volumes();
    for i in 0..m {
        let mut held: u128 = 0;
        let mut received: u128 = 0;
        for (j, &v) in vol.iter().enumerate() {
            let c = i * n + j;
            let v = v as u128;
            held += v * before.inventory[c] as u128;
            received += v * rec.received[c] as u128;
            if after.inventory[c] != before.inventory[c] - rec.sale[c] + rec.received[c] {
                return Err(format!("t={} cell {c}: inventory not conserved", rec.t));
            }
            if rec.inventory[c] != after.inventory[c] {
                return Err(format!("t={} cell {c}: ledger inventory differs from state", rec.t));
            }
            if rec.sale[c] > rec.demand[c].min(before.inventory[c]) || rec.received[c] > rec.arrival[c] {
                return Err(format!("t={} cell {c}: sale or receipt out of bounds", rec.t));
            }
            let b = rec.breakdown(c);
            let recomposed = b.income - b.procurement - b.overflow - b.order - b.holding - b.backlog;
            if recomposed != rec.profit[c] || b.total() != rec.profit[c] {
                return Err(format!(
                    "t={} cell {c}: profit {} != components {recomposed}",
                    rec.t, rec.profit[c]
                ));
            }
        }
        for j in 0..n {
            let c = i * n + j;
            let shipped = if i + 1 < m { rec.sale[c + n] } else { rec.order[c] };
            if after.in_transit()[c] + rec.arrival[c] != before.in_transit()[c] + shipped {
                return Err(format!("t={} cell {c}: pipeline not conserved", rec.t));
            }
        }
        if !rec.accept_ratio[i].within_unit_interval() {
            return Err(format!("t={} warehouse {i}: gamma outside [0, 1]", rec.t));
        }
        let free = (inst.warehouses[i].capacity as u128).saturating_sub(held);
        let bounded = match inst.warehouses[i].accept {
            AcceptStrategy::AcceptAll => true,
            _ => received <= free,
        };
        if !bounded {
            return Err(format!(
                "t={} warehouse {i}: received volume {received} exceeds free {free}",
                rec.t
            ));
        }
    }
    Ok(())
}
