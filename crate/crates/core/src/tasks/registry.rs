use rust_decimal::Decimal;

use super::spec::{CapacityRule, DataSource, SplitRanges, TaskSpec, Transforms};
use crate::data::SyntheticProfile;
use crate::engine::{AcceptStrategy, Charge, CostParams};

/// Seed of the synthetic data behind every built-in task.
pub const BUILTIN_DATA_SEED: u64 = 7;
/// Steps of synthetic data behind every built-in task.
pub const BUILTIN_HORIZON: usize = 830;
/// Warmup length of the built-in tasks; also the number of leading steps
/// reserved before the training split.
pub const BUILTIN_WARMUP: usize = 100;

/// The standard cost set: order cost 10, holding 0.002 + 0.001, backlog
/// 10% of the margin and overflow half the procurement cost.
pub fn standard_costs() -> CostParams {
    CostParams {
        order_cost: Decimal::from(10),
        holding_cost: Decimal::new(2, 3) + Decimal::new(1, 3),
        backlog: Charge::MarginShare(Decimal::new(1, 1)),
        overflow: Charge::CostShare(Decimal::new(5, 1)),
    }
}

/// The standard task shape for `skus` SKUs over `echelons` warehouses.
pub fn standard_task(skus: usize, echelons: usize) -> TaskSpec {
    TaskSpec {
        name: format!("sku{skus}.{}.standard", stores(echelons)),
        echelons,
        skus,
        capacity: CapacityRule::PerSku(100),
        accept: AcceptStrategy::UniformProportional,
        warmup: BUILTIN_WARMUP,
        data: DataSource::Synthetic {
            seed: BUILTIN_DATA_SEED,
            horizon: BUILTIN_HORIZON,
            profile: SyntheticProfile::default(),
        },
        costs: vec![standard_costs(); echelons],
        split: SplitRanges::proportional(BUILTIN_HORIZON, BUILTIN_WARMUP),
        transforms: Transforms::default(),
        actions: Default::default(),
        policy: Default::default(),
    }
}

fn stores(echelons: usize) -> String {
    match echelons {
        1 => "single_store".into(),
        m => format!("{m}_stores"),
    }
}

fn variant(skus: usize, echelons: usize, suffix: &str, edit: impl FnOnce(&mut TaskSpec)) -> TaskSpec {
    let mut spec = standard_task(skus, echelons);
    spec.name = format!("sku{skus}.{}.{suffix}", stores(echelons));
    edit(&mut spec);
    spec
}

fn scale_costs(spec: &mut TaskSpec, edit: impl Fn(&mut CostParams)) {
    spec.costs.iter_mut().for_each(edit);
}

fn scaled(charge: Charge, k: Decimal) -> Charge {
    match charge {
        Charge::Fixed(v) => Charge::Fixed(v * k),
        Charge::MarginShare(v) => Charge::MarginShare(v * k),
        Charge::CostShare(v) => Charge::CostShare(v * k),
    }
}

/// All 51 built-in tasks.
pub fn builtin_tasks() -> Vec<TaskSpec> {
    let two = Decimal::from(2);
    let five = Decimal::from(5);
    let mut tasks = Vec::with_capacity(51);

    for skus in [50, 100, 200, 500, 1000, 2000] {
        for echelons in 1..=3 {
            tasks.push(standard_task(skus, echelons));
        }
    }
    for echelons in 1..=3 {
        tasks.push(variant(200, echelons, "lower_capacity", |s| {
            s.capacity = CapacityRule::PerSku(50)
        }));
        tasks.push(variant(200, echelons, "lowest_capacity", |s| {
            s.capacity = CapacityRule::PerSku(25)
        }));
    }
    for echelons in 1..=3 {
        tasks.push(variant(200, echelons, "dynamic_vlt", |s| {
            s.transforms.dynamic_lead_time = true
        }));
    }
    tasks.push(variant(200, 1, "increase_demand", |s| {
        s.transforms.test_demand_scale = 1.5
    }));
    tasks.push(variant(200, 1, "decrease_demand", |s| {
        s.transforms.test_demand_scale = 0.5
    }));
    for (suffix, k) in [("higher", two), ("highest", five)] {
        tasks.push(variant(200, 1, &format!("{suffix}_backlog"), |s| {
            scale_costs(s, |c| c.backlog = scaled(c.backlog, k))
        }));
    }
    for (suffix, k) in [("higher", two), ("highest", five)] {
        tasks.push(variant(200, 1, &format!("{suffix}_holding_cost"), |s| {
            scale_costs(s, |c| c.holding_cost *= k)
        }));
    }
    for (suffix, k) in [("higher", two), ("highest", five)] {
        tasks.push(variant(200, 1, &format!("{suffix}_order_cost"), |s| {
            scale_costs(s, |c| c.order_cost *= k)
        }));
    }
    tasks.push(variant(200, 1, "low_profit", |s| {
        s.transforms.margin_scale = Decimal::new(5, 1)
    }));
    tasks.push(variant(200, 1, "high_profit", |s| s.transforms.margin_scale = two));
    for (suffix, k) in [("higher", two), ("highest", five)] {
        tasks.push(variant(200, 1, &format!("{suffix}_overflow_cost"), |s| {
            scale_costs(s, |c| c.overflow = scaled(c.overflow, k))
        }));
    }
    for g in 1..=6u8 {
        tasks.push(variant(200, 1, &format!("add_gap_{g}"), |s| s.transforms.gap = g));
    }
    for n in 1..=6u8 {
        tasks.push(variant(200, 1, &format!("add_noise_{n}"), |s| s.transforms.noise = n));
    }
    tasks
}

pub fn task_names() -> Vec<String> {
    builtin_tasks().into_iter().map(|t| t.name).collect()
}

/// Up to three registry names closest to `name` by edit distance.
pub fn nearest_names(name: &str) -> Vec<String> {
    let mut scored: Vec<(usize, String)> = task_names()
        .into_iter()
        .map(|n| (strsim::levenshtein(name, &n), n))
        .collect();
    scored.sort();
    scored.into_iter().take(3).map(|(_, n)| n).collect()
}
