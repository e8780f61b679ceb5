use rust_decimal::Decimal;
use rust_decimal_macros::dec;

use super::*;
use crate::data::{SkuColumns, SkuSeries};

fn standard_costs() -> CostParams {
    CostParams {
        order_cost: dec!(10),
        holding_cost: dec!(0.003),
        backlog: Charge::MarginShare(dec!(0.1)),
        overflow: Charge::CostShare(dec!(0.5)),
    }
}

fn single(demand: Vec<Qty>, lead: u32) -> SkuSeries {
    SkuSeries::from_skus(vec![SkuColumns::constant("a", demand, dec!(10), dec!(6), lead)]).unwrap()
}

#[test]
fn sell_is_capped_by_inventory() {
    let series = single(vec![5; 4], 1);
    let costs = [standard_costs()];
    let wh = [WarehouseConfig::new(1000)];
    let env = Environment::new(&series, &costs, &wh);
    let mut state = EnvState::new(1, 1, 0);
    state.inventory[0] = 3;
    let rec = step(&mut state, &[0], &env).unwrap();
    assert_eq!(rec.sale[0], 3);
    assert_eq!(rec.demand[0] - rec.sale[0], 2);
    assert_eq!(rec.backlog[0], dec!(0.8));
    assert_eq!(state.inventory[0], 0);
}

#[test]
fn uniform_receive_rations_by_free_volume() {
    // W=100, ΣI=90, ΣA=20 → γ=0.5; an SKU with A=10 keeps 5.
    let cols = (0..2)
        .map(|j| SkuColumns::constant(format!("s{j}"), vec![0; 3], dec!(10), dec!(6), 1))
        .collect();
    let series = SkuSeries::from_skus(cols).unwrap();
    let costs = [standard_costs()];
    let wh = [WarehouseConfig::new(100)];
    let env = Environment::new(&series, &costs, &wh);
    let mut state = EnvState::new(1, 2, 0);
    state.inventory = vec![45, 45];
    state.pipeline.schedule(0, 0, 10);
    state.pipeline.schedule(1, 0, 10);
    let rec = step(&mut state, &[0, 0], &env).unwrap();
    assert_eq!(
        rec.accept_ratio[0],
        AcceptRatio {
            accepted: 10,
            incoming: 20
        }
    );
    assert_eq!(rec.received, vec![5, 5]);
    assert_eq!(rec.overflow(0), 5);
    assert_eq!(rec.overflow_cost[0], dec!(15));
    assert_eq!(state.inventory, vec![50, 50]);
}

#[test]
fn no_arrivals_means_full_acceptance() {
    let series = single(vec![0; 2], 1);
    let costs = [standard_costs()];
    let wh = [WarehouseConfig::new(1)];
    let env = Environment::new(&series, &costs, &wh);
    let mut state = EnvState::new(1, 1, 0);
    state.inventory[0] = 7;
    let rec = step(&mut state, &[0], &env).unwrap();
    assert_eq!(rec.accept_ratio[0].as_f64(), 1.0);
    assert_eq!(rec.received[0], 0);
    assert_eq!(rec.overflow_cost[0], Decimal::ZERO);
}

#[test]
fn hand_evaluated_profit_through_engine() {
    // p=10, c=6, D=5, I=3 → S=3; order 4; end I=7 after receiving 7.
    let series = single(vec![5; 3], 2);
    let costs = [standard_costs()];
    let wh = [WarehouseConfig::new(1000)];
    let env = Environment::new(&series, &costs, &wh);
    let mut state = EnvState::new(1, 1, 0);
    state.inventory[0] = 3;
    state.pipeline.schedule(0, 0, 7);
    let rec = step(&mut state, &[4], &env).unwrap();
    assert_eq!(rec.inventory[0], 7);
    assert_eq!(rec.profit[0], dec!(1.179));
    assert_eq!(rec.in_transit[0], 4);
}

#[test]
fn shape_and_sign_errors_leave_state_alone() {
    let series = single(vec![1; 2], 1);
    let costs = [standard_costs()];
    let wh = [WarehouseConfig::new(10)];
    let env = Environment::new(&series, &costs, &wh);
    let mut state = EnvState::new(1, 1, 0);
    let before = state.clone();
    assert_eq!(
        step(&mut state, &[1, 2], &env),
        Err(EngineError::OrderShape { expected: 1, got: 2 })
    );
    assert_eq!(state, before);
    assert!(matches!(
        orders_from_signed(1, &[-3]),
        Err(EngineError::NegativeOrder { value: -3, .. })
    ));
    state.t = 2;
    assert!(matches!(
        step(&mut state, &[0], &env),
        Err(EngineError::HorizonExceeded { .. })
    ));
}

#[test]
fn fixed_point_when_nothing_moves() {
    let series = single(vec![0; 5], 3);
    let costs = [standard_costs()];
    let wh = [WarehouseConfig::new(100)];
    let env = Environment::new(&series, &costs, &wh);
    for engine in [step as StepFn, step_scalar_reference] {
        let mut state = EnvState::new(1, 1, 0);
        state.inventory[0] = 0;
        let mut expected = state.clone();
        engine(&mut state, &[0], &env).unwrap();
        expected.t = 1;
        expected.pipeline = Pipeline::new(1, 1);
        assert_eq!(state, expected);
    }
}

#[test]
fn orders_become_upstream_demand_and_upstream_sales_ship_down() {
    let series = single(vec![2; 4], 1);
    let costs = [standard_costs(); 2];
    let wh = [WarehouseConfig::new(1000); 2];
    let env = Environment::new(&series, &costs, &wh);
    let mut state = EnvState::new(2, 1, 0);
    state.inventory = vec![0, 10];
    let r0 = step(&mut state, &[6, 0], &env).unwrap();
    assert_eq!(state.pending_demand[1], 6);
    assert_eq!(r0.sale[1], 0, "upstream demand arrives one step later");
    let r1 = step(&mut state, &[0, 0], &env).unwrap();
    assert_eq!(r1.demand[1], 6);
    assert_eq!(r1.sale[1], 6);
    // Shipment from the upstream sale lands downstream after the lead time.
    assert_eq!(state.in_transit()[0], 6);
    assert_eq!(r1.arrival[0], 0);
    let r2 = step(&mut state, &[0, 0], &env).unwrap();
    assert_eq!(r2.arrival[0], 6);
    assert_eq!(state.inventory, vec![6, 4]);
}

#[test]
fn factory_fills_top_echelon_orders() {
    let series = single(vec![0; 4], 2);
    let costs = [standard_costs()];
    let wh = [WarehouseConfig::new(1000)];
    let env = Environment::new(&series, &costs, &wh);
    let mut state = EnvState::new(1, 1, 0);
    step(&mut state, &[9], &env).unwrap();
    assert_eq!(state.pipeline.shipments(0).collect::<Vec<_>>(), vec![(2, 9)]);
    step(&mut state, &[0], &env).unwrap();
    let rec = step(&mut state, &[0], &env).unwrap();
    assert_eq!(rec.arrival[0], 9);
    assert_eq!(state.inventory[0], 9);
}

#[test]
fn zero_lead_time_delivers_in_same_step() {
    let series = single(vec![4; 2], 0);
    let costs = [standard_costs()];
    let wh = [WarehouseConfig::new(1000)];
    let env = Environment::new(&series, &costs, &wh);
    let mut state = EnvState::new(1, 1, 0);
    let rec = step(&mut state, &[4], &env).unwrap();
    assert_eq!(rec.sale[0], 0);
    assert_eq!(rec.arrival[0], 4);
    assert_eq!(state.inventory[0], 4);
    assert!(state.pipeline.is_empty());
}

#[test]
fn reject_and_accept_all() {
    let series = single(vec![0; 2], 1);
    let costs = [standard_costs(); 2];
    let wh = [
        WarehouseConfig {
            capacity: 1,
            accept: AcceptStrategy::AcceptAll,
        },
        WarehouseConfig {
            capacity: 1000,
            accept: AcceptStrategy::RejectAll,
        },
    ];
    let env = Environment::new(&series, &costs, &wh);
    let mut state = EnvState::new(2, 1, 0);
    state.pipeline.schedule(0, 0, 50);
    state.pipeline.schedule(1, 0, 50);
    let rec = step(&mut state, &[0, 0], &env).unwrap();
    assert_eq!(rec.received, vec![50, 0]);
    assert_eq!(rec.overflow_cost[1], dec!(150));
}

#[test]
fn cover_level_rounds_up() {
    assert_eq!(cover_level(&[5, 5, 5], &[2, 2, 2]), 15);
    assert_eq!(cover_level(&[1, 2], &[1, 1]), 3);
    assert_eq!(cover_level(&[], &[]), 0);
}

/// Independent single-SKU simulation of the cover rule.
fn hand_warmup(demand: Qty, lead: usize, level: Qty, steps: usize) -> (Qty, Qty) {
    let mut inv: Qty = 0;
    let mut due = vec![0; steps + lead + 1];
    for t in 0..steps {
        let transit: Qty = due[t..].iter().sum();
        let order = level.saturating_sub(inv + transit);
        let sold = demand.min(inv);
        due[t + lead] += order;
        let arrived = std::mem::take(&mut due[t]);
        inv = inv - sold + arrived;
    }
    (inv, due[steps..].iter().sum())
}

#[test]
fn warmup_reaches_hand_simulated_position() {
    let series = single(vec![5; 200], 2);
    let costs = [standard_costs()];
    let wh = [WarehouseConfig::new(100_000)];
    let env = Environment::new(&series, &costs, &wh);
    let mut rule = CoverRule::for_window(&series, 1, 0..100);
    assert_eq!(rule.levels, vec![15]);

    let mut state = EnvState::new(1, 1, 0);
    warmup(&mut state, &mut rule, 100, &env).unwrap();
    let (inv, transit) = hand_warmup(5, 2, 15, 100);
    assert_eq!((state.inventory[0], state.in_transit()[0]), (inv, transit));
    // The order placed at the start of a step restores the position to 15;
    // the step's sale of 5 then leaves 10 on the books at the end of it.
    assert_eq!(inv + transit, 10);
    assert_eq!(state.t, 100);

    let mut again = EnvState::new(1, 1, 0);
    warmup(&mut again, &mut CoverRule::for_window(&series, 1, 0..100), 100, &env).unwrap();
    assert_eq!(again, state);

    let mut idle = EnvState::new(1, 1, 0);
    warmup(&mut idle, &mut rule, 0, &env).unwrap();
    assert_eq!(idle, EnvState::new(1, 1, 0));
}

#[test]
fn closure_rules_work() {
    let series = single(vec![1; 3], 1);
    let costs = [standard_costs()];
    let wh = [WarehouseConfig::new(10)];
    let env = Environment::new(&series, &costs, &wh);
    let mut state = EnvState::new(1, 1, 0);
    let mut rule = |_: &EnvState, _: &SkuSeries, out: &mut [Qty]| out.fill(2);
    warmup(&mut state, &mut rule, 2, &env).unwrap();
    assert_eq!(state.inventory[0], 2);
}
