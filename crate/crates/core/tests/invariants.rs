mod common;

use proptest::prelude::*;
use rust_decimal::Decimal;

use common::{check_conservation, fuzz_instance};
use invsim::agent::{ActionSpace, DemandHistory, RollingStats};
use invsim::data::{SkuColumns, SkuSeries};
use invsim::engine::{step, step_scalar_reference, Charge, CostParams};
use invsim::policy::{solve_base_stock, solve_ss};
use invsim::tasks::{PolicySettings, SeriesView};

fn costs(order_cost: i64, holding_milli: i64) -> CostParams {
    CostParams {
        order_cost: Decimal::from(order_cost),
        holding_cost: Decimal::new(holding_milli, 3),
        backlog: Charge::MarginShare(Decimal::new(1, 1)),
        overflow: Charge::CostShare(Decimal::new(5, 1)),
    }
}

fn demand_series(columns: &[Vec<u64>], lead: u32) -> SkuSeries {
    SkuSeries::from_skus(
        columns
            .iter()
            .enumerate()
            .map(|(j, d)| SkuColumns::constant(format!("s{j}"), d.clone(), Decimal::from(10), Decimal::from(6), lead))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engines_agree_and_conserve(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=20, t in 1usize..=50) {
        let inst = fuzz_instance(seed, m, n, t);
        let env = inst.env();
        let mut a = inst.state.clone();
        let mut b = inst.state.clone();
        for orders in &inst.orders {
            let before = a.clone();
            let ra = step(&mut a, orders, &env).unwrap();
            let rb = step_scalar_reference(&mut b, orders, &env).unwrap();
            prop_assert_eq!(&ra, &rb);
            prop_assert_eq!(&a, &b);
            if let Err(e) = check_conservation(&inst, &before, &ra, &a) {
                prop_assert!(false, "{}", e);
            }
        }
    }

    #[test]
    fn larger_actions_never_order_less(
        window in prop::collection::vec(prop::collection::vec(0u64..500, 3), 0..30),
        a in 0usize..13,
        b in 0usize..13,
    ) {
        let space = ActionSpace::from_spec(&Default::default()).unwrap();
        let mut history = DemandHistory::new(3, space.window());
        for row in &window {
            history.push(row);
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let q_lo = space.convert(&[lo; 3], &history).unwrap();
        let q_hi = space.convert(&[hi; 3], &history).unwrap();
        prop_assert!(q_lo.iter().zip(&q_hi).all(|(x, y)| x <= y));
    }

    #[test]
    fn rolling_stats_match_direct_computation(xs in prop::collection::vec(-1e3f64..1e3, 1..60)) {
        let mut stats = RollingStats::new(None);
        for &x in &xs {
            stats.update(x);
        }
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        prop_assert!((stats.mean() - mean).abs() < 1e-6);
        prop_assert!((stats.std() - var.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn searches_are_deterministic_and_per_sku(
        demand in prop::collection::vec(0u64..25, 40),
        lead in 0u32..4,
        order_cost in 0i64..30,
    ) {
        let single = demand_series(std::slice::from_ref(&demand), lead);
        let pair = demand_series(&[demand.clone(), demand], lead);
        let c = [costs(order_cost, 3)];
        let settings = PolicySettings::default();
        let v1 = SeriesView::new(&single, 0..10, 10..40);
        let v2 = SeriesView::new(&pair, 0..10, 10..40);

        let z = solve_base_stock(&v1, &c, 30);
        prop_assert_eq!(&z, &solve_base_stock(&v1, &c, 30));
        prop_assert_eq!(solve_base_stock(&v2, &c, 30), vec![z[0], z[0]]);

        let ss = solve_ss(&v1, None, &c, &settings);
        prop_assert_eq!(&ss, &solve_ss(&v1, None, &c, &settings));
        prop_assert_eq!(solve_ss(&v2, None, &c, &settings), vec![ss[0], ss[0]]);
        prop_assert!(ss[0].0 <= ss[0].1);
    }
}
