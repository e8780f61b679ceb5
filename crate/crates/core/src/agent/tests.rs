use std::sync::Arc;

use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;

use super::*;
use crate::tasks::{build_task, standard_task, SplitRanges};

fn task(skus: usize, echelons: usize, warmup: usize) -> Arc<Task> {
    let mut spec = standard_task(skus, echelons);
    spec.warmup = warmup;
    spec.split = SplitRanges::proportional(200, 100);
    spec.data = crate::tasks::DataSource::Synthetic {
        seed: 3,
        horizon: 200,
        profile: Default::default(),
    };
    Arc::new(build_task(&spec, 0).unwrap())
}

fn reset(t: &Arc<Task>, split: Split) -> (Episode, Vec<f64>) {
    Episode::reset(t.clone(), split, EpisodeConfig::for_task(t).unwrap()).unwrap()
}

#[test]
fn resets_are_deterministic_and_shaped() {
    let t = task(7, 2, 30);
    let (a, obs_a) = reset(&t, Split::Test);
    let (_, obs_b) = reset(&t, Split::Test);
    assert_eq!(obs_a, obs_b);
    assert_eq!(a.features(), Feature::SKU.len() + Feature::WAREHOUSE.len());
    assert_eq!(obs_a.len(), a.agents() * a.features());
    assert_eq!(a.agents(), 14);
    assert!(obs_a.iter().all(|x| x.is_finite()));
    let names: Vec<_> = a.manifest().iter().map(|f| f.name).collect();
    assert_eq!(names[0], "in_stock");
    assert_eq!(names[9], "warehouse_remaining_space");
}

#[test]
fn remaining_space_reflects_warmed_state() {
    let t = task(7, 1, 30);
    let (ep, obs) = reset(&t, Split::Test);
    let f = ep.features();
    let col = ep
        .manifest()
        .iter()
        .position(|m| m.name == "warehouse_remaining_space")
        .unwrap();
    let w = t.warehouses[0].capacity as f64;
    let used: u64 = ep.state().inventory.iter().sum();
    let expected = (w - used as f64) / w;
    for agent in 0..ep.agents() {
        assert_eq!(obs[agent * f + col], expected);
    }
    assert!((0.0..=1.0).contains(&expected));
    assert!(used > 0);
}

#[test]
fn zero_actions_on_empty_shelves_cost_the_backlog() {
    let t = task(5, 1, 0);
    let (mut ep, _) = reset(&t, Split::Test);
    let tr = ep.step(&[0; 5]).unwrap();
    let start = t.range(Split::Test).start;
    for j in 0..5 {
        let u = t.costs()[0].resolve(t.series.price(start, j), t.series.cost(start, j));
        assert_eq!(tr.rewards[j], -u.backlog * Decimal::from(t.series.demand(start, j)));
    }
}

#[test]
fn rewards_sum_to_step_profit_and_episode_ends_on_time() {
    let t = task(6, 3, 20);
    let (mut ep, _) = reset(&t, Split::Validation);
    let len = t.range(Split::Validation).len();
    let actions: Vec<usize> = (0..ep.agents()).map(|a| a % 5).collect();
    for k in 0..len {
        assert!(!ep.is_done());
        let tr = ep.step(&actions).unwrap();
        assert_eq!(tr.rewards.iter().sum::<Decimal>(), tr.info.total_profit());
        assert_eq!(tr.done, k + 1 == len);
    }
    assert!(matches!(ep.step(&actions), Err(AgentError::Done)));
}

#[test]
fn upstream_history_records_received_orders() {
    let t = task(3, 2, 10);
    let (mut ep, _) = reset(&t, Split::Test);
    let two = ep
        .action_space()
        .multipliers()
        .iter()
        .position(|m| *m == Decimal::TWO)
        .unwrap();
    let placed = ep.orders_for(&[two; 6]).unwrap();
    ep.step(&[two; 6]).unwrap();
    let tr = ep.step(&[0; 6]).unwrap();
    assert_eq!(&tr.info.demand[3..], &placed[..3]);
    assert_eq!(ep.history().last(3, 1).next(), Some(placed[0]));
}

#[test]
fn larger_multiplier_never_orders_less() {
    let t = task(4, 2, 25);
    let (ep, _) = reset(&t, Split::Train);
    let n = ep.action_space().len();
    for a in 1..n {
        let lo = ep.orders_for(&vec![a - 1; ep.agents()]).unwrap();
        let hi = ep.orders_for(&vec![a; ep.agents()]).unwrap();
        assert!(lo.iter().zip(&hi).all(|(l, h)| l <= h));
    }
}

#[test]
fn normalized_wrapper_keeps_raw_values() {
    let t = task(3, 1, 10);
    let (ep, obs) = reset(&t, Split::Test);
    let mut norm = NormalizedEpisode::new(ep, None);
    assert_eq!(norm.start(&obs), obs);
    let tr = norm.step(&[1, 1, 1]).unwrap();
    assert_eq!(tr.rewards.len(), 3);
    assert_eq!(
        tr.raw.rewards_f64(),
        tr.raw.rewards.iter().map(|r| r.to_f64().unwrap()).collect::<Vec<_>>()
    );
    assert!(tr.observations.iter().all(|x| x.is_finite()));
}

#[test]
fn empty_split_is_rejected() {
    let mut spec = standard_task(2, 1);
    spec.data = crate::tasks::DataSource::Synthetic {
        seed: 1,
        horizon: 50,
        profile: Default::default(),
    };
    spec.split = SplitRanges {
        train: crate::tasks::StepRange::new(0, 40),
        validation: crate::tasks::StepRange::new(40, 40),
        test: crate::tasks::StepRange::new(40, 50),
    };
    let t = Arc::new(build_task(&spec, 0).unwrap());
    let cfg = EpisodeConfig::for_task(&t).unwrap();
    assert!(matches!(
        Episode::reset(t, Split::Validation, cfg),
        Err(AgentError::EmptySplit(_))
    ));
}
