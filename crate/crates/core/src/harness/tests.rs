use std::sync::Arc;

use super::*;
use crate::agent::{Episode, EpisodeConfig};
use crate::data::SyntheticProfile;
use crate::tasks::{build_task, standard_task, DataSource, SplitRanges, TaskSpec};

fn spec(skus: usize, echelons: usize, profile: SyntheticProfile) -> TaskSpec {
    let mut spec = standard_task(skus, echelons);
    spec.name = format!("test.{skus}.{echelons}");
    spec.warmup = 20;
    spec.data = DataSource::Synthetic {
        seed: 11,
        horizon: 160,
        profile,
    };
    spec.split = SplitRanges::proportional(160, 20);
    spec
}

fn task(skus: usize, echelons: usize) -> Task {
    build_task(&spec(skus, echelons, SyntheticProfile::default()), 0).unwrap()
}

#[test]
fn never_ordering_on_zero_demand_scores_zero() {
    let profile = SyntheticProfile {
        demand_rate: [0.0, 0.0],
        ..Default::default()
    };
    let t = build_task(&spec(4, 2, profile), 0).unwrap();
    let r = run(&t, &PolicyKind::Never, Split::Test, &RunOptions::default()).unwrap();
    assert_eq!(r.metric, Decimal::ZERO);
    assert_eq!(r.records.len(), t.range(Split::Test).len());
}

#[test]
fn metric_matches_records_and_ledgers() {
    let t = task(5, 2);
    let r = run(&t, &PolicyKind::SsStatic, Split::Test, &RunOptions::default()).unwrap();
    let total: Decimal = r.records.iter().map(|s| s.total_profit()).sum();
    assert_eq!(r.metric, total / Decimal::from(10));

    let dir = tempfile::tempdir().unwrap();
    emit_report(&r, dir.path()).unwrap();
    assert_eq!(metric_from_ledgers(dir.path()).unwrap(), r.metric);
    for i in 0..2 {
        assert_eq!(read_ledger(dir.path(), i).unwrap().len(), r.records.len() * 5);
    }
    let first = std::fs::read(report::ledger_path(dir.path(), 1)).unwrap();
    let again = run(&t, &PolicyKind::SsStatic, Split::Test, &RunOptions::default()).unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    emit_report(&again, dir2.path()).unwrap();
    assert_eq!(std::fs::read(report::ledger_path(dir2.path(), 1)).unwrap(), first);

    let index = std::fs::read_to_string(dir.path().join("index.html")).unwrap();
    assert!(index.contains(&total.to_string()), "summary shows the CSV total");
    assert!(dir.path().join("warehouse_1.html").exists());
}

#[test]
fn gmv_sums_sales_at_price() {
    use crate::engine::{step, Environment, WarehouseConfig};
    let series = crate::data::SkuSeries::from_skus(vec![crate::data::SkuColumns::constant(
        "a",
        vec![5],
        Decimal::from(10),
        Decimal::from(6),
        1,
    )])
    .unwrap();
    let costs = [crate::tasks::standard_costs()];
    let wh = [WarehouseConfig::new(100)];
    let mut state = EnvState::new(1, 1, 0);
    state.inventory[0] = 3;
    let rec = step(&mut state, &[0], &Environment::new(&series, &costs, &wh)).unwrap();
    assert_eq!(compute_gmv(std::slice::from_ref(&rec), 1), vec![Decimal::from(30)]);
    assert_eq!(compute_gmv(&[], 1), vec![Decimal::ZERO]);
    assert_eq!(holding_share(&[rec], 1)[0], Some(Decimal::ZERO));
}

#[test]
fn external_streams_replay_exactly() {
    let t = Arc::new(task(3, 2));
    let range = t.range(Split::Validation).range();
    let dir = tempfile::tempdir().unwrap();

    // Action stream: the harness must match an episode driven by the same actions.
    let path = dir.path().join("actions.csv");
    let mut text = String::from("step,warehouse,sku,action\n");
    for step in range.clone() {
        for w in 0..2 {
            for (j, id) in t.series.ids().iter().enumerate() {
                text.push_str(&format!("{step},{w},{id},{}\n", (step + j + w) % 6));
            }
        }
    }
    std::fs::write(&path, &text).unwrap();
    let r = run(
        &t,
        &PolicyKind::External(path),
        Split::Validation,
        &RunOptions::default(),
    )
    .unwrap();
    let (mut ep, _) = Episode::reset(t.clone(), Split::Validation, EpisodeConfig::for_task(&t).unwrap()).unwrap();
    for (k, step) in range.clone().enumerate() {
        let actions: Vec<usize> = (0..6).map(|c| (step + c % 3 + c / 3) % 6).collect();
        assert_eq!(ep.step(&actions).unwrap().info, r.records[k]);
    }

    // Order stream: replaying a run's own orders reproduces it.
    let path = dir.path().join("orders.csv");
    let mut text = String::from("step,warehouse,sku,order\n");
    for rec in &r.records {
        for c in 0..6 {
            text.push_str(&format!(
                "{},{},{},{}\n",
                rec.t,
                c / 3,
                t.series.ids()[c % 3],
                rec.order[c]
            ));
        }
    }
    std::fs::write(&path, &text).unwrap();
    let replay = run(
        &t,
        &PolicyKind::External(path),
        Split::Validation,
        &RunOptions::default(),
    )
    .unwrap();
    assert_eq!(replay.records, r.records);
}

#[test]
fn incompatible_parameters_are_rejected() {
    let t = task(3, 2);
    let wrong_kind = RunOptions {
        params: Some(PolicyParams::Ss(vec![(0, 1); 6])),
        ..Default::default()
    };
    assert!(matches!(
        run(&t, &PolicyKind::BaseStockStatic, Split::Test, &wrong_kind),
        Err(HarnessError::Incompatible(_))
    ));
    let one_echelon = RunOptions {
        params: Some(PolicyParams::BaseStock(vec![5; 3])),
        ..Default::default()
    };
    assert!(matches!(
        run(&t, &PolicyKind::BaseStockStatic, Split::Test, &one_echelon),
        Err(HarnessError::Incompatible(_))
    ));
    assert!(matches!(
        run(&t, &PolicyKind::SsHindsight, Split::Train, &RunOptions::default()),
        Err(HarnessError::Policy(PolicyError::Incompatible { .. }))
    ));
}

#[test]
fn long_refresh_interval_is_static() {
    let mut s = spec(4, 1, SyntheticProfile::default());
    s.policy.refresh_interval = 1000;
    let t = build_task(&s, 0).unwrap();
    let stat = run(&t, &PolicyKind::BaseStockStatic, Split::Test, &RunOptions::default()).unwrap();
    let dynamic = run(&t, &PolicyKind::BaseStockDynamic, Split::Test, &RunOptions::default()).unwrap();
    assert_eq!(stat.records, dynamic.records);
}

#[test]
fn dynamic_refresh_reads_only_the_past() {
    let t = task(3, 1);
    let start = t.range(Split::Test).start;
    let mut rule = DynamicBaseStock::new(&t, start, 5);
    let mut state = t.warm_state(Split::Test, |_| {}).unwrap();
    let env = t.environment();
    let mut orders = vec![0; 3];
    for _ in 0..12 {
        rule.orders(&state, &t.series, &mut orders);
        crate::engine::step(&mut state, &orders, &env).unwrap();
    }
    let steps: Vec<usize> = rule.refreshes().iter().map(|(s, _)| *s).collect();
    assert_eq!(steps, vec![start + 5, start + 10]);
    let (at, levels) = &rule.refreshes()[0];
    let view = t.history_before(*at);
    assert_eq!(view.eval_range().end, *at);
    assert_eq!(
        levels,
        &policy::solve_base_stock(&view, t.costs(), t.spec.policy.base_stock_cap)
    );
}

#[test]
fn engines_agree_under_the_harness() {
    let t = task(4, 3);
    let a = run(&t, &PolicyKind::SsStatic, Split::Validation, &RunOptions::default()).unwrap();
    let b = run(
        &t,
        &PolicyKind::SsStatic,
        Split::Validation,
        &RunOptions {
            engine: EngineKind::Scalar,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(a.records, b.records);
    let bench = benchmark_throughput(&t, Split::Test, EngineKind::Matrix, 3, None, || {
        Box::new(cover_rule_for(&t, Split::Test))
    })
    .unwrap();
    assert_eq!(bench.samples.len(), 3);
    assert!(bench.median > 0.0);
}
