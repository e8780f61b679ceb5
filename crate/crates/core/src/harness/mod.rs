//! Experiment runs, the evaluation metric, reports and throughput
//! measurement.
//!
//! The metric of a run is the mean over agents of per-step profit, summed
//! over the run's steps: `Σ_t Σ_{i,j} profit / (M·N)`, in exact decimals.

mod external;
pub mod report;

use std::ops::Range;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rust_decimal::Decimal;

pub use external::{ExternalStream, StreamKind};
pub use report::{emit_report, metric_from_ledgers, read_ledger, read_meta, render_html, ReportRow, RunMeta};

use crate::agent::{ActionSpace, AgentError, DemandHistory};
use crate::engine::{CoverRule, EngineError, EngineKind, EnvState, OrderRule, Qty, StepRecord};
use crate::policy::{
    self, read_params, BaseStockPolicy, DynamicBaseStock, NeverOrder, ParamsError, PolicyError, PolicyKind,
    PolicyParams, SsMode, SsPolicy,
};
use crate::tasks::{Split, Task, TaskError};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error("policy parameters: {0}")]
    Params(#[from] ParamsError),
    #[error("external stream, row {row}: {message}")]
    External { row: usize, message: String },
    #[error("incompatible policy: {0}")]
    Incompatible(String),
    #[error("report: {0}")]
    Report(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// How a run obtains its decisions and which engine it drives.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub engine: EngineKind,
    /// Precomputed parameters; fitted on the fly when absent.
    pub params: Option<PolicyParams>,
    /// Parameter file, read when `params` is absent.
    pub params_file: Option<PathBuf>,
}

/// Outcome of one (task, policy, split, seed) run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub task: String,
    pub policy: String,
    pub split: Split,
    pub seed: u64,
    pub range: Range<usize>,
    pub echelons: usize,
    pub skus: usize,
    pub sku_ids: Vec<String>,
    pub records: Vec<StepRecord>,
    pub metric: Decimal,
    /// Fitting plus simulation.
    pub wall_clock: Duration,
    /// Largest engine allocation seen: state matrices plus one step ledger.
    pub memory_bytes: usize,
}

impl RunResult {
    pub fn agents(&self) -> usize {
        self.echelons * self.skus
    }

    /// Per-cell gross merchandise volume `Σ_t S·p`.
    pub fn gmv(&self) -> Vec<Decimal> {
        compute_gmv(&self.records, self.agents())
    }
}

/// `Σ_t Σ_cells profit / agents`.
pub fn metric(records: &[StepRecord], agents: usize) -> Decimal {
    let total: Decimal = records.iter().flat_map(|r| r.profit.iter()).sum();
    total / Decimal::from(agents.max(1))
}

/// Per-cell `Σ_t S·p`, read off the income column.
pub fn compute_gmv(records: &[StepRecord], cells: usize) -> Vec<Decimal> {
    let mut gmv = vec![Decimal::ZERO; cells];
    for r in records {
        for (g, &inc) in gmv.iter_mut().zip(&r.income) {
            *g += inc;
        }
    }
    gmv
}

/// Per-cell holding cost as a share of GMV; `None` where nothing sold.
pub fn holding_share(records: &[StepRecord], cells: usize) -> Vec<Option<Decimal>> {
    let gmv = compute_gmv(records, cells);
    let mut holding = vec![Decimal::ZERO; cells];
    for r in records {
        for (h, &x) in holding.iter_mut().zip(&r.holding) {
            *h += x;
        }
    }
    holding
        .into_iter()
        .zip(gmv)
        .map(|(h, g)| (!g.is_zero()).then(|| h / g))
        .collect()
}

enum Driver<'a> {
    Rule(Box<dyn OrderRule + 'a>),
    Orders(ExternalStream),
    Actions { stream: ExternalStream, space: ActionSpace },
}

fn params_for(kind: &PolicyKind, task: &Task, split: Split, opts: &RunOptions) -> Result<PolicyParams, HarnessError> {
    let params = match (&opts.params, &opts.params_file) {
        (Some(p), _) => p.clone(),
        (None, Some(path)) => read_params(path, task.series.ids(), task.echelons())?,
        (None, None) => policy::fit(kind, task, split)?,
    };
    let fits = matches!(
        (kind, &params),
        (
            PolicyKind::BaseStockStatic | PolicyKind::BaseStockDynamic,
            PolicyParams::BaseStock(_)
        ) | (PolicyKind::SsStatic | PolicyKind::SsHindsight, PolicyParams::Ss(_))
    );
    if !fits {
        return Err(HarnessError::Incompatible(format!(
            "{kind} cannot run with these parameters"
        )));
    }
    if params.cells() != task.agents() {
        return Err(HarnessError::Incompatible(format!(
            "{} parameter rows for {} warehouses × {} SKUs",
            params.cells(),
            task.echelons(),
            task.skus()
        )));
    }
    Ok(params)
}

fn driver<'a>(kind: &PolicyKind, task: &'a Task, split: Split, opts: &RunOptions) -> Result<Driver<'a>, HarnessError> {
    let start = task.range(split).start;
    Ok(match kind {
        PolicyKind::Never => Driver::Rule(Box::new(NeverOrder)),
        PolicyKind::External(path) => {
            let stream = ExternalStream::read(path, task.series.ids(), task.echelons(), task.range(split).range())?;
            match stream.kind {
                StreamKind::Orders => Driver::Orders(stream),
                StreamKind::Actions => Driver::Actions {
                    stream,
                    space: ActionSpace::from_spec(&task.spec.actions)?,
                },
            }
        }
        _ => match params_for(kind, task, split, opts)? {
            PolicyParams::BaseStock(levels) => match kind {
                PolicyKind::BaseStockDynamic => Driver::Rule(Box::new(DynamicBaseStock::with_levels(
                    task,
                    start,
                    task.spec.policy.refresh_interval,
                    levels,
                ))),
                _ => Driver::Rule(Box::new(BaseStockPolicy { levels })),
            },
            PolicyParams::Ss(params) => Driver::Rule(Box::new(SsPolicy {
                params,
                mode: if *kind == PolicyKind::SsHindsight {
                    SsMode::Hindsight
                } else {
                    SsMode::Static
                },
            })),
        },
    })
}

/// Runs `policy` on one split of `task`: warmup before the split, then one
/// engine step per split step.
pub fn run(task: &Task, kind: &PolicyKind, split: Split, opts: &RunOptions) -> Result<RunResult, HarnessError> {
    let clock = Instant::now();
    let range = task.range(split).range();
    let mut driver = driver(kind, task, split, opts)?;
    let window = task.spec.actions.window;
    let mut history = DemandHistory::new(task.agents(), window);
    let keep_history = matches!(driver, Driver::Actions { .. });
    let mut state = task.warm_state(split, |rec| {
        if keep_history {
            history.push(&rec.demand);
        }
    })?;
    let env = task.environment();
    let step = opts.engine.step_fn();
    let mut orders = vec![0; task.agents()];
    let mut records = Vec::with_capacity(range.len());
    let mut memory = state.allocated_bytes();
    for t in range.clone() {
        debug_assert_eq!(state.t, t);
        match &mut driver {
            Driver::Rule(rule) => rule.orders(&state, &task.series, &mut orders),
            Driver::Orders(stream) => orders.copy_from_slice(stream.at(t)),
            Driver::Actions { stream, space } => {
                let actions: Vec<usize> = stream.at(t).iter().map(|&a| a as usize).collect();
                orders = space.convert(&actions, &history)?;
            }
        }
        let rec = step(&mut state, &orders, &env)?;
        if keep_history {
            history.push(&rec.demand);
        }
        memory = memory.max(state.allocated_bytes() + rec.allocated_bytes());
        records.push(rec);
    }
    let metric = metric(&records, task.agents());
    Ok(RunResult {
        task: task.name().to_owned(),
        policy: kind.to_string(),
        split,
        seed: task.seed,
        range,
        echelons: task.echelons(),
        skus: task.skus(),
        sku_ids: task.series.ids().to_vec(),
        records,
        metric,
        wall_clock: clock.elapsed(),
        memory_bytes: memory,
    })
}

/// Median throughput over repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub steps: usize,
    pub agents: usize,
    /// Steps per second of each timed repetition.
    pub samples: Vec<f64>,
    pub median: f64,
}

/// Times `steps` engine steps from the warmed start of `split` under the
/// rules `make_rule` returns, `repetitions` times after one untimed pass.
pub fn benchmark_throughput(
    task: &Task,
    split: Split,
    engine: EngineKind,
    repetitions: usize,
    steps: Option<usize>,
    mut make_rule: impl FnMut() -> Box<dyn OrderRule>,
) -> Result<BenchResult, HarnessError> {
    assert!(repetitions >= 1, "at least one repetition");
    let start = task.warm_state(split, |_| {})?;
    let available = task.series.horizon() - start.t;
    let steps = steps.unwrap_or_else(|| task.range(split).len()).min(available);
    let env = task.environment();
    let step = engine.step_fn();
    let time_once = |rule: &mut dyn OrderRule| -> Result<f64, HarnessError> {
        let mut state: EnvState = start.clone();
        let mut orders: Vec<Qty> = vec![0; state.cells()];
        let clock = Instant::now();
        for _ in 0..steps {
            rule.orders(&state, &task.series, &mut orders);
            std::hint::black_box(step(&mut state, &orders, &env)?);
        }
        Ok(steps as f64 / clock.elapsed().as_secs_f64().max(1e-12))
    };
    time_once(make_rule().as_mut())?;
    let mut samples = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        samples.push(time_once(make_rule().as_mut())?);
    }
    let mut sorted = samples.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    };
    Ok(BenchResult {
        steps,
        agents: task.agents(),
        samples,
        median,
    })
}

/// The warmup cover rule fitted on the window before `split`; a cheap
/// fixed rule for benchmarks.
pub fn cover_rule_for(task: &Task, split: Split) -> CoverRule {
    let window = task.warmup_window(task.range(split).start);
    CoverRule::for_window(&task.series, task.echelons(), window)
}

#[cfg(test)]
mod tests;
