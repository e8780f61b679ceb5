//! Task specs, the built-in registry and materialized tasks.

mod registry;
mod spec;

use std::ops::Range;
use std::path::PathBuf;

pub use registry::{builtin_tasks, nearest_names, standard_costs, standard_task, task_names};
pub use registry::{BUILTIN_DATA_SEED, BUILTIN_HORIZON, BUILTIN_WARMUP};
pub use spec::{
    ActionSpec, CapacityRule, DataSource, PolicySettings, SpecError, Split, SplitRanges, StepRange, TaskSpec,
    Transforms,
};

use crate::data::{self, transform, LoadError, SkuColumns, SkuSeries};
use crate::engine::{
    warmup_observed, CostParams, CoverRule, EngineError, EnvState, Environment, StepRecord, WarehouseConfig,
};

/// Environment variable naming the directory that relative CSV paths in task
/// specs resolve against. Defaults to `./data`.
pub const DATA_DIR_ENV: &str = "INVSIM_DATA_DIR";

#[derive(Debug, thiserror::Error)]
pub enum TaskError {
    #[error("unknown task `{name}`; nearest: {}", nearest.join(", "))]
    Unknown { name: String, nearest: Vec<String> },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("loading task data: {0}")]
    Load(#[from] LoadError),
}

pub fn data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

/// Looks up a built-in task by name.
pub fn find_task(name: &str) -> Result<TaskSpec, TaskError> {
    builtin_tasks()
        .into_iter()
        .find(|t| t.name == name)
        .ok_or_else(|| TaskError::Unknown {
            name: name.to_owned(),
            nearest: nearest_names(name),
        })
}

/// Combines a task's data seed with a run seed; run seed 0 keeps the task's
/// own data.
pub fn mix_seed(data_seed: u64, run_seed: u64) -> u64 {
    data_seed ^ run_seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// A task with its data loaded and every transform applied.
#[derive(Debug, Clone)]
pub struct Task {
    pub spec: TaskSpec,
    pub seed: u64,
    pub series: SkuSeries,
    pub warehouses: Vec<WarehouseConfig>,
}

/// Materializes a built-in task by name.
pub fn build_named(name: &str, seed: u64) -> Result<Task, TaskError> {
    build_task(&find_task(name)?, seed)
}

/// Loads or generates the task's series and applies its transforms. `seed`
/// perturbs synthetic data and transform draws; seed 0 reproduces the spec's
/// own data exactly.
pub fn build_task(spec: &TaskSpec, seed: u64) -> Result<Task, TaskError> {
    spec.validate()?;
    let (mut series, data_seed) = match &spec.data {
        DataSource::Synthetic {
            seed: s,
            horizon,
            profile,
        } => {
            let mixed = mix_seed(*s, seed);
            (data::generate_synthetic(mixed, spec.skus, *horizon, profile), mixed)
        }
        DataSource::Csv { path } => {
            let path = if path.is_relative() {
                data_dir().join(path)
            } else {
                path.clone()
            };
            (data::load_series(path, spec.skus)?, mix_seed(0, seed))
        }
    };
    spec.split
        .validate(series.horizon())
        .map_err(|m| TaskError::Spec(SpecError::Invalid(m)))?;
    let tf = &spec.transforms;
    let horizon = series.horizon();
    let test = spec.split.test.range();
    if tf.margin_scale != rust_decimal::Decimal::ONE {
        series = transform::scale_margin(&series, tf.margin_scale);
    }
    if tf.dynamic_lead_time {
        series = transform::jitter_lead_times(&series, data_seed);
    }
    if tf.noise > 0 {
        series = transform::apply_noise(&series, tf.noise, data_seed, 0..horizon, tf.noise_scale);
    }
    if tf.gap > 0 {
        series = transform::apply_gap(&series, tf.gap, data_seed, test.clone(), tf.gap_scale);
    }
    if tf.test_demand_scale != 1.0 {
        series = transform::scale_demand(&series, test, tf.test_demand_scale);
    }

    let capacity = spec.capacity_per_warehouse();
    let warehouses = vec![
        WarehouseConfig {
            capacity,
            accept: spec.accept,
        };
        spec.echelons
    ];
    Ok(Task {
        spec: spec.clone(),
        seed,
        series,
        warehouses,
    })
}

impl Task {
    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn echelons(&self) -> usize {
        self.spec.echelons
    }

    pub fn skus(&self) -> usize {
        self.series.skus()
    }

    pub fn agents(&self) -> usize {
        self.echelons() * self.skus()
    }

    pub fn costs(&self) -> &[CostParams] {
        &self.spec.costs
    }

    pub fn environment(&self) -> Environment<'_> {
        Environment::new(&self.series, &self.spec.costs, &self.warehouses)
    }

    pub fn range(&self, split: Split) -> StepRange {
        self.spec.split.get(split)
    }

    /// Steps warming up an episode that starts at `start`.
    pub fn warmup_window(&self, start: usize) -> Range<usize> {
        start.saturating_sub(self.spec.warmup)..start
    }

    /// Range-restricted view of one split: its own steps plus the pre-split
    /// steps its warmup consumes.
    pub fn view(&self, split: Split) -> SeriesView<'_> {
        let r = self.range(split);
        SeriesView {
            series: &self.series,
            warm: self.warmup_window(r.start),
            eval: r.range(),
        }
    }

    /// Fresh state at the start of `split`, warmed up under the cover rule
    /// over the preceding window. `observe` sees each warmup step's ledger.
    pub fn warm_state(&self, split: Split, observe: impl FnMut(&StepRecord)) -> Result<EnvState, EngineError> {
        let window = self.warmup_window(self.range(split).start);
        let mut state = EnvState::new(self.echelons(), self.skus(), window.start);
        let mut rule = CoverRule::for_window(&self.series, self.echelons(), window.clone());
        warmup_observed(&mut state, &mut rule, window.len(), &self.environment(), observe)?;
        Ok(state)
    }

    /// Everything observed before step `end`, from the training split on.
    pub fn history_before(&self, end: usize) -> SeriesView<'_> {
        let start = self.spec.split.train.start.min(end);
        SeriesView {
            series: &self.series,
            warm: self.warmup_window(start),
            eval: start..end,
        }
    }
}

/// A window of the series: `eval` steps preceded by the `warm` steps used to
/// warm up the state evaluated on them. Nothing outside the two is reachable.
#[derive(Debug, Clone)]
pub struct SeriesView<'a> {
    series: &'a SkuSeries,
    warm: Range<usize>,
    eval: Range<usize>,
}

/// One SKU's slice of a [`SeriesView`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkuWindow {
    pub warm: SkuColumns,
    pub eval: SkuColumns,
}

impl<'a> SeriesView<'a> {
    pub fn new(series: &'a SkuSeries, warm: Range<usize>, eval: Range<usize>) -> Self {
        assert!(warm.end <= eval.start || warm.is_empty());
        assert!(eval.end <= series.horizon());
        Self { series, warm, eval }
    }

    pub fn skus(&self) -> usize {
        self.series.skus()
    }

    pub fn eval_range(&self) -> Range<usize> {
        self.eval.clone()
    }

    pub fn warm_range(&self) -> Range<usize> {
        self.warm.clone()
    }

    pub fn sku(&self, j: usize) -> SkuWindow {
        let cols = |r: Range<usize>| SkuColumns {
            id: self.series.ids()[j].clone(),
            demand: r.clone().map(|t| self.series.demand(t, j)).collect(),
            price: r.clone().map(|t| self.series.price(t, j)).collect(),
            cost: r.clone().map(|t| self.series.cost(t, j)).collect(),
            lead_time: r.map(|t| self.series.lead_time(t, j)).collect(),
            volume: self.series.volume(j),
        };
        SkuWindow {
            warm: cols(self.warm.clone()),
            eval: cols(self.eval.clone()),
        }
    }

    pub fn mean_demand(&self, j: usize) -> f64 {
        if self.eval.is_empty() {
            return 0.0;
        }
        self.series
            .sku_demand(j, self.eval.clone())
            .map(|d| d as f64)
            .sum::<f64>()
            / self.eval.len() as f64
    }
}
