use std::fmt;
use std::ops::Range;
use std::path::PathBuf;
use std::str::FromStr;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::data::SyntheticProfile;
use crate::engine::{AcceptStrategy, CostParams};

/// Storage capacity per warehouse: a fixed volume or a multiple of the SKU
/// count, written `"20000"` or `"#SKU * 100"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CapacityRule {
    Fixed(u64),
    PerSku(u64),
}

impl CapacityRule {
    pub fn evaluate(self, skus: usize) -> u64 {
        match self {
            CapacityRule::Fixed(w) => w,
            CapacityRule::PerSku(k) => k * skus as u64,
        }
    }
}

impl fmt::Display for CapacityRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapacityRule::Fixed(w) => write!(f, "{w}"),
            CapacityRule::PerSku(k) => write!(f, "#SKU * {k}"),
        }
    }
}

impl FromStr for CapacityRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let rule = match s.strip_prefix("#SKU") {
            Some(rest) => {
                let k = rest
                    .trim()
                    .strip_prefix('*')
                    .ok_or_else(|| format!("bad capacity rule `{s}`"))?;
                CapacityRule::PerSku(
                    k.trim()
                        .parse()
                        .map_err(|_| format!("bad capacity multiplier in `{s}`"))?,
                )
            }
            None => CapacityRule::Fixed(s.parse().map_err(|_| format!("bad capacity `{s}`"))?),
        };
        match rule {
            CapacityRule::Fixed(0) | CapacityRule::PerSku(0) => Err(format!("capacity `{s}` must be positive")),
            r => Ok(r),
        }
    }
}

impl TryFrom<String> for CapacityRule {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<CapacityRule> for String {
    fn from(r: CapacityRule) -> Self {
        r.to_string()
    }
}

/// Half-open step range, written `[start, end]` in task files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct StepRange {
    pub start: usize,
    pub end: usize,
}

impl StepRange {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }
}

impl From<[usize; 2]> for StepRange {
    fn from([start, end]: [usize; 2]) -> Self {
        Self { start, end }
    }
}

impl From<StepRange> for [usize; 2] {
    fn from(r: StepRange) -> Self {
        [r.start, r.end]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl FromStr for Split {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "val" | "validation" => Ok(Split::Validation),
            "test" => Ok(Split::Test),
            _ => Err(format!("unknown split `{s}` (expected train, val or test)")),
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRanges {
    pub train: StepRange,
    pub validation: StepRange,
    pub test: StepRange,
}

impl SplitRanges {
    /// Splits `[reserved, horizon)` into 60% / 20% / 20%; the first
    /// `reserved` steps are left for warming up the training split.
    pub fn proportional(horizon: usize, reserved: usize) -> Self {
        let span = horizon - reserved;
        let train_end = reserved + span * 3 / 5;
        let val_end = reserved + span * 4 / 5;
        Self {
            train: StepRange::new(reserved, train_end),
            validation: StepRange::new(train_end, val_end),
            test: StepRange::new(val_end, horizon),
        }
    }

    pub fn get(&self, split: Split) -> StepRange {
        match split {
            Split::Train => self.train,
            Split::Validation => self.validation,
            Split::Test => self.test,
        }
    }

    pub fn validate(&self, horizon: usize) -> Result<(), String> {
        let ordered = self.train.start <= self.train.end
            && self.train.end <= self.validation.start
            && self.validation.start <= self.validation.end
            && self.validation.end <= self.test.start
            && self.test.start <= self.test.end;
        if !ordered {
            return Err("split ranges must be ordered train < validation < test and disjoint".into());
        }
        if self.test.end > horizon {
            return Err(format!("test range ends at {} beyond horizon {horizon}", self.test.end));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    Synthetic {
        seed: u64,
        horizon: usize,
        #[serde(default)]
        profile: SyntheticProfile,
    },
    /// A CSV file or per-kind directory. Relative paths resolve against the
    /// data directory.
    Csv { path: PathBuf },
}

/// Non-stationary context and cost-variant adjustments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Transforms {
    /// Gap level 0..=6, applied to the test range.
    pub gap: u8,
    /// Noise level 0..=6, applied to every step.
    pub noise: u8,
    pub gap_scale: f64,
    pub noise_scale: f64,
    /// Demand multiplier over the test range.
    pub test_demand_scale: f64,
    /// Multiplier of the selling margin `p - c`.
    pub margin_scale: Decimal,
    /// Per-step lead times jittered around each SKU's value.
    pub dynamic_lead_time: bool,
}

impl Default for Transforms {
    fn default() -> Self {
        Self {
            gap: 0,
            noise: 0,
            gap_scale: crate::data::transform::GAP_SCALE,
            noise_scale: crate::data::transform::NOISE_SCALE,
            test_demand_scale: 1.0,
            margin_scale: Decimal::ONE,
            dynamic_lead_time: false,
        }
    }
}

/// Action converter settings: order `round(multiplier · mean demand)` over a
/// trailing window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ActionSpec {
    pub multipliers: Vec<Decimal>,
    pub window: usize,
}

impl Default for ActionSpec {
    fn default() -> Self {
        let m = ["0", "0.5", "1", "1.5", "2", "2.5", "3", "4", "5", "6", "8", "10", "12"];
        Self {
            multipliers: m.iter().map(|s| s.parse().expect("literal")).collect(),
            window: 21,
        }
    }
}

/// Search settings of the replenishment baselines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PolicySettings {
    /// Steps between base stock refreshes in dynamic mode.
    pub refresh_interval: usize,
    /// Base stock candidates stop at `ceil(cap · mean demand)`.
    pub base_stock_cap: u32,
    /// (s, S) candidates are `{0, step, 2·step, …, max}` times mean demand.
    pub ss_step: Decimal,
    pub ss_max: Decimal,
}

impl Default for PolicySettings {
    fn default() -> Self {
        Self {
            refresh_interval: 30,
            base_stock_cap: 30,
            ss_step: Decimal::new(5, 1),
            ss_max: Decimal::from(12),
        }
    }
}

/// Declarative description of one task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub name: String,
    pub echelons: usize,
    pub skus: usize,
    /// Applied to every warehouse.
    pub capacity: CapacityRule,
    #[serde(default)]
    pub accept: AcceptStrategy,
    pub warmup: usize,
    pub data: DataSource,
    /// One entry per echelon, consumer-facing first.
    pub costs: Vec<CostParams>,
    pub split: SplitRanges,
    #[serde(default)]
    pub transforms: Transforms,
    #[serde(default)]
    pub actions: ActionSpec,
    #[serde(default)]
    pub policy: PolicySettings,
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("invalid task spec: {0}")]
    Invalid(String),
    #[error("task file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("task file: {0}")]
    Write(#[from] toml::ser::Error),
}

impl TaskSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        let bad = |m: String| Err(SpecError::Invalid(m));
        if self.echelons == 0 || self.skus == 0 {
            return bad("echelons and skus must be positive".into());
        }
        if self.costs.len() != self.echelons {
            return bad(format!(
                "{} echelons but {} cost sections",
                self.echelons,
                self.costs.len()
            ));
        }
        if self.transforms.gap > 6 || self.transforms.noise > 6 {
            return bad("gap and noise levels range over 0..=6".into());
        }
        let a = &self.actions;
        if a.window == 0 {
            return bad("action window must be at least 1".into());
        }
        if a.multipliers.first() != Some(&Decimal::ZERO)
            || a.multipliers.windows(2).any(|w| w[0] >= w[1])
            || a.multipliers.iter().any(|m| m.is_sign_negative())
        {
            return bad("action multipliers must start at 0 and increase strictly".into());
        }
        if self.policy.refresh_interval == 0 || self.policy.ss_step <= Decimal::ZERO {
            return bad("refresh interval and (s, S) grid step must be positive".into());
        }
        for c in &self.costs {
            if c.order_cost.is_sign_negative() || c.holding_cost.is_sign_negative() {
                return bad("costs must be non-negative".into());
            }
        }
        let horizon = match &self.data {
            DataSource::Synthetic { horizon, .. } => Some(*horizon),
            DataSource::Csv { .. } => None,
        };
        self.split.validate(horizon.unwrap_or(usize::MAX)).or_else(bad)
    }

    pub fn from_toml(text: &str) -> Result<Self, SpecError> {
        let spec: Self = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> Result<String, SpecError> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn capacity_per_warehouse(&self) -> u64 {
        self.capacity.evaluate(self.skus)
    }
}
