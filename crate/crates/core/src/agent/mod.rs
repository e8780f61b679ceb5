//! The per-(warehouse, SKU) agent view over the engine.
//!
//! Every cell of the state is an agent. An [`Episode`] covers one split of a
//! task: [`Episode::reset`] warms the state up on the steps before the split
//! and returns the first observations; [`Episode::step`] converts one action
//! index per agent into orders, advances the engine and returns each agent's
//! profit as its reward together with the step's ledger.

mod action;
mod history;
mod normalize;
mod observation;

use std::ops::Range;
use std::sync::Arc;

use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;

pub use action::ActionSpace;
pub use history::DemandHistory;
pub use normalize::{Normalizer, RollingStats, NORM_EPSILON};
pub use observation::{Feature, FeatureInfo, FeatureScope, ObservationSpec};

use crate::engine::{EngineError, EngineKind, EnvState, Qty, StepRecord};
use crate::tasks::{build_named, Split, Task, TaskError};

#[derive(Debug, thiserror::Error)]
pub enum AgentError {
    #[error("agent {agent}: action {index} out of range (space has {len} actions)")]
    ActionIndex { agent: usize, index: usize, len: usize },
    #[error("expected {expected} actions, got {got}")]
    ActionShape { expected: usize, got: usize },
    #[error("episode is done")]
    Done,
    #[error("the {0} split is empty")]
    EmptySplit(Split),
    #[error("invalid action space: {0}")]
    InvalidSpace(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Task(#[from] TaskError),
}

/// Observation and action settings of an episode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpisodeConfig {
    pub observation: ObservationSpec,
    pub actions: ActionSpace,
    pub engine: EngineKind,
}

impl EpisodeConfig {
    /// The task's action space, with the demand statistics of the
    /// observation over the same window.
    pub fn for_task(task: &Task) -> Result<Self, AgentError> {
        let actions = ActionSpace::from_spec(&task.spec.actions)?;
        Ok(Self {
            observation: ObservationSpec {
                demand_window: actions.window(),
                ..ObservationSpec::default()
            },
            actions,
            engine: EngineKind::Matrix,
        })
    }
}

/// Result of one episode step.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub observations: Vec<f64>,
    /// Raw per-agent profit of the step.
    pub rewards: Vec<Decimal>,
    pub done: bool,
    pub info: StepRecord,
}

impl Transition {
    pub fn rewards_f64(&self) -> Vec<f64> {
        self.rewards.iter().map(|r| r.to_f64().unwrap_or(0.0)).collect()
    }
}

/// One split of a task, stepped by its agents.
#[derive(Debug, Clone)]
pub struct Episode {
    task: Arc<Task>,
    split: Split,
    range: Range<usize>,
    state: EnvState,
    history: DemandHistory,
    config: EpisodeConfig,
}

impl Episode {
    /// Warms up on the steps before `split` and returns the episode with its
    /// first observations.
    pub fn reset(task: Arc<Task>, split: Split, config: EpisodeConfig) -> Result<(Self, Vec<f64>), AgentError> {
        let range = task.range(split).range();
        if range.is_empty() {
            return Err(AgentError::EmptySplit(split));
        }
        let depth = config.actions.window().max(config.observation.demand_window);
        let mut history = DemandHistory::new(task.agents(), depth);
        let state = task.warm_state(split, |rec| history.push(&rec.demand))?;
        let episode = Self {
            task,
            split,
            range,
            state,
            history,
            config,
        };
        let obs = episode.observe();
        Ok((episode, obs))
    }

    /// Builds a registered task with `seed` and resets it with its own
    /// settings.
    pub fn make(name: &str, split: Split, seed: u64) -> Result<(Self, Vec<f64>), AgentError> {
        let task = Arc::new(build_named(name, seed)?);
        let config = EpisodeConfig::for_task(&task)?;
        Self::reset(task, split, config)
    }

    pub fn task(&self) -> &Task {
        &self.task
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn agents(&self) -> usize {
        self.state.cells()
    }

    pub fn features(&self) -> usize {
        self.config.observation.len()
    }

    pub fn manifest(&self) -> Vec<FeatureInfo> {
        self.config.observation.manifest()
    }

    pub fn action_space(&self) -> &ActionSpace {
        &self.config.actions
    }

    pub fn state(&self) -> &EnvState {
        &self.state
    }

    pub fn history(&self) -> &DemandHistory {
        &self.history
    }

    /// Steps of the split still to run.
    pub fn remaining(&self) -> usize {
        self.range.end.saturating_sub(self.state.t)
    }

    pub fn is_done(&self) -> bool {
        self.remaining() == 0
    }

    pub fn observe(&self) -> Vec<f64> {
        self.config
            .observation
            .observe(&self.state, &self.task.environment(), &self.history)
    }

    /// Orders implied by one action index per agent at the current state.
    pub fn orders_for(&self, actions: &[usize]) -> Result<Vec<Qty>, AgentError> {
        self.config.actions.convert(actions, &self.history)
    }

    pub fn step(&mut self, actions: &[usize]) -> Result<Transition, AgentError> {
        if self.is_done() {
            return Err(AgentError::Done);
        }
        let orders = self.orders_for(actions)?;
        self.step_orders(&orders)
    }

    /// Steps with explicit order quantities instead of action indices.
    pub fn step_orders(&mut self, orders: &[Qty]) -> Result<Transition, AgentError> {
        if self.is_done() {
            return Err(AgentError::Done);
        }
        let env = self.task.environment();
        let info = (self.config.engine.step_fn())(&mut self.state, orders, &env)?;
        self.history.push(&info.demand);
        Ok(Transition {
            observations: self.observe(),
            rewards: info.profit.clone(),
            done: self.is_done(),
            info,
        })
    }
}

/// An episode whose observations and rewards pass through per-agent rolling
/// normalization. Raw values stay available on every transition.
#[derive(Debug, Clone)]
pub struct NormalizedEpisode {
    pub episode: Episode,
    observations: Normalizer,
    rewards: Normalizer,
}

/// A transition with its normalized views.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedTransition {
    pub raw: Transition,
    pub observations: Vec<f64>,
    pub rewards: Vec<f64>,
}

impl NormalizedEpisode {
    /// `window: None` normalizes against the full history.
    pub fn new(episode: Episode, window: Option<usize>) -> Self {
        let agents = episode.agents();
        Self {
            observations: Normalizer::new(agents * episode.features(), window),
            rewards: Normalizer::new(agents, window),
            episode,
        }
    }

    /// Normalizes a first observation, as returned by [`Episode::reset`].
    pub fn start(&mut self, observations: &[f64]) -> Vec<f64> {
        self.observations.emit(observations)
    }

    pub fn step(&mut self, actions: &[usize]) -> Result<NormalizedTransition, AgentError> {
        let raw = self.episode.step(actions)?;
        Ok(NormalizedTransition {
            observations: self.observations.emit(&raw.observations),
            rewards: self.rewards.emit(&raw.rewards_f64()),
            raw,
        })
    }
}

#[cfg(test)]
mod tests;
