//! Multi-echelon, multi-SKU inventory management simulation.
//!
//! * [`engine`]: the discrete-time dynamics and profit ledger, with a dense
//!   matrix implementation and a scalar reference.
//! * [`data`]: SKU series from CSV files or a seeded generator, plus the
//!   non-stationary context transforms.
//! * [`tasks`]: declarative task specs and the built-in task registry.
//! * [`policy`]: base stock and (s, S) replenishment baselines with their
//!   simulation-based solvers.
//! * [`agent`]: the per-(warehouse, SKU) agent view: observations, action
//!   conversion, rewards and the episode loop.
//! * [`harness`]: experiment runs, the evaluation metric, CSV/HTML reports
//!   and throughput benchmarks.

pub mod agent;
pub mod data;
pub mod engine;
pub mod harness;
pub mod policy;
pub mod tasks;

pub use engine::{EnvState, Qty, StepRecord};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/engine.md")]
    mod engine {}
    #[doc = include_str!("../../../book/src/tasks.md")]
    mod tasks {}
    #[doc = include_str!("../../../book/src/policies.md")]
    mod policies {}
    #[doc = include_str!("../../../book/src/agents.md")]
    mod agents {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
}
