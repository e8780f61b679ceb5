//! Replenishment baselines: base stock and (s, S), each fitted per SKU by
//! simulation search, plus a rule that never orders.
//!
//! Solvers score candidates in a single-SKU, capacity-free sandbox. The
//! fitted rules then run unchanged in the full engine, warehouse capacity
//! and all.

mod base_stock;
mod params;
mod sandbox;
mod ss;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

pub use base_stock::{
    base_stock_candidates, base_stock_objective, base_stock_order, solve_base_stock, solve_base_stock_sku,
    BaseStockMode, BaseStockPolicy, DynamicBaseStock,
};
pub use params::{read_params, write_params, ParamsError, PolicyParams};
pub use sandbox::{warm_start, SkuSandbox, WarmStart};
pub use ss::{solve_ss, solve_ss_sku, ss_levels, ss_order, ss_pairs, SsMode, SsPolicy};

use crate::data::SkuSeries;
use crate::engine::{EnvState, OrderRule, Qty};
use crate::tasks::{Split, Task};

/// Orders nothing, ever.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NeverOrder;

impl OrderRule for NeverOrder {
    fn orders(&mut self, _: &EnvState, _: &SkuSeries, orders: &mut [Qty]) {
        orders.fill(0);
    }
}

/// A policy as named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolicyKind {
    BaseStockStatic,
    BaseStockDynamic,
    SsStatic,
    SsHindsight,
    Never,
    /// Precomputed actions or orders read from a CSV file.
    External(PathBuf),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PolicyError {
    #[error("unknown policy `{0}`; expected bs-static, bs-dynamic, ss-static, ss-hindsight, never or external:<file>")]
    Unknown(String),
    #[error("policy `{policy}` cannot run on the {split} split: {reason}")]
    Incompatible {
        policy: String,
        split: Split,
        reason: String,
    },
    #[error("policy `{0}` has no solvable parameters")]
    NotSolvable(String),
}

impl FromStr for PolicyKind {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "bs-static" => Self::BaseStockStatic,
            "bs-dynamic" => Self::BaseStockDynamic,
            "ss-static" => Self::SsStatic,
            "ss-hindsight" => Self::SsHindsight,
            "never" => Self::Never,
            _ => match s.strip_prefix("external:") {
                Some(path) if !path.is_empty() => Self::External(PathBuf::from(path)),
                _ => return Err(PolicyError::Unknown(s.to_owned())),
            },
        })
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BaseStockStatic => f.write_str("bs-static"),
            Self::BaseStockDynamic => f.write_str("bs-dynamic"),
            Self::SsStatic => f.write_str("ss-static"),
            Self::SsHindsight => f.write_str("ss-hindsight"),
            Self::Never => f.write_str("never"),
            Self::External(p) => write!(f, "external:{}", p.display()),
        }
    }
}

/// Fits the parameters a policy runs with on `split`.
///
/// Static modes search on the training split. Hindsight searches on the
/// evaluation split itself, so it is only defined for the test split.
/// Dynamic base stock returns its initial, training-fitted levels.
pub fn fit(kind: &PolicyKind, task: &Task, split: Split) -> Result<PolicyParams, PolicyError> {
    let settings = &task.spec.policy;
    match kind {
        PolicyKind::BaseStockStatic | PolicyKind::BaseStockDynamic => {
            Ok(PolicyParams::BaseStock(BaseStockPolicy::fit_static(task).levels))
        }
        PolicyKind::SsStatic => Ok(PolicyParams::Ss(solve_ss(
            &task.view(Split::Train),
            None,
            task.costs(),
            settings,
        ))),
        PolicyKind::SsHindsight => {
            if split != Split::Test {
                return Err(PolicyError::Incompatible {
                    policy: kind.to_string(),
                    split,
                    reason: "hindsight parameters are searched on the test split".into(),
                });
            }
            let train = task.view(Split::Train);
            Ok(PolicyParams::Ss(solve_ss(
                &task.view(Split::Test),
                Some(&train),
                task.costs(),
                settings,
            )))
        }
        PolicyKind::Never | PolicyKind::External(_) => Err(PolicyError::NotSolvable(kind.to_string())),
    }
}
