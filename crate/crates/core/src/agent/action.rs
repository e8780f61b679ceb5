use rust_decimal::{Decimal, RoundingStrategy};

use super::{AgentError, DemandHistory};
use crate::engine::Qty;
use crate::tasks::ActionSpec;

/// Discrete actions as multiples of trailing mean demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpace {
    multipliers: Vec<Decimal>,
    window: usize,
}

impl ActionSpace {
    /// Multipliers must be non-negative, strictly ascending and start at 0.
    pub fn new(multipliers: Vec<Decimal>, window: usize) -> Result<Self, AgentError> {
        let invalid = |m: &str| Err(AgentError::InvalidSpace(m.to_owned()));
        if window == 0 {
            return invalid("demand window must be at least one step");
        }
        if multipliers.first() != Some(&Decimal::ZERO) {
            return invalid("multipliers must start at 0");
        }
        if multipliers.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("multipliers must be strictly ascending");
        }
        Ok(Self { multipliers, window })
    }

    pub fn from_spec(spec: &ActionSpec) -> Result<Self, AgentError> {
        Self::new(spec.multipliers.clone(), spec.window)
    }

    pub fn len(&self) -> usize {
        self.multipliers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multipliers.is_empty()
    }

    pub fn multipliers(&self) -> &[Decimal] {
        &self.multipliers
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// `round(m · sum / count)`, halves rounding up, evaluated exactly.
    pub fn quantity(multiplier: Decimal, sum: u128, count: usize) -> Qty {
        if count == 0 || sum == 0 || multiplier.is_zero() {
            return 0;
        }
        let m = multiplier.normalize();
        let num = u128::try_from(m.mantissa()).ok().and_then(|k| k.checked_mul(sum));
        let den = 10u128.checked_pow(m.scale()).and_then(|p| p.checked_mul(count as u128));
        match (num, den) {
            (Some(num), Some(den)) if num <= u128::MAX / 2 - den => ((2 * num + den) / (2 * den)) as Qty,
            _ => {
                let q = m * Decimal::from(sum) / Decimal::from(count);
                u64::try_from(q.round_dp_with_strategy(0, RoundingStrategy::MidpointAwayFromZero)).unwrap_or(Qty::MAX)
            }
        }
    }

    /// One order per agent from one action index per agent.
    pub fn convert(&self, actions: &[usize], history: &DemandHistory) -> Result<Vec<Qty>, AgentError> {
        if actions.len() != history.cells() {
            return Err(AgentError::ActionShape {
                expected: history.cells(),
                got: actions.len(),
            });
        }
        actions
            .iter()
            .enumerate()
            .map(|(agent, &a)| {
                let m = *self.multipliers.get(a).ok_or(AgentError::ActionIndex {
                    agent,
                    index: a,
                    len: self.multipliers.len(),
                })?;
                let (sum, count) = history.sum_last(agent, self.window);
                Ok(Self::quantity(m, sum, count))
            })
            .collect()
    }
}
