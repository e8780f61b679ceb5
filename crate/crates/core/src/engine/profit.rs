use rust_decimal::Decimal;

use super::{Qty, UnitCosts};

/// Flows of one cell over one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CellFlows {
    pub demand: Qty,
    pub sale: Qty,
    pub arrival: Qty,
    pub received: Qty,
    pub order: Qty,
    /// End-of-step inventory.
    pub inventory: Qty,
}

/// The six profit components of one cell. All costs are stored as
/// non-negative amounts and subtracted by [`ProfitBreakdown::total`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProfitBreakdown {
    pub income: Decimal,
    pub procurement: Decimal,
    pub overflow: Decimal,
    pub order: Decimal,
    pub holding: Decimal,
    pub backlog: Decimal,
}

impl ProfitBreakdown {
    pub fn total(&self) -> Decimal {
        self.income - self.procurement - self.overflow - self.order - self.holding - self.backlog
    }
}

/// `p·S − c·S − v·(A−B) − o·𝟙(R>0) − h·I − k·(D−S)`, in exact decimals.
pub fn profit(flows: &CellFlows, costs: &UnitCosts) -> ProfitBreakdown {
    debug_assert!(flows.sale <= flows.demand && flows.received <= flows.arrival);
    let sale = Decimal::from(flows.sale);
    ProfitBreakdown {
        income: costs.price * sale,
        procurement: costs.procurement * sale,
        overflow: costs.overflow * Decimal::from(flows.arrival - flows.received),
        order: if flows.order > 0 { costs.order } else { Decimal::ZERO },
        holding: costs.holding * Decimal::from(flows.inventory),
        backlog: costs.backlog * Decimal::from(flows.demand - flows.sale),
    }
}
