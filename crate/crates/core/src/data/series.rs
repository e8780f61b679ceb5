use std::ops::Range;

use rust_decimal::Decimal;

use crate::engine::Qty;

/// Columns of a single SKU.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkuColumns {
    pub id: String,
    pub demand: Vec<Qty>,
    pub price: Vec<Decimal>,
    pub cost: Vec<Decimal>,
    pub lead_time: Vec<u32>,
    pub volume: u32,
}

impl SkuColumns {
    pub fn horizon(&self) -> usize {
        self.demand.len()
    }

    /// Constant price, cost and lead time over `horizon` steps.
    pub fn constant(id: impl Into<String>, demand: Vec<Qty>, price: Decimal, cost: Decimal, lead_time: u32) -> Self {
        let h = demand.len();
        Self {
            id: id.into(),
            demand,
            price: vec![price; h],
            cost: vec![cost; h],
            lead_time: vec![lead_time; h],
            volume: 1,
        }
    }

    pub fn mean_demand(&self, range: Range<usize>) -> f64 {
        if range.is_empty() {
            return 0.0;
        }
        let n = range.len() as f64;
        self.demand[range].iter().map(|&d| d as f64).sum::<f64>() / n
    }

    fn slice(&self, range: Range<usize>) -> Self {
        Self {
            id: self.id.clone(),
            demand: self.demand[range.clone()].to_vec(),
            price: self.price[range.clone()].to_vec(),
            cost: self.cost[range.clone()].to_vec(),
            lead_time: self.lead_time[range].to_vec(),
            volume: self.volume,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("sku {id}: column {column} has {got} steps, expected {expected}")]
    Length {
        id: String,
        column: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("sku {id}: unit volume must be positive")]
    Volume { id: String },
    #[error("a series needs at least one SKU")]
    Empty,
}

/// Time series of `N` SKUs over a shared horizon: demand, selling price,
/// procurement cost and lead time per step, plus a unit volume per SKU.
///
/// Storage is time-major so the engine reads one contiguous row per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkuSeries {
    skus: usize,
    horizon: usize,
    ids: Vec<String>,
    demand: Vec<Qty>,
    price: Vec<Decimal>,
    cost: Vec<Decimal>,
    lead_time: Vec<u32>,
    volume: Vec<u32>,
}

impl SkuSeries {
    pub fn from_skus(columns: Vec<SkuColumns>) -> Result<Self, SeriesError> {
        let first = columns.first().ok_or(SeriesError::Empty)?;
        let horizon = first.horizon();
        for col in &columns {
            for (name, len) in [
                ("demand", col.demand.len()),
                ("price", col.price.len()),
                ("cost", col.cost.len()),
                ("lead_time", col.lead_time.len()),
            ] {
                if len != horizon {
                    return Err(SeriesError::Length {
                        id: col.id.clone(),
                        column: name,
                        got: len,
                        expected: horizon,
                    });
                }
            }
            if col.volume == 0 {
                return Err(SeriesError::Volume { id: col.id.clone() });
            }
        }
        let n = columns.len();
        let mut s = Self {
            skus: n,
            horizon,
            ids: columns.iter().map(|c| c.id.clone()).collect(),
            demand: Vec::with_capacity(n * horizon),
            price: Vec::with_capacity(n * horizon),
            cost: Vec::with_capacity(n * horizon),
            lead_time: Vec::with_capacity(n * horizon),
            volume: columns.iter().map(|c| c.volume).collect(),
        };
        for t in 0..horizon {
            for c in &columns {
                s.demand.push(c.demand[t]);
                s.price.push(c.price[t]);
                s.cost.push(c.cost[t]);
                s.lead_time.push(c.lead_time[t]);
            }
        }
        Ok(s)
    }

    pub fn skus(&self) -> usize {
        self.skus
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    #[inline]
    pub fn demand_at(&self, t: usize) -> &[Qty] {
        &self.demand[t * self.skus..(t + 1) * self.skus]
    }

    #[inline]
    pub fn price_at(&self, t: usize) -> &[Decimal] {
        &self.price[t * self.skus..(t + 1) * self.skus]
    }

    #[inline]
    pub fn cost_at(&self, t: usize) -> &[Decimal] {
        &self.cost[t * self.skus..(t + 1) * self.skus]
    }

    #[inline]
    pub fn lead_time_at(&self, t: usize) -> &[u32] {
        &self.lead_time[t * self.skus..(t + 1) * self.skus]
    }

    #[inline]
    pub fn demand(&self, t: usize, sku: usize) -> Qty {
        self.demand[t * self.skus + sku]
    }

    #[inline]
    pub fn price(&self, t: usize, sku: usize) -> Decimal {
        self.price[t * self.skus + sku]
    }

    #[inline]
    pub fn cost(&self, t: usize, sku: usize) -> Decimal {
        self.cost[t * self.skus + sku]
    }

    #[inline]
    pub fn lead_time(&self, t: usize, sku: usize) -> u32 {
        self.lead_time[t * self.skus + sku]
    }

    pub fn volumes(&self) -> &[u32] {
        &self.volume
    }

    pub fn volume(&self, sku: usize) -> u32 {
        self.volume[sku]
    }

    /// Copies out one SKU.
    pub fn sku(&self, j: usize) -> SkuColumns {
        let col = |v: &[Qty]| (0..self.horizon).map(|t| v[t * self.skus + j]).collect();
        SkuColumns {
            id: self.ids[j].clone(),
            demand: col(&self.demand),
            price: (0..self.horizon).map(|t| self.price(t, j)).collect(),
            cost: (0..self.horizon).map(|t| self.cost(t, j)).collect(),
            lead_time: (0..self.horizon).map(|t| self.lead_time(t, j)).collect(),
            volume: self.volume[j],
        }
    }

    pub fn to_skus(&self) -> Vec<SkuColumns> {
        (0..self.skus).map(|j| self.sku(j)).collect()
    }

    /// Demand of one SKU over `range`.
    pub fn sku_demand(&self, j: usize, range: Range<usize>) -> impl Iterator<Item = Qty> + '_ {
        range.map(move |t| self.demand(t, j))
    }

    /// Restricts the series to the first `n` SKUs.
    pub fn take_skus(&self, n: usize) -> Self {
        let cols = self.to_skus().into_iter().take(n).collect();
        Self::from_skus(cols).expect("prefix of a valid series")
    }

    /// Restricts the series to a step range; step `range.start` becomes 0.
    pub fn window(&self, range: Range<usize>) -> Self {
        let cols = self.to_skus().iter().map(|c| c.slice(range.clone())).collect();
        Self::from_skus(cols).expect("window of a valid series")
    }

    pub(crate) fn demand_mut(&mut self) -> &mut [Qty] {
        &mut self.demand
    }

    pub(crate) fn price_mut(&mut self) -> &mut [Decimal] {
        &mut self.price
    }

    pub(crate) fn lead_time_mut(&mut self) -> &mut [u32] {
        &mut self.lead_time
    }

    /// Largest lead time anywhere in the series.
    pub fn max_lead_time(&self) -> u32 {
        self.lead_time.iter().copied().max().unwrap_or(0)
    }
}
