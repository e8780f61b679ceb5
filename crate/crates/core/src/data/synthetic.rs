use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::{SkuColumns, SkuSeries};

/// Parameter ranges of the synthetic SKU generator. Every range is inclusive
/// and sampled uniformly, once per SKU.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticProfile {
    /// Poisson rate of daily demand.
    pub demand_rate: [f64; 2],
    /// Procurement cost, rounded to cents.
    pub cost: [f64; 2],
    /// Selling price as a multiple of cost, rounded to cents.
    pub markup: [f64; 2],
    /// Constant lead time in steps.
    pub lead_time: [u32; 2],
}

impl Default for SyntheticProfile {
    fn default() -> Self {
        Self {
            demand_rate: [2.0, 20.0],
            cost: [2.0, 20.0],
            markup: [1.5, 3.0],
            lead_time: [1, 7],
        }
    }
}

fn cents(x: f64) -> Decimal {
    Decimal::from_f64_retain((x * 100.0).round()).unwrap_or_default() / Decimal::ONE_HUNDRED
}

/// Seeded synthetic series. SKU `j` draws from its own ChaCha stream, so a
/// smaller `sku_count` under the same seed yields a prefix of a larger one.
pub fn generate_synthetic(seed: u64, sku_count: usize, horizon: usize, profile: &SyntheticProfile) -> SkuSeries {
    assert!(horizon > 0, "horizon must be positive");
    assert!(sku_count > 0, "need at least one SKU");
    let skus = (0..sku_count)
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            let rate = rng.gen_range(profile.demand_rate[0]..=profile.demand_rate[1]);
            let cost = cents(rng.gen_range(profile.cost[0]..=profile.cost[1]));
            let price =
                cents(rng.gen_range(profile.markup[0]..=profile.markup[1]) * f64::try_from(cost).unwrap_or(0.0));
            let lead = rng.gen_range(profile.lead_time[0]..=profile.lead_time[1]);
            let demand = if rate > 0.0 {
                let dist = Poisson::new(rate).expect("positive rate");
                (0..horizon).map(|_| dist.sample(&mut rng) as u64).collect()
            } else {
                vec![0; horizon]
            };
            SkuColumns::constant(format!("SKU{j}"), demand, price, cost, lead)
        })
        .collect();
    SkuSeries::from_skus(skus).expect("generator emits consistent columns")
}

/// Mean rate drawn for each SKU, in the order used by [`generate_synthetic`].
pub fn synthetic_rates(seed: u64, sku_count: usize, profile: &SyntheticProfile) -> Vec<f64> {
    (0..sku_count)
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            rng.gen_range(profile.demand_rate[0]..=profile.demand_rate[1])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_series() {
        let p = SyntheticProfile::default();
        assert_eq!(generate_synthetic(3, 5, 40, &p), generate_synthetic(3, 5, 40, &p));
        assert_ne!(generate_synthetic(3, 5, 40, &p), generate_synthetic(4, 5, 40, &p));
    }

    #[test]
    fn horizon_one() {
        let s = generate_synthetic(1, 4, 1, &SyntheticProfile::default());
        assert_eq!(s.horizon(), 1);
        assert!(s
            .to_skus()
            .iter()
            .all(|c| c.demand.len() == 1 && c.lead_time.len() == 1));
    }

    #[test]
    fn prefix_property() {
        let p = SyntheticProfile::default();
        let small = generate_synthetic(9, 3, 20, &p);
        let big = generate_synthetic(9, 8, 20, &p);
        assert_eq!(big.take_skus(3), small);
    }

    #[test]
    fn sku_parameters_within_profile() {
        let p = SyntheticProfile::default();
        let s = generate_synthetic(11, 50, 5, &p);
        for j in 0..s.skus() {
            let (price, cost) = (s.price(0, j), s.cost(0, j));
            assert!(cost >= Decimal::from(2) && cost <= Decimal::from(20));
            assert!(price >= cost * Decimal::new(149, 2) && price <= cost * Decimal::new(301, 2));
            assert!((1..=7).contains(&s.lead_time(0, j)));
        }
    }

    #[test]
    fn mean_demand_tracks_rate() {
        // Each SKU's sample mean lies within 5 standard errors of its drawn
        // rate, and the rates themselves lie in [2, 20].
        let p = SyntheticProfile::default();
        let horizon = 2000;
        let s = generate_synthetic(42, 10, horizon, &p);
        for (j, rate) in synthetic_rates(42, 10, &p).into_iter().enumerate() {
            assert!((2.0..=20.0).contains(&rate));
            let mean = s.sku(j).mean_demand(0..horizon);
            let stderr = (rate / horizon as f64).sqrt();
            assert!((mean - rate).abs() <= 5.0 * stderr, "sku {j}: mean {mean}, rate {rate}");
        }
    }
}
