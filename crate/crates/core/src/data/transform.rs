//! Context transforms applied to a series after loading or generation.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rust_decimal::Decimal;

use super::SkuSeries;

const GAP_SALT: u64 = 0x6761_7073_6869_6674;
const NOISE_SALT: u64 = 0x6e6f_6973_6573_6565;
const LEAD_SALT: u64 = 0x6c65_6164_6a69_7474;

/// Default relative mean offset per gap level.
pub const GAP_SCALE: f64 = 0.1;
/// Default relative noise standard deviation per noise level.
pub const NOISE_SCALE: f64 = 0.05;

fn sku_rng(seed: u64, salt: u64, sku: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
    rng.set_stream(sku as u64);
    rng
}

/// Per-SKU offsets `round(u_j · scale · level · mean_j)`, `u_j ~ U(-1, 1)`,
/// with `mean_j` the SKU's mean demand over `range`.
pub fn gap_offsets(series: &SkuSeries, level: u8, seed: u64, range: Range<usize>, scale: f64) -> Vec<i64> {
    (0..series.skus())
        .map(|j| {
            let mut rng = sku_rng(seed, GAP_SALT, j);
            let u: f64 = rng.gen_range(-1.0..=1.0);
            let mean = series.sku_demand(j, range.clone()).map(|d| d as f64).sum::<f64>() / range.len().max(1) as f64;
            (u * scale * level as f64 * mean).round() as i64
        })
        .collect()
}

/// Shifts each SKU's demand over `range` by a constant random offset,
/// clipping at zero. Level 0 returns the series unchanged.
pub fn apply_gap(series: &SkuSeries, level: u8, seed: u64, range: Range<usize>, scale: f64) -> SkuSeries {
    let mut out = series.clone();
    if level == 0 || range.is_empty() {
        return out;
    }
    let offsets = gap_offsets(series, level, seed, range.clone(), scale);
    let n = series.skus();
    let demand = out.demand_mut();
    for t in range {
        for (j, delta) in offsets.iter().enumerate() {
            let d = &mut demand[t * n + j];
            *d = (*d as i64 + delta).max(0) as u64;
        }
    }
    out
}

/// Multiplies demand over `range` by `1 + ε`, `ε ~ N(0, scale · level)`,
/// drawn independently per SKU and step; rounds and clips at zero.
/// Level 0 returns the series unchanged.
pub fn apply_noise(series: &SkuSeries, level: u8, seed: u64, range: Range<usize>, scale: f64) -> SkuSeries {
    let mut out = series.clone();
    if level == 0 || range.is_empty() {
        return out;
    }
    let normal = Normal::new(0.0, scale * level as f64).expect("finite standard deviation");
    let n = series.skus();
    let demand = out.demand_mut();
    for j in 0..n {
        let mut rng = sku_rng(seed, NOISE_SALT, j);
        for t in range.clone() {
            let eps: f64 = normal.sample(&mut rng);
            let d = &mut demand[t * n + j];
            *d = (*d as f64 * (1.0 + eps)).round().max(0.0) as u64;
        }
    }
    out
}

/// Scales demand over `range` by `factor`, rounding to the nearest unit.
pub fn scale_demand(series: &SkuSeries, range: Range<usize>, factor: f64) -> SkuSeries {
    let mut out = series.clone();
    let n = series.skus();
    let demand = out.demand_mut();
    for t in range {
        for d in &mut demand[t * n..(t + 1) * n] {
            *d = (*d as f64 * factor).round().max(0.0) as u64;
        }
    }
    out
}

/// Replaces the selling price with `c + factor · (p - c)`, rounded to cents.
pub fn scale_margin(series: &SkuSeries, factor: Decimal) -> SkuSeries {
    let mut out = series.clone();
    let costs: Vec<Decimal> = (0..series.horizon()).flat_map(|t| series.cost_at(t).to_vec()).collect();
    for (p, c) in out.price_mut().iter_mut().zip(costs) {
        *p = (c + factor * (*p - c)).round_dp(2).max(Decimal::ZERO);
    }
    out
}

/// Draws each step's lead time uniformly from `{L-1, L, L+1}` (at least 1)
/// around the SKU's series value. Only SKUs whose lead time is constant
/// over the horizon are jittered; varying columns are taken as given.
pub fn jitter_lead_times(series: &SkuSeries, seed: u64) -> SkuSeries {
    let mut out = series.clone();
    let n = series.skus();
    let h = series.horizon();
    let lead = out.lead_time_mut();
    for j in 0..n {
        let first = lead[j];
        if (0..h).any(|t| lead[t * n + j] != first) {
            continue;
        }
        let mut rng = sku_rng(seed, LEAD_SALT, j);
        for t in 0..h {
            let l = first as i64 + rng.gen_range(-1..=1);
            lead[t * n + j] = l.max(1) as u32;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_synthetic, SkuColumns, SyntheticProfile};
    use rust_decimal_macros::dec;

    fn series() -> SkuSeries {
        generate_synthetic(5, 6, 300, &SyntheticProfile::default())
    }

    #[test]
    fn level_zero_is_identity() {
        let s = series();
        assert_eq!(apply_gap(&s, 0, 1, 100..300, GAP_SCALE), s);
        assert_eq!(apply_noise(&s, 0, 1, 0..300, NOISE_SCALE), s);
    }

    #[test]
    fn gap_only_touches_range() {
        let s = series();
        let g = apply_gap(&s, 6, 1, 200..300, GAP_SCALE);
        for t in 0..200 {
            assert_eq!(g.demand_at(t), s.demand_at(t));
        }
    }

    #[test]
    fn gap_offset_bounded() {
        // |δ| ≤ round(0.6 · mean); for a constant demand of 10 that is 6.
        let cols = (0..20)
            .map(|j| SkuColumns::constant(format!("s{j}"), vec![10; 50], dec!(2), dec!(1), 1))
            .collect();
        let s = SkuSeries::from_skus(cols).unwrap();
        for seed in 0..20 {
            for off in gap_offsets(&s, 6, seed, 0..50, GAP_SCALE) {
                assert!(off.abs() <= 6, "offset {off}");
            }
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let s = series();
        assert_eq!(
            apply_noise(&s, 4, 9, 0..300, NOISE_SCALE),
            apply_noise(&s, 4, 9, 0..300, NOISE_SCALE)
        );
        assert_eq!(
            apply_gap(&s, 4, 9, 0..300, GAP_SCALE),
            apply_gap(&s, 4, 9, 0..300, GAP_SCALE)
        );
    }

    #[test]
    fn jitter_keeps_lead_times_near_base() {
        let s = series();
        let j = jitter_lead_times(&s, 3);
        for sku in 0..s.skus() {
            let base = s.lead_time(0, sku) as i64;
            let mut varied = false;
            for t in 0..s.horizon() {
                let l = j.lead_time(t, sku) as i64;
                assert!(l >= 1 && (l - base).abs() <= 1);
                varied |= l != base;
            }
            assert!(varied);
        }
        assert_eq!(jitter_lead_times(&j, 3), j, "already varying columns are left alone");
    }

    #[test]
    fn margin_scaling() {
        let cols = vec![SkuColumns::constant("a", vec![1], dec!(10), dec!(6), 1)];
        let s = SkuSeries::from_skus(cols).unwrap();
        assert_eq!(scale_margin(&s, dec!(2)).price(0, 0), dec!(14));
        assert_eq!(scale_margin(&s, dec!(0.5)).price(0, 0), dec!(8));
    }
}
