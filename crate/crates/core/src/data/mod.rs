//! SKU time series: CSV ingestion, synthetic generation and context transforms.

mod loader;
mod series;
mod synthetic;
pub mod transform;

pub use loader::{load_series, load_series_with, write_series, LoadDefaults, LoadError};
pub use series::{SeriesError, SkuColumns, SkuSeries};
pub use synthetic::{generate_synthetic, synthetic_rates, SyntheticProfile};
pub use transform::{apply_gap, apply_noise};
