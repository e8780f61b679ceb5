use std::collections::VecDeque;

/// Floor on the standard deviation divisor.
pub const NORM_EPSILON: f64 = 1e-8;

/// Running mean and standard deviation of one stream, over its full history
/// or over a trailing window.
///
/// Before the first update the statistics are mean 0, std 1, so the first
/// emitted value passes through unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct RollingStats {
    window: Option<usize>,
    count: u64,
    mean: f64,
    m2: f64,
    recent: VecDeque<f64>,
}

impl RollingStats {
    /// `window: None` keeps the full history.
    pub fn new(window: Option<usize>) -> Self {
        Self {
            window: window.map(|w| w.max(1)),
            count: 0,
            mean: 0.0,
            m2: 0.0,
            recent: VecDeque::new(),
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std(&self) -> f64 {
        if self.count == 0 {
            1.0
        } else {
            (self.m2 / self.count as f64).max(0.0).sqrt()
        }
    }

    pub fn normalize(&self, x: f64) -> f64 {
        (x - self.mean) / self.std().max(NORM_EPSILON)
    }

    pub fn update(&mut self, x: f64) {
        if let Some(w) = self.window {
            if self.recent.len() == w {
                let old = self.recent.pop_front().expect("window is full");
                self.remove(old);
            }
            self.recent.push_back(x);
        }
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn remove(&mut self, x: f64) {
        if self.count == 1 {
            self.count = 0;
            self.mean = 0.0;
            self.m2 = 0.0;
            return;
        }
        let mean = (self.mean * self.count as f64 - x) / (self.count - 1) as f64;
        self.m2 -= (x - self.mean) * (x - mean);
        self.mean = mean;
        self.count -= 1;
    }

    /// Normalizes `x` against the current statistics, then folds it in.
    pub fn emit(&mut self, x: f64) -> f64 {
        let y = self.normalize(x);
        self.update(x);
        y
    }
}

/// Independent rolling statistics for a fixed-width stream of vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalizer {
    stats: Vec<RollingStats>,
    enabled: bool,
}

impl Normalizer {
    pub fn new(width: usize, window: Option<usize>) -> Self {
        Self {
            stats: vec![RollingStats::new(window); width],
            enabled: true,
        }
    }

    /// Passes values through untouched.
    pub fn identity(width: usize) -> Self {
        Self {
            stats: vec![RollingStats::new(None); width],
            enabled: false,
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn stats(&self) -> &[RollingStats] {
        &self.stats
    }

    pub fn emit(&mut self, values: &[f64]) -> Vec<f64> {
        assert_eq!(values.len(), self.stats.len(), "stream width changed");
        if !self.enabled {
            return values.to_vec();
        }
        values.iter().zip(&mut self.stats).map(|(&x, s)| s.emit(x)).collect()
    }
}
