use serde::{Deserialize, Serialize};

/// Divisor used for standard deviations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SdKind {
    /// Divide by n.
    #[default]
    Population,
    /// Divide by n - 1. A single value has SD 0.
    Sample,
}

/// Mean and SD of `values`, or `None` when empty.
pub fn mean_sd(values: &[f64], kind: SdKind) -> Option<(f64, f64)> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    let div = match kind {
        SdKind::Population => n,
        SdKind::Sample => n.saturating_sub(1).max(1),
    };
    Some((mean, (ss / div as f64).sqrt()))
}
