//! APE and the windowed error summaries used to score every model.
//!
//! All windows skip k = 1: the first fitted value equals the first
//! observation by the anchoring convention, so its APE is identically zero
//! and excluding it from the averages matches the published tables. The
//! divisors are therefore `l - 1`, `m - l` and `m - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{GreyError, Result};

/// How APEs are folded into a window summary.
///
/// `RootMeanSquare` is the headline RMSE-of-APE definition; `MeanAbs` is the
/// plain average of APEs over the same windows (the form behind the wind
/// capacity tables).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Aggregate {
    #[default]
    #[serde(alias = "rms")]
    RootMeanSquare,
    #[serde(alias = "mean_ape")]
    MeanAbs,
}

/// Error report for one model on one series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// Absolute percentage error per observation; `ape[0] = 0`.
    pub ape: Vec<f64>,
    /// Training-window summary (k = 2..=l).
    pub rmsepr: f64,
    /// Hold-out summary (k = l+1..=m); absent when l = m.
    pub rmsepo: Option<f64>,
    /// Whole-sample summary (k = 2..=m).
    pub rmse: f64,
    pub train_len: usize,
    pub len: usize,
}

/// Absolute percentage errors, `|s0[k] - pred[k]| / s0[k] * 100`.
pub fn ape(actual: &[f64], predicted: &[f64]) -> Result<Vec<f64>> {
    if actual.len() != predicted.len() {
        return Err(GreyError::Shape(format!(
            "{} actual vs {} predicted values",
            actual.len(),
            predicted.len()
        )));
    }
    actual
        .iter()
        .zip(predicted)
        .map(|(&a, &p)| {
            if a <= 0.0 || !a.is_finite() {
                return Err(GreyError::Domain(format!(
                    "APE needs strictly positive actuals, got {a}"
                )));
            }
            Ok((a - p).abs() / a * 100.0)
        })
        .collect()
}

/// Windowed RMSE summaries of an APE vector: training (k = 2..=l), hold-out
/// (k = l+1..=m) and whole sample (k = 2..=m).
pub fn rmse_windows(ape: &[f64], train_len: usize) -> Result<(f64, Option<f64>, f64)> {
    windows(ape, train_len, Aggregate::RootMeanSquare)
}

/// Same windows, plain mean of APEs.
pub fn mean_ape_windows(ape: &[f64], train_len: usize) -> Result<(f64, Option<f64>, f64)> {
    windows(ape, train_len, Aggregate::MeanAbs)
}

/// Windowed summaries under either aggregate.
pub fn windows(
    ape: &[f64],
    train_len: usize,
    aggregate: Aggregate,
) -> Result<(f64, Option<f64>, f64)> {
    let m = ape.len();
    if train_len < 2 || train_len > m {
        return Err(GreyError::Domain(format!(
            "train length {train_len} outside 2..={m}"
        )));
    }
    let fold = |slice: &[f64]| -> f64 {
        if slice.is_empty() {
            return 0.0;
        }
        match aggregate {
            Aggregate::RootMeanSquare => {
                (slice.iter().map(|v| v * v).sum::<f64>() / slice.len() as f64).sqrt()
            }
            Aggregate::MeanAbs => slice.iter().map(|v| v.abs()).sum::<f64>() / slice.len() as f64,
        }
    };
    let prior = fold(&ape[1..train_len]);
    let post = if m > train_len {
        Some(fold(&ape[train_len..]))
    } else {
        None
    };
    let whole = fold(&ape[1..]);
    Ok((prior, post, whole))
}

/// Full report for a prediction vector.
pub fn report(actual: &[f64], predicted: &[f64], train_len: usize) -> Result<MetricsReport> {
    let ape = ape(actual, predicted)?;
    let (rmsepr, rmsepo, rmse) = rmse_windows(&ape, train_len)?;
    Ok(MetricsReport {
        rmsepr,
        rmsepo,
        rmse,
        train_len,
        len: actual.len(),
        ape,
    })
}
