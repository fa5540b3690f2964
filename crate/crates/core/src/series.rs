//! Time-series container and the new-information-priority accumulation,
//! inverse, and background transforms.
//!
//! The accumulation weights observation `v` by `lambda^(k-v)` inside the
//! running sum, so recent observations dominate when `lambda < 1`:
//!
//! ```text
//! s1[k] = sum_{v=1..k} lambda^(k-v) * s0[v]
//! ```
//!
//! `lambda = 1` is the classical cumulative sum, `lambda = 0` the identity.

use serde::{Deserialize, Serialize};

use crate::error::{GreyError, Result};

/// Minimum number of observations grey modeling needs.
pub const MIN_OBSERVATIONS: usize = 4;

/// A strictly positive time series with unit-step labels and a train/test
/// split point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawSeries {
    labels: Vec<i64>,
    values: Vec<f64>,
    train_len: usize,
}

impl RawSeries {
    /// Validates and constructs a series. `train_len` is the number of leading
    /// observations used for estimation; the rest form the hold-out window.
    pub fn new(labels: Vec<i64>, values: Vec<f64>, train_len: usize) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(GreyError::Shape(format!(
                "{} labels vs {} values",
                labels.len(),
                values.len()
            )));
        }
        if values.len() < MIN_OBSERVATIONS {
            return Err(GreyError::InsufficientData(format!(
                "{} observations, grey modeling needs at least {}",
                values.len(),
                MIN_OBSERVATIONS
            )));
        }
        for (label, value) in labels.iter().zip(&values) {
            if !value.is_finite() || *value <= 0.0 {
                return Err(GreyError::Domain(format!(
                    "observation at label {label} is {value}; values must be strictly positive"
                )));
            }
        }
        if labels.windows(2).any(|w| w[1] - w[0] != 1) {
            return Err(GreyError::Domain(
                "labels must be strictly increasing with unit step".into(),
            ));
        }
        if train_len < 1 || train_len > values.len() {
            return Err(GreyError::Domain(format!(
                "train length {train_len} outside 1..={}",
                values.len()
            )));
        }
        Ok(Self {
            labels,
            values,
            train_len,
        })
    }

    /// Series with integer labels starting at 1.
    pub fn from_values(values: Vec<f64>, train_len: usize) -> Result<Self> {
        let labels = (1..=values.len() as i64).collect();
        Self::new(labels, values, train_len)
    }

    /// Same observations, different split point.
    pub fn with_train_len(&self, train_len: usize) -> Result<Self> {
        Self::new(self.labels.clone(), self.values.clone(), train_len)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn train_len(&self) -> usize {
        self.train_len
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The estimation window `s0[1..=l]`.
    pub fn train_values(&self) -> &[f64] {
        &self.values[..self.train_len]
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    /// Label the extrapolated index `k` (1-based) would carry.
    pub fn label_at(&self, k: usize) -> i64 {
        self.labels[0] + (k as i64 - 1)
    }
}

/// The 1-NIPAGO sequence for a given lambda.
#[derive(Debug, Clone, PartialEq)]
pub struct AccumulatedSeries {
    lambda: f64,
    values: Vec<f64>,
}

impl AccumulatedSeries {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Mean-of-consecutive-neighbors sequence `h[k] = (s1[k] + s1[k-1]) / 2`,
/// stored for k = 2..=m (length m-1).
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundSeries {
    values: Vec<f64>,
}

impl BackgroundSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// First-order new-information-priority accumulation of `values`.
///
/// Runs the O(m) recurrence `s1[k] = lambda * s1[k-1] + s0[k]`, which equals
/// the weighted sum `sum_v lambda^(k-v) s0[v]`.
pub fn nipago(values: &[f64], lambda: f64) -> Result<AccumulatedSeries> {
    if !(0.0..=1.0).contains(&lambda) || !lambda.is_finite() {
        return Err(GreyError::Domain(format!("lambda {lambda} outside [0, 1]")));
    }
    let mut acc = Vec::with_capacity(values.len());
    let mut prev = 0.0;
    for &v in values {
        let s = lambda * prev + v;
        acc.push(s);
        prev = s;
    }
    Ok(AccumulatedSeries {
        lambda,
        values: acc,
    })
}

/// Inverse accumulation: recovers the original values from an accumulated
/// series, `s0[k] = s1[k] - lambda * s1[k-1]` with `s0[1] = s1[1]`.
pub fn nipiago(acc: &AccumulatedSeries) -> Vec<f64> {
    nipiago_with(acc.values(), acc.lambda())
}

/// Inverse accumulation over a plain slice (used for restored model output,
/// where the accumulated values are predictions rather than data).
pub fn nipiago_with(values: &[f64], lambda: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    for k in 0..values.len() {
        if k == 0 {
            out.push(values[0]);
        } else {
            out.push(values[k] - lambda * values[k - 1]);
        }
    }
    out
}

/// Background (mean generation) sequence of an accumulated series.
pub fn background(acc: &AccumulatedSeries) -> Result<BackgroundSeries> {
    if acc.len() < 2 {
        return Err(GreyError::InsufficientData(
            "background sequence needs at least 2 accumulated values".into(),
        ));
    }
    let values = acc
        .values()
        .windows(2)
        .map(|w| 0.5 * w[1] + 0.5 * w[0])
        .collect();
    Ok(BackgroundSeries { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nipago_lambda_one_is_cumulative_sum() {
        let acc = nipago(&[1.0, 2.0, 3.0], 1.0).unwrap();
        assert_eq!(acc.values(), &[1.0, 3.0, 6.0]);
    }

    #[test]
    fn nipago_half_lambda() {
        // Frozen from the direct double-loop evaluation below.
        let acc = nipago(&[1.0, 2.0, 3.0], 0.5).unwrap();
        assert_eq!(acc.values(), &[1.0, 2.5, 4.25]);

        // Independent oracle: literal weighted double sum.
        let raw = [1.0, 2.0, 3.0];
        for (k, &got) in acc.values().iter().enumerate() {
            let direct: f64 = (0..=k).map(|v| 0.5f64.powi((k - v) as i32) * raw[v]).sum();
            assert_relative_eq!(got, direct, max_relative = 1e-15);
        }
    }

    #[test]
    fn nipago_lambda_zero_is_identity() {
        let raw = [4.0, 9.0, 2.5, 7.0];
        let acc = nipago(&raw, 0.0).unwrap();
        assert_eq!(acc.values(), &raw);
    }

    #[test]
    fn nipago_rejects_lambda_outside_unit_interval() {
        assert!(matches!(nipago(&[1.0], -0.1), Err(GreyError::Domain(_))));
        assert!(matches!(nipago(&[1.0], 1.1), Err(GreyError::Domain(_))));
        assert!(matches!(
            nipago(&[1.0], f64::NAN),
            Err(GreyError::Domain(_))
        ));
    }

    #[test]
    fn nipiago_inverts_cumulative_sum() {
        let acc = nipago(&[1.0, 2.0, 3.0], 1.0).unwrap();
        assert_eq!(nipiago(&acc), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn nipiago_half_lambda_hand_values() {
        let acc = nipago(&[1.0, 2.0, 3.0], 0.5).unwrap();
        let back = nipiago(&acc);
        for (got, want) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert_relative_eq!(*got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn background_mean_of_neighbors() {
        let acc = nipago(&[1.0, 2.0, 3.0], 1.0).unwrap();
        let bg = background(&acc).unwrap();
        assert_eq!(bg.values(), &[2.0, 4.5]);
    }

    #[test]
    fn background_constant_fixed_point() {
        let acc = AccumulatedSeries {
            lambda: 1.0,
            values: vec![5.0, 5.0, 5.0, 5.0],
        };
        assert_eq!(background(&acc).unwrap().values(), &[5.0, 5.0, 5.0]);
    }

    #[test]
    fn background_needs_two_points() {
        let acc = AccumulatedSeries {
            lambda: 1.0,
            values: vec![5.0],
        };
        assert!(matches!(
            background(&acc),
            Err(GreyError::InsufficientData(_))
        ));
    }

    #[test]
    fn raw_series_rejects_bad_input() {
        assert!(matches!(
            RawSeries::from_values(vec![1.0, 2.0, 3.0], 3),
            Err(GreyError::InsufficientData(_))
        ));
        assert!(matches!(
            RawSeries::from_values(vec![1.0, 0.0, 3.0, 4.0], 4),
            Err(GreyError::Domain(_))
        ));
        assert!(matches!(
            RawSeries::new(vec![1, 2, 4, 5], vec![1.0; 4], 4),
            Err(GreyError::Domain(_))
        ));
        assert!(matches!(
            RawSeries::from_values(vec![1.0; 5], 6),
            Err(GreyError::Domain(_))
        ));
    }
}
