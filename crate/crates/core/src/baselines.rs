//! Polynomial regression comparator PR(n).
//!
//! The regressor is the time index k = 1..=l, not the calendar label; degrees
//! follow each bundled dataset's reproduction recipe.

use crate::error::{GreyError, Result};
use crate::linalg::{solve_least_squares, DesignSystem};
use crate::series::RawSeries;

/// Fitted polynomial, coefficients in ascending powers of k.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFit {
    degree: usize,
    coefficients: Vec<f64>,
}

impl PolyFit {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }
}

/// Ordinary least squares of the training values on `[1, k, k^2, ..., k^n]`.
pub fn fit_poly(raw: &RawSeries, degree: usize) -> Result<PolyFit> {
    if degree < 1 {
        return Err(GreyError::Domain("polynomial degree must be >= 1".into()));
    }
    let l = raw.train_len();
    if l < degree + 1 {
        return Err(GreyError::InsufficientData(format!(
            "degree {degree} needs at least {} training points, got {l}",
            degree + 1
        )));
    }
    let rows = (1..=l)
        .map(|k| {
            let kf = k as f64;
            (0..=degree).map(|p| kf.powi(p as i32)).collect()
        })
        .collect();
    let sys = DesignSystem::new(rows, raw.train_values().to_vec())?;
    let coefficients = solve_least_squares(&sys)?;
    Ok(PolyFit {
        degree,
        coefficients,
    })
}

/// Horner evaluation at each integer index in `k_from..=k_to`.
pub fn predict_poly(fit: &PolyFit, k_from: usize, k_to: usize) -> Result<Vec<f64>> {
    if k_from > k_to {
        return Err(GreyError::Domain(format!(
            "empty index range {k_from}..={k_to}"
        )));
    }
    Ok((k_from..=k_to)
        .map(|k| {
            let kf = k as f64;
            fit.coefficients
                .iter()
                .rev()
                .fold(0.0, |acc, &c| acc * kf + c)
        })
        .collect())
}
