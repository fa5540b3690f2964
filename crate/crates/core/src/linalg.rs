//! Small dense least-squares solving and the power-exponential trapezoid
//! kernel the time-response formulas are built on.

use nalgebra::{DMatrix, DVector};

use crate::error::{GreyError, Result};

/// Singular-value ratio below which a design system is declared degenerate.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Threshold under which a division by the development coefficient (or by
/// `beta1 - 1`) is refused.
pub const SINGULARITY_GUARD: f64 = 1e-12;

/// An overdetermined linear system `F r = G`.
#[derive(Debug, Clone)]
pub struct DesignSystem {
    f: DMatrix<f64>,
    g: DVector<f64>,
}

impl DesignSystem {
    /// `rows` are the rows of F, `rhs` is G.
    pub fn new(rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        if rows.len() != rhs.len() {
            return Err(GreyError::Shape(format!(
                "{} design rows vs {} right-hand entries",
                rows.len(),
                rhs.len()
            )));
        }
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
            return Err(GreyError::Shape("ragged or empty design matrix".into()));
        }
        if nrows < ncols {
            return Err(GreyError::InsufficientData(format!(
                "{nrows} equations for {ncols} unknowns"
            )));
        }
        let f = DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
        let g = DVector::from_vec(rhs);
        Ok(Self { f, g })
    }

    pub fn nrows(&self) -> usize {
        self.f.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.f.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.f
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.g
    }
}

/// Minimum-norm least-squares solution of `F r = G` via singular value
/// decomposition.
///
/// An orthogonal factorization is used instead of forming the normal
/// equations: near alpha = 0 the power column of the grey design matrix is
/// almost parallel to the constant column and `F^T F` squares that
/// ill-conditioning away from recoverability.
pub fn solve_least_squares(sys: &DesignSystem) -> Result<Vec<f64>> {
    let svd = sys.f.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let min_sv = svd.singular_values.min();
    if !max_sv.is_finite() || !min_sv.is_finite() || max_sv <= 0.0 {
        return Err(GreyError::RankDeficient(0.0));
    }
    let ratio = min_sv / max_sv;
    if ratio < RANK_TOLERANCE {
        return Err(GreyError::RankDeficient(ratio));
    }
    let solution = svd
        .solve(&sys.g, 0.0)
        .map_err(|e| GreyError::FitFailed(e.to_string()))?;
    if solution.iter().any(|v| !v.is_finite()) {
        return Err(GreyError::FitFailed("non-finite solution".into()));
    }
    Ok(solution.iter().copied().collect())
}

/// The trapezoid kernel of the time-response sequence:
///
/// ```text
/// T(a, alpha, k) = sum_{g=1}^{k-1} [ g^alpha e^{a(g-1)} + (g+1)^alpha e^{a g} ]
/// ```
///
/// Empty sum (k = 1) is 0.
pub fn trapezoid_power_exp_sum(a: f64, alpha: f64, k: usize) -> Result<f64> {
    if k < 1 {
        return Err(GreyError::Domain("k must be at least 1".into()));
    }
    if alpha < 0.0 {
        return Err(GreyError::Domain(format!("alpha {alpha} must be >= 0")));
    }
    let mut sum = 0.0;
    for g in 1..k {
        let g_f = g as f64;
        let term =
            g_f.powf(alpha) * (a * (g_f - 1.0)).exp() + (g_f + 1.0).powf(alpha) * (a * g_f).exp();
        sum += term;
        if !sum.is_finite() {
            return Err(GreyError::Overflow("trapezoid_power_exp_sum"));
        }
    }
    Ok(sum)
}

/// Closed form of `∫_1^t u e^{a(u-1)} du`, valid for `|a| > SINGULARITY_GUARD`.
///
/// Used to cross-check the trapezoid kernel at alpha = 1.
pub fn exact_power_integral_alpha1(a: f64, t: f64) -> Result<f64> {
    if a.abs() <= SINGULARITY_GUARD {
        return Err(GreyError::NearSingular(format!(
            "exact power integral undefined at a = {a}"
        )));
    }
    Ok(((a * t - 1.0) * (a * (t - 1.0)).exp() + (1.0 - a)) / (a * a))
}
