//! The unified grey estimator/predictor and the special-case models it
//! subsumes.
//!
//! Every kind shares the same pipeline: accumulate the training window with
//! the kind's lambda, assemble the grey design system, least-squares solve,
//! then evaluate a time-response sequence and restore predictions in the
//! original scale through the inverse accumulation.
//!
//! The reduction lattice (all with the integral design column):
//!
//! ```text
//! NIPGM(lambda, alpha) --lambda=1--> GM_TALPHA(alpha) --alpha=1--> NGM_KC
//!                                        |                            |
//!                                     alpha=0                       c = 0
//!                                        v                            v
//!                                      GM11                         NGM_K
//! ```
//!
//! DGM11 sits outside the lattice: a discrete two-parameter recursion fitted
//! directly on the accumulated sequence.

use crate::error::{GreyError, Result};
use crate::linalg::{
    solve_least_squares, trapezoid_power_exp_sum, DesignSystem, SINGULARITY_GUARD,
};
use crate::series::{background, nipago, AccumulatedSeries, BackgroundSeries, RawSeries};

/// Model family selector with the hyperparameters each kind requires.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// New-information-priority accumulated grey model with time power.
    Nipgm { lambda: f64, alpha: f64 },
    /// Grey model with time power (lambda = 1 instance of the unified model).
    GmTalpha { alpha: f64 },
    /// Extended non-homogeneous exponential grey model (lambda = 1, alpha = 1).
    NgmKc,
    /// Non-homogeneous exponential grey model (lambda = 1, alpha = 1, c = 0).
    NgmK,
    /// Classical grey model (lambda = 1, constant grey action).
    Gm11,
    /// Discrete grey model.
    Dgm11,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Nipgm { .. } => "nipgm",
            ModelKind::GmTalpha { .. } => "gm_talpha",
            ModelKind::NgmKc => "ngm_kc",
            ModelKind::NgmK => "ngm_k",
            ModelKind::Gm11 => "gm11",
            ModelKind::Dgm11 => "dgm11",
        }
    }

    /// Accumulation parameter the kind fixes (only NIPGM leaves it free).
    pub fn lambda(&self) -> f64 {
        match self {
            ModelKind::Nipgm { lambda, .. } => *lambda,
            _ => 1.0,
        }
    }

    /// Time-power exponent of the grey action term.
    pub fn alpha(&self) -> Option<f64> {
        match self {
            ModelKind::Nipgm { alpha, .. } | ModelKind::GmTalpha { alpha } => Some(*alpha),
            ModelKind::NgmKc | ModelKind::NgmK => Some(1.0),
            ModelKind::Gm11 => Some(0.0),
            ModelKind::Dgm11 => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if let ModelKind::Nipgm { lambda, .. } = self {
            if !(0.0..=1.0).contains(lambda) || !lambda.is_finite() {
                return Err(GreyError::Domain(format!("lambda {lambda} outside [0, 1]")));
            }
        }
        if let Some(alpha) = self.alpha() {
            if alpha < 0.0 || !alpha.is_finite() {
                return Err(GreyError::Domain(format!("alpha {alpha} must be >= 0")));
            }
        }
        Ok(())
    }
}

/// Middle-column convention of the design matrix.
///
/// `Integral` is the whitening-equation form `(k^(1+a) - (k-1)^(1+a))/(1+a)`;
/// `PowerK` is the discrete form `k^a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DesignColumn {
    #[default]
    Integral,
    PowerK,
}

/// Which route produces the time-response sequence for the classical kinds.
///
/// The unified quadrature route (trapezoid kernel) and the exact-integral
/// closed forms differ by quadrature error for NGM_KC / NGM_K; the closed
/// form is the default for those kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RestorePath {
    #[default]
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FitOptions {
    pub design: DesignColumn,
    pub restore: RestorePath,
}

/// Linear parameters of a fitted model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearParams {
    /// (a, b, c) of the three-column design; NGM_K carries c = 0.
    ThreeTerm { a: f64, b: f64, c: f64 },
    /// (a, b0) of the classical two-column design.
    Constant { a: f64, b0: f64 },
    /// (beta1, beta2) of the discrete recursion.
    Discrete { beta1: f64, beta2: f64 },
}

impl LinearParams {
    pub fn as_vec(&self) -> Vec<f64> {
        match *self {
            LinearParams::ThreeTerm { a, b, c } => vec![a, b, c],
            LinearParams::Constant { a, b0 } => vec![a, b0],
            LinearParams::Discrete { beta1, beta2 } => vec![beta1, beta2],
        }
    }
}

/// A fitted grey model.
#[derive(Debug, Clone, PartialEq)]
pub struct GreyFit {
    kind: ModelKind,
    params: LinearParams,
    first_value: f64,
    m_fit: usize,
    options: FitOptions,
}

/// Assemble the unified design system over the training window:
/// row k-1 of F is `[-h[k], mid(k), 1]` and `G[k-1] = s1[k] - s1[k-1]`
/// for k = 2..=l.
pub fn build_design(
    acc: &AccumulatedSeries,
    bg: &BackgroundSeries,
    alpha: f64,
    design: DesignColumn,
) -> Result<DesignSystem> {
    let l = acc.len();
    if l < crate::series::MIN_OBSERVATIONS {
        return Err(GreyError::InsufficientData(format!(
            "design needs at least {} training points, got {l}",
            crate::series::MIN_OBSERVATIONS
        )));
    }
    if bg.values().len() != l - 1 {
        return Err(GreyError::Shape(format!(
            "background length {} does not match accumulated length {l}",
            bg.values().len()
        )));
    }
    let s1 = acc.values();
    let mut rows = Vec::with_capacity(l - 1);
    let mut rhs = Vec::with_capacity(l - 1);
    for k in 2..=l {
        let mid = middle_column(alpha, k, design);
        rows.push(vec![-bg.values()[k - 2], mid, 1.0]);
        rhs.push(s1[k - 1] - s1[k - 2]);
    }
    DesignSystem::new(rows, rhs)
}

fn middle_column(alpha: f64, k: usize, design: DesignColumn) -> f64 {
    let kf = k as f64;
    match design {
        DesignColumn::Integral => {
            (kf.powf(1.0 + alpha) - (kf - 1.0).powf(1.0 + alpha)) / (1.0 + alpha)
        }
        DesignColumn::PowerK => kf.powf(alpha),
    }
}

/// Fit `kind` on the training window of `raw` with default options.
pub fn fit(kind: ModelKind, raw: &RawSeries) -> Result<GreyFit> {
    fit_with(kind, raw, FitOptions::default())
}

/// Fit with an explicit design-column / restore-path choice.
pub fn fit_with(kind: ModelKind, raw: &RawSeries, options: FitOptions) -> Result<GreyFit> {
    kind.validate()?;
    let l = raw.train_len();
    if l < crate::series::MIN_OBSERVATIONS {
        return Err(GreyError::InsufficientData(format!(
            "fit needs at least {} training points, got {l}",
            crate::series::MIN_OBSERVATIONS
        )));
    }
    let train = raw.train_values();
    let params = match kind {
        ModelKind::Dgm11 => fit_dgm(train)?,
        ModelKind::Gm11 => fit_gm11(train)?,
        ModelKind::NgmK => {
            let acc = nipago(train, 1.0)?;
            let bg = background(&acc)?;
            let full = build_design(&acc, &bg, 1.0, options.design)?;
            // Drop the constant column: c is pinned to zero for this kind.
            let rows = (0..full.nrows())
                .map(|i| vec![full.matrix()[(i, 0)], full.matrix()[(i, 1)]])
                .collect();
            let rhs = full.rhs().iter().copied().collect();
            let sys = DesignSystem::new(rows, rhs)?;
            let sol = solve_least_squares(&sys)?;
            LinearParams::ThreeTerm {
                a: sol[0],
                b: sol[1],
                c: 0.0,
            }
        }
        _ => {
            let alpha = kind.alpha().expect("three-term kinds carry alpha");
            let acc = nipago(train, kind.lambda())?;
            let bg = background(&acc)?;
            let sys = build_design(&acc, &bg, alpha, options.design)?;
            let sol = solve_least_squares(&sys)?;
            LinearParams::ThreeTerm {
                a: sol[0],
                b: sol[1],
                c: sol[2],
            }
        }
    };
    if params.as_vec().iter().any(|v| !v.is_finite()) {
        return Err(GreyError::FitFailed("non-finite parameters".into()));
    }
    Ok(GreyFit {
        kind,
        params,
        first_value: raw.first(),
        m_fit: l,
        options,
    })
}

/// Classical two-column system: rows `[-h[k], 1]`, unknowns (a, b0).
fn fit_gm11(train: &[f64]) -> Result<LinearParams> {
    let acc = nipago(train, 1.0)?;
    let bg = background(&acc)?;
    let s1 = acc.values();
    let rows = bg.values().iter().map(|&h| vec![-h, 1.0]).collect();
    let rhs = s1.windows(2).map(|w| w[1] - w[0]).collect();
    let sys = DesignSystem::new(rows, rhs)?;
    let sol = solve_least_squares(&sys)?;
    Ok(LinearParams::Constant {
        a: sol[0],
        b0: sol[1],
    })
}

/// Orthogonal (total) least squares of `s1[k] = beta1 * s1[k-1] + beta2`.
fn fit_dgm(train: &[f64]) -> Result<LinearParams> {
    let acc = nipago(train, 1.0)?;
    let s1 = acc.values();
    let n = s1.len() - 1;
    let xs = &s1[..n];
    let ys = &s1[1..];
    let xm = xs.iter().sum::<f64>() / n as f64;
    let ym = ys.iter().sum::<f64>() / n as f64;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        let dx = xs[i] - xm;
        let dy = ys[i] - ym;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxy.abs() < f64::EPSILON * (sxx + syy).max(1.0) {
        return Err(GreyError::FitFailed(
            "degenerate accumulated sequence for the discrete model".into(),
        ));
    }
    let d = syy - sxx;
    let beta1 = (d + (d * d + 4.0 * sxy * sxy).sqrt()) / (2.0 * sxy);
    let beta2 = ym - beta1 * xm;
    Ok(LinearParams::Discrete { beta1, beta2 })
}

impl GreyFit {
    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn params(&self) -> &LinearParams {
        &self.params
    }

    pub fn first_value(&self) -> f64 {
        self.first_value
    }

    /// Number of observations the parameters were estimated on.
    pub fn m_fit(&self) -> usize {
        self.m_fit
    }

    pub fn options(&self) -> FitOptions {
        self.options
    }

    /// Time-response value `s1_hat[k]` (k is 1-based; k = 1 returns the
    /// anchoring value `s0[1]`).
    pub fn time_response(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(GreyError::Domain("time response index starts at 1".into()));
        }
        if k == 1 {
            return Ok(self.first_value);
        }
        let s0_1 = self.first_value;
        let kf = k as f64;
        match self.params {
            LinearParams::Discrete { beta1, beta2 } => {
                if (beta1 - 1.0).abs() <= SINGULARITY_GUARD {
                    return Err(GreyError::NearSingular(format!(
                        "discrete model with beta1 = {beta1}"
                    )));
                }
                let p = beta1.powi(k as i32 - 1);
                Ok(p * s0_1 + beta2 * (p - 1.0) / (beta1 - 1.0))
            }
            LinearParams::Constant { a, b0 } => {
                check_a(a)?;
                Ok((s0_1 - b0 / a) * (-a * (kf - 1.0)).exp() + b0 / a)
            }
            LinearParams::ThreeTerm { a, b, c } => {
                check_a(a)?;
                match (self.kind, self.options.restore) {
                    (ModelKind::NgmKc | ModelKind::NgmK, RestorePath::ClosedForm) => {
                        // Exact integral of the alpha = 1 whitening equation:
                        // particular solution (b/a) t + (a c - b)/a^2.
                        let p1 = (a * b + a * c - b) / (a * a);
                        Ok((s0_1 - p1) * (-a * (kf - 1.0)).exp()
                            + (b / a) * kf
                            + (a * c - b) / (a * a))
                    }
                    _ => self.quadrature_response(a, b, c, k),
                }
            }
        }
    }

    fn quadrature_response(&self, a: f64, b: f64, c: f64, k: usize) -> Result<f64> {
        let alpha = self
            .kind
            .alpha()
            .expect("quadrature response only for power-action kinds");
        let kf = k as f64;
        let decay = (-a * (kf - 1.0)).exp();
        let kernel = trapezoid_power_exp_sum(a, alpha, k)?;
        let value = (self.first_value - c / a) * decay + (b / 2.0) * decay * kernel + c / a;
        if !value.is_finite() {
            return Err(GreyError::Overflow("time response"));
        }
        Ok(value)
    }

    /// Restored predictions in the original scale for k = 1..=(m_fit + horizon),
    /// composed as the inverse accumulation of the time-response sequence.
    pub fn restore(&self, horizon: usize) -> Result<Vec<f64>> {
        let n = self.m_fit + horizon;
        let lambda = self.effective_lambda();
        let mut s1_hat = Vec::with_capacity(n);
        for k in 1..=n {
            s1_hat.push(self.time_response(k)?);
        }
        let mut out = crate::series::nipiago_with(&s1_hat, lambda);
        out[0] = self.first_value;
        Ok(out)
    }

    /// Restored predictions through the expanded closed-form difference
    /// (the direct counterpart of the composed route; the two agree to
    /// within accumulated rounding).
    pub fn restore_direct(&self, horizon: usize) -> Result<Vec<f64>> {
        let n = self.m_fit + horizon;
        let lambda = self.effective_lambda();
        let s0_1 = self.first_value;
        let mut out = Vec::with_capacity(n);
        out.push(s0_1);
        match self.params {
            LinearParams::Discrete { beta1, beta2 } => {
                if (beta1 - 1.0).abs() <= SINGULARITY_GUARD {
                    return Err(GreyError::NearSingular(format!(
                        "discrete model with beta1 = {beta1}"
                    )));
                }
                let scale = (beta1 - 1.0) * (s0_1 + beta2 / (beta1 - 1.0));
                for k in 1..n {
                    out.push(scale * beta1.powi(k as i32 - 1));
                }
            }
            LinearParams::Constant { a, b0 } => {
                check_a(a)?;
                for k in 1..n {
                    out.push((1.0 - a.exp()) * (s0_1 - b0 / a) * (-a * k as f64).exp());
                }
            }
            LinearParams::ThreeTerm { a, b, c } => {
                check_a(a)?;
                match (self.kind, self.options.restore) {
                    (ModelKind::NgmKc | ModelKind::NgmK, RestorePath::ClosedForm) => {
                        let p1 = (a * b + a * c - b) / (a * a);
                        for k in 1..n {
                            out.push((1.0 - a.exp()) * (s0_1 - p1) * (-a * k as f64).exp() + b / a);
                        }
                    }
                    _ => {
                        let alpha = self.kind.alpha().expect("power-action kind");
                        let e_neg_a = (-a).exp();
                        for k in 1..n {
                            let kf = k as f64;
                            let kernel = trapezoid_power_exp_sum(a, alpha, k)?;
                            let head = (-a * (kf - 1.0)).exp()
                                * (e_neg_a - lambda)
                                * ((s0_1 - c / a) + (b / 2.0) * kernel);
                            let tail = (b / 2.0)
                                * (kf.powf(alpha) * e_neg_a + (kf + 1.0).powf(alpha))
                                + (c / a) * (1.0 - lambda);
                            out.push(head + tail);
                        }
                    }
                }
            }
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(GreyError::Overflow("restored sequence"));
        }
        Ok(out)
    }

    fn effective_lambda(&self) -> f64 {
        self.kind.lambda()
    }
}

fn check_a(a: f64) -> Result<()> {
    if a.abs() <= SINGULARITY_GUARD {
        Err(GreyError::NearSingular(format!(
            "development coefficient a = {a}"
        )))
    } else {
        Ok(())
    }
}
