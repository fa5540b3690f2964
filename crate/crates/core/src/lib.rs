//! Grey forecasting toolkit for small samples.
//!
//! Implements the new-information-priority accumulated grey model with time
//! power and the classical grey models it generalizes (GM(1,1), DGM(1,1),
//! NGM(1,1,k), NGM(1,1,k,c), GM(1,1,t^alpha)), a polynomial-regression
//! baseline, particle-swarm search over the accumulation parameter lambda and
//! the time-power exponent alpha, and the APE-based error windows used to
//! score everything. Bundled datasets and recipes reproduce the published
//! energy and wind-capacity tables.
//!
//! ```
//! use greycast::{data, models, metrics};
//!
//! let d = data::bundled_dataset("wind_europe").unwrap();
//! let fit = models::fit(models::ModelKind::Gm11, d.raw()).unwrap();
//! let predicted = fit.restore(3).unwrap();
//! let report = metrics::report(d.raw().values(), &predicted, d.raw().train_len()).unwrap();
//! assert!(report.rmse > 0.0);
//! ```

pub mod baselines;
pub mod data;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod models;
pub mod pso;
pub mod report;
pub mod reproduce;
pub mod series;

pub use error::{GreyError, Result};
pub use models::{fit, fit_with, GreyFit, ModelKind};
pub use series::RawSeries;
