//! Browser bindings for the interactive demo page.
//!
//! Three operations back the page: exploring a fit at chosen hyperparameters,
//! running a (scaled-down) swarm search, and extending a forecast. All
//! results cross the boundary as JSON strings so the page needs no generated
//! glue types; the same functions compile and run on the host for testing.

use serde::Serialize;

use greycast::data::{bundled_dataset, bundled_datasets};
use greycast::metrics;
use greycast::models::{fit_with, FitOptions, ModelKind};
use greycast::pso::{optimize_trials, KindTemplate, PsoConfig};
use greycast::reproduce::{growth_report, published_column};

#[derive(Serialize)]
struct DatasetInfo {
    name: String,
    description: String,
    unit: String,
    labels: Vec<i64>,
    values: Vec<f64>,
    train_len: usize,
    published_lambda: f64,
    published_alpha: f64,
}

#[derive(Serialize)]
struct CurveResult {
    labels: Vec<i64>,
    actual: Vec<f64>,
    fitted: Vec<f64>,
    comparator: Vec<f64>,
    comparator_name: String,
    rmsepr: f64,
    rmsepo: Option<f64>,
    rmse: f64,
    params: Vec<f64>,
    growth_labels: Vec<i64>,
    growth_rates: Vec<f64>,
    growth_mean: f64,
}

#[derive(Serialize)]
struct SearchResult {
    lambda: f64,
    alpha: f64,
    fitness: f64,
    trace: Vec<f64>,
}

fn err_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

/// JSON list of the bundled datasets with their published hyperparameters.
pub fn datasets_json() -> String {
    let list: Vec<DatasetInfo> = bundled_datasets()
        .iter()
        .map(|d| {
            let published = d.published("nipgm");
            DatasetInfo {
                name: d.name.clone(),
                description: d.description.clone(),
                unit: d.unit.clone(),
                labels: d.raw().labels().to_vec(),
                values: d.raw().values().to_vec(),
                train_len: d.raw().train_len(),
                published_lambda: published.and_then(|p| p.lambda).unwrap_or(0.5),
                published_alpha: published.and_then(|p| p.alpha).unwrap_or(1.0),
            }
        })
        .collect();
    serde_json::to_string(&list).expect("dataset list serializes")
}

/// Fit the unified model at `(lambda, alpha)` and extend `horizon` steps past
/// the sample; the published comparator column of `comparator` rides along
/// for visual comparison.
pub fn explore_json(
    dataset: &str,
    lambda: f64,
    alpha: f64,
    horizon: usize,
    comparator: &str,
) -> String {
    match explore_impl(dataset, lambda, alpha, horizon, comparator) {
        Ok(json) => json,
        Err(e) => err_json(e),
    }
}

fn explore_impl(
    dataset: &str,
    lambda: f64,
    alpha: f64,
    horizon: usize,
    comparator: &str,
) -> Result<String, greycast::GreyError> {
    let d = bundled_dataset(dataset)?;
    let raw = d.raw();
    let m = raw.len();
    let fit = fit_with(
        ModelKind::Nipgm { lambda, alpha },
        raw,
        FitOptions::default(),
    )?;
    let fitted = fit.restore(m - raw.train_len() + horizon)?;
    let ape = metrics::ape(raw.values(), &fitted[..m])?;
    let (rmsepr, rmsepo, rmse) = metrics::windows(&ape, raw.train_len(), d.footer_aggregate)?;
    let comparator_col = if comparator.is_empty() || comparator == "none" {
        Vec::new()
    } else {
        // Regenerated via the bundled recipe so the curve extends with the
        // fit (the reference column stays at sample length).
        published_column(d, comparator, horizon)?.fitted
    };
    let growth = growth_report(raw.values(), &fitted, raw.labels(), m);
    let labels: Vec<i64> = (1..=fitted.len()).map(|k| raw.label_at(k)).collect();
    let result = CurveResult {
        labels,
        actual: raw.values().to_vec(),
        fitted,
        comparator: comparator_col,
        comparator_name: comparator.to_string(),
        rmsepr,
        rmsepo,
        rmse,
        params: fit.params().as_vec(),
        growth_labels: growth.labels,
        growth_rates: growth.rates,
        growth_mean: growth.mean,
    };
    Ok(serde_json::to_string(&result).expect("curve result serializes"))
}

/// Swarm search over `(lambda, alpha)`; `iterations`/`particles` are scaled
/// down by the page to keep interaction snappy.
pub fn search_json(
    dataset: &str,
    seed: u64,
    iterations: usize,
    particles: usize,
    trials: usize,
) -> String {
    let run = || -> Result<String, greycast::GreyError> {
        let d = bundled_dataset(dataset)?;
        let mut config = PsoConfig::published(KindTemplate::Nipgm);
        config.seed = seed;
        config.iterations = iterations.clamp(1, 2000);
        config.particles = particles.clamp(2, 200);
        config.aggregate = d.footer_aggregate;
        let outcome = optimize_trials(d.raw(), KindTemplate::Nipgm, &config, trials.clamp(1, 50))?;
        let result = SearchResult {
            lambda: outcome.position[0],
            alpha: outcome.position[1],
            fitness: outcome.fitness,
            trace: outcome.trace,
        };
        Ok(serde_json::to_string(&result).expect("search result serializes"))
    };
    match run() {
        Ok(json) => json,
        Err(e) => err_json(e),
    }
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen]
    pub fn datasets() -> String {
        super::datasets_json()
    }

    #[wasm_bindgen]
    pub fn explore(
        dataset: &str,
        lambda: f64,
        alpha: f64,
        horizon: usize,
        comparator: &str,
    ) -> String {
        super::explore_json(dataset, lambda, alpha, horizon, comparator)
    }

    #[wasm_bindgen]
    pub fn search(
        dataset: &str,
        seed: u64,
        iterations: usize,
        particles: usize,
        trials: usize,
    ) -> String {
        super::search_json(dataset, seed, iterations, particles, trials)
    }
}
