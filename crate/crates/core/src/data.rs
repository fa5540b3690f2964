//! Dataset ingestion, the bundled study datasets, and report serialization.
//!
//! The bundled data is embedded at build time so reproduction runs need no
//! network or external files. Published comparator columns (including the
//! ARIMA reference, which is never recomputed) ride along with each dataset.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{GreyError, Result};
use crate::metrics::Aggregate;
use crate::series::RawSeries;

static BUNDLED_JSON: &str = include_str!("../data/bundled.json");
static BUNDLED: OnceLock<Vec<Dataset>> = OnceLock::new();

/// A published model column: fitted/predicted values plus the error-table
/// footer, and the tuned hyperparameters where the study reports them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PublishedModel {
    pub fitted: Vec<f64>,
    /// (prior, post, whole) error summary as printed.
    pub footer: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// The optimizer's reported objective value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForecastColumn {
    pub labels: Vec<i64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthColumn {
    pub labels: Vec<i64>,
    pub values: Vec<f64>,
    pub mean: f64,
}

#[derive(Debug, Clone, Deserialize)]
struct DatasetRecord {
    name: String,
    description: String,
    unit: String,
    labels: Vec<i64>,
    values: Vec<f64>,
    train_len: usize,
    footer_aggregate: Aggregate,
    pr_degree: usize,
    arima_order: String,
    published: BTreeMap<String, PublishedModel>,
    #[serde(default)]
    forecast_nipgm: Option<ForecastColumn>,
    #[serde(default)]
    growth_rates: Option<GrowthColumn>,
}

/// One bundled dataset with its reproduction recipe.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub description: String,
    pub unit: String,
    raw: RawSeries,
    /// Aggregate the published error footers use.
    pub footer_aggregate: Aggregate,
    /// Polynomial degree of the published PR(n) comparator.
    pub pr_degree: usize,
    /// Order label of the published ARIMA reference column.
    pub arima_order: String,
    published: BTreeMap<String, PublishedModel>,
    pub forecast_nipgm: Option<ForecastColumn>,
    pub growth_rates: Option<GrowthColumn>,
}

impl Dataset {
    pub fn raw(&self) -> &RawSeries {
        &self.raw
    }

    /// Published column for a model name ("pr", "arima", "gm11", "dgm11",
    /// "ngm_kc", "gm_talpha", "nipgm").
    pub fn published(&self, model: &str) -> Option<&PublishedModel> {
        self.published.get(model)
    }

    pub fn published_models(&self) -> impl Iterator<Item = (&str, &PublishedModel)> {
        self.published.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Published Europe wind parameter vectors, used as recovery targets.
#[derive(Debug, Clone, Deserialize)]
pub struct EuropePublishedParams {
    pub gm11: Vec<f64>,
    pub dgm11: Vec<f64>,
    pub ngm_kc: Vec<f64>,
    pub gm_talpha: Vec<f64>,
    pub nipgm: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct BundledFile {
    datasets: Vec<DatasetRecord>,
    europe_published_params: EuropePublishedParams,
}

fn bundled_file() -> &'static BundledFile {
    static FILE: OnceLock<BundledFile> = OnceLock::new();
    FILE.get_or_init(|| serde_json::from_str(BUNDLED_JSON).expect("embedded dataset bundle parses"))
}

/// All bundled datasets.
pub fn bundled_datasets() -> &'static [Dataset] {
    BUNDLED.get_or_init(|| {
        bundled_file()
            .datasets
            .iter()
            .map(|record| {
                let raw =
                    RawSeries::new(record.labels.clone(), record.values.clone(), record.train_len)
                        .expect("embedded dataset passes series validation");
                Dataset {
                    name: record.name.clone(),
                    description: record.description.clone(),
                    unit: record.unit.clone(),
                    raw,
                    footer_aggregate: record.footer_aggregate,
                    pr_degree: record.pr_degree,
                    arima_order: record.arima_order.clone(),
                    published: record.published.clone(),
                    forecast_nipgm: record.forecast_nipgm.clone(),
                    growth_rates: record.growth_rates.clone(),
                }
            })
            .collect()
    })
}

/// Look up a bundled dataset by name.
pub fn bundled_dataset(name: &str) -> Result<&'static Dataset> {
    bundled_datasets()
        .iter()
        .find(|d| d.name == name)
        .ok_or_else(|| {
            GreyError::NotFound(format!(
                "no bundled dataset '{name}' (available: {})",
                bundled_names().join(", ")
            ))
        })
}

pub fn bundled_names() -> Vec<&'static str> {
    bundled_datasets().iter().map(|d| d.name.as_str()).collect()
}

/// Published Europe parameter vectors (with the NIPGM b sign corrected to
/// match the accumulated system and the fitted tables).
pub fn europe_published_params() -> &'static EuropePublishedParams {
    &bundled_file().europe_published_params
}

/// Parse the input CSV format: UTF-8, header line `label,value`, one
/// observation per line, integer label, decimal value.
pub fn parse_csv(text: &str) -> Result<RawSeries> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| GreyError::Format("empty file".into()))?;
    let normalized = header.trim().to_ascii_lowercase();
    if normalized != "label,value" {
        return Err(GreyError::Format(format!(
            "expected header 'label,value', got '{}'",
            header.trim()
        )));
    }
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (label, value) = line.split_once(',').ok_or_else(|| {
            GreyError::Format(format!("line {}: expected 'label,value'", idx + 1))
        })?;
        let label: i64 = label.trim().parse().map_err(|_| {
            GreyError::Format(format!(
                "line {}: label '{label}' is not an integer",
                idx + 1
            ))
        })?;
        let value: f64 = value.trim().parse().map_err(|_| {
            GreyError::Format(format!("line {}: value '{value}' is not a number", idx + 1))
        })?;
        labels.push(label);
        values.push(value);
    }
    let len = values.len();
    RawSeries::new(labels, values, len.max(1))
}

/// Read and parse a series file. The split point defaults to the full length;
/// use [`RawSeries::with_train_len`] to hold out a test window.
pub fn load_csv(path: impl AsRef<Path>) -> Result<RawSeries> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text)
}

/// Serialize a raw series back to the input CSV format.
pub fn series_to_csv(raw: &RawSeries) -> String {
    let mut out = String::from("label,value\n");
    for (label, value) in raw.labels().iter().zip(raw.values()) {
        out.push_str(&format!("{label},{value:.10}\n"));
    }
    out
}
