//! Report structures shared by the CLI, the reproduction harness and the
//! browser demo, with CSV and JSON renderings.
//!
//! The CSV layout mirrors the study's tables: observation labels as rows,
//! models as columns, error summaries as footer rows. Numbers render with
//! four decimal places.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::metrics::Aggregate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub l: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub labels: Vec<i64>,
    /// Annual increase rates in percent, `v[t] / v[t-1] - 1`.
    pub rates: Vec<f64>,
    pub mean: f64,
}

/// One model column of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub name: String,
    /// Hyperparameters the column was produced with (lambda, alpha, degree).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub hyper: BTreeMap<String, f64>,
    /// Estimated linear parameters, empty for reference columns.
    #[serde(default)]
    pub params: Vec<f64>,
    pub fitted: Vec<f64>,
    pub ape: Vec<f64>,
    pub rmsepr: f64,
    pub rmsepo: Option<f64>,
    pub rmse: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthReport>,
}

/// A full table: actual observations plus any number of model columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub dataset: String,
    pub split: Split,
    /// Row labels; may extend past `split.m` for forecast rows.
    pub labels: Vec<i64>,
    pub actual: Vec<f64>,
    /// Aggregate behind the three error rows of each model.
    pub footer_aggregate: Aggregate,
    pub models: Vec<ModelReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = crate::error::GreyError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(crate::error::GreyError::Format(format!(
                "unknown report format '{other}' (expected csv or json)"
            ))),
        }
    }
}

fn fmt_cell(v: f64) -> String {
    format!("{v:.4}")
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| crate::error::GreyError::Format(format!("report json: {e}")))
    }

    /// Years as rows, models as columns, error summaries as footer rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("label,actual");
        for m in &self.models {
            out.push(',');
            out.push_str(&m.name);
        }
        out.push('\n');
        for (row, label) in self.labels.iter().enumerate() {
            out.push_str(&label.to_string());
            out.push(',');
            if row < self.actual.len() {
                out.push_str(&fmt_cell(self.actual[row]));
            }
            for m in &self.models {
                out.push(',');
                if row < m.fitted.len() {
                    out.push_str(&fmt_cell(m.fitted[row]));
                }
            }
            out.push('\n');
        }
        let footer_names = ["RMSEPR", "RMSEPO", "RMSE"];
        for (i, fname) in footer_names.iter().enumerate() {
            out.push_str(fname);
            out.push(',');
            for m in &self.models {
                out.push(',');
                let value = match i {
                    0 => Some(m.rmsepr),
                    1 => m.rmsepo,
                    _ => Some(m.rmse),
                };
                if let Some(v) = value {
                    out.push_str(&fmt_cell(v));
                }
            }
            out.push('\n');
        }
        let has_growth = self.models.iter().any(|m| m.growth.is_some());
        if has_growth {
            out.push('\n');
            out.push_str("increase_rate_label");
            for m in &self.models {
                out.push(',');
                out.push_str(&m.name);
            }
            out.push('\n');
            let rows = self
                .models
                .iter()
                .filter_map(|m| m.growth.as_ref())
                .map(|g| g.labels.len())
                .max()
                .unwrap_or(0);
            for row in 0..rows {
                let label = self
                    .models
                    .iter()
                    .filter_map(|m| m.growth.as_ref())
                    .find_map(|g| g.labels.get(row));
                out.push_str(&label.map(|l| l.to_string()).unwrap_or_default());
                for m in &self.models {
                    out.push(',');
                    if let Some(g) = &m.growth {
                        if let Some(v) = g.rates.get(row) {
                            out.push_str(&fmt_cell(*v));
                        }
                    }
                }
                out.push('\n');
            }
            out.push_str("mean");
            for m in &self.models {
                out.push(',');
                if let Some(g) = &m.growth {
                    out.push_str(&fmt_cell(g.mean));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }
}

/// Write a report to `path` in the requested format.
pub fn write_report(report: &Report, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, report.render(format))?;
    Ok(())
}

/// Rank summary across datasets: average error summaries per model with
/// 1-based ranks (1 = smallest average).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub title: String,
    pub models: Vec<String>,
    pub avg_prior: Vec<f64>,
    pub rank_prior: Vec<usize>,
    pub avg_post: Vec<f64>,
    pub rank_post: Vec<usize>,
    pub avg_whole: Vec<f64>,
    pub rank_whole: Vec<usize>,
}

impl RankTable {
    pub fn rank_of(&self, model: &str) -> Option<usize> {
        let idx = self.models.iter().position(|m| m == model)?;
        Some(self.rank_whole[idx])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.title));
        out.push_str("metric");
        for m in &self.models {
            out.push(',');
            out.push_str(m);
        }
        out.push('\n');
        let rows: [(&str, &Vec<f64>, &Vec<usize>); 3] = [
            ("avg_rmsepr", &self.avg_prior, &self.rank_prior),
            ("avg_rmsepo", &self.avg_post, &self.rank_post),
            ("avg_rmse", &self.avg_whole, &self.rank_whole),
        ];
        for (name, avgs, ranks) in rows {
            out.push_str(name);
            for v in avgs {
                out.push(',');
                out.push_str(&fmt_cell(*v));
            }
            out.push('\n');
            out.push_str(&name.replace("avg", "rank"));
            for r in ranks {
                out.push(',');
                out.push_str(&r.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Ranks of 1-based positions of `values` sorted ascending.
pub fn ranks_ascending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite averages"));
    let mut ranks = vec![0usize; values.len()];
    for (pos, idx) in order.into_iter().enumerate() {
        ranks[idx] = pos + 1;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        Report {
            dataset: "demo".into(),
            split: Split { l: 4, m: 5 },
            labels: vec![1, 2, 3, 4, 5],
            actual: vec![1.0, 2.0, 3.0, 4.0, 5.0],
            footer_aggregate: Aggregate::RootMeanSquare,
            models: vec![ModelReport {
                name: "gm11".into(),
                hyper: BTreeMap::new(),
                params: vec![-0.1, 1.0],
                fitted: vec![1.0, 2.1, 2.9, 4.2, 5.1],
                ape: vec![0.0, 5.0, 3.33, 5.0, 2.0],
                rmsepr: 4.0,
                rmsepo: Some(2.0),
                rmse: 3.5,
                growth: None,
            }],
        }
    }

    #[test]
    fn empty_model_set_renders_header_only_table() {
        let report = Report {
            models: vec![],
            ..sample_report()
        };
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("label,actual"));
        // Rows and footers still present, just with no model cells.
        assert!(csv.contains("RMSE,"));
    }

    #[test]
    fn json_round_trip_is_identity() {
        let report = sample_report();
        let text = report.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn csv_footer_rows_present() {
        let csv = sample_report().to_csv();
        assert!(csv.contains("RMSEPR,,4.0000"));
        assert!(csv.contains("RMSEPO,,2.0000"));
        assert!(csv.contains("RMSE,,3.5000"));
    }

    #[test]
    fn ranks_are_one_based_ascending() {
        assert_eq!(ranks_ascending(&[3.0, 1.0, 2.0]), vec![3, 1, 2]);
    }
}
