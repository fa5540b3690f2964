//! Command-line surface for fitting, optimizing, forecasting and reproducing
//! the bundled study tables.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use greycast::baselines::{fit_poly, predict_poly};
use greycast::data::{bundled_dataset, load_csv, Dataset};
use greycast::error::{GreyError, Result};
use greycast::metrics::{self, Aggregate};
use greycast::models::{fit_with, DesignColumn, FitOptions, ModelKind};
use greycast::pso::{optimize_trials, FitnessWindow, Inertia, KindTemplate, PsoConfig, PsoOutcome};
use greycast::report::{write_report, ModelReport, RankTable, Report, ReportFormat, Split};
use greycast::reproduce::{self, growth_report, StudyCase};
use greycast::series::RawSeries;

#[derive(Parser)]
#[command(
    name = "greycast",
    version,
    about = "Grey forecasting toolkit: unified time-power grey models, swarm-tuned hyperparameters, and study-table reproduction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one or more models and report fitted values and error summaries.
    Fit(FitArgs),
    /// Search lambda/alpha by particle swarm and report the best fitness.
    Optimize(OptimizeArgs),
    /// Extend a fitted model past the sample and report growth rates.
    Forecast(FitArgs),
    /// Regenerate a study table (or the rank summaries) from bundled data.
    Reproduce(ReproduceArgs),
    /// List the bundled datasets.
    Datasets,
}

#[derive(Args)]
struct DataArgs {
    /// `bundled:<name>` or a CSV path (header `label,value`).
    #[arg(long)]
    data: String,
    /// Training length l (defaults to the bundled split, or the full series).
    #[arg(long)]
    train: Option<usize>,
}

#[derive(Args)]
struct PsoArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent swarm restarts; the best run wins.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    #[arg(long, default_value_t = 100)]
    particles: usize,
    #[arg(long, default_value_t = 10000.0)]
    penalty: f64,
    /// `fixed:<w>` or `decay:<min>,<max>`.
    #[arg(long, default_value = "fixed:0.6")]
    inertia: String,
    /// Error window the fitness minimizes: `prior` or `full`.
    #[arg(long = "fitness-window", default_value = "full")]
    fitness_window: String,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `csv` or `json`.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Repeatable: gm11|dgm11|ngm_k|ngm_kc|gm_talpha|nipgm|pr.
    #[arg(long = "model", required = true)]
    models: Vec<String>,
    /// Accumulation parameter for nipgm (searched when omitted).
    #[arg(long)]
    lambda: Option<f64>,
    /// Time-power exponent for nipgm/gm_talpha (searched when omitted).
    #[arg(long)]
    alpha: Option<f64>,
    /// Polynomial degree for pr.
    #[arg(long)]
    degree: Option<usize>,
    /// Design middle column for gm_talpha/nipgm: `integral` or `power`.
    #[arg(long, default_value = "integral")]
    design: String,
    /// Prediction steps past the sample (forecast command).
    #[arg(long, default_value_t = 0)]
    horizon: usize,
    #[command(flatten)]
    pso: PsoArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    data: DataArgs,
    /// nipgm or gm_talpha.
    #[arg(long = "model", default_value = "nipgm")]
    model: String,
    /// Design middle column for gm_talpha: `integral` or `power`.
    #[arg(long, default_value = "integral")]
    design: String,
    #[command(flatten)]
    pso: PsoArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ReproduceArgs {
    /// case1|case2|case3|europe|north_america|asia|world|ranks.
    case: String,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit(args) => cmd_fit(args, false),
        Command::Forecast(args) => cmd_fit(args, true),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Reproduce(args) => cmd_reproduce(args),
        Command::Datasets => {
            for d in greycast::data::bundled_datasets() {
                println!(
                    "{:20} m={:2} l={:2}  {} ({})",
                    d.name,
                    d.raw().len(),
                    d.raw().train_len(),
                    d.description,
                    d.unit
                );
            }
            Ok(())
        }
    }
}

/// Loaded series plus the bundled recipe when the source is a bundled name.
struct LoadedData {
    raw: RawSeries,
    dataset: Option<&'static Dataset>,
}

fn load_data(args: &DataArgs) -> Result<LoadedData> {
    let (raw, dataset) = if let Some(name) = args.data.strip_prefix("bundled:") {
        let d = bundled_dataset(name)?;
        (d.raw().clone(), Some(d))
    } else {
        let path = args.data.strip_prefix("csv:").unwrap_or(&args.data);
        (load_csv(path)?, None)
    };
    let raw = match args.train {
        Some(l) => raw.with_train_len(l)?,
        None => raw,
    };
    Ok(LoadedData { raw, dataset })
}

fn parse_inertia(text: &str) -> Result<Inertia> {
    if let Some(w) = text.strip_prefix("fixed:") {
        let w: f64 = w
            .parse()
            .map_err(|_| GreyError::Format(format!("bad inertia weight '{w}'")))?;
        return Ok(Inertia::Fixed(w));
    }
    if let Some(rest) = text.strip_prefix("decay:") {
        let (lo, hi) = rest
            .split_once(',')
            .ok_or_else(|| GreyError::Format("decay needs `decay:<min>,<max>`".into()))?;
        let (w_min, w_max) = (
            lo.parse()
                .map_err(|_| GreyError::Format(format!("bad decay min '{lo}'")))?,
            hi.parse()
                .map_err(|_| GreyError::Format(format!("bad decay max '{hi}'")))?,
        );
        return Ok(Inertia::LinearDecay { w_min, w_max });
    }
    Err(GreyError::Format(format!(
        "inertia '{text}' not `fixed:<w>` or `decay:<min>,<max>`"
    )))
}

fn parse_design(text: &str) -> Result<DesignColumn> {
    match text {
        "integral" => Ok(DesignColumn::Integral),
        "power" => Ok(DesignColumn::PowerK),
        other => Err(GreyError::Format(format!(
            "design '{other}' not `integral` or `power`"
        ))),
    }
}

fn pso_config(args: &PsoArgs, template: KindTemplate, aggregate: Aggregate) -> Result<PsoConfig> {
    let mut config = PsoConfig::published(template);
    config.seed = args.seed;
    config.iterations = args.iters;
    config.particles = args.particles;
    config.penalty = args.penalty;
    config.inertia = parse_inertia(&args.inertia)?;
    config.fitness_window = match args.fitness_window.as_str() {
        "prior" => FitnessWindow::PriorOnly,
        "full" => FitnessWindow::FullSample,
        other => {
            return Err(GreyError::Format(format!(
                "fitness window '{other}' not `prior` or `full`"
            )))
        }
    };
    config.aggregate = aggregate;
    Ok(config)
}

/// Error-footer aggregate: bundled datasets carry the one their published
/// tables use; external series default to root-mean-square.
fn aggregate_for(data: &LoadedData) -> Aggregate {
    data.dataset.map(|d| d.footer_aggregate).unwrap_or_default()
}

fn search_hyper(
    raw: &RawSeries,
    template: KindTemplate,
    pso: &PsoArgs,
    aggregate: Aggregate,
) -> Result<PsoOutcome> {
    let config = pso_config(pso, template, aggregate)?;
    optimize_trials(raw, template, &config, pso.trials.max(1))
}

fn grey_column(
    raw: &RawSeries,
    kind: ModelKind,
    options: FitOptions,
    horizon_past_sample: usize,
    aggregate: Aggregate,
) -> Result<ModelReport> {
    let fitted_model = fit_with(kind, raw, options)?;
    let holdout = raw.len() - raw.train_len() + horizon_past_sample;
    let fitted = fitted_model.restore(holdout)?;
    let overlap = fitted.len().min(raw.len());
    let ape = metrics::ape(&raw.values()[..overlap], &fitted[..overlap])?;
    let (prior, post, whole) = metrics::windows(&ape, raw.train_len(), aggregate)?;
    let mut hyper = BTreeMap::new();
    match kind {
        ModelKind::Nipgm { lambda, alpha } => {
            hyper.insert("lambda".into(), lambda);
            hyper.insert("alpha".into(), alpha);
        }
        ModelKind::GmTalpha { alpha } => {
            hyper.insert("alpha".into(), alpha);
        }
        _ => {}
    }
    Ok(ModelReport {
        name: kind.name().to_string(),
        hyper,
        params: fitted_model.params().as_vec(),
        fitted,
        ape,
        rmsepr: prior,
        rmsepo: post,
        rmse: whole,
        growth: None,
    })
}

fn pr_column(
    raw: &RawSeries,
    degree: usize,
    horizon_past_sample: usize,
    aggregate: Aggregate,
) -> Result<ModelReport> {
    let fitted_model = fit_poly(raw, degree)?;
    let fitted = predict_poly(&fitted_model, 1, raw.len() + horizon_past_sample)?;
    let overlap = fitted.len().min(raw.len());
    let ape = metrics::ape(&raw.values()[..overlap], &fitted[..overlap])?;
    let (prior, post, whole) = metrics::windows(&ape, raw.train_len(), aggregate)?;
    let mut hyper = BTreeMap::new();
    hyper.insert("degree".into(), degree as f64);
    Ok(ModelReport {
        name: "pr".into(),
        hyper,
        params: fitted_model.coefficients().to_vec(),
        fitted,
        ape,
        rmsepr: prior,
        rmsepo: post,
        rmse: whole,
        growth: None,
    })
}

fn cmd_fit(args: FitArgs, forecast: bool) -> Result<()> {
    let data = load_data(&args.data)?;
    let raw = &data.raw;
    let aggregate = aggregate_for(&data);
    let design = parse_design(&args.design)?;
    let horizon = if forecast { args.horizon } else { 0 };

    let mut models = Vec::new();
    for name in &args.models {
        let column = match name.as_str() {
            "gm11" => grey_column(
                raw,
                ModelKind::Gm11,
                FitOptions::default(),
                horizon,
                aggregate,
            )?,
            "dgm11" => grey_column(
                raw,
                ModelKind::Dgm11,
                FitOptions::default(),
                horizon,
                aggregate,
            )?,
            "ngm_kc" => grey_column(
                raw,
                ModelKind::NgmKc,
                FitOptions::default(),
                horizon,
                aggregate,
            )?,
            "ngm_k" => grey_column(
                raw,
                ModelKind::NgmK,
                FitOptions::default(),
                horizon,
                aggregate,
            )?,
            "gm_talpha" => {
                let alpha = match args.alpha {
                    Some(alpha) => alpha,
                    None => {
                        let template = KindTemplate::GmTalpha { design };
                        search_hyper(raw, template, &args.pso, aggregate)?.position[0]
                    }
                };
                let options = FitOptions {
                    design,
                    ..FitOptions::default()
                };
                grey_column(
                    raw,
                    ModelKind::GmTalpha { alpha },
                    options,
                    horizon,
                    aggregate,
                )?
            }
            "nipgm" => {
                let (lambda, alpha) = match (args.lambda, args.alpha) {
                    (Some(lambda), Some(alpha)) => (lambda, alpha),
                    (None, None) => {
                        let found = search_hyper(raw, KindTemplate::Nipgm, &args.pso, aggregate)?;
                        (found.position[0], found.position[1])
                    }
                    _ => {
                        return Err(GreyError::Domain(
                            "nipgm needs both --lambda and --alpha, or neither (searched jointly)"
                                .into(),
                        ))
                    }
                };
                grey_column(
                    raw,
                    ModelKind::Nipgm { lambda, alpha },
                    FitOptions {
                        design,
                        ..FitOptions::default()
                    },
                    horizon,
                    aggregate,
                )?
            }
            "pr" => {
                let degree = args
                    .degree
                    .or(data.dataset.map(|d| d.pr_degree))
                    .unwrap_or(2);
                pr_column(raw, degree, horizon, aggregate)?
            }
            other => {
                return Err(GreyError::NotFound(format!(
                    "unknown model '{other}' (gm11|dgm11|ngm_k|ngm_kc|gm_talpha|nipgm|pr)"
                )))
            }
        };
        models.push(column);
    }

    if forecast {
        for column in &mut models {
            column.growth = Some(growth_report(
                raw.values(),
                &column.fitted,
                raw.labels(),
                raw.len(),
            ));
        }
    }

    let n_rows = raw.len() + horizon;
    let labels: Vec<i64> = (1..=n_rows).map(|k| raw.label_at(k)).collect();
    let report = Report {
        dataset: data
            .dataset
            .map(|d| d.name.clone())
            .unwrap_or_else(|| args.data.data.clone()),
        split: Split {
            l: raw.train_len(),
            m: raw.len(),
        },
        labels,
        actual: raw.values().to_vec(),
        footer_aggregate: aggregate,
        models,
    };
    emit_report(&report, &args.output)
}

fn cmd_optimize(args: OptimizeArgs) -> Result<()> {
    let data = load_data(&args.data)?;
    let aggregate = aggregate_for(&data);
    let design = parse_design(&args.design)?;
    let template = match args.model.as_str() {
        "nipgm" => KindTemplate::Nipgm,
        "gm_talpha" => KindTemplate::GmTalpha { design },
        other => {
            return Err(GreyError::Domain(format!(
                "optimize expects nipgm or gm_talpha, got '{other}'"
            )))
        }
    };
    let outcome = search_hyper(&data.raw, template, &args.pso, aggregate)?;
    let format: ReportFormat = args.output.format.parse()?;
    let text = match format {
        ReportFormat::Json => {
            let mut hyper = BTreeMap::new();
            match template {
                KindTemplate::Nipgm => {
                    hyper.insert("lambda", outcome.position[0]);
                    hyper.insert("alpha", outcome.position[1]);
                }
                KindTemplate::GmTalpha { .. } => {
                    hyper.insert("alpha", outcome.position[0]);
                }
            }
            serde_json::json!({
                "dataset": data.dataset.map(|d| d.name.clone()).unwrap_or_else(|| args.data.data.clone()),
                "model": args.model,
                "best": hyper,
                "fitness": outcome.fitness,
                "trials": args.pso.trials,
                "trace": outcome.trace,
            })
            .to_string()
        }
        ReportFormat::Csv => {
            let mut text = String::new();
            let header: &str = match template {
                KindTemplate::Nipgm => "fitness,lambda,alpha",
                KindTemplate::GmTalpha { .. } => "fitness,alpha",
            };
            text.push_str(header);
            text.push('\n');
            text.push_str(&format!("{:.6}", outcome.fitness));
            for p in &outcome.position {
                text.push_str(&format!(",{p:.6}"));
            }
            text.push('\n');
            text.push_str("\niteration,gbest\n");
            for (i, f) in outcome.trace.iter().enumerate() {
                text.push_str(&format!("{i},{f:.6}\n"));
            }
            text
        }
    };
    emit_text(&text, &args.output)
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<()> {
    let case: StudyCase = args.case.parse()?;
    if case == StudyCase::Ranks {
        let (cases, wind) = reproduce::rank_tables()?;
        let format: ReportFormat = args.output.format.parse()?;
        let text = match format {
            ReportFormat::Csv => format!("{}\n{}", cases.to_csv(), wind.to_csv()),
            ReportFormat::Json => serde_json::to_string_pretty(&RanksPayload { cases, wind })
                .expect("rank tables serialize"),
        };
        return emit_text(&text, &args.output);
    }
    let name = case.dataset_name().expect("table cases name a dataset");
    let report = reproduce::reproduce_table(name)?;
    emit_report(&report, &args.output)
}

#[derive(serde::Serialize)]
struct RanksPayload {
    cases: RankTable,
    wind: RankTable,
}

fn emit_report(report: &Report, output: &OutputArgs) -> Result<()> {
    let format: ReportFormat = output.format.parse()?;
    match &output.out {
        Some(path) => write_report(report, format, path),
        None => {
            print!("{}", report.render(format));
            Ok(())
        }
    }
}

fn emit_text(text: &str, output: &OutputArgs) -> Result<()> {
    match &output.out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
