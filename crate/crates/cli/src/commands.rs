//! The simulate / train / evaluate pipeline stages.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use piezoloc_core::dataset::{self, CollectOptions, FeatureSource, ProtocolKind};
use piezoloc_core::eval::{self, Baseline, ErrorGrid};
use piezoloc_core::forward_sim::Simulator;
use piezoloc_core::learn::{self, ModelDocument, SearchSummary, TrainedModel, MODEL_SCHEMA_VERSION};
use piezoloc_core::Error;
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::{Report, ReportRow};
use crate::{input_error, CliError};

pub const TRAIN_FILE: &str = "train.jsonl";
pub const TEST_FILE: &str = "test.jsonl";
pub const FRAMES_FILE: &str = "frames.jsonl";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Linear,
    Krr,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Linear, Method::Krr];

    pub fn name(self) -> &'static str {
        match self {
            Method::Linear => "linear",
            Method::Krr => "krr",
        }
    }

    pub fn model_file(self) -> String {
        format!("model_{}.json", self.name())
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Internal(Error::Io {
        path: dir.to_path_buf(),
        source: e,
    }))
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Internal(Error::Io {
        path: path.to_path_buf(),
        source: e,
    }))
}

fn require_file(path: &Path, what: &str) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} not found: {}", path.display())))
    }
}

#[derive(Debug, Clone)]
pub struct SimulateSummary {
    pub train_path: PathBuf,
    pub test_path: PathBuf,
    pub frames_path: Option<PathBuf>,
    pub train_records: usize,
    pub test_records: usize,
    pub noise_sd: f64,
    pub saturated_features: usize,
}

#[derive(Serialize)]
struct FramesHeader<'a> {
    config_hash: &'a str,
    pairs: usize,
    frame_period_ms: f64,
    frames: usize,
}

/// Generates the training and test datasets, plus the raw frame stream
/// for the test protocol when `frames` is set.
pub fn simulate(cfg: &RunConfig, out: &Path, frames: bool) -> Result<SimulateSummary, CliError> {
    cfg.validate()?;
    let hash = cfg.hash();
    let seeds = cfg.seeds();
    let sim = Simulator::new(cfg.lattice_model())?;
    let options = |noise_seed: u64| -> Result<CollectOptions, CliError> {
        Ok(match cfg.features.source {
            FeatureSource::Ideal => {
                let sd = match cfg.features.noise_sd {
                    Some(sd) => sd,
                    None => dataset::default_ideal_noise(&sim, cfg.train_protocol().depth)?,
                };
                CollectOptions::ideal(sd, noise_seed)
            }
            FeatureSource::Circuit => {
                CollectOptions::circuit(cfg.circuit.clone(), cfg.features.noise_sd.unwrap_or(0.0), noise_seed)
            }
        })
    };
    ensure_dir(out)?;
    let mut sets = Vec::with_capacity(2);
    for (spec, noise_seed, file) in [
        (cfg.train_protocol(), seeds.train_noise, TRAIN_FILE),
        (cfg.test_protocol(), seeds.test_noise, TEST_FILE),
    ] {
        let opts = options(noise_seed)?;
        let mut data = dataset::collect_protocol(&spec, &sim, &opts)?;
        data.provenance.config_hash = Some(hash.clone());
        let path = out.join(file);
        dataset::save(&data, &path)?;
        sets.push((path, data));
    }
    let (test_path, test) = sets.pop().expect("two datasets");
    let (train_path, train) = sets.pop().expect("two datasets");

    let frames_path = if frames {
        let protocol = cfg.test_protocol().generate(&cfg.geometry)?;
        let noise = match cfg.features.source {
            FeatureSource::Circuit => cfg.features.noise_sd.unwrap_or(0.0),
            FeatureSource::Ideal => 0.0,
        };
        let lines = dataset::scan_protocol(&protocol, &sim, &cfg.circuit, noise, seeds.test_noise)?;
        let header = FramesHeader {
            config_hash: &hash,
            pairs: sim.pairs().len(),
            frame_period_ms: cfg.circuit.frame_period_ms,
            frames: lines.len(),
        };
        let mut text = serde_json::to_string(&header).expect("header serializes");
        text.push('\n');
        for line in &lines {
            text.push_str(&serde_json::to_string(line).expect("frame serializes"));
            text.push('\n');
        }
        let path = out.join(FRAMES_FILE);
        write(&path, text)?;
        Some(path)
    } else {
        None
    };

    Ok(SimulateSummary {
        train_records: train.len(),
        test_records: test.len(),
        noise_sd: train.provenance.noise_sd,
        saturated_features: train.provenance.saturated_features + test.provenance.saturated_features,
        train_path,
        test_path,
        frames_path,
    })
}

#[derive(Debug, Clone)]
pub struct TrainSummary {
    pub method: Method,
    pub path: PathBuf,
    pub document: ModelDocument,
}

/// Fits each requested method on the dataset at `train_path` and writes
/// `model_<method>.json` into `out`.
pub fn train(cfg: &RunConfig, train_path: &Path, methods: &[Method], out: &Path) -> Result<Vec<TrainSummary>, CliError> {
    cfg.validate()?;
    require_file(train_path, "training set")?;
    let data = dataset::load(train_path).map_err(input_error)?;
    ensure_dir(out)?;
    let hash = cfg.hash();
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    let mut summaries = Vec::with_capacity(methods.len());
    for method in methods {
        let (model, search) = match method {
            Method::Linear => (TrainedModel::Linear(learn::fit_linear(&data)?), None),
            Method::Krr => {
                let outcome = learn::grid_search(&data, &cfg.learning)?;
                let search = SearchSummary {
                    lambda: outcome.lambda,
                    sigma: outcome.sigma,
                    calibration_median_error: outcome.calibration_error,
                    lambda_grid: cfg.learning.lambda_grid.clone(),
                    sigma_grid: cfg.learning.sigma_grid.clone(),
                };
                (TrainedModel::Krr(outcome.model), Some(search))
            }
        };
        let document = ModelDocument {
            schema_version: MODEL_SCHEMA_VERSION,
            model,
            config_hash: Some(hash.clone()),
            training_records: data.len(),
            search,
        };
        let path = out.join(method.model_file());
        let mut text = document.to_json()?;
        text.push('\n');
        write(&path, text)?;
        summaries.push(TrainSummary { method, path, document });
    }
    Ok(summaries)
}

pub fn load_model(path: &Path) -> Result<ModelDocument, CliError> {
    require_file(path, "model")?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(Error::Io {
        path: path.to_path_buf(),
        source: e,
    }))?;
    ModelDocument::from_json(&text, path).map_err(input_error)
}

/// Models present in `dir` under their default names, in method order.
pub fn default_models(dir: &Path) -> Vec<PathBuf> {
    Method::ALL
        .iter()
        .map(|m| dir.join(m.model_file()))
        .filter(|p| p.is_file())
        .collect()
}

/// Scores the baselines and each model on the test set and writes the
/// report, the per-model vector fields and, for lattice test sets, the
/// error heatmaps.
pub fn evaluate(cfg: &RunConfig, models: &[PathBuf], test_path: &Path, out: &Path) -> Result<Report, CliError> {
    cfg.validate()?;
    require_file(test_path, "test set")?;
    let test = dataset::load(test_path).map_err(input_error)?;
    let documents = models.iter().map(|p| load_model(p)).collect::<Result<Vec<_>, _>>()?;
    ensure_dir(out)?;
    let hash = cfg.hash();
    let note = format!("config_hash={hash}");

    let center = Baseline::center(test.geometry.clone());
    let random = Baseline::random(test.geometry.clone(), cfg.seeds().random_baseline);
    let mut rows = vec![
        ReportRow::new("center", &eval::evaluate(&center, &test)?),
        ReportRow::new("random", &eval::evaluate(&random, &test)?),
    ];
    let lattice = test
        .provenance
        .protocol
        .as_ref()
        .is_some_and(|p| p.kind == ProtocolKind::Grid);
    for doc in &documents {
        let name = doc.model.name();
        let stats = eval::evaluate(&doc.model, &test).map_err(input_error)?;
        eval::export_vector_field(
            &stats,
            &test.geometry,
            &out.join(format!("vector_field_{name}.csv")),
            Some(&out.join(format!("vector_field_{name}.svg"))),
            Some(&note),
        )?;
        if lattice {
            match ErrorGrid::from_stats(&stats) {
                Ok(_) => {
                    eval::export_heatmap(
                        &stats,
                        &test.geometry,
                        &out.join(format!("heatmap_{name}.csv")),
                        Some(&out.join(format!("heatmap_{name}.svg"))),
                        Some(&note),
                    )?;
                }
                Err(e) => eprintln!("warning: skipping {name} heatmap: {e}"),
            }
        }
        rows.push(ReportRow::new(name, &stats));
    }
    let report = Report {
        config_hash: hash,
        test_set: format!(
            "{} ({} records)",
            test_path.file_name().map_or_else(|| test_path.display().to_string(), |n| n.to_string_lossy().into_owned()),
            test.len()
        ),
        rows,
    };
    write(&out.join("report.txt"), report.to_text())?;
    write(&out.join("report.csv"), report.to_csv())?;
    Ok(report)
}

/// One-line summary of a trained model for the terminal.
pub fn describe(summary: &TrainSummary) -> String {
    let mut s = format!("{}: {}", summary.method.name(), summary.path.display());
    if let Some(search) = &summary.document.search {
        let _ = write!(
            s,
            " (lambda*={:e}, sigma*={:e}, calibration median {:.4} mm)",
            search.lambda, search.sigma, search.calibration_median_error
        );
    }
    s
}
