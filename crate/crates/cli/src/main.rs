use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use piezoloc_cli::commands::{self, Method, TEST_FILE, TRAIN_FILE};
use piezoloc_cli::{CliError, RunConfig};

#[derive(Parser)]
#[command(name = "piezoloc", version, about = "Simulate, train and evaluate piezoresistive indentation localization")]
struct Cli {
    /// TOML run configuration; every field has a default.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides output.dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate training and test datasets.
    Simulate {
        /// Master seed (overrides seed).
        #[arg(long)]
        seed: Option<u64>,
        /// Training grid repetitions (overrides train.repeats).
        #[arg(long)]
        repeats: Option<usize>,
        /// Also write the raw ADC frame stream for the test protocol.
        #[arg(long)]
        frames: bool,
    },
    /// Fit localization models.
    Train {
        /// Training dataset [default: <out>/train.jsonl].
        #[arg(long)]
        train: Option<PathBuf>,
        /// Method to fit; both when omitted.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// Score baselines and models on a test set.
    Evaluate {
        /// Model document; repeatable [default: every model_*.json in <out>].
        #[arg(long)]
        model: Vec<PathBuf>,
        /// Test dataset [default: <out>/test.jsonl].
        #[arg(long)]
        test: Option<PathBuf>,
    },
    /// Print the resolved configuration as TOML.
    Config,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Linear,
    Krr,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = cli.out {
        cfg.output.dir = out;
    }
    let out = cfg.output.dir.clone();
    match cli.command {
        Command::Simulate { seed, repeats, frames } => {
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(r) = repeats {
                cfg.train.repeats = Some(r);
            }
            let s = commands::simulate(&cfg, &out, frames)?;
            println!("config_hash: {}", cfg.hash());
            println!("train: {} ({} records)", s.train_path.display(), s.train_records);
            println!("test: {} ({} records)", s.test_path.display(), s.test_records);
            if let Some(p) = &s.frames_path {
                println!("frames: {}", p.display());
            }
            println!("noise_sd: {}", s.noise_sd);
            if s.saturated_features > 0 {
                eprintln!("warning: {} features saturated the ADC", s.saturated_features);
            }
        }
        Command::Train { train, method } => {
            let train = train.unwrap_or_else(|| out.join(TRAIN_FILE));
            let methods = match method {
                Some(MethodArg::Linear) => vec![Method::Linear],
                Some(MethodArg::Krr) => vec![Method::Krr],
                None => Method::ALL.to_vec(),
            };
            for s in commands::train(&cfg, &train, &methods, &out)? {
                println!("{}", commands::describe(&s));
            }
        }
        Command::Evaluate { model, test } => {
            let test = test.unwrap_or_else(|| out.join(TEST_FILE));
            let models = if model.is_empty() { commands::default_models(&out) } else { model };
            if models.is_empty() {
                return Err(CliError::Usage(format!(
                    "no models given and none found in {}",
                    out.display()
                )));
            }
            let report = commands::evaluate(&cfg, &models, &test, &out)?;
            print!("{}", report.to_text());
        }
        Command::Config => print!("{}", cfg.to_toml()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
