use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use glmboot::bootstrap::{Centering, Method, ThresholdRule, WeightDistribution};
use glmboot::io::{self, AnalysisConfig};
use glmboot::simulation::{contrast_centerings, run_experiment, SimConfig};
use glmboot::{make_family, Error, FamilyId, LambdaPolicy, Result};

#[derive(Parser)]
#[command(
    name = "glmboot",
    version,
    about = "Lasso GLM fits with perturbation and Pearson-residual bootstrap inference"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the lasso and report coefficients and the active set.
    Fit(Analysis),
    /// Fit, bootstrap and report percentile intervals and the norm region.
    Bootstrap(Analysis),
    /// Variance diagnostics at the bootstrap centering.
    Diagnose(Analysis),
    /// Run a Monte-Carlo coverage experiment described by a TOML file.
    Simulate(Simulate),
}

#[derive(Args)]
struct Analysis {
    #[arg(long)]
    family: FamilyId,
    /// Gamma shape parameter.
    #[arg(long)]
    gamma_shape: Option<f64>,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    response: String,
    /// Comma-separated covariate columns (default: all other columns).
    #[arg(long, value_delimiter = ',')]
    covariates: Option<Vec<String>>,
    /// Code the response as 1 where it equals this label and 0 elsewhere.
    #[arg(long)]
    positive_class: Option<String>,
    /// Prepend a (penalized) constant column.
    #[arg(long)]
    intercept: bool,
    /// Center and scale covariates before fitting.
    #[arg(long)]
    standardize: bool,
    /// cv:K, cv-sum:K, fixed:VALUE or scaled:LAMBDA0.
    #[arg(long, default_value = "cv:10")]
    lambda: LambdaPolicy,
    #[arg(long, default_value = "pb")]
    method: Method,
    #[arg(long, default_value = "modified")]
    centering: Centering,
    #[arg(long = "B", alias = "b", default_value_t = 1000)]
    replicates: usize,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    threshold_c: f64,
    /// exp1, exp:RATE, pois1 or beta:A,B.
    #[arg(long, default_value = "exp1")]
    weights: WeightDistribution,
    #[arg(long)]
    seed: Option<u64>,
    /// Report path (JSON); printed to stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the interval table as CSV (bootstrap only).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct Simulate {
    #[arg(long)]
    config: PathBuf,
    /// Output directory for coverage CSV and manifest.
    #[arg(long)]
    output: PathBuf,
    /// Also run the naive centering with identical seeds.
    #[arg(long)]
    contrast: bool,
}

impl Analysis {
    fn config(&self) -> Result<AnalysisConfig> {
        Ok(AnalysisConfig {
            input: self.input.clone(),
            family: make_family(self.family, self.gamma_shape)?,
            response: self.response.clone(),
            covariates: self.covariates.clone(),
            positive_class: self.positive_class.clone(),
            intercept: self.intercept,
            standardize: self.standardize,
            lambda: self.lambda,
            method: self.method,
            centering: self.centering,
            replicates: self.replicates,
            alpha: self.alpha,
            threshold_c: ThresholdRule::new(self.threshold_c)?,
            weights: self.weights,
            seed: self.seed,
        })
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit(a) => {
            let report = io::run_fit(&a.config()?)?;
            emit(a.output.as_deref(), &io::to_json(&report)?)
        }
        Command::Bootstrap(a) => {
            if a.replicates < 1000 {
                eprintln!("warning: B = {} is small; 1000 or more is recommended", a.replicates);
            }
            let report = io::run_bootstrap_analysis(&a.config()?)?;
            if report.quality_warning {
                eprintln!("warning: {} of {} bootstrap replicates failed", report.failed_replicates, report.replicates);
            }
            if let Some(path) = &a.csv {
                report.write_csv(std::fs::File::create(path)?)?;
            }
            emit(a.output.as_deref(), &io::to_json(&report)?)
        }
        Command::Diagnose(a) => {
            let report = io::run_diagnose(&a.config()?)?;
            emit(a.output.as_deref(), &io::to_json(&report)?)
        }
        Command::Simulate(s) => {
            let text = std::fs::read_to_string(&s.config)
                .map_err(|e| Error::Config(format!("cannot read `{}`: {e}", s.config.display())))?;
            let config = SimConfig::from_toml(&text)?;
            std::fs::create_dir_all(&s.output)?;
            let (table, manifest) = run_experiment(&config)?;
            table.write_csv(std::fs::File::create(s.output.join("coverage.csv"))?)?;
            io::write_json(&s.output.join("manifest.json"), &manifest)?;
            if s.contrast {
                let c = contrast_centerings(&config)?;
                c.naive.write_csv(std::fs::File::create(s.output.join("coverage_naive.csv"))?)?;
                io::write_json(&s.output.join("contrast.json"), &c)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot start {t} worker threads: {e}");
            return ExitCode::from(4);
        }
    }
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(4),
    }
}
