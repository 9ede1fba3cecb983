//! Thin command-line front-end over the library pipeline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use emotopic::experiment::{
    cmd_compare, cmd_cv, cmd_evaluate, cmd_export, cmd_fit, cmd_label, cmd_pipeline,
    cmd_preprocess, cmd_scan_k, RunConfig,
};
use emotopic::{Error, Result};

#[derive(Parser)]
#[command(
    name = "emotopic",
    version,
    about = "Emotion classification for short texts via LDA, staged-pruning LDA, and NMF topic models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Flat `key = value` config file; command-line flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dataset CSV with a `text` column and optional `label` column
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// lda, nlda, or nmf
    #[arg(long)]
    method: Option<String>,
    /// Topic count; omit to select by coherence scan
    #[arg(long)]
    k: Option<usize>,
    /// Stage count for the nlda method
    #[arg(long)]
    stages: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Root for run artifacts (default `runs/`)
    #[arg(long)]
    outdir: Option<PathBuf>,
    /// Name the run directory instead of hashing the config
    #[arg(long)]
    run_id: Option<String>,
    /// Any other config key, e.g. --set alpha=0.5 --set folds=5
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut overrides: Vec<(String, String)> = Vec::new();
        if let Some(dataset) = &self.dataset {
            overrides.push(("dataset".into(), dataset.display().to_string()));
        }
        if let Some(method) = &self.method {
            overrides.push(("method".into(), method.clone()));
        }
        if let Some(k) = self.k {
            overrides.push(("k".into(), k.to_string()));
        }
        if let Some(stages) = self.stages {
            overrides.push(("stages".into(), stages.to_string()));
        }
        if let Some(seed) = self.seed {
            overrides.push(("seed".into(), seed.to_string()));
        }
        if let Some(outdir) = &self.outdir {
            overrides.push(("outdir".into(), outdir.display().to_string()));
        }
        if let Some(run_id) = &self.run_id {
            overrides.push(("run-id".into(), run_id.clone()));
        }
        for pair in &self.set {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set '{pair}' is not KEY=VALUE")))?;
            overrides.push((key.trim().to_string(), value.trim().to_string()));
        }
        RunConfig::from_sources(self.config.as_deref(), &overrides)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normalize, tokenize, filter, and stem the dataset
    Preprocess(ConfigArgs),
    /// Scan candidate topic counts by mean coherence
    ScanK(ConfigArgs),
    /// Fit the configured topic model and persist it
    Fit(ConfigArgs),
    /// Vote class labels onto topics from the training split
    Label(ConfigArgs),
    /// Evaluate direct classification on the held-out split
    Evaluate(ConfigArgs),
    /// Export topic-score features as CSV and ARFF
    Export(ConfigArgs),
    /// Cross-validate NB/RF/SVM on the feature table
    Cv(ConfigArgs),
    /// Run the whole experiment end to end
    Pipeline(ConfigArgs),
    /// Run several configs over one dataset and tabulate the results
    Compare {
        /// One config file per run
        #[arg(long = "config", required = true)]
        configs: Vec<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        outdir: Option<PathBuf>,
    },
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Preprocess(args) => {
            println!("{}", cmd_preprocess(args.resolve()?)?.display());
        }
        Command::ScanK(args) => {
            println!("{}", cmd_scan_k(args.resolve()?)?.display());
        }
        Command::Fit(args) => {
            println!("{}", cmd_fit(args.resolve()?)?.display());
        }
        Command::Label(args) => {
            println!("{}", cmd_label(args.resolve()?)?.display());
        }
        Command::Evaluate(args) => {
            println!("{}", cmd_evaluate(args.resolve()?)?.display());
        }
        Command::Export(args) => {
            println!("{}", cmd_export(args.resolve()?)?.display());
        }
        Command::Cv(args) => {
            println!("{}", cmd_cv(args.resolve()?)?.display());
        }
        Command::Pipeline(args) => {
            let outcome = cmd_pipeline(args.resolve()?)?;
            println!(
                "method={} k={} accuracy={:.4} macro_f1={:.4}",
                outcome.method_label, outcome.chosen_k, outcome.eval.accuracy, outcome.eval.macro_f1
            );
            for report in &outcome.cv {
                println!(
                    "cv {} accuracy={:.4} macro_f1={:.4}",
                    report.classifier, report.accuracy, report.macro_f1
                );
            }
            println!("{}", outcome.run_dir.display());
        }
        Command::Compare {
            configs,
            seed,
            outdir,
        } => {
            let mut resolved = Vec::new();
            for path in configs {
                let mut overrides: Vec<(String, String)> = Vec::new();
                if let Some(seed) = seed {
                    overrides.push(("seed".into(), seed.to_string()));
                }
                if let Some(outdir) = &outdir {
                    overrides.push(("outdir".into(), outdir.display().to_string()));
                }
                resolved.push(RunConfig::from_sources(Some(&path), &overrides)?);
            }
            let outcome = cmd_compare(resolved)?;
            print!("{}", outcome.csv);
            println!("{}", outcome.path.display());
            if let Some(first) = outcome.failures.into_iter().next() {
                return Err(first);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {}: {error}", error.exit_class().label());
            ExitCode::from(error.exit_class().code() as u8)
        }
    }
}
