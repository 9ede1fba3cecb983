//! Reproducible experiment runs: the flat key-value configuration, the
//! per-run manifest, and the pipeline commands behind each CLI subcommand.
//!
//! A run is identified by the FNV hash of its resolved configuration
//! (output location excluded), so re-running the same configuration
//! rewrites the same artifacts byte-for-byte.

mod run;

pub use run::{
    cmd_compare, cmd_cv, cmd_evaluate, cmd_export, cmd_fit, cmd_label, cmd_pipeline,
    cmd_preprocess, cmd_scan_k, CompareOutcome, PipelineOutcome,
};

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use crate::corpus::MatrixMode;
use crate::error::{io_err, Error, Result};
use crate::nlda::PruneScope;
use crate::rng::fnv1a64;

/// Topic-model back-end of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lda,
    Nlda,
    Nmf,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Lda => write!(f, "lda"),
            Method::Nlda => write!(f, "nlda"),
            Method::Nmf => write!(f, "nmf"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "lda" => Ok(Method::Lda),
            "nlda" => Ok(Method::Nlda),
            "nmf" => Ok(Method::Nmf),
            other => Err(Error::Config(format!(
                "method '{other}' is not lda, nlda, or nmf"
            ))),
        }
    }
}

/// Which rows feed cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvScope {
    /// The whole feature table (train and test rows).
    Full,
    /// Training rows only.
    Train,
}

impl fmt::Display for CvScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CvScope::Full => write!(f, "full"),
            CvScope::Train => write!(f, "train"),
        }
    }
}

/// Everything a run needs. Built from defaults, then an optional config
/// file, then command-line overrides (highest precedence); the `apply`
/// keys double as the config-file grammar.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dataset: PathBuf,
    pub stopwords: Option<PathBuf>,
    pub noise_words: Option<PathBuf>,
    pub suffixes: Option<PathBuf>,
    /// Load this persisted model instead of fitting (label/evaluate/export).
    pub model: Option<PathBuf>,
    /// Cross-validate this feature CSV instead of recomputing features.
    pub features: Option<PathBuf>,
    pub method: Method,
    /// Fixed topic count; `None` selects by coherence scan.
    pub k: Option<usize>,
    /// Candidate grid for the scan; `None` uses 2,4,...,20.
    pub k_grid: Option<Vec<usize>>,
    pub stages: usize,
    /// `None` uses the 50/K convention.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub nmf_iterations: usize,
    pub tol: f64,
    pub init_scale: f64,
    pub lambda: f64,
    pub epochs: usize,
    pub trees: usize,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    pub folds: usize,
    pub cv_scope: CvScope,
    pub train_fraction: f64,
    pub prune_scope: PruneScope,
    pub matrix_mode: MatrixMode,
    pub top_n: usize,
    pub tracked_terms: Vec<String>,
    /// Manual `topic=class` assignments applied after the majority vote.
    pub label_overrides: Vec<(usize, String)>,
    pub seed: u64,
    pub outdir: PathBuf,
    pub run_id: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dataset: PathBuf::new(),
            stopwords: None,
            noise_words: None,
            suffixes: None,
            model: None,
            features: None,
            method: Method::Lda,
            k: None,
            k_grid: None,
            stages: 3,
            alpha: None,
            beta: 0.01,
            iterations: 1000,
            burn_in: 200,
            nmf_iterations: 500,
            tol: 0.0,
            init_scale: 1.0,
            lambda: 1e-4,
            epochs: 200,
            trees: 100,
            max_depth: None,
            min_leaf: 1,
            folds: 10,
            cv_scope: CvScope::Full,
            train_fraction: 0.8,
            prune_scope: PruneScope::All,
            matrix_mode: MatrixMode::TfIdf,
            top_n: 10,
            tracked_terms: Vec::new(),
            label_overrides: Vec::new(),
            seed: 42,
            outdir: PathBuf::from("runs"),
            run_id: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value '{value}' for '{key}'")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<usize>> {
    value
        .split(',')
        .map(|p| parse(key, p.trim()))
        .collect()
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "dataset" => self.dataset = PathBuf::from(value),
            "stopwords" => self.stopwords = Some(PathBuf::from(value)),
            "noise-words" => self.noise_words = Some(PathBuf::from(value)),
            "suffixes" => self.suffixes = Some(PathBuf::from(value)),
            "model" => self.model = Some(PathBuf::from(value)),
            "features" => self.features = Some(PathBuf::from(value)),
            "method" => self.method = value.parse()?,
            "k" => self.k = Some(parse(key, value)?),
            "k-grid" => self.k_grid = Some(parse_list(key, value)?),
            "stages" => self.stages = parse(key, value)?,
            "alpha" => self.alpha = Some(parse(key, value)?),
            "beta" => self.beta = parse(key, value)?,
            "iterations" => self.iterations = parse(key, value)?,
            "burn-in" => self.burn_in = parse(key, value)?,
            "nmf-iterations" => self.nmf_iterations = parse(key, value)?,
            "tol" => self.tol = parse(key, value)?,
            "init-scale" => self.init_scale = parse(key, value)?,
            "lambda" => self.lambda = parse(key, value)?,
            "epochs" => self.epochs = parse(key, value)?,
            "trees" => self.trees = parse(key, value)?,
            "max-depth" => {
                self.max_depth = match value {
                    "none" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "min-leaf" => self.min_leaf = parse(key, value)?,
            "folds" => self.folds = parse(key, value)?,
            "cv-scope" => {
                self.cv_scope = match value {
                    "full" => CvScope::Full,
                    "train" => CvScope::Train,
                    other => {
                        return Err(Error::Config(format!(
                            "cv-scope '{other}' is not full or train"
                        )))
                    }
                }
            }
            "train-fraction" => self.train_fraction = parse(key, value)?,
            "prune-scope" => {
                self.prune_scope = match value {
                    "all" => PruneScope::All,
                    v => match v.strip_prefix("top-") {
                        Some(m) => PruneScope::TopM(parse(key, m)?),
                        None => {
                            return Err(Error::Config(format!(
                                "prune-scope '{v}' is not all or top-<m>"
                            )))
                        }
                    },
                }
            }
            "matrix-mode" => {
                self.matrix_mode = match value {
                    "counts" => MatrixMode::Counts,
                    "tfidf" => MatrixMode::TfIdf,
                    other => {
                        return Err(Error::Config(format!(
                            "matrix-mode '{other}' is not counts or tfidf"
                        )))
                    }
                }
            }
            "top-n" => self.top_n = parse(key, value)?,
            "tracked-terms" => {
                self.tracked_terms = value
                    .split(',')
                    .map(|t| t.trim().to_string())
                    .filter(|t| !t.is_empty())
                    .collect()
            }
            "label-overrides" => {
                let mut overrides = Vec::new();
                for pair in value.split(',').filter(|p| !p.trim().is_empty()) {
                    let (topic, class) = pair.split_once('=').ok_or_else(|| {
                        Error::Config(format!(
                            "label-overrides entry '{pair}' is not topic=class"
                        ))
                    })?;
                    overrides.push((parse(key, topic.trim())?, class.trim().to_string()));
                }
                self.label_overrides = overrides;
            }
            "seed" => self.seed = parse(key, value)?,
            "outdir" => self.outdir = PathBuf::from(value),
            "run-id" => self.run_id = Some(value.to_string()),
            other => return Err(Error::Config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Defaults, then the config file, then overrides.
    pub fn from_sources(file: Option<&Path>, overrides: &[(String, String)]) -> Result<RunConfig> {
        let mut config = RunConfig::default();
        if let Some(path) = file {
            for (key, value) in parse_config_file(path)? {
                config.apply(&key, &value)?;
            }
        }
        for (key, value) in overrides {
            config.apply(key, value)?;
        }
        Ok(config)
    }

    fn optional_path(p: &Option<PathBuf>) -> String {
        p.as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "none".to_string())
    }

    /// The resolved snapshot: every key with its effective value, in key
    /// order. This is what the manifest records and (minus the output
    /// location) what names the run.
    pub fn canonical(&self) -> Vec<(String, String)> {
        let grid = self
            .k_grid
            .clone()
            .unwrap_or_else(default_k_grid)
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let mut entries = vec![
            ("alpha".into(), self.alpha.map_or("auto".into(), |a| a.to_string())),
            ("beta".into(), self.beta.to_string()),
            ("burn-in".into(), self.burn_in.to_string()),
            ("cv-scope".into(), self.cv_scope.to_string()),
            ("dataset".into(), self.dataset.display().to_string()),
            ("epochs".into(), self.epochs.to_string()),
            ("features".into(), Self::optional_path(&self.features)),
            ("folds".into(), self.folds.to_string()),
            ("init-scale".into(), self.init_scale.to_string()),
            ("iterations".into(), self.iterations.to_string()),
            ("k".into(), self.k.map_or("auto".into(), |k| k.to_string())),
            ("k-grid".into(), grid),
            (
                "label-overrides".into(),
                self.label_overrides
                    .iter()
                    .map(|(topic, class)| format!("{topic}={class}"))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("lambda".into(), self.lambda.to_string()),
            ("matrix-mode".into(), self.matrix_mode.to_string()),
            (
                "max-depth".into(),
                self.max_depth.map_or("none".into(), |d| d.to_string()),
            ),
            ("method".into(), self.method.to_string()),
            ("min-leaf".into(), self.min_leaf.to_string()),
            ("model".into(), Self::optional_path(&self.model)),
            ("nmf-iterations".into(), self.nmf_iterations.to_string()),
            ("noise-words".into(), Self::optional_path(&self.noise_words)),
            ("prune-scope".into(), self.prune_scope.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("stages".into(), self.stages.to_string()),
            ("stopwords".into(), Self::optional_path(&self.stopwords)),
            ("suffixes".into(), Self::optional_path(&self.suffixes)),
            ("tol".into(), self.tol.to_string()),
            ("top-n".into(), self.top_n.to_string()),
            ("tracked-terms".into(), self.tracked_terms.join(",")),
            ("train-fraction".into(), self.train_fraction.to_string()),
            ("trees".into(), self.trees.to_string()),
        ];
        entries.sort();
        entries
    }

    /// Explicit id, or the hash of the canonical snapshot.
    pub fn resolved_run_id(&self) -> String {
        if let Some(id) = &self.run_id {
            return id.clone();
        }
        let text: String = self
            .canonical()
            .iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect();
        format!("{:016x}", fnv1a64(text.as_bytes()))
    }

    pub fn run_dir(&self) -> PathBuf {
        self.outdir.join(self.resolved_run_id())
    }
}

/// The default scan grid when neither `k` nor `k-grid` is given.
pub fn default_k_grid() -> Vec<usize> {
    (1..=10).map(|i| 2 * i).collect()
}

/// Parse a `key = value` config file; `#` lines and blanks are skipped.
pub fn parse_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let content = fs::read_to_string(path).map_err(io_err(path))?;
    let mut entries = Vec::new();
    for (number, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "{}:{}: expected 'key = value'",
                path.display(),
                number + 1
            ))
        })?;
        entries.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

/// One executed pipeline step: name, wall-clock, files written.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub name: String,
    pub elapsed: Duration,
    pub files: Vec<String>,
}

/// Render and write the per-run manifest. Written exactly once per run,
/// with `status failed` and the error line when a run aborts.
pub fn write_manifest(
    run_dir: &Path,
    config: &RunConfig,
    steps: &[StepRecord],
    error: Option<&Error>,
) -> Result<PathBuf> {
    let mut out = String::from("emotopic-manifest v1\n");
    match error {
        None => out.push_str("status success\n"),
        Some(e) => {
            out.push_str("status failed\n");
            out.push_str(&format!("error {}: {e}\n", e.exit_class().label()));
        }
    }
    out.push_str(&format!("version {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!("run-id {}\n", config.resolved_run_id()));
    out.push_str(&format!("outdir {}\n", config.outdir.display()));
    for (key, value) in config.canonical() {
        out.push_str(&format!("config {key} {value}\n"));
    }
    for step in steps {
        out.push_str(&format!(
            "step {} {}ms {}\n",
            step.name,
            step.elapsed.as_millis(),
            step.files.join(" ")
        ));
    }
    let path = run_dir.join("manifest.txt");
    fs::write(&path, out).map_err(io_err(&path))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_beat_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "# comment\nmethod = lda\nk = 5\nseed = 1\n").unwrap();
        let overrides = vec![("seed".to_string(), "9".to_string())];
        let config = RunConfig::from_sources(Some(&path), &overrides).unwrap();
        assert_eq!(config.method, Method::Lda);
        assert_eq!(config.k, Some(5));
        assert_eq!(config.seed, 9);
    }

    #[test]
    fn unknown_key_is_a_config_error() {
        let mut config = RunConfig::default();
        assert!(matches!(
            config.apply("wibble", "1"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            config.apply("method", "svd"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn run_id_ignores_output_location() {
        let mut a = RunConfig::default();
        a.apply("dataset", "d.csv").unwrap();
        let mut b = a.clone();
        b.apply("outdir", "elsewhere").unwrap();
        assert_eq!(a.resolved_run_id(), b.resolved_run_id());
        b.apply("seed", "7").unwrap();
        assert_ne!(a.resolved_run_id(), b.resolved_run_id());
    }

    #[test]
    fn prune_scope_and_grid_parse() {
        let mut config = RunConfig::default();
        config.apply("prune-scope", "top-100").unwrap();
        assert_eq!(config.prune_scope, PruneScope::TopM(100));
        config.apply("prune-scope", "all").unwrap();
        assert_eq!(config.prune_scope, PruneScope::All);
        config.apply("k-grid", "2, 4, 8").unwrap();
        assert_eq!(config.k_grid, Some(vec![2, 4, 8]));
        assert_eq!(default_k_grid(), vec![2, 4, 6, 8, 10, 12, 14, 16, 18, 20]);
    }

    #[test]
    fn manifest_records_failure() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig::default();
        let path = write_manifest(dir.path(), &config, &[], Some(&Error::EmptyCorpus)).unwrap();
        let text = fs::read_to_string(path).unwrap();
        assert!(text.contains("status failed"));
        assert!(text.contains("error degenerate-data"));
    }
}
