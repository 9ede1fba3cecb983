//! The pipeline command implementations behind the CLI subcommands. Each
//! command re-derives what it needs from the configuration (everything is
//! seeded, so recomputation is exact), writes its artifacts under
//! `<outdir>/<run-id>/`, and leaves a manifest.

use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use super::{default_k_grid, write_manifest, CvScope, Method, RunConfig, StepRecord};
use crate::corpus::{
    build_corpus, read_dataset_csv, split_train_test, to_term_matrix, Corpus, PreprocessConfig,
    PreprocessReport,
};
use crate::error::{io_err, Error, Result};
use crate::lda::{fit_lda, select_topic_count, CoherenceScan, LdaParams};
use crate::ml::{
    cross_validate, export_features, features_from_csv, features_to_csv, write_arff,
    ClassifierSpec, CvReport, FeatureTable, RfParams, SvmParams,
};
use crate::model::{load_model, save_model, TopicModel};
use crate::nlda::{run_nlda, stages_to_csv, tracked_to_csv};
use crate::nmf::{as_topic_model, fit_nmf, NmfParams};
use crate::pipeline::{evaluate, label_topics, EvalReport, TopicLabeling};
use crate::text::{read_term_set, IdentityStemmer, SuffixStemmer, Stemmer};

/// What a full pipeline run produced, for callers composing comparisons.
#[derive(Debug)]
pub struct PipelineOutcome {
    pub run_dir: PathBuf,
    pub method_label: String,
    pub classes: usize,
    pub chosen_k: usize,
    pub eval: EvalReport,
    /// Cross-validation reports in nb, rf, svm order.
    pub cv: Vec<CvReport>,
}

struct Driver {
    config: RunConfig,
    run_dir: PathBuf,
    steps: Vec<StepRecord>,
}

impl Driver {
    fn new(config: RunConfig) -> Result<Driver> {
        let run_dir = config.run_dir();
        fs::create_dir_all(&run_dir).map_err(io_err(&run_dir))?;
        Ok(Driver {
            config,
            run_dir,
            steps: Vec::new(),
        })
    }

    fn emit(&mut self, name: &str, content: &str) -> Result<String> {
        let path = self.run_dir.join(name);
        fs::write(&path, content).map_err(io_err(&path))?;
        Ok(name.to_string())
    }

    fn record(&mut self, name: &str, started: Instant, files: Vec<String>) {
        self.steps.push(StepRecord {
            name: name.to_string(),
            elapsed: started.elapsed(),
            files,
        });
    }

    fn finish(self, error: Option<&Error>) -> Result<PathBuf> {
        write_manifest(&self.run_dir, &self.config, &self.steps, error)
    }

    fn preprocess(&mut self) -> Result<Corpus> {
        let started = Instant::now();
        let config = &self.config;
        if !config.dataset.is_file() {
            return Err(Error::Config(format!(
                "dataset file not found: {}",
                config.dataset.display()
            )));
        }
        let raw = read_dataset_csv(&config.dataset)?;

        let stopwords = match &config.stopwords {
            Some(path) => read_term_set(path)?,
            None => HashSet::new(),
        };
        let noise_words = match &config.noise_words {
            Some(path) => read_term_set(path)?,
            None => HashSet::new(),
        };
        let stemmer: Arc<dyn Stemmer> = match &config.suffixes {
            Some(path) => Arc::new(SuffixStemmer::from_file(path)?),
            None => Arc::new(IdentityStemmer),
        };
        let (corpus, report) =
            build_corpus(&raw, &PreprocessConfig::new(stopwords, noise_words, stemmer))?;

        let files = vec![
            self.emit("vocab.csv", &vocab_csv(&corpus))?,
            self.emit("corpus.csv", &corpus_csv(&corpus))?,
            self.emit("preprocess.txt", &preprocess_text(&report))?,
        ];
        self.record("preprocess", started, files);
        Ok(corpus)
    }

    fn split(&mut self, corpus: &Corpus) -> Result<(Corpus, Corpus)> {
        let started = Instant::now();
        let (train, test) =
            split_train_test(corpus, self.config.train_fraction, self.config.seed)?;
        let files = vec![self.emit("split.csv", &split_csv(&train, &test))?];
        self.record("split", started, files);
        Ok((train, test))
    }

    fn lda_params(&self, k: usize) -> LdaParams {
        LdaParams {
            k,
            alpha: self.config.alpha.unwrap_or(50.0 / k as f64),
            beta: self.config.beta,
            iterations: self.config.iterations,
            burn_in: self.config.burn_in,
            seed: self.config.seed,
        }
    }

    /// Fixed `k`, or a coherence scan over the grid. The scan compares
    /// candidates under one shared prior (`alpha` if set, else 1.0).
    fn choose_k(&mut self, train: &Corpus) -> Result<(usize, Option<CoherenceScan>)> {
        if let Some(k) = self.config.k {
            return Ok((k, None));
        }
        let started = Instant::now();
        let grid = self.config.k_grid.clone().unwrap_or_else(default_k_grid);
        let base = LdaParams {
            alpha: self.config.alpha.unwrap_or(1.0),
            ..self.lda_params(2)
        };
        let scan = select_topic_count(train, &grid, &base, self.config.top_n)?;
        let files = vec![self.emit("scan_k.csv", &scan.to_csv())?];
        self.record("scan-k", started, files);
        Ok((scan.chosen_k, Some(scan)))
    }

    fn fit(&mut self, train: &Corpus, k: usize) -> Result<TopicModel> {
        let started = Instant::now();
        let mut files = Vec::new();
        let model = match self.config.method {
            Method::Lda => fit_lda(train, self.lda_params(k))?,
            Method::Nlda => {
                let result = run_nlda(
                    train,
                    self.lda_params(k),
                    self.config.stages,
                    self.config.prune_scope,
                    &self.config.tracked_terms,
                )?;
                files.push(self.emit("stages.csv", &stages_to_csv(&result.stage_reports))?);
                files.push(
                    self.emit("tracked_weights.csv", &tracked_to_csv(&result.stage_reports))?,
                );
                result.final_model
            }
            Method::Nmf => {
                let matrix = to_term_matrix(train, self.config.matrix_mode)?;
                let nmf = fit_nmf(
                    &matrix,
                    NmfParams {
                        rank: k,
                        iterations: self.config.nmf_iterations,
                        tol: self.config.tol,
                        seed: self.config.seed,
                        init_scale: self.config.init_scale,
                    },
                )?;
                files.push(self.emit("nmf_trace.csv", &nmf.trace_to_csv())?);
                let (model, _degeneracy) = as_topic_model(&nmf, &train.vocab);
                model
            }
        };
        let path = self.run_dir.join("model.txt");
        save_model(&model, &path)?;
        files.push("model.txt".to_string());
        self.record("fit", started, files);
        Ok(model)
    }

    fn obtain_model(&mut self, train: &Corpus, k: usize) -> Result<TopicModel> {
        match self.config.model.clone() {
            Some(path) => {
                let started = Instant::now();
                let model = load_model(&path)?;
                self.record("load-model", started, Vec::new());
                Ok(model)
            }
            None => self.fit(train, k),
        }
    }

    fn label(&mut self, model: &TopicModel, train: &Corpus) -> Result<TopicLabeling> {
        let started = Instant::now();
        let mut labeling = label_topics(model, train)?;
        for (topic, class_name) in &self.config.label_overrides {
            let class = train
                .class_names
                .iter()
                .position(|c| c == class_name)
                .ok_or_else(|| {
                    Error::Config(format!("label override names unknown class '{class_name}'"))
                })?;
            if *topic >= labeling.topic_class.len() {
                return Err(Error::Config(format!(
                    "label override names topic {topic}, but the model has {} topics",
                    labeling.topic_class.len()
                )));
            }
            labeling.topic_class[*topic] = class;
        }
        let files = vec![self.emit("labeling.csv", &labeling.to_csv(&train.class_names))?];
        self.record("label", started, files);
        Ok(labeling)
    }

    fn evaluate(
        &mut self,
        model: &TopicModel,
        labeling: &TopicLabeling,
        test: &Corpus,
    ) -> Result<EvalReport> {
        let started = Instant::now();
        let report = evaluate(model, labeling, test)?;
        let mut files = vec![self.emit("eval.csv", &report.to_csv())?];

        let summary_path = self.config.outdir.join("summary.csv");
        let mut summary = if summary_path.is_file() {
            fs::read_to_string(&summary_path).map_err(io_err(&summary_path))?
        } else {
            String::from("method,classes,accuracy,macro_f1\n")
        };
        summary.push_str(&report.summary_line(&model.method_tag.to_string()));
        fs::write(&summary_path, summary).map_err(io_err(&summary_path))?;
        files.push("../summary.csv".to_string());

        self.record("evaluate", started, files);
        Ok(report)
    }

    fn export(
        &mut self,
        full: &Corpus,
        train: &Corpus,
        model: &TopicModel,
    ) -> Result<FeatureTable> {
        let started = Instant::now();
        let scope = match self.config.cv_scope {
            CvScope::Full => full,
            CvScope::Train => train,
        };
        let table = export_features(scope, model)?;
        let files = vec![
            self.emit("features.csv", &features_to_csv(&table))?,
            self.emit(
                "features.arff",
                &write_arff(&table, &format!("emotopic-{}", model.method_tag))?,
            )?,
        ];
        self.record("export", started, files);
        Ok(table)
    }

    fn classifier_specs(&self) -> Vec<ClassifierSpec> {
        vec![
            ClassifierSpec::NaiveBayes,
            ClassifierSpec::RandomForest(RfParams {
                trees: self.config.trees,
                max_depth: self.config.max_depth,
                min_leaf: self.config.min_leaf,
                features_per_split: None,
                seed: self.config.seed,
            }),
            ClassifierSpec::Svm(SvmParams {
                lambda: self.config.lambda,
                epochs: self.config.epochs,
                seed: self.config.seed,
            }),
        ]
    }

    fn cv_all(&mut self, table: &FeatureTable) -> Result<Vec<CvReport>> {
        let started = Instant::now();
        let mut reports = Vec::new();
        let mut files = Vec::new();
        for spec in self.classifier_specs() {
            let report = cross_validate(table, &spec, self.config.folds, self.config.seed)?;
            files.push(self.emit(&format!("cv_{}.csv", spec.name()), &report.to_csv())?);
            reports.push(report);
        }
        self.record("cv", started, files);
        Ok(reports)
    }
}

fn vocab_csv(corpus: &Corpus) -> String {
    let mut out = String::from("id,term,df\n");
    for (id, term) in corpus.vocab.terms().iter().enumerate() {
        out.push_str(&format!("{id},{term},{}\n", corpus.vocab.df(id)));
    }
    out
}

fn corpus_csv(corpus: &Corpus) -> String {
    let mut out = String::from("doc,label,tokens\n");
    for (d, doc) in corpus.docs.iter().enumerate() {
        let tokens: Vec<&str> = doc.iter().map(|&t| corpus.vocab.term(t)).collect();
        out.push_str(&format!(
            "{d},{},{}\n",
            corpus.label_name(d).unwrap_or(""),
            tokens.join(" ")
        ));
    }
    out
}

fn preprocess_text(report: &PreprocessReport) -> String {
    let ids: Vec<String> = report.empty_doc_ids.iter().map(ToString::to_string).collect();
    format!(
        "input_docs {}\nkept_tokens {}\nvocab_size {}\nempty_docs {}\nempty_doc_ids {}\n",
        report.input_docs,
        report.kept_tokens,
        report.vocab_size,
        report.empty_doc_ids.len(),
        ids.join(" ")
    )
}

fn split_csv(train: &Corpus, test: &Corpus) -> String {
    let count = |corpus: &Corpus, class: usize| {
        corpus
            .labels
            .as_ref()
            .map(|l| l.iter().filter(|&&x| x == class).count())
            .unwrap_or(0)
    };
    let mut out = String::from("class,train,test\n");
    for (c, name) in train.class_names.iter().enumerate() {
        out.push_str(&format!("{name},{},{}\n", count(train, c), count(test, c)));
    }
    out
}

macro_rules! run_steps {
    ($driver:ident, $body:expr) => {{
        let mut $driver = $driver;
        let outcome = $body(&mut $driver);
        match outcome {
            Ok(value) => {
                $driver.finish(None)?;
                Ok(value)
            }
            Err(error) => {
                // best effort: the manifest is the one artifact a failed
                // run must leave behind
                let _ = $driver.finish(Some(&error));
                Err(error)
            }
        }
    }};
}

/// Preprocess only: vocabulary, token streams, and the filtering report.
pub fn cmd_preprocess(config: RunConfig) -> Result<PathBuf> {
    let driver = Driver::new(config)?;
    run_steps!(driver, |d: &mut Driver| {
        d.preprocess()?;
        Ok(d.run_dir.clone())
    })
}

/// Coherence scan over the candidate topic counts.
pub fn cmd_scan_k(config: RunConfig) -> Result<PathBuf> {
    let mut config = config;
    // the whole point of this command is the scan
    config.k = None;
    let driver = Driver::new(config)?;
    run_steps!(driver, |d: &mut Driver| {
        let corpus = d.preprocess()?;
        let (train, _test) = d.split(&corpus)?;
        d.choose_k(&train)?;
        Ok(d.run_dir.clone())
    })
}

/// Fit the configured method on the training split and persist the model.
pub fn cmd_fit(config: RunConfig) -> Result<PathBuf> {
    let driver = Driver::new(config)?;
    run_steps!(driver, |d: &mut Driver| {
        let corpus = d.preprocess()?;
        let (train, _test) = d.split(&corpus)?;
        let (k, _scan) = d.choose_k(&train)?;
        d.fit(&train, k)?;
        Ok(d.run_dir.clone())
    })
}

/// Vote class labels onto topics from the training split.
pub fn cmd_label(config: RunConfig) -> Result<PathBuf> {
    let driver = Driver::new(config)?;
    run_steps!(driver, |d: &mut Driver| {
        let corpus = d.preprocess()?;
        let (train, _test) = d.split(&corpus)?;
        let (k, _scan) = d.choose_k(&train)?;
        let model = d.obtain_model(&train, k)?;
        d.label(&model, &train)?;
        Ok(d.run_dir.clone())
    })
}

/// Direct-classification quality on the held-out split.
pub fn cmd_evaluate(config: RunConfig) -> Result<PathBuf> {
    let driver = Driver::new(config)?;
    run_steps!(driver, |d: &mut Driver| {
        let corpus = d.preprocess()?;
        let (train, test) = d.split(&corpus)?;
        let (k, _scan) = d.choose_k(&train)?;
        let model = d.obtain_model(&train, k)?;
        let labeling = d.label(&model, &train)?;
        d.evaluate(&model, &labeling, &test)?;
        Ok(d.run_dir.clone())
    })
}

/// Topic-score feature table as CSV and ARFF.
pub fn cmd_export(config: RunConfig) -> Result<PathBuf> {
    let driver = Driver::new(config)?;
    run_steps!(driver, |d: &mut Driver| {
        let corpus = d.preprocess()?;
        let (train, _test) = d.split(&corpus)?;
        let (k, _scan) = d.choose_k(&train)?;
        let model = d.obtain_model(&train, k)?;
        d.export(&corpus, &train, &model)?;
        Ok(d.run_dir.clone())
    })
}

/// Cross-validate the classifiers, from a feature CSV when `features` is
/// configured, otherwise recomputing the table from the dataset.
pub fn cmd_cv(config: RunConfig) -> Result<PathBuf> {
    let driver = Driver::new(config)?;
    run_steps!(driver, |d: &mut Driver| {
        let table = match d.config.features.clone() {
            Some(path) => {
                let text = fs::read_to_string(&path).map_err(io_err(&path))?;
                features_from_csv(&text)?
            }
            None => {
                let corpus = d.preprocess()?;
                let (train, _test) = d.split(&corpus)?;
                let (k, _scan) = d.choose_k(&train)?;
                let model = d.obtain_model(&train, k)?;
                d.export(&corpus, &train, &model)?
            }
        };
        d.cv_all(&table)?;
        Ok(d.run_dir.clone())
    })
}

/// The full experiment: preprocess, split, scan if needed, fit, label,
/// evaluate, export, cross-validate.
pub fn cmd_pipeline(config: RunConfig) -> Result<PipelineOutcome> {
    let driver = Driver::new(config)?;
    run_steps!(driver, |d: &mut Driver| {
        let corpus = d.preprocess()?;
        let (train, test) = d.split(&corpus)?;
        let (k, _scan) = d.choose_k(&train)?;
        let model = d.obtain_model(&train, k)?;
        let labeling = d.label(&model, &train)?;
        let eval = d.evaluate(&model, &labeling, &test)?;
        let table = d.export(&corpus, &train, &model)?;
        let cv = d.cv_all(&table)?;
        Ok(PipelineOutcome {
            run_dir: d.run_dir.clone(),
            method_label: model.method_tag.to_string(),
            classes: corpus.class_names.len(),
            chosen_k: k,
            eval,
            cv,
        })
    })
}

/// What `cmd_compare` leaves behind. Failed runs keep their row (with an
/// error marker) and their error here; successful rows stay intact.
#[derive(Debug)]
pub struct CompareOutcome {
    pub path: PathBuf,
    pub csv: String,
    pub failures: Vec<Error>,
}

fn config_method_label(config: &RunConfig) -> String {
    match config.method {
        Method::Nlda => format!("nlda-stage-{}", config.stages),
        other => other.to_string(),
    }
}

/// Run one pipeline per configuration (all over the same dataset) and
/// tabulate direct accuracy plus classifier accuracy side by side.
pub fn cmd_compare(configs: Vec<RunConfig>) -> Result<CompareOutcome> {
    if configs.is_empty() {
        return Err(Error::Config("compare needs at least one config".into()));
    }
    if configs
        .iter()
        .any(|c| c.dataset != configs[0].dataset)
    {
        return Err(Error::Config(
            "compare requires the same dataset across configs".into(),
        ));
    }
    let outdir = configs[0].outdir.clone();

    let mut csv = String::from("method,classes,direct_accuracy,nb_acc,rf_acc,svm_acc,macro_f1s\n");
    let mut failures = Vec::new();
    for config in configs {
        let label = config_method_label(&config);
        match cmd_pipeline(config) {
            Ok(outcome) => {
                let f1s = std::iter::once(outcome.eval.macro_f1)
                    .chain(outcome.cv.iter().map(|r| r.macro_f1))
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(";");
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    outcome.method_label,
                    outcome.classes,
                    outcome.eval.accuracy,
                    outcome.cv[0].accuracy,
                    outcome.cv[1].accuracy,
                    outcome.cv[2].accuracy,
                    f1s
                ));
            }
            Err(error) => {
                csv.push_str(&format!(
                    "{label},,error:{},,,,\n",
                    error.exit_class().label()
                ));
                failures.push(error);
            }
        }
    }
    if !failures.is_empty() {
        csv.push_str(&format!("# {} run(s) failed\n", failures.len()));
    }

    fs::create_dir_all(&outdir).map_err(io_err(&outdir))?;
    let path = outdir.join("compare.csv");
    fs::write(&path, &csv).map_err(io_err(&path))?;
    Ok(CompareOutcome {
        path,
        csv,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{
        bundled_noise_words, bundled_stopwords, bundled_suffixes, dataset_to_csv, emotion_dataset,
    };

    fn write_inputs(dir: &std::path::Path) -> RunConfig {
        let docs = emotion_dataset(3, 20, 5);
        fs::write(dir.join("data.csv"), dataset_to_csv(&docs)).unwrap();
        fs::write(dir.join("stop.txt"), bundled_stopwords()).unwrap();
        fs::write(dir.join("noise.txt"), bundled_noise_words()).unwrap();
        fs::write(dir.join("suffix.txt"), bundled_suffixes()).unwrap();

        let mut config = RunConfig::default();
        for (key, value) in [
            ("dataset", dir.join("data.csv").display().to_string()),
            ("stopwords", dir.join("stop.txt").display().to_string()),
            ("noise-words", dir.join("noise.txt").display().to_string()),
            ("suffixes", dir.join("suffix.txt").display().to_string()),
            ("outdir", dir.join("runs").display().to_string()),
            ("k", "3".to_string()),
            ("alpha", "0.5".to_string()),
            ("iterations", "60".to_string()),
            ("burn-in", "20".to_string()),
            ("trees", "10".to_string()),
            ("epochs", "30".to_string()),
            ("folds", "3".to_string()),
            ("seed", "7".to_string()),
        ] {
            config.apply(key, &value).unwrap();
        }
        config
    }

    #[test]
    fn pipeline_writes_every_artifact_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_inputs(dir.path());
        let outcome = cmd_pipeline(config).unwrap();

        for name in [
            "manifest.txt",
            "vocab.csv",
            "corpus.csv",
            "preprocess.txt",
            "split.csv",
            "model.txt",
            "labeling.csv",
            "eval.csv",
            "features.csv",
            "features.arff",
            "cv_nb.csv",
            "cv_rf.csv",
            "cv_svm.csv",
        ] {
            assert!(outcome.run_dir.join(name).is_file(), "missing {name}");
        }
        let manifest = fs::read_to_string(outcome.run_dir.join("manifest.txt")).unwrap();
        assert!(manifest.contains("status success"));
        assert!(manifest.contains("config method lda"));
        assert!(dir.path().join("runs/summary.csv").is_file());
        assert_eq!(outcome.cv.len(), 3);
        assert_eq!(outcome.classes, 3);

        // no orphan outputs: everything in the run directory is listed in
        // a manifest step line
        let mut listed: Vec<String> = manifest
            .lines()
            .filter(|l| l.starts_with("step "))
            .flat_map(|l| l.split(' ').skip(3).map(str::to_string))
            .filter(|f| !f.starts_with(".."))
            .collect();
        listed.push("manifest.txt".to_string());
        for entry in fs::read_dir(&outcome.run_dir).unwrap() {
            let name = entry.unwrap().file_name().to_string_lossy().to_string();
            assert!(listed.contains(&name), "orphan output {name}");
        }
    }

    #[test]
    fn label_overrides_rewrite_topic_classes() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = write_inputs(dir.path());
        config.apply("label-overrides", "0=kizgin, 2=kizgin").unwrap();
        config.apply("run-id", "override-run").unwrap();
        let outcome = cmd_pipeline(config.clone()).unwrap();
        let labeling = fs::read_to_string(outcome.run_dir.join("labeling.csv")).unwrap();
        assert!(labeling.contains("0,kizgin"));
        assert!(labeling.contains("2,kizgin"));

        let mut bad = config;
        bad.apply("label-overrides", "0=nosuch").unwrap();
        bad.apply("run-id", "override-bad").unwrap();
        assert!(matches!(cmd_pipeline(bad), Err(Error::Config(_))));
    }

    #[test]
    fn missing_dataset_leaves_only_failed_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = RunConfig::default();
        config.apply("dataset", "nowhere.csv").unwrap();
        config
            .apply("outdir", &dir.path().join("runs").display().to_string())
            .unwrap();
        let error = cmd_pipeline(config.clone()).unwrap_err();
        assert!(matches!(error, Error::Config(_)));

        let run_dir = config.run_dir();
        let entries: Vec<String> = fs::read_dir(&run_dir)
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().to_string())
            .collect();
        assert_eq!(entries, vec!["manifest.txt".to_string()]);
        let manifest = fs::read_to_string(run_dir.join("manifest.txt")).unwrap();
        assert!(manifest.contains("status failed"));
        assert!(manifest.contains("error config"));
    }

    #[test]
    fn nlda_single_stage_matches_lda_outputs_plus_stage_report() {
        let dir = tempfile::tempdir().unwrap();
        let mut lda_config = write_inputs(dir.path());
        let mut nlda_config = lda_config.clone();

        lda_config.apply("run-id", "lda-run").unwrap();
        nlda_config.apply("method", "nlda").unwrap();
        nlda_config.apply("stages", "1").unwrap();
        nlda_config.apply("run-id", "nlda-run").unwrap();

        let lda_out = cmd_pipeline(lda_config).unwrap();
        let nlda_out = cmd_pipeline(nlda_config).unwrap();

        // same numbers, one extra pair of stage artifacts
        assert_eq!(lda_out.eval.accuracy, nlda_out.eval.accuracy);
        assert_eq!(lda_out.eval.confusion, nlda_out.eval.confusion);
        let lda_features = fs::read_to_string(lda_out.run_dir.join("features.csv")).unwrap();
        let nlda_features = fs::read_to_string(nlda_out.run_dir.join("features.csv")).unwrap();
        assert_eq!(lda_features, nlda_features);
        assert!(!lda_out.run_dir.join("stages.csv").exists());
        assert!(nlda_out.run_dir.join("stages.csv").is_file());
        let stages = fs::read_to_string(nlda_out.run_dir.join("stages.csv")).unwrap();
        assert_eq!(stages.lines().count(), 2); // header + stage 1
    }

    #[test]
    fn compare_tabulates_methods_and_flags_failures() {
        let dir = tempfile::tempdir().unwrap();
        let base = write_inputs(dir.path());

        let mut lda = base.clone();
        lda.apply("run-id", "r-lda").unwrap();
        let mut nmf = base.clone();
        nmf.apply("method", "nmf").unwrap();
        nmf.apply("run-id", "r-nmf").unwrap();
        let mut broken = base.clone();
        broken.apply("method", "nmf").unwrap();
        // rank larger than min(docs, terms) fails the nmf fit
        broken.apply("k", "100000").unwrap();
        broken.apply("run-id", "r-broken").unwrap();

        let outcome = cmd_compare(vec![lda, nmf, broken]).unwrap();
        let lines: Vec<&str> = outcome.csv.lines().collect();
        assert_eq!(
            lines[0],
            "method,classes,direct_accuracy,nb_acc,rf_acc,svm_acc,macro_f1s"
        );
        assert!(lines[1].starts_with("lda,3,"));
        assert!(lines[2].starts_with("nmf,3,"));
        assert!(lines[3].contains("error:model"));
        assert!(lines[4].starts_with("# 1 run(s) failed"));
        assert_eq!(outcome.failures.len(), 1);
        assert!(outcome.path.is_file());
    }

    #[test]
    fn compare_rejects_mismatched_datasets() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_inputs(dir.path());
        let mut b = a.clone();
        b.apply("dataset", "other.csv").unwrap();
        assert!(matches!(
            cmd_compare(vec![a, b]),
            Err(Error::Config(_))
        ));
    }
}
