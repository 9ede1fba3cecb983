//! Stratified k-fold cross-validation over a feature table.

use ndarray::Array2;

use super::{train_nb, train_rf, train_svm, FeatureTable, GaussianNb, RandomForest, RfParams,
            SvmModel, SvmParams};
use crate::error::{Error, Result};
use crate::pipeline::report_from_confusion;
use crate::rng::{derive_seed, Rng};

/// Which classifier to run; the embedded seeds are re-derived per fold.
#[derive(Debug, Clone)]
pub enum ClassifierSpec {
    NaiveBayes,
    RandomForest(RfParams),
    Svm(SvmParams),
}

impl ClassifierSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierSpec::NaiveBayes => "nb",
            ClassifierSpec::RandomForest(_) => "rf",
            ClassifierSpec::Svm(_) => "svm",
        }
    }

    fn with_seed(&self, seed: u64) -> ClassifierSpec {
        match self {
            ClassifierSpec::NaiveBayes => ClassifierSpec::NaiveBayes,
            ClassifierSpec::RandomForest(p) => {
                ClassifierSpec::RandomForest(RfParams { seed, ..p.clone() })
            }
            ClassifierSpec::Svm(p) => ClassifierSpec::Svm(SvmParams { seed, ..p.clone() }),
        }
    }
}

/// A trained classifier behind one prediction interface.
pub enum TrainedClassifier {
    Nb(GaussianNb),
    Rf(RandomForest),
    Svm(SvmModel),
}

impl TrainedClassifier {
    pub fn predict(&self, x: &[f64]) -> usize {
        match self {
            TrainedClassifier::Nb(m) => m.predict(x),
            TrainedClassifier::Rf(m) => m.predict(x),
            TrainedClassifier::Svm(m) => m.predict(x),
        }
    }
}

pub fn train_classifier(table: &FeatureTable, spec: &ClassifierSpec) -> Result<TrainedClassifier> {
    Ok(match spec {
        ClassifierSpec::NaiveBayes => TrainedClassifier::Nb(train_nb(table)?),
        ClassifierSpec::RandomForest(p) => TrainedClassifier::Rf(train_rf(table, p)?),
        ClassifierSpec::Svm(p) => TrainedClassifier::Svm(train_svm(table, p)?),
    })
}

/// Fold id per row. Rows are grouped by class, shuffled under a stream
/// derived from `seed` with tag `"cv-folds"`, and dealt round-robin with
/// each class continuing where the previous one stopped, so both overall
/// fold sizes and per-fold class proportions stay within one row.
pub fn stratified_folds(labels: &[usize], num_classes: usize, folds: usize, seed: u64) -> Vec<usize> {
    let mut rng = Rng::new(derive_seed(seed, "cv-folds"));
    let mut assignment = vec![0usize; labels.len()];
    let mut start = 0usize;
    for class in 0..num_classes {
        let mut members: Vec<usize> = (0..labels.len())
            .filter(|&r| labels[r] == class)
            .collect();
        rng.shuffle(&mut members);
        for (i, &row) in members.iter().enumerate() {
            assignment[row] = (start + i) % folds;
        }
        start += members.len();
    }
    assignment
}

/// Cross-validation outcome: per-fold accuracy plus metrics from the
/// confusion matrix pooled over every held-out fold.
#[derive(Debug, Clone)]
pub struct CvReport {
    pub classifier: String,
    pub seed: u64,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// Accuracy of the pooled confusion (weights folds by size).
    pub accuracy: f64,
    pub pooled_confusion: Array2<u32>,
    pub per_class_f1: Vec<f64>,
    pub macro_f1: f64,
}

impl CvReport {
    /// `classifier,fold,accuracy` rows plus the mean summary line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("classifier,fold,accuracy\n");
        for (f, acc) in self.fold_accuracies.iter().enumerate() {
            out.push_str(&format!("{},{f},{acc}\n", self.classifier));
        }
        out.push_str(&format!("{},mean,{}\n", self.classifier, self.mean_accuracy));
        out
    }
}

/// Hold each stratified fold out once, training on the rest with a
/// per-fold derived seed (`"cv-fold-{f}"`), and pool the confusion.
pub fn cross_validate(
    table: &FeatureTable,
    spec: &ClassifierSpec,
    folds: usize,
    seed: u64,
) -> Result<CvReport> {
    if folds < 2 {
        return Err(Error::InvalidParams("folds must be >= 2".into()));
    }
    if table.num_rows() < folds {
        return Err(Error::TooFewRows {
            rows: table.num_rows(),
            folds,
        });
    }

    let c = table.class_names.len();
    let assignment = stratified_folds(&table.labels, c, folds, seed);

    let mut fold_accuracies = Vec::with_capacity(folds);
    let mut pooled = Array2::<u32>::zeros((c, c));
    for fold in 0..folds {
        let train_rows: Vec<usize> = (0..table.num_rows())
            .filter(|&r| assignment[r] != fold)
            .collect();
        let test_rows: Vec<usize> = (0..table.num_rows())
            .filter(|&r| assignment[r] == fold)
            .collect();

        let model = train_classifier(
            &table.subset(&train_rows),
            &spec.with_seed(derive_seed(seed, &format!("cv-fold-{fold}"))),
        )?;

        let mut correct = 0usize;
        for &r in &test_rows {
            let predicted = model.predict(&table.rows[r]);
            pooled[[table.labels[r], predicted]] += 1;
            if predicted == table.labels[r] {
                correct += 1;
            }
        }
        fold_accuracies.push(correct as f64 / test_rows.len() as f64);
    }

    let summary = report_from_confusion(pooled.clone(), 0, &table.class_names);
    Ok(CvReport {
        classifier: spec.name().to_string(),
        seed,
        mean_accuracy: fold_accuracies.iter().sum::<f64>() / folds as f64,
        fold_accuracies,
        accuracy: summary.accuracy,
        pooled_confusion: pooled,
        per_class_f1: summary.f1,
        macro_f1: summary.macro_f1,
    })
}
