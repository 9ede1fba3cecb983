//! Export per-document topic scores as features and cross-validate the
//! three internal classifiers, printing an accuracy grid. The same table
//! also lands on disk as CSV and ARFF for external tools.
//!
//! ```bash
//! cargo run --example train_classifiers
//! ```

use std::path::Path;
use std::sync::Arc;

use emotopic::corpus::{build_corpus, read_dataset_csv, PreprocessConfig};
use emotopic::lda::{fit_lda, LdaParams};
use emotopic::ml::{
    cross_validate, export_features, features_to_csv, write_arff, ClassifierSpec, RfParams,
    SvmParams,
};
use emotopic::text::{read_term_set, SuffixStemmer};

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let raw = read_dataset_csv(&data.join("synthetic_3class.csv")).expect("dataset");
    let config = PreprocessConfig::new(
        read_term_set(&data.join("stopwords_tr.txt")).expect("stopwords"),
        read_term_set(&data.join("noise_words.txt")).expect("noise words"),
        Arc::new(SuffixStemmer::from_file(&data.join("suffixes_tr.txt")).expect("suffixes")),
    );
    let (corpus, _) = build_corpus(&raw, &config).expect("preprocess");

    let model = fit_lda(
        &corpus,
        LdaParams {
            k: 3,
            alpha: 0.5,
            beta: 0.01,
            iterations: 400,
            burn_in: 150,
            seed: 42,
        },
    )
    .expect("fit");

    let table = export_features(&corpus, &model).expect("features");
    let out = std::env::temp_dir().join("emotopic_features");
    std::fs::create_dir_all(&out).expect("outdir");
    std::fs::write(out.join("features.csv"), features_to_csv(&table)).expect("csv");
    std::fs::write(
        out.join("features.arff"),
        write_arff(&table, "emotopic").expect("arff"),
    )
    .expect("arff");
    println!(
        "wrote {} rows x {} features to {}",
        table.num_rows(),
        table.num_features(),
        out.display()
    );

    let seed = 42;
    let specs = [
        ClassifierSpec::NaiveBayes,
        ClassifierSpec::RandomForest(RfParams::default_for(seed)),
        ClassifierSpec::Svm(SvmParams::default_for(seed)),
    ];
    println!("\n10-fold cross-validation:");
    println!("{:<6} {:<10} {:<10}", "model", "accuracy", "macro-F1");
    for spec in specs {
        let report = cross_validate(&table, &spec, 10, seed).expect("cv");
        println!(
            "{:<6} {:<10.4} {:<10.4}",
            report.classifier, report.accuracy, report.macro_f1
        );
    }
}
