//! Direct topic-label classification: split 80/20, vote class labels
//! onto topics from the training half, and score the held-out documents
//! by summed term weights.
//!
//! ```bash
//! cargo run --example classify_direct
//! ```

use std::path::Path;
use std::sync::Arc;

use emotopic::corpus::{build_corpus, read_dataset_csv, split_train_test, PreprocessConfig};
use emotopic::lda::{fit_lda, LdaParams};
use emotopic::pipeline::{evaluate, label_topics};
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
    let (train, test) = split_train_test(&corpus, 0.8, 42).expect("split");

    let model = fit_lda(
        &train,
        LdaParams {
            k: 3,
            alpha: 0.5,
            beta: 0.01,
            iterations: 500,
            burn_in: 200,
            seed: 42,
        },
    )
    .expect("fit");

    let labeling = label_topics(&model, &train).expect("label topics");
    println!("topic -> class:");
    for (topic, &class) in labeling.topic_class.iter().enumerate() {
        println!("  topic {topic} -> {}", train.class_names[class]);
    }

    let report = evaluate(&model, &labeling, &test).expect("evaluate");
    println!("\nconfusion (rows = truth):");
    print!("{:<8}", "");
    for name in &report.class_names {
        print!("{name:<8}");
    }
    println!();
    for (i, name) in report.class_names.iter().enumerate() {
        print!("{name:<8}");
        for j in 0..report.class_names.len() {
            print!("{:<8}", report.confusion[[i, j]]);
        }
        println!();
    }
    println!("\naccuracy: {:.3}", report.accuracy);
    println!("macro-F1: {:.3}", report.macro_f1);
    println!("abstained: {}", report.abstain_count);
}
