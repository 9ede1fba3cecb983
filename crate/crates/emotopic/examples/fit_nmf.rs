//! Factor the TF-IDF document-term matrix with multiplicative updates
//! and view the factors as topics.
//!
//! ```bash
//! cargo run --example fit_nmf
//! ```

use std::path::Path;
use std::sync::Arc;

use emotopic::corpus::{build_corpus, read_dataset_csv, to_term_matrix, MatrixMode,
                       PreprocessConfig};
use emotopic::model::top_terms;
use emotopic::nmf::{as_topic_model, fit_nmf, NmfParams};
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

    let matrix = to_term_matrix(&corpus, MatrixMode::TfIdf).expect("matrix");
    println!(
        "factoring a {} x {} tf-idf matrix at rank 3",
        matrix.num_docs(),
        matrix.num_terms()
    );
    let nmf = fit_nmf(&matrix, NmfParams::for_rank(3, 42)).expect("fit");

    let trace = &nmf.objective_trace;
    println!("iterations run: {}", trace.len());
    println!("objective: {:.4} -> {:.4}", trace[0], nmf.final_objective());

    let (model, degeneracy) = as_topic_model(&nmf, &corpus.vocab);
    if !degeneracy.is_clean() {
        println!("degenerate rows: {degeneracy:?}");
    }
    for topic in 0..model.num_topics() {
        println!("\ntopic {topic}:");
        for (term, weight) in top_terms(&model, topic, 8).expect("top words") {
            println!("  {weight:.4}  {term}");
        }
    }
}
