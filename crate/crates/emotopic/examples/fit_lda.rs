//! Fit plain LDA by collapsed Gibbs sampling on the bundled corpus and
//! inspect the topics: top words, weights, and UMass coherence.
//!
//! ```bash
//! cargo run --example fit_lda
//! ```

use std::path::Path;
use std::sync::Arc;

use emotopic::corpus::{build_corpus, read_dataset_csv, PreprocessConfig};
use emotopic::lda::{coherence, fit_lda, LdaParams};
use emotopic::model::top_terms;
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

    let params = LdaParams {
        k: 3,
        alpha: 0.5,
        beta: 0.01,
        iterations: 500,
        burn_in: 200,
        seed: 42,
    };
    let model = fit_lda(&corpus, params).expect("fit");

    let (scores, mean) = coherence(&model, &corpus, 10).expect("coherence");
    for (topic, score) in scores.iter().enumerate() {
        println!("topic {topic} (coherence {score:+.3}):");
        for (term, weight) in top_terms(&model, topic, 8).expect("top words") {
            println!("  {weight:.4}  {term}");
        }
    }
    println!("\nmean coherence over {} topics: {mean:+.3}", model.num_topics());
}
