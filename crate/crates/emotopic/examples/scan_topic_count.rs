//! Choose the topic count by mean UMass coherence over a candidate grid,
//! highest value wins.
//!
//! ```bash
//! cargo run --example scan_topic_count
//! ```

use std::path::Path;
use std::sync::Arc;

use emotopic::corpus::{build_corpus, read_dataset_csv, PreprocessConfig};
use emotopic::lda::{select_topic_count, LdaParams};
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

    let base = LdaParams {
        k: 2, // replaced per grid point
        alpha: 1.0,
        beta: 0.01,
        iterations: 300,
        burn_in: 100,
        seed: 42,
    };
    let grid = [2, 3, 4, 5, 6, 8];
    let scan = select_topic_count(&corpus, &grid, &base, 10).expect("scan");

    println!("k   mean coherence");
    for (k, score) in scan.grid.iter().zip(&scan.scores) {
        let marker = if *k == scan.chosen_k { "  <- chosen" } else { "" };
        println!("{k:<3} {score:+.4}{marker}");
    }
}
