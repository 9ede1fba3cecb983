//! Load the bundled dataset and walk it through the preprocessing path:
//! diacritic folding, punctuation splitting, stopword and noise-word
//! removal, suffix stripping, vocabulary construction.
//!
//! ```bash
//! cargo run --example preprocess
//! ```

use std::path::Path;
use std::sync::Arc;

use emotopic::corpus::{build_corpus, read_dataset_csv, PreprocessConfig};
use emotopic::text::{normalize, read_term_set, SuffixStemmer};

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let raw = read_dataset_csv(&data.join("synthetic_3class.csv")).expect("dataset");
    let config = PreprocessConfig::new(
        read_term_set(&data.join("stopwords_tr.txt")).expect("stopwords"),
        read_term_set(&data.join("noise_words.txt")).expect("noise words"),
        Arc::new(SuffixStemmer::from_file(&data.join("suffixes_tr.txt")).expect("suffixes")),
    );

    println!("normalization samples:");
    for doc in raw.iter().take(3) {
        println!("  raw:        {}", doc.text);
        println!("  normalized: {}", normalize(&doc.text));
    }

    let (corpus, report) = build_corpus(&raw, &config).expect("preprocess");
    println!();
    println!("documents:        {}", report.input_docs);
    println!("surviving tokens: {}", report.kept_tokens);
    println!("vocabulary size:  {}", report.vocab_size);
    println!("empty documents:  {}", report.empty_doc_ids.len());
    println!("classes:          {:?}", corpus.class_names);

    let mut by_df: Vec<usize> = (0..corpus.num_terms()).collect();
    by_df.sort_by_key(|&t| std::cmp::Reverse(corpus.vocab.df(t)));
    println!("\nhighest document frequency:");
    for &t in by_df.iter().take(10) {
        println!("  {:<10} df={}", corpus.vocab.term(t), corpus.vocab.df(t));
    }
}
