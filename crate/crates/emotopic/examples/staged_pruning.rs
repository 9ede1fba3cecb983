//! The staged-pruning LDA loop: fit, delete every term below its topic's
//! mean weight, rebuild the dictionary, refit. Prints the per-stage
//! dictionary shrinkage and the weight trajectory of a few keywords.
//!
//! ```bash
//! cargo run --example staged_pruning
//! ```

use std::path::Path;
use std::sync::Arc;

use emotopic::corpus::{build_corpus, read_dataset_csv, PreprocessConfig};
use emotopic::lda::LdaParams;
use emotopic::nlda::{run_nlda, PruneScope};
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
    let tracked = ["yasa", "gozyasi", "ofke", "park"].map(String::from);
    let result = run_nlda(&corpus, params, 3, PruneScope::All, &tracked).expect("staged run");

    println!("stage  dictionary");
    for report in &result.stage_reports {
        println!("{:<6} {}", report.stage, report.vocab_after);
    }

    println!("\nmax topic weight per stage:");
    print!("{:<10}", "term");
    for report in &result.stage_reports {
        print!("  stage {}", report.stage);
    }
    println!();
    for term in &tracked {
        print!("{term:<10}");
        for report in &result.stage_reports {
            match report.tracked_weights.get(term) {
                Some(weight) => print!("  {weight:.5}"),
                None => print!("  pruned "),
            }
        }
        println!();
    }
    println!(
        "\nfinal model: {} over {} terms",
        result.final_model.method_tag,
        result.final_corpus.num_terms()
    );
}
