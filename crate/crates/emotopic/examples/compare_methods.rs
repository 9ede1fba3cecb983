//! Run all three back-ends over the bundled dataset and print the
//! side-by-side comparison table (direct accuracy plus classifier
//! cross-validation accuracy per method).
//!
//! ```bash
//! cargo run --example compare_methods
//! ```

use std::path::Path;

use emotopic::experiment::{cmd_compare, RunConfig};

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let outdir = std::env::temp_dir().join("emotopic_compare");

    let configs: Vec<RunConfig> = ["lda", "nlda", "nmf"]
        .iter()
        .map(|method| {
            let mut config = RunConfig::default();
            for (key, value) in [
                ("dataset", data.join("synthetic_3class.csv").display().to_string()),
                ("stopwords", data.join("stopwords_tr.txt").display().to_string()),
                ("noise-words", data.join("noise_words.txt").display().to_string()),
                ("suffixes", data.join("suffixes_tr.txt").display().to_string()),
                ("method", method.to_string()),
                ("stages", "3".to_string()),
                ("k", "3".to_string()),
                ("seed", "42".to_string()),
                ("outdir", outdir.display().to_string()),
            ] {
                config.apply(key, &value).expect("config");
            }
            config
        })
        .collect();

    let outcome = cmd_compare(configs).expect("compare");
    print!("{}", outcome.csv);
    println!("\ntable written to {}", outcome.path.display());
}
