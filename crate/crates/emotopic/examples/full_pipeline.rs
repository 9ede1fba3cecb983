//! One end-to-end experiment through the same entry point the CLI uses:
//! preprocess, split, fit, label, evaluate, export, cross-validate, with
//! every artifact and a manifest written under the run directory.
//!
//! ```bash
//! cargo run --example full_pipeline
//! ```

use std::path::Path;

use emotopic::experiment::{cmd_pipeline, RunConfig};

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let outdir = std::env::temp_dir().join("emotopic_runs");

    let mut config = RunConfig::default();
    for (key, value) in [
        ("dataset", data.join("synthetic_3class.csv").display().to_string()),
        ("stopwords", data.join("stopwords_tr.txt").display().to_string()),
        ("noise-words", data.join("noise_words.txt").display().to_string()),
        ("suffixes", data.join("suffixes_tr.txt").display().to_string()),
        ("method", "nlda".to_string()),
        ("stages", "3".to_string()),
        ("k", "3".to_string()),
        ("seed", "42".to_string()),
        ("tracked-terms", "yasa,gozyasi,ofke".to_string()),
        ("outdir", outdir.display().to_string()),
    ] {
        config.apply(key, &value).expect("config");
    }

    let outcome = cmd_pipeline(config).expect("pipeline");
    println!(
        "{}: direct accuracy {:.4}, macro-F1 {:.4}",
        outcome.method_label, outcome.eval.accuracy, outcome.eval.macro_f1
    );
    for report in &outcome.cv {
        println!(
            "  cv {:<4} accuracy {:.4}  macro-F1 {:.4}",
            report.classifier, report.accuracy, report.macro_f1
        );
    }

    println!("\nartifacts in {}:", outcome.run_dir.display());
    let mut names: Vec<String> = std::fs::read_dir(&outcome.run_dir)
        .expect("run dir")
        .map(|e| e.expect("entry").file_name().to_string_lossy().to_string())
        .collect();
    names.sort();
    for name in names {
        println!("  {name}");
    }
}
