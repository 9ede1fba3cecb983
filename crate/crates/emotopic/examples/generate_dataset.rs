//! Regenerate the bundled synthetic tweet dataset and word lists.
//!
//! ```bash
//! cargo run --example generate_dataset -- [outdir] [classes] [docs-per-class] [seed]
//! ```
//!
//! Defaults reproduce `data/` exactly: 3 classes, 100 documents per class,
//! seed 2024.

use std::fs;
use std::path::PathBuf;

use emotopic::synthetic::{
    bundled_noise_words, bundled_stopwords, bundled_suffixes, dataset_to_csv, emotion_dataset,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let outdir = PathBuf::from(args.next().unwrap_or_else(|| "data".into()));
    let classes: usize = args.next().map(|a| a.parse().unwrap()).unwrap_or(3);
    let docs_per_class: usize = args.next().map(|a| a.parse().unwrap()).unwrap_or(100);
    let seed: u64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(2024);

    fs::create_dir_all(&outdir).expect("create output directory");
    let docs = emotion_dataset(classes, docs_per_class, seed);
    let csv = dataset_to_csv(&docs);
    let name = format!("synthetic_{classes}class.csv");
    fs::write(outdir.join(&name), csv).expect("write dataset");
    fs::write(outdir.join("stopwords_tr.txt"), bundled_stopwords()).expect("write stopwords");
    fs::write(outdir.join("noise_words.txt"), bundled_noise_words()).expect("write noise words");
    fs::write(outdir.join("suffixes_tr.txt"), bundled_suffixes()).expect("write suffixes");

    println!(
        "wrote {} documents ({classes} classes, seed {seed}) to {}",
        docs.len(),
        outdir.join(name).display()
    );
}
