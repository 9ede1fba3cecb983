//! Labeled-text ingestion: vocabulary building, document-term matrices,
//! and the stratified train/test split.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use ndarray::Array2;

use crate::error::{io_err, Error, Result};
use crate::rng::{derive_seed, fnv1a64, Rng};
use crate::text::{normalize, tokenize_filter, Stemmer};

/// One input document before preprocessing.
#[derive(Debug, Clone)]
pub struct RawDocument {
    pub id: usize,
    pub text: String,
    pub label: Option<String>,
}

/// Dense term dictionary with document frequencies.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    df: Vec<u32>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, id: usize) -> &str {
        &self.terms[id]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// Document frequency in the corpus this vocabulary was built from.
    pub fn df(&self, id: usize) -> u32 {
        self.df[id]
    }

    /// FNV-1a over the newline-joined term list; identifies the vocabulary
    /// in persisted model files.
    pub fn hash(&self) -> u64 {
        let mut bytes = Vec::new();
        for t in &self.terms {
            bytes.extend_from_slice(t.as_bytes());
            bytes.push(b'\n');
        }
        fnv1a64(&bytes)
    }

    pub(crate) fn from_parts(terms: Vec<String>, df: Vec<u32>) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocabulary { terms, index, df }
    }
}

/// Preprocessed documents as token-id sequences over a shared vocabulary.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub docs: Vec<Vec<usize>>,
    pub vocab: Vocabulary,
    /// Per-document class ids into `class_names`, if the dataset is labeled.
    pub labels: Option<Vec<usize>>,
    /// Classes in first-occurrence order; tie-breaks follow this order.
    pub class_names: Vec<String>,
}

impl Corpus {
    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn num_terms(&self) -> usize {
        self.vocab.len()
    }

    pub fn total_tokens(&self) -> usize {
        self.docs.iter().map(Vec::len).sum()
    }

    pub fn labels(&self) -> Result<&[usize]> {
        self.labels.as_deref().ok_or(Error::UnlabeledCorpus)
    }

    pub fn label_name(&self, doc: usize) -> Option<&str> {
        self.labels
            .as_ref()
            .map(|l| self.class_names[l[doc]].as_str())
    }
}

/// Everything `build_corpus` needs besides the documents.
#[derive(Clone)]
pub struct PreprocessConfig {
    pub stopwords: HashSet<String>,
    pub noise_words: HashSet<String>,
    pub stemmer: Arc<dyn Stemmer>,
}

impl PreprocessConfig {
    pub fn new(
        stopwords: HashSet<String>,
        noise_words: HashSet<String>,
        stemmer: Arc<dyn Stemmer>,
    ) -> Self {
        PreprocessConfig {
            stopwords,
            noise_words,
            stemmer,
        }
    }
}

impl std::fmt::Debug for PreprocessConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PreprocessConfig")
            .field("stopwords", &self.stopwords.len())
            .field("noise_words", &self.noise_words.len())
            .finish()
    }
}

/// What preprocessing did to the dataset. Documents that end up empty are
/// kept in the corpus (they still need predictions) but recorded here.
#[derive(Debug, Clone, Default)]
pub struct PreprocessReport {
    pub input_docs: usize,
    pub kept_tokens: usize,
    pub vocab_size: usize,
    pub empty_doc_ids: Vec<usize>,
}

/// Build the corpus: normalize, tokenize, filter, stem, and enumerate the
/// vocabulary in first-occurrence order with document frequencies.
pub fn build_corpus(
    raw: &[RawDocument],
    config: &PreprocessConfig,
) -> Result<(Corpus, PreprocessReport)> {
    let mut terms: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut df: Vec<u32> = Vec::new();
    let mut docs: Vec<Vec<usize>> = Vec::with_capacity(raw.len());

    let mut class_names: Vec<String> = Vec::new();
    let mut class_index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<usize> = Vec::new();
    let mut labeled = 0usize;

    let mut report = PreprocessReport {
        input_docs: raw.len(),
        ..Default::default()
    };

    for doc in raw {
        let tokens = tokenize_filter(
            &normalize(&doc.text),
            &config.stopwords,
            &config.noise_words,
            config.stemmer.as_ref(),
        );
        let mut ids = Vec::with_capacity(tokens.len());
        let mut seen: HashSet<usize> = HashSet::new();
        for token in tokens {
            let id = match index.get(&token) {
                Some(&id) => id,
                None => {
                    let id = terms.len();
                    index.insert(token.clone(), id);
                    terms.push(token);
                    df.push(0);
                    id
                }
            };
            if seen.insert(id) {
                df[id] += 1;
            }
            ids.push(id);
        }
        if ids.is_empty() {
            report.empty_doc_ids.push(doc.id);
        }
        report.kept_tokens += ids.len();
        docs.push(ids);

        if let Some(label) = &doc.label {
            labeled += 1;
            let class = match class_index.get(label) {
                Some(&c) => c,
                None => {
                    let c = class_names.len();
                    class_index.insert(label.clone(), c);
                    class_names.push(label.clone());
                    c
                }
            };
            labels.push(class);
        }
    }

    if terms.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if labeled != 0 && labeled != raw.len() {
        return Err(Error::Dataset(format!(
            "{labeled} of {} documents are labeled; labels must be all or none",
            raw.len()
        )));
    }

    report.vocab_size = terms.len();
    let corpus = Corpus {
        docs,
        vocab: Vocabulary::from_parts(terms, df),
        labels: (labeled > 0).then_some(labels),
        class_names,
    };
    Ok((corpus, report))
}

/// Bag-of-words weighting for [`TermMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixMode {
    Counts,
    TfIdf,
}

impl std::fmt::Display for MatrixMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MatrixMode::Counts => write!(f, "counts"),
            MatrixMode::TfIdf => write!(f, "tfidf"),
        }
    }
}

/// Dense docs-by-terms matrix, raw counts or TF-IDF.
#[derive(Debug, Clone)]
pub struct TermMatrix {
    pub values: Array2<f64>,
    pub mode: MatrixMode,
}

impl TermMatrix {
    pub fn num_docs(&self) -> usize {
        self.values.nrows()
    }

    pub fn num_terms(&self) -> usize {
        self.values.ncols()
    }
}

/// Bag-of-words bridge consumed by NMF.
///
/// TF-IDF uses raw term counts and natural log: `tf(d,t) * ln(D / df(t))`,
/// with `df` recomputed over the documents of `corpus` itself so split
/// corpora stay self-consistent (a term absent from every document
/// contributes a zero column).
pub fn to_term_matrix(corpus: &Corpus, mode: MatrixMode) -> Result<TermMatrix> {
    let d = corpus.num_docs();
    let v = corpus.num_terms();
    if d == 0 || v == 0 {
        return Err(Error::EmptyCorpus);
    }

    let mut values = Array2::<f64>::zeros((d, v));
    for (row, doc) in corpus.docs.iter().enumerate() {
        for &t in doc {
            values[[row, t]] += 1.0;
        }
    }

    if mode == MatrixMode::TfIdf {
        let mut local_df = vec![0u32; v];
        for doc in &corpus.docs {
            let mut seen: HashSet<usize> = HashSet::new();
            for &t in doc {
                if seen.insert(t) {
                    local_df[t] += 1;
                }
            }
        }
        for (col, &dft) in local_df.iter().enumerate() {
            let idf = if dft == 0 {
                0.0
            } else {
                (d as f64 / dft as f64).ln()
            };
            for row in 0..d {
                values[[row, col]] *= idf;
            }
        }
    }

    Ok(TermMatrix { values, mode })
}

/// Stratified split into train and test corpora sharing the parent
/// vocabulary. Each class lands within one document of
/// `train_fraction * class_size`; the shuffle stream is derived from
/// `seed` with tag `"split"`.
pub fn split_train_test(
    corpus: &Corpus,
    train_fraction: f64,
    seed: u64,
) -> Result<(Corpus, Corpus)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParams(format!(
            "train_fraction {train_fraction} outside (0, 1)"
        )));
    }
    let labels = corpus.labels()?;

    let mut rng = Rng::new(derive_seed(seed, "split"));
    let mut in_train = vec![false; corpus.num_docs()];
    for class in 0..corpus.class_names.len() {
        let mut members: Vec<usize> = (0..corpus.num_docs())
            .filter(|&d| labels[d] == class)
            .collect();
        rng.shuffle(&mut members);
        let take = (train_fraction * members.len() as f64).round() as usize;
        for &d in members.iter().take(take.min(members.len())) {
            in_train[d] = true;
        }
    }

    let pick = |keep: bool| -> Corpus {
        let docs = corpus
            .docs
            .iter()
            .enumerate()
            .filter(|(d, _)| in_train[*d] == keep)
            .map(|(_, doc)| doc.clone())
            .collect();
        let labels = labels
            .iter()
            .enumerate()
            .filter(|(d, _)| in_train[*d] == keep)
            .map(|(_, &l)| l)
            .collect();
        Corpus {
            docs,
            vocab: corpus.vocab.clone(),
            labels: Some(labels),
            class_names: corpus.class_names.clone(),
        }
    };
    Ok((pick(true), pick(false)))
}

/// Read a `text,label` dataset. The header must name a `text` column; the
/// `label` column is optional so unlabeled prediction input parses too.
pub fn read_dataset_csv(path: &Path) -> Result<Vec<RawDocument>> {
    let content = fs::read_to_string(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(content.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| Error::Dataset(format!("{}: {e}", path.display())))?
        .clone();
    let text_col = headers
        .iter()
        .position(|h| h.trim() == "text")
        .ok_or_else(|| Error::Dataset(format!("{}: no 'text' column", path.display())))?;
    let label_col = headers.iter().position(|h| h.trim() == "label");

    let mut docs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Dataset(format!("{}: {e}", path.display())))?;
        let text = record
            .get(text_col)
            .ok_or_else(|| Error::Dataset(format!("{}: row {i} missing text", path.display())))?
            .to_string();
        let label = label_col
            .and_then(|c| record.get(c))
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string);
        docs.push(RawDocument { id: i, text, label });
    }
    if docs.is_empty() {
        return Err(Error::Dataset(format!("{}: no rows", path.display())));
    }
    Ok(docs)
}
