//! Topic-score feature tables, their CSV/ARFF formats, and the internal
//! classifiers (Gaussian naive Bayes, random forest, linear SVM) with
//! stratified cross-validation.

mod cv;
mod nb;
mod rf;
mod svm;

pub use cv::{cross_validate, stratified_folds, train_classifier, ClassifierSpec, CvReport,
             TrainedClassifier};
pub use nb::{train_nb, GaussianNb};
pub use rf::{bootstrap_indices, train_rf, RandomForest, RfParams};
pub use svm::{train_svm, SvmModel, SvmParams};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::model::TopicModel;
use crate::pipeline::DocScorer;

/// Per-document topic-score vectors with class labels; what the
/// classifiers and the Weka-compatible exports consume.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    /// `topic0..topicK-1`.
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Class id per row, indexing `class_names`.
    pub labels: Vec<usize>,
}

impl FeatureTable {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_features(&self) -> usize {
        self.feature_names.len()
    }

    /// The rows at `keep`, in the given order.
    pub fn subset(&self, keep: &[usize]) -> FeatureTable {
        FeatureTable {
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
            rows: keep.iter().map(|&r| self.rows[r].clone()).collect(),
            labels: keep.iter().map(|&r| self.labels[r]).collect(),
        }
    }
}

/// Score every document of a labeled corpus against the model; row order
/// is corpus order, and empty documents contribute all-zero rows.
pub fn export_features(corpus: &Corpus, model: &TopicModel) -> Result<FeatureTable> {
    if corpus.num_docs() == 0 {
        return Err(Error::EmptyCorpus);
    }
    let labels = corpus.labels()?.to_vec();

    let scorer = DocScorer::new(model, &corpus.vocab);
    let rows: Vec<Vec<f64>> = corpus.docs.iter().map(|doc| scorer.score(doc)).collect();

    Ok(FeatureTable {
        feature_names: (0..model.num_topics()).map(|k| format!("topic{k}")).collect(),
        class_names: corpus.class_names.clone(),
        rows,
        labels,
    })
}

/// `topic0,...,topicK-1,class` with shortest-round-trip numbers.
pub fn features_to_csv(table: &FeatureTable) -> String {
    let mut out = String::new();
    out.push_str(&table.feature_names.join(","));
    out.push_str(",class\n");
    for (row, &label) in table.rows.iter().zip(&table.labels) {
        for value in row {
            out.push_str(&format!("{value},"));
        }
        out.push_str(&table.class_names[label]);
        out.push('\n');
    }
    out
}

/// Parse the feature CSV back; class ids follow first occurrence unless
/// the caller supplies the class order.
pub fn features_from_csv(text: &str) -> Result<FeatureTable> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Dataset("empty feature csv".into()))?;
    let mut feature_names: Vec<String> = header.split(',').map(str::to_string).collect();
    match feature_names.pop() {
        Some(last) if last == "class" => {}
        _ => return Err(Error::Dataset("feature csv must end with a class column".into())),
    }

    let mut class_names: Vec<String> = Vec::new();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut fields: Vec<&str> = line.split(',').collect();
        if fields.len() != feature_names.len() + 1 {
            return Err(Error::Dataset(format!("feature csv row {i}: wrong arity")));
        }
        let label = fields.pop().expect("arity checked").to_string();
        let class = match class_names.iter().position(|c| *c == label) {
            Some(c) => c,
            None => {
                class_names.push(label);
                class_names.len() - 1
            }
        };
        let row: Vec<f64> = fields
            .iter()
            .map(|f| {
                f.parse()
                    .map_err(|_| Error::Dataset(format!("feature csv row {i}: bad number")))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
        labels.push(class);
    }
    Ok(FeatureTable {
        feature_names,
        class_names,
        rows,
        labels,
    })
}

/// Render the table as ARFF: `@RELATION`, one NUMERIC attribute per
/// feature, the nominal class attribute in class order, then `@DATA` rows.
pub fn write_arff(table: &FeatureTable, relation: &str) -> Result<String> {
    if table.rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut out = String::new();
    out.push_str(&format!("@RELATION {relation}\n"));
    for name in &table.feature_names {
        out.push_str(&format!("@ATTRIBUTE {name} NUMERIC\n"));
    }
    out.push_str(&format!("@ATTRIBUTE class {{{}}}\n", table.class_names.join(",")));
    out.push_str("@DATA\n");
    for (row, &label) in table.rows.iter().zip(&table.labels) {
        for value in row {
            out.push_str(&format!("{value},"));
        }
        out.push_str(&table.class_names[label]);
        out.push('\n');
    }
    Ok(out)
}

/// Parse ARFF produced by [`write_arff`] back into a table.
pub fn read_arff(text: &str) -> Result<FeatureTable> {
    let bad = |msg: &str| Error::Dataset(format!("arff: {msg}"));
    let mut lines = text.lines();
    lines
        .next()
        .filter(|l| l.starts_with("@RELATION "))
        .ok_or_else(|| bad("missing @RELATION"))?;

    let mut feature_names = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    for line in lines.by_ref() {
        if line == "@DATA" {
            break;
        }
        let rest = line
            .strip_prefix("@ATTRIBUTE ")
            .ok_or_else(|| bad("expected @ATTRIBUTE"))?;
        if let Some((name, kind)) = rest.split_once(' ') {
            if kind == "NUMERIC" {
                feature_names.push(name.to_string());
            } else if name == "class" && kind.starts_with('{') && kind.ends_with('}') {
                class_names = kind[1..kind.len() - 1]
                    .split(',')
                    .map(str::to_string)
                    .collect();
            } else {
                return Err(bad("unsupported attribute"));
            }
        } else {
            return Err(bad("malformed attribute"));
        }
    }
    if class_names.is_empty() {
        return Err(bad("missing class attribute"));
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for line in lines {
        let mut fields: Vec<&str> = line.split(',').collect();
        if fields.len() != feature_names.len() + 1 {
            return Err(bad("row arity mismatch"));
        }
        let label = fields.pop().expect("arity checked");
        let class = class_names
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| bad("unknown class in row"))?;
        rows.push(
            fields
                .iter()
                .map(|f| f.parse().map_err(|_| bad("bad number")))
                .collect::<Result<Vec<f64>>>()?,
        );
        labels.push(class);
    }
    Ok(FeatureTable {
        feature_names,
        class_names,
        rows,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_corpus, PreprocessConfig, RawDocument, Vocabulary};
    use crate::lda::LdaParams;
    use crate::model::{MethodTag, ModelParams};
    use crate::pipeline::score_document;
    use crate::text::IdentityStemmer;
    use ndarray::array;
    use std::collections::HashSet;
    use std::sync::Arc;

    fn sample_table() -> FeatureTable {
        FeatureTable {
            feature_names: vec!["topic0".into(), "topic1".into()],
            class_names: vec!["happy".into(), "sad".into()],
            rows: vec![vec![0.5, 0.05], vec![0.125, 0.75], vec![0.0, 1.5]],
            labels: vec![0, 1, 1],
        }
    }

    fn labeled_corpus(rows: &[(&str, &str)]) -> Corpus {
        let raw: Vec<RawDocument> = rows
            .iter()
            .enumerate()
            .map(|(id, (text, label))| RawDocument {
                id,
                text: text.to_string(),
                label: Some(label.to_string()),
            })
            .collect();
        let config =
            PreprocessConfig::new(HashSet::new(), HashSet::new(), Arc::new(IdentityStemmer));
        build_corpus(&raw, &config).unwrap().0
    }

    fn tiny_model(terms: &[&str]) -> TopicModel {
        TopicModel {
            phi: array![[0.6, 0.4], [0.3, 0.7]],
            theta: ndarray::Array2::zeros((1, 2)),
            params: ModelParams::Lda(LdaParams::for_k(2, 1)),
            method_tag: MethodTag::Lda,
            vocab: Vocabulary::from_parts(
                terms.iter().map(|t| t.to_string()).collect(),
                vec![1; terms.len()],
            ),
        }
    }

    #[test]
    fn export_rows_match_score_document() {
        let corpus = labeled_corpus(&[("a a b", "x"), ("b", "y")]);
        let model = tiny_model(&["a", "b"]);
        let table = export_features(&corpus, &model).unwrap();
        assert_eq!(table.num_rows(), corpus.num_docs());
        for (d, doc) in corpus.docs.iter().enumerate() {
            assert_eq!(table.rows[d], score_document(doc, &model));
        }
    }

    #[test]
    fn export_keeps_empty_docs_as_zero_rows() {
        let mut config =
            PreprocessConfig::new(HashSet::new(), HashSet::new(), Arc::new(IdentityStemmer));
        config.stopwords.insert("ve".into());
        let raw = vec![
            RawDocument {
                id: 0,
                text: "a b".into(),
                label: Some("x".into()),
            },
            RawDocument {
                id: 1,
                text: "ve".into(),
                label: Some("y".into()),
            },
        ];
        let (corpus, _) = build_corpus(&raw, &config).unwrap();
        let model = tiny_model(&["a", "b"]);
        let table = export_features(&corpus, &model).unwrap();
        assert_eq!(table.num_rows(), 2);
        assert_eq!(table.rows[1], vec![0.0, 0.0]);
    }

    #[test]
    fn export_requires_labels() {
        let raw = vec![RawDocument {
            id: 0,
            text: "a".into(),
            label: None,
        }];
        let config =
            PreprocessConfig::new(HashSet::new(), HashSet::new(), Arc::new(IdentityStemmer));
        let (corpus, _) = build_corpus(&raw, &config).unwrap();
        let model = tiny_model(&["a", "b"]);
        assert!(matches!(
            export_features(&corpus, &model),
            Err(Error::UnlabeledCorpus)
        ));
    }

    #[test]
    fn feature_csv_layout_and_roundtrip() {
        let table = sample_table();
        let csv = features_to_csv(&table);
        assert!(csv.starts_with("topic0,topic1,class\n0.5,0.05,happy\n"));
        let back = features_from_csv(&csv).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn arff_layout_is_exact() {
        let table = sample_table();
        let arff = write_arff(&table, "emotions").unwrap();
        let expected = "@RELATION emotions\n\
                        @ATTRIBUTE topic0 NUMERIC\n\
                        @ATTRIBUTE topic1 NUMERIC\n\
                        @ATTRIBUTE class {happy,sad}\n\
                        @DATA\n\
                        0.5,0.05,happy\n\
                        0.125,0.75,sad\n\
                        0,1.5,sad\n";
        assert_eq!(arff, expected);
    }

    #[test]
    fn arff_roundtrip_is_bit_exact() {
        let table = sample_table();
        let arff = write_arff(&table, "emotions").unwrap();
        let back = read_arff(&arff).unwrap();
        assert_eq!(back, table);
        assert_eq!(write_arff(&back, "emotions").unwrap(), arff);
    }

    #[test]
    fn empty_table_cannot_render() {
        let table = FeatureTable {
            feature_names: vec!["topic0".into()],
            class_names: vec!["x".into()],
            rows: vec![],
            labels: vec![],
        };
        assert!(matches!(write_arff(&table, "r"), Err(Error::EmptyTable)));
    }
}
