//! Direct topic-label classification: score documents by summed term
//! weights, vote class labels onto topics from training data, predict,
//! and evaluate.

use ndarray::Array2;

use crate::corpus::{Corpus, Vocabulary};
use crate::error::Result;
use crate::model::TopicModel;

/// Per-topic score of one document: the sum of `phi[k, token]` over its
/// tokens, each occurrence counted. Token ids index the model's
/// vocabulary; out-of-range ids are skipped as out-of-vocabulary.
pub fn score_document(doc: &[usize], model: &TopicModel) -> Vec<f64> {
    let v = model.num_terms();
    let mut scores = vec![0.0; model.num_topics()];
    for &token in doc {
        if token >= v {
            continue;
        }
        for (k, score) in scores.iter_mut().enumerate() {
            *score += model.phi[[k, token]];
        }
    }
    scores
}

/// The winning topic: argmax with ties toward the lower index, or `None`
/// (abstain) when every score is zero.
pub fn assign_topic(scores: &[f64]) -> Option<usize> {
    if scores.iter().all(|&s| s == 0.0) {
        return None;
    }
    let mut best = 0;
    for (k, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = k;
        }
    }
    Some(best)
}

/// Scores documents of one corpus against a model whose vocabulary may
/// differ (a pruned dictionary, or a model loaded from file). Tokens are
/// matched by term string once up front; unmatched tokens are skipped.
pub struct DocScorer<'a> {
    model: &'a TopicModel,
    projection: Option<Vec<Option<usize>>>,
}

impl<'a> DocScorer<'a> {
    pub fn new(model: &'a TopicModel, doc_vocab: &Vocabulary) -> Self {
        let projection = if model.vocab.hash() == doc_vocab.hash() {
            None
        } else {
            Some(
                doc_vocab
                    .terms()
                    .iter()
                    .map(|t| model.vocab.id(t))
                    .collect(),
            )
        };
        DocScorer { model, projection }
    }

    pub fn score(&self, doc: &[usize]) -> Vec<f64> {
        match &self.projection {
            None => score_document(doc, self.model),
            Some(map) => {
                let mapped: Vec<usize> = doc.iter().filter_map(|&t| map[t]).collect();
                score_document(&mapped, self.model)
            }
        }
    }
}

/// Class labels voted onto topics from training assignments.
#[derive(Debug, Clone)]
pub struct TopicLabeling {
    /// Class id per topic.
    pub topic_class: Vec<usize>,
    /// K x C vote counts backing the assignment.
    pub support: Array2<u32>,
    /// Class predicted when a document abstains (all-zero scores).
    pub fallback_class: usize,
}

impl TopicLabeling {
    /// `topic,class,votes...` rows.
    pub fn to_csv(&self, class_names: &[String]) -> String {
        let mut out = String::from("topic,class");
        for name in class_names {
            out.push_str(&format!(",votes_{name}"));
        }
        out.push('\n');
        for (topic, &class) in self.topic_class.iter().enumerate() {
            out.push_str(&format!("{topic},{}", class_names[class]));
            for c in 0..class_names.len() {
                out.push_str(&format!(",{}", self.support[[topic, c]]));
            }
            out.push('\n');
        }
        out
    }
}

/// Assign every training document to its best topic, then label each topic
/// with the majority class of its documents. Topics with no documents get
/// the globally most frequent training class. Vote ties break toward the
/// class with more training documents, then toward the earlier entry in
/// `class_names`.
pub fn label_topics(model: &TopicModel, train: &Corpus) -> Result<TopicLabeling> {
    let labels = train.labels()?;
    let k = model.num_topics();
    let c = train.class_names.len();

    let mut class_totals = vec![0u32; c];
    for &l in labels {
        class_totals[l] += 1;
    }

    let mut support = Array2::<u32>::zeros((k, c));
    let scorer = DocScorer::new(model, &train.vocab);
    for (d, doc) in train.docs.iter().enumerate() {
        if let Some(topic) = assign_topic(&scorer.score(doc)) {
            support[[topic, labels[d]]] += 1;
        }
    }

    // With zero votes this reduces to the class-total comparison, which is
    // exactly the global-majority fallback rule.
    let majority = |votes: &[u32]| -> usize {
        let mut best = 0;
        for class in 1..c {
            let better = votes[class] > votes[best]
                || (votes[class] == votes[best] && class_totals[class] > class_totals[best]);
            if better {
                best = class;
            }
        }
        best
    };

    let topic_class = (0..k)
        .map(|topic| majority(&support.row(topic).to_vec()))
        .collect();
    let fallback_class = majority(&vec![0; c]);

    Ok(TopicLabeling {
        topic_class,
        support,
        fallback_class,
    })
}

/// Class of the document's winning topic; abstentions fall back to the
/// labeling's fallback class.
pub fn predict_class(doc: &[usize], model: &TopicModel, labeling: &TopicLabeling) -> usize {
    match assign_topic(&score_document(doc, model)) {
        Some(topic) => labeling.topic_class[topic],
        None => labeling.fallback_class,
    }
}

/// Predictions for every document of a corpus, matching vocabularies by
/// term string when they differ.
pub fn predict_corpus(model: &TopicModel, labeling: &TopicLabeling, corpus: &Corpus) -> Vec<usize> {
    let scorer = DocScorer::new(model, &corpus.vocab);
    corpus
        .docs
        .iter()
        .map(|doc| match assign_topic(&scorer.score(doc)) {
            Some(topic) => labeling.topic_class[topic],
            None => labeling.fallback_class,
        })
        .collect()
}

/// Classification quality on a labeled corpus.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub accuracy: f64,
    /// C x C counts; rows are true classes, columns predictions.
    pub confusion: Array2<u32>,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub f1: Vec<f64>,
    pub macro_f1: f64,
    pub abstain_count: usize,
    pub class_names: Vec<String>,
}

/// Metrics from a filled confusion matrix; 0/0 ratios score zero.
pub fn report_from_confusion(
    confusion: Array2<u32>,
    abstain_count: usize,
    class_names: &[String],
) -> EvalReport {
    let c = confusion.nrows();
    let total: u32 = confusion.iter().sum();
    let trace: u32 = (0..c).map(|i| confusion[[i, i]]).sum();

    let ratio = |num: u32, den: u32| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let mut precision = Vec::with_capacity(c);
    let mut recall = Vec::with_capacity(c);
    let mut f1 = Vec::with_capacity(c);
    for class in 0..c {
        let tp = confusion[[class, class]];
        let p = ratio(tp, confusion.column(class).sum());
        let r = ratio(tp, confusion.row(class).sum());
        precision.push(p);
        recall.push(r);
        f1.push(if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) });
    }
    let macro_f1 = f1.iter().sum::<f64>() / c as f64;

    EvalReport {
        accuracy: ratio(trace, total),
        confusion,
        precision,
        recall,
        f1,
        macro_f1,
        abstain_count,
        class_names: class_names.to_vec(),
    }
}

/// Predict every test document and tabulate accuracy, the confusion
/// matrix, and per-class precision/recall/F1 with macro-F1.
pub fn evaluate(model: &TopicModel, labeling: &TopicLabeling, test: &Corpus) -> Result<EvalReport> {
    let labels = test.labels()?;
    let c = test.class_names.len();

    let scorer = DocScorer::new(model, &test.vocab);
    let mut confusion = Array2::<u32>::zeros((c, c));
    let mut abstain_count = 0;
    for (d, doc) in test.docs.iter().enumerate() {
        let predicted = match assign_topic(&scorer.score(doc)) {
            Some(topic) => labeling.topic_class[topic],
            None => {
                abstain_count += 1;
                labeling.fallback_class
            }
        };
        confusion[[labels[d], predicted]] += 1;
    }

    Ok(report_from_confusion(
        confusion,
        abstain_count,
        &test.class_names,
    ))
}

impl EvalReport {
    /// Confusion-matrix block followed by a metrics block.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("confusion");
        for name in &self.class_names {
            out.push_str(&format!(",pred_{name}"));
        }
        out.push('\n');
        for (i, name) in self.class_names.iter().enumerate() {
            out.push_str(&format!("true_{name}"));
            for j in 0..self.class_names.len() {
                out.push_str(&format!(",{}", self.confusion[[i, j]]));
            }
            out.push('\n');
        }
        out.push_str("metric,class,value\n");
        for (i, name) in self.class_names.iter().enumerate() {
            out.push_str(&format!("precision,{name},{}\n", self.precision[i]));
            out.push_str(&format!("recall,{name},{}\n", self.recall[i]));
            out.push_str(&format!("f1,{name},{}\n", self.f1[i]));
        }
        out.push_str(&format!("accuracy,,{}\n", self.accuracy));
        out.push_str(&format!("macro_f1,,{}\n", self.macro_f1));
        out.push_str(&format!("abstain,,{}\n", self.abstain_count));
        out
    }

    /// The one-line summary appended to the cross-method comparison file.
    pub fn summary_line(&self, method: &str) -> String {
        format!(
            "{method},{},{},{}\n",
            self.class_names.len(),
            self.accuracy,
            self.macro_f1
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_corpus, PreprocessConfig, RawDocument};
    use crate::lda::LdaParams;
    use crate::model::{MethodTag, ModelParams};
    use crate::text::IdentityStemmer;
    use ndarray::array;
    use std::collections::HashSet;
    use std::sync::Arc;

    fn model_from(phi: Array2<f64>, terms: &[&str]) -> TopicModel {
        let k = phi.nrows();
        TopicModel {
            phi,
            theta: Array2::zeros((1, k)),
            params: ModelParams::Lda(LdaParams::for_k(k, 1)),
            method_tag: MethodTag::Lda,
            vocab: Vocabulary::from_parts(
                terms.iter().map(|t| t.to_string()).collect(),
                vec![1; terms.len()],
            ),
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

    #[test]
    fn scores_sum_phi_per_occurrence() {
        let model = model_from(
            array![[0.3, 0.2, 0.5], [0.05, 0.0, 0.95]],
            &["t0", "t1", "t2"],
        );
        assert_eq!(score_document(&[0, 1], &model), vec![0.5, 0.05]);
        assert_eq!(score_document(&[], &model), vec![0.0, 0.0]);
        let twice = score_document(&[0, 0], &model);
        assert_eq!(twice, vec![0.6, 0.1]);
        // id out of range counts as OOV
        assert_eq!(score_document(&[9], &model), vec![0.0, 0.0]);
    }

    #[test]
    fn scoring_is_linear_in_concatenation() {
        let model = model_from(
            array![[0.3, 0.2, 0.5], [0.05, 0.0, 0.95]],
            &["t0", "t1", "t2"],
        );
        let a = [0, 2, 2];
        let b = [1, 0];
        let joint: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
        let sa = score_document(&a, &model);
        let sb = score_document(&b, &model);
        let sj = score_document(&joint, &model);
        for k in 0..2 {
            assert!((sj[k] - (sa[k] + sb[k])).abs() < 1e-12);
        }
    }

    #[test]
    fn assignment_takes_argmax_with_tie_and_abstain_rules() {
        assert_eq!(assign_topic(&[0.5, 0.05]), Some(0));
        assert_eq!(assign_topic(&[0.2, 0.2]), Some(0));
        assert_eq!(assign_topic(&[0.0, 0.0]), None);
        assert_eq!(assign_topic(&[0.1, 0.3, 0.2]), Some(1));
    }

    #[test]
    fn scaling_phi_preserves_assignments() {
        let model = model_from(
            array![[0.3, 0.2, 0.5], [0.05, 0.0, 0.95]],
            &["t0", "t1", "t2"],
        );
        let mut scaled = model.clone();
        scaled.phi.mapv_inplace(|x| x * 7.0);
        for doc in [&[0usize, 1][..], &[2], &[0, 2, 2]] {
            assert_eq!(
                assign_topic(&score_document(doc, &model)),
                assign_topic(&score_document(doc, &scaled))
            );
        }
    }

    #[test]
    fn topics_labeled_by_majority_with_fallback() {
        // phi puts doc "a"-docs on topic 0 and "b"-docs on topic 1;
        // topic 2 never wins and falls back to the majority class
        let corpus = labeled_corpus(&[
            ("a", "happy"),
            ("a", "happy"),
            ("a", "sad"),
            ("b", "sad"),
            ("b", "sad"),
        ]);
        let model = model_from(
            array![[0.9, 0.1], [0.1, 0.9], [0.0, 0.0]],
            &["a", "b"],
        );
        let labeling = label_topics(&model, &corpus).unwrap();
        assert_eq!(labeling.topic_class[0], 0); // happy 2 : sad 1
        assert_eq!(labeling.topic_class[1], 1);
        assert_eq!(labeling.topic_class[2], 1); // no votes -> global majority sad
        assert_eq!(labeling.fallback_class, 1);
        assert_eq!(labeling.support[[0, 0]], 2);
        assert_eq!(labeling.support[[0, 1]], 1);
    }

    #[test]
    fn vote_tie_breaks_toward_larger_class_then_order() {
        // equal votes on topic 0, class sizes equal: earlier class wins
        let corpus = labeled_corpus(&[("a", "fear"), ("a", "angry")]);
        let model = model_from(array![[1.0]], &["a"]);
        let labeling = label_topics(&model, &corpus).unwrap();
        assert_eq!(corpus.class_names, vec!["fear", "angry"]);
        assert_eq!(labeling.topic_class[0], 0);

        // unequal class sizes: the larger class takes the tie
        let corpus = labeled_corpus(&[("a", "fear"), ("a", "angry"), ("b", "angry")]);
        let model = model_from(array![[1.0, 0.0]], &["a", "b"]);
        let labeling = label_topics(&model, &corpus).unwrap();
        assert_eq!(labeling.topic_class[0], 1);
    }

    #[test]
    fn prediction_composes_and_falls_back() {
        let corpus = labeled_corpus(&[("a", "happy"), ("b", "sad"), ("b", "sad")]);
        let model = model_from(array![[0.9, 0.1], [0.1, 0.9]], &["a", "b"]);
        let labeling = label_topics(&model, &corpus).unwrap();
        assert_eq!(predict_class(&[0], &model, &labeling), 0);
        // all-OOV doc abstains into the fallback class (sad)
        assert_eq!(predict_class(&[7], &model, &labeling), 1);
    }

    #[test]
    fn evaluation_tabulates_confusion_and_metrics() {
        let corpus = labeled_corpus(&[
            ("a", "happy"),
            ("a", "happy"),
            ("b", "sad"),
            ("a", "sad"),
        ]);
        let model = model_from(array![[0.9, 0.1], [0.1, 0.9]], &["a", "b"]);
        let labeling = TopicLabeling {
            topic_class: vec![0, 1],
            support: Array2::zeros((2, 2)),
            fallback_class: 0,
        };
        let report = evaluate(&model, &labeling, &corpus).unwrap();
        // docs: a->happy (true happy) x2, b->sad (true sad), a->happy (true sad)
        assert_eq!(report.accuracy, 0.75);
        assert_eq!(report.confusion[[0, 0]], 2);
        assert_eq!(report.confusion[[1, 0]], 1);
        assert_eq!(report.confusion[[1, 1]], 1);
        // confusion row sums equal true class counts
        assert_eq!(report.confusion.row(0).sum(), 2);
        assert_eq!(report.confusion.row(1).sum(), 2);
        let csv = report.to_csv();
        assert!(csv.contains("true_happy,2,0"));
        assert!(csv.contains("accuracy,,0.75"));
    }

    #[test]
    fn perfect_predictions_score_unit_macro_f1() {
        let corpus = labeled_corpus(&[("a", "x"), ("b", "y")]);
        let model = model_from(array![[0.9, 0.1], [0.1, 0.9]], &["a", "b"]);
        let labeling = label_topics(&model, &corpus).unwrap();
        let report = evaluate(&model, &labeling, &corpus).unwrap();
        assert_eq!(report.accuracy, 1.0);
        assert_eq!(report.macro_f1, 1.0);
    }

    #[test]
    fn half_right_is_half_accuracy() {
        let corpus = labeled_corpus(&[("a", "x"), ("a", "x"), ("a", "y"), ("a", "y")]);
        let model = model_from(array![[1.0]], &["a"]);
        let labeling = label_topics(&model, &corpus).unwrap();
        let report = evaluate(&model, &labeling, &corpus).unwrap();
        assert_eq!(report.accuracy, 0.5);
    }

    #[test]
    fn scorer_projects_across_vocabularies() {
        // model vocabulary is a pruned subset in a different order
        let corpus = labeled_corpus(&[("a b c", "x")]);
        let model = model_from(array![[0.7, 0.3]], &["c", "a"]);
        let scorer = DocScorer::new(&model, &corpus.vocab);
        // doc tokens a,b,c -> model ids 1,(skip),0
        let scores = scorer.score(&corpus.docs[0]);
        assert!((scores[0] - 1.0).abs() < 1e-12);
    }
}
