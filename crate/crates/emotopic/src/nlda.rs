//! Staged-pruning LDA: fit, delete below-mean-weight terms per topic,
//! rebuild the dictionary, refit, repeat.
//!
//! Stage numbering follows the method's own convention: stage 1 is the
//! plain LDA fit on the full dictionary, and each stage `s >= 2` prunes
//! the stage `s-1` model's vocabulary, reprojects the corpus, and refits
//! with seed `base_seed + s`. `run_nlda` with `n = 1` therefore produces
//! exactly the classical fit.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{Corpus, Vocabulary};
use crate::error::{Error, Result};
use crate::lda::{fit_lda, LdaParams};
use crate::model::{top_words, MethodTag, TopicModel};

/// Which term weights feed a topic's deletion threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneScope {
    /// Every vocabulary term; the threshold of a normalized row is 1/V.
    All,
    /// Only the topic's heaviest `m` terms.
    TopM(usize),
}

impl std::fmt::Display for PruneScope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PruneScope::All => write!(f, "all"),
            PruneScope::TopM(m) => write!(f, "top-{m}"),
        }
    }
}

/// Per-stage record of the pruning loop. `vocab_after` is the dictionary
/// size of this stage's model, `vocab_before` the previous stage's (the
/// original dictionary at stage 1).
#[derive(Debug, Clone)]
pub struct StageReport {
    pub stage: usize,
    pub vocab_before: usize,
    pub vocab_after: usize,
    /// Per-topic mean weights of this stage's model: the cutoffs the next
    /// prune applies.
    pub thresholds: Vec<f64>,
    pub retained_terms: BTreeSet<String>,
    /// Max topic weight per tracked term, measured on this stage's model.
    /// Terms pruned out of the dictionary are absent.
    pub tracked_weights: BTreeMap<String, f64>,
}

/// Everything `run_nlda` produces.
#[derive(Debug, Clone)]
pub struct NldaResult {
    pub final_model: TopicModel,
    pub stage_reports: Vec<StageReport>,
    /// The training corpus reprojected onto the final dictionary.
    pub final_corpus: Corpus,
}

/// A topic's deletion threshold: the arithmetic mean of the weights
/// considered for it.
pub fn topic_threshold(weights: &[f64]) -> Result<f64> {
    if weights.is_empty() {
        return Err(Error::EmptyTopic);
    }
    Ok(weights.iter().sum::<f64>() / weights.len() as f64)
}

/// A prune computed from one model: per-topic thresholds plus the union
/// of terms that stay.
#[derive(Debug, Clone)]
pub struct PruneDecision {
    pub thresholds: Vec<f64>,
    /// Term ids in the model's vocabulary. A term stays if its weight is
    /// at or above the threshold in at least one topic.
    pub retained: BTreeSet<usize>,
}

pub fn prune_decision(model: &TopicModel, scope: PruneScope) -> Result<PruneDecision> {
    let v = model.num_terms();
    let mut thresholds = Vec::with_capacity(model.num_topics());
    let mut retained = BTreeSet::new();

    for topic in 0..model.num_topics() {
        let considered: Vec<(usize, f64)> = match scope {
            PruneScope::All => model
                .phi
                .row(topic)
                .iter()
                .copied()
                .enumerate()
                .collect(),
            PruneScope::TopM(m) => top_words(model, topic, m.min(v))?,
        };
        let threshold = topic_threshold(
            &considered.iter().map(|&(_, w)| w).collect::<Vec<_>>(),
        )?;
        thresholds.push(threshold);
        for &(term, weight) in &considered {
            if weight >= threshold {
                retained.insert(term);
            }
        }
    }

    if retained.is_empty() {
        return Err(Error::EmptyPrune {
            stage: 0,
            reports: Vec::new(),
        });
    }
    Ok(PruneDecision {
        thresholds,
        retained,
    })
}

/// The term set a prune retains; ties with the threshold survive, so a
/// perfectly uniform topic row keeps every term.
pub fn prune_vocabulary(model: &TopicModel, scope: PruneScope) -> Result<BTreeSet<usize>> {
    Ok(prune_decision(model, scope)?.retained)
}

/// Rebuild a corpus over a retained term subset: terms keep their relative
/// order, token lists are filtered in place, and document frequencies are
/// recounted over the surviving tokens.
fn reproject(corpus: &Corpus, retained: &BTreeSet<usize>) -> Corpus {
    let mut old_to_new = vec![usize::MAX; corpus.num_terms()];
    let mut terms = Vec::with_capacity(retained.len());
    for (new_id, &old_id) in retained.iter().enumerate() {
        old_to_new[old_id] = new_id;
        terms.push(corpus.vocab.term(old_id).to_string());
    }

    let mut df = vec![0u32; terms.len()];
    let docs: Vec<Vec<usize>> = corpus
        .docs
        .iter()
        .map(|doc| {
            let mapped: Vec<usize> = doc
                .iter()
                .filter(|&&t| old_to_new[t] != usize::MAX)
                .map(|&t| old_to_new[t])
                .collect();
            let mut seen = BTreeSet::new();
            for &t in &mapped {
                if seen.insert(t) {
                    df[t] += 1;
                }
            }
            mapped
        })
        .collect();

    Corpus {
        docs,
        vocab: Vocabulary::from_parts(terms, df),
        labels: corpus.labels.clone(),
        class_names: corpus.class_names.clone(),
    }
}

fn track_weights(model: &TopicModel, tracked: &[String]) -> BTreeMap<String, f64> {
    let mut weights = BTreeMap::new();
    for term in tracked {
        if let Some(id) = model.vocab.id(term) {
            let max = model
                .phi
                .column(id)
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            weights.insert(term.clone(), max);
        }
    }
    weights
}

/// Run the staged loop for `n` stages on the given corpus.
///
/// `tracked` names terms whose maximum topic weight is recorded per stage.
/// Fails with `EmptyPrune` (carrying the reports completed so far) if a
/// prune deletes everything, and with `VocabularyCollapse` if a stage
/// would leave fewer distinct terms than topics.
pub fn run_nlda(
    corpus: &Corpus,
    params: LdaParams,
    n: usize,
    scope: PruneScope,
    tracked: &[String],
) -> Result<NldaResult> {
    if n < 1 {
        return Err(Error::InvalidParams("stage count must be >= 1".into()));
    }
    params.validate()?;

    let base_seed = params.seed;
    let mut current = corpus.clone();
    let mut reports: Vec<StageReport> = Vec::with_capacity(n);
    let mut model: Option<TopicModel> = None;

    for stage in 1..=n {
        let vocab_before = if stage == 1 {
            current.num_terms()
        } else {
            let prev = model.take().expect("previous stage model");
            let before = current.num_terms();
            let decision = match prune_decision(&prev, scope) {
                Ok(d) => d,
                Err(Error::EmptyPrune { .. }) => {
                    return Err(Error::EmptyPrune { stage, reports })
                }
                Err(e) => return Err(e),
            };
            if decision.retained.len() < params.k {
                return Err(Error::VocabularyCollapse {
                    stage,
                    remaining: decision.retained.len(),
                    k: params.k,
                });
            }
            current = reproject(&current, &decision.retained);
            reports
                .last_mut()
                .expect("stage >= 2 has a previous report")
                .thresholds = decision.thresholds;
            before
        };

        let stage_params = LdaParams {
            seed: if stage == 1 {
                base_seed
            } else {
                base_seed.wrapping_add(stage as u64)
            },
            ..params.clone()
        };
        let mut fitted = fit_lda(&current, stage_params)?;
        fitted.method_tag = MethodTag::NldaStage(stage);

        reports.push(StageReport {
            stage,
            vocab_before,
            vocab_after: current.num_terms(),
            thresholds: Vec::new(),
            retained_terms: current.vocab.terms().iter().cloned().collect(),
            tracked_weights: track_weights(&fitted, tracked),
        });
        model = Some(fitted);
    }

    // Earlier reports received their thresholds when the next stage
    // pruned; the last model's cutoffs are computed here so every report
    // carries its own stage's means.
    let final_model = model.expect("n >= 1");
    if let Ok(decision) = prune_decision(&final_model, scope) {
        reports.last_mut().expect("n >= 1").thresholds = decision.thresholds;
    }

    Ok(NldaResult {
        final_model,
        stage_reports: reports,
        final_corpus: current,
    })
}

/// `stage,vocab_before,vocab_after` rows.
pub fn stages_to_csv(reports: &[StageReport]) -> String {
    let mut out = String::from("stage,vocab_before,vocab_after\n");
    for r in reports {
        out.push_str(&format!("{},{},{}\n", r.stage, r.vocab_before, r.vocab_after));
    }
    out
}

/// `term,stage,max_phi` rows for every tracked term still in a stage's
/// dictionary.
pub fn tracked_to_csv(reports: &[StageReport]) -> String {
    let mut out = String::from("term,stage,max_phi\n");
    for r in reports {
        for (term, weight) in &r.tracked_weights {
            out.push_str(&format!("{term},{},{weight}\n", r.stage));
        }
    }
    out
}
