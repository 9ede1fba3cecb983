//! Latent Dirichlet Allocation by collapsed Gibbs sampling, UMass topic
//! coherence, and coherence-driven topic-count selection.
//!
//! Inference integrates out the topic and document distributions and
//! resamples each token's topic from the count-based conditional
//! `p(z=k) ∝ (n_dk + α) · (n_kw + β) / (n_k + Vβ)` with the token's own
//! assignment excluded. Sweeps run strictly sequentially (documents in
//! order, tokens in order), which together with the seeded generator makes
//! a fit bit-reproducible. Estimates average the counts over post-burn-in
//! sweeps.

use ndarray::Array2;

use crate::corpus::{Corpus, Vocabulary};
use crate::error::{Error, Result};
use crate::model::{top_words, MethodTag, ModelParams, TopicModel};
use crate::rng::Rng;

/// Gibbs sampling hyperparameters.
#[derive(Debug, Clone)]
pub struct LdaParams {
    pub k: usize,
    /// Symmetric Dirichlet prior on document-topic proportions.
    pub alpha: f64,
    /// Symmetric Dirichlet prior on topic-term proportions.
    pub beta: f64,
    /// Total Gibbs sweeps.
    pub iterations: usize,
    /// Sweeps discarded before estimates accumulate.
    pub burn_in: usize,
    pub seed: u64,
}

impl LdaParams {
    /// Conventional defaults: `alpha = 50/K`, `beta = 0.01`,
    /// 1000 sweeps with 200 burn-in.
    pub fn for_k(k: usize, seed: u64) -> Self {
        LdaParams {
            k,
            alpha: 50.0 / k.max(1) as f64,
            beta: 0.01,
            iterations: 1000,
            burn_in: 200,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidParams("k must be >= 1".into()));
        }
        if self.alpha.is_nan() || self.alpha <= 0.0 || self.beta.is_nan() || self.beta <= 0.0 {
            return Err(Error::InvalidParams("alpha and beta must be > 0".into()));
        }
        if self.iterations <= self.burn_in {
            return Err(Error::InvalidParams(
                "iterations must exceed burn_in".into(),
            ));
        }
        Ok(())
    }
}

/// The sampler's count bookkeeping; always exactly the tally of `z`.
#[derive(Debug, Clone)]
pub struct GibbsState {
    /// Per-document, per-token topic assignment.
    pub z: Vec<Vec<usize>>,
    /// D x K document-topic counts.
    pub n_dk: Array2<u32>,
    /// K x V topic-term counts.
    pub n_kw: Array2<u32>,
    /// Per-topic token totals.
    pub n_k: Vec<u64>,
}

/// Drives collapsed Gibbs sweeps over one corpus. [`fit_lda`] wraps the
/// usual loop; tests drive sweeps directly to inspect the counts.
pub struct GibbsSampler {
    docs: Vec<Vec<usize>>,
    vocab: Vocabulary,
    params: LdaParams,
    state: GibbsState,
    rng: Rng,
    acc_dk: Array2<f64>,
    acc_kw: Array2<f64>,
    samples: usize,
    sweeps_done: usize,
}

impl GibbsSampler {
    pub fn new(corpus: &Corpus, params: LdaParams) -> Result<Self> {
        params.validate()?;
        if corpus.num_docs() == 0 || corpus.total_tokens() == 0 {
            return Err(Error::EmptyCorpus);
        }

        let d = corpus.num_docs();
        let v = corpus.num_terms();
        let k = params.k;
        let mut rng = Rng::new(params.seed);

        let mut state = GibbsState {
            z: corpus.docs.iter().map(|doc| vec![0; doc.len()]).collect(),
            n_dk: Array2::zeros((d, k)),
            n_kw: Array2::zeros((k, v)),
            n_k: vec![0; k],
        };
        for (d_i, doc) in corpus.docs.iter().enumerate() {
            for (i, &w) in doc.iter().enumerate() {
                let topic = rng.below(k);
                state.z[d_i][i] = topic;
                state.n_dk[[d_i, topic]] += 1;
                state.n_kw[[topic, w]] += 1;
                state.n_k[topic] += 1;
            }
        }

        Ok(GibbsSampler {
            docs: corpus.docs.clone(),
            vocab: corpus.vocab.clone(),
            acc_dk: Array2::zeros((d, k)),
            acc_kw: Array2::zeros((k, v)),
            samples: 0,
            sweeps_done: 0,
            params,
            state,
            rng,
        })
    }

    pub fn state(&self) -> &GibbsState {
        &self.state
    }

    pub fn sweeps_done(&self) -> usize {
        self.sweeps_done
    }

    /// One full resampling pass over every token.
    pub fn sweep(&mut self) {
        let k = self.params.k;
        let v_beta = self.vocab.len() as f64 * self.params.beta;
        let mut weights = vec![0.0; k];

        for (d, doc) in self.docs.iter().enumerate() {
            for (i, &w) in doc.iter().enumerate() {
                let old = self.state.z[d][i];
                self.state.n_dk[[d, old]] -= 1;
                self.state.n_kw[[old, w]] -= 1;
                self.state.n_k[old] -= 1;

                let mut total = 0.0;
                for (topic, weight) in weights.iter_mut().enumerate() {
                    *weight = (self.state.n_dk[[d, topic]] as f64 + self.params.alpha)
                        * (self.state.n_kw[[topic, w]] as f64 + self.params.beta)
                        / (self.state.n_k[topic] as f64 + v_beta);
                    total += *weight;
                }
                let u = self.rng.next_f64() * total;
                let mut cumulative = 0.0;
                let mut new = k - 1;
                for (topic, &weight) in weights.iter().enumerate() {
                    cumulative += weight;
                    if u < cumulative {
                        new = topic;
                        break;
                    }
                }

                self.state.z[d][i] = new;
                self.state.n_dk[[d, new]] += 1;
                self.state.n_kw[[new, w]] += 1;
                self.state.n_k[new] += 1;
            }
        }

        self.sweeps_done += 1;
        if self.sweeps_done > self.params.burn_in {
            self.acc_dk += &self.state.n_dk.mapv(f64::from);
            self.acc_kw += &self.state.n_kw.mapv(f64::from);
            self.samples += 1;
        }
    }

    /// Smoothed estimates from the accumulated post-burn-in counts (or the
    /// instantaneous counts if nothing has accumulated yet).
    pub fn estimate(&self) -> TopicModel {
        let k = self.params.k;
        let v = self.vocab.len();
        let (mean_dk, mean_kw) = if self.samples > 0 {
            let n = self.samples as f64;
            (&self.acc_dk / n, &self.acc_kw / n)
        } else {
            (
                self.state.n_dk.mapv(f64::from),
                self.state.n_kw.mapv(f64::from),
            )
        };

        let v_beta = v as f64 * self.params.beta;
        let mut phi = Array2::zeros((k, v));
        for topic in 0..k {
            let total: f64 = mean_kw.row(topic).sum();
            for w in 0..v {
                phi[[topic, w]] = (mean_kw[[topic, w]] + self.params.beta) / (total + v_beta);
            }
        }

        let k_alpha = k as f64 * self.params.alpha;
        let mut theta = Array2::zeros((self.docs.len(), k));
        for (d, doc) in self.docs.iter().enumerate() {
            let len = doc.len() as f64;
            for topic in 0..k {
                theta[[d, topic]] = (mean_dk[[d, topic]] + self.params.alpha) / (len + k_alpha);
            }
        }

        TopicModel {
            phi,
            theta,
            params: ModelParams::Lda(self.params.clone()),
            method_tag: MethodTag::Lda,
            vocab: self.vocab.clone(),
        }
    }
}

/// Fit LDA: initialize assignments from the seed, run the configured
/// number of sweeps, and estimate from the post-burn-in average.
pub fn fit_lda(corpus: &Corpus, params: LdaParams) -> Result<TopicModel> {
    let iterations = params.iterations;
    let mut sampler = GibbsSampler::new(corpus, params)?;
    for _ in 0..iterations {
        sampler.sweep();
    }
    Ok(sampler.estimate())
}

/// UMass coherence of every topic plus the mean.
///
/// For a topic's `top_n` ranked words, `C = Σ_{i>j} ln((D(w_i,w_j) + 1) /
/// D(w_j))` where `D` counts containing documents in `corpus`. Fails with
/// [`Error::DegenerateTopic`] if a denominator word occurs in no document.
pub fn coherence(model: &TopicModel, corpus: &Corpus, top_n: usize) -> Result<(Vec<f64>, f64)> {
    if top_n < 2 {
        return Err(Error::InvalidParams("coherence requires top_n >= 2".into()));
    }

    let same_vocab = model.vocab.hash() == corpus.vocab.hash();
    let doc_list = |model_term: usize| -> Vec<usize> {
        let corpus_id = if same_vocab {
            Some(model_term)
        } else {
            corpus.vocab.id(model.vocab.term(model_term))
        };
        match corpus_id {
            Some(t) => corpus
                .docs
                .iter()
                .enumerate()
                .filter(|(_, doc)| doc.contains(&t))
                .map(|(d, _)| d)
                .collect(),
            None => Vec::new(),
        }
    };

    let mut scores = Vec::with_capacity(model.num_topics());
    for topic in 0..model.num_topics() {
        let ranked = top_words(model, topic, top_n)?;
        let docs: Vec<Vec<usize>> = ranked.iter().map(|&(t, _)| doc_list(t)).collect();

        let mut score = 0.0;
        for i in 1..ranked.len() {
            for j in 0..i {
                let d_j = docs[j].len();
                if d_j == 0 {
                    return Err(Error::DegenerateTopic {
                        topic,
                        term: model.vocab.term(ranked[j].0).to_string(),
                    });
                }
                let co = docs[i].iter().filter(|d| docs[j].contains(d)).count();
                score += ((co as f64 + 1.0) / d_j as f64).ln();
            }
        }
        scores.push(score);
    }

    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    Ok((scores, mean))
}

/// Result of a coherence scan over candidate topic counts.
#[derive(Debug, Clone)]
pub struct CoherenceScan {
    pub grid: Vec<usize>,
    pub scores: Vec<f64>,
    pub chosen_k: usize,
}

impl CoherenceScan {
    /// `k,mean_coherence` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,mean_coherence\n");
        for (k, score) in self.grid.iter().zip(&self.scores) {
            out.push_str(&format!("{k},{score}\n"));
        }
        out
    }
}

fn choose_k(grid: &[usize], scores: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..grid.len() {
        let better = scores[i] > scores[best]
            || (scores[i] == scores[best] && grid[i] < grid[best]);
        if better {
            best = i;
        }
    }
    grid[best]
}

/// Fit one model per candidate K (same seed throughout), score mean UMass
/// coherence over `top_n` words, and choose the argmax; exact ties go to
/// the smaller K.
pub fn select_topic_count(
    corpus: &Corpus,
    grid: &[usize],
    params_base: &LdaParams,
    top_n: usize,
) -> Result<CoherenceScan> {
    if grid.is_empty() {
        return Err(Error::InvalidParams("empty K grid".into()));
    }
    if grid.iter().any(|&k| k < 2) {
        return Err(Error::InvalidParams("grid entries must be >= 2".into()));
    }

    let mut scores = Vec::with_capacity(grid.len());
    for &k in grid {
        let params = LdaParams {
            k,
            ..params_base.clone()
        };
        let model = fit_lda(corpus, params)?;
        let (_, mean) = coherence(&model, corpus, top_n)?;
        scores.push(mean);
    }

    Ok(CoherenceScan {
        chosen_k: choose_k(grid, &scores),
        grid: grid.to_vec(),
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_corpus, PreprocessConfig, RawDocument};
    use crate::text::IdentityStemmer;
    use std::collections::HashSet;
    use std::sync::Arc;

    fn corpus_of(texts: &[&str]) -> Corpus {
        let raw: Vec<RawDocument> = texts
            .iter()
            .enumerate()
            .map(|(id, t)| RawDocument {
                id,
                text: t.to_string(),
                label: None,
            })
            .collect();
        let config =
            PreprocessConfig::new(HashSet::new(), HashSet::new(), Arc::new(IdentityStemmer));
        build_corpus(&raw, &config).unwrap().0
    }

    fn recount(state: &GibbsState, docs: &[Vec<usize>], k: usize, v: usize) -> GibbsState {
        let mut fresh = GibbsState {
            z: state.z.clone(),
            n_dk: Array2::zeros((docs.len(), k)),
            n_kw: Array2::zeros((k, v)),
            n_k: vec![0; k],
        };
        for (d, doc) in docs.iter().enumerate() {
            for (i, &w) in doc.iter().enumerate() {
                let topic = state.z[d][i];
                fresh.n_dk[[d, topic]] += 1;
                fresh.n_kw[[topic, w]] += 1;
                fresh.n_k[topic] += 1;
            }
        }
        fresh
    }

    #[test]
    fn single_topic_has_closed_form() {
        let corpus = corpus_of(&["a a b", "b c"]);
        let params = LdaParams {
            k: 1,
            alpha: 0.5,
            beta: 0.01,
            iterations: 5,
            burn_in: 1,
            seed: 11,
        };
        let model = fit_lda(&corpus, params).unwrap();
        let n = corpus.total_tokens() as f64;
        let v = corpus.num_terms() as f64;
        for (w, &count) in [2.0, 2.0, 1.0].iter().enumerate() {
            let expected = (count + 0.01) / (n + v * 0.01);
            assert!((model.phi[[0, w]] - expected).abs() < 1e-12);
        }
        for d in 0..corpus.num_docs() {
            assert!((model.theta[[d, 0]] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn counts_stay_consistent_across_sweeps() {
        let corpus = corpus_of(&["a b c a", "c d e", "e f a b", "d d f"]);
        let params = LdaParams {
            k: 3,
            alpha: 0.5,
            beta: 0.01,
            iterations: 20,
            burn_in: 5,
            seed: 3,
        };
        let mut sampler = GibbsSampler::new(&corpus, params).unwrap();
        let total = corpus.total_tokens() as u64;
        for _ in 0..20 {
            sampler.sweep();
            let state = sampler.state();
            let fresh = recount(state, &corpus.docs, 3, corpus.num_terms());
            assert_eq!(state.n_dk, fresh.n_dk);
            assert_eq!(state.n_kw, fresh.n_kw);
            assert_eq!(state.n_k, fresh.n_k);
            assert_eq!(state.n_k.iter().sum::<u64>(), total);
        }
    }

    #[test]
    fn rows_normalize_and_stay_positive() {
        let corpus = corpus_of(&["a b c", "c d", "a d e"]);
        let params = LdaParams {
            k: 2,
            alpha: 0.3,
            beta: 0.05,
            iterations: 30,
            burn_in: 10,
            seed: 5,
        };
        let model = fit_lda(&corpus, params).unwrap();
        for row in model.phi.rows() {
            assert!((row.sum() - 1.0).abs() < 1e-9);
            assert!(row.iter().all(|&x| x > 0.0));
        }
        for row in model.theta.rows() {
            assert!((row.sum() - 1.0).abs() < 1e-9);
            assert!(row.iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn fit_is_bit_reproducible() {
        let corpus = corpus_of(&["a b c", "c d", "a d e", "b e"]);
        let params = LdaParams {
            k: 2,
            alpha: 0.4,
            beta: 0.02,
            iterations: 25,
            burn_in: 5,
            seed: 99,
        };
        let m1 = fit_lda(&corpus, params.clone()).unwrap();
        let m2 = fit_lda(&corpus, params).unwrap();
        assert_eq!(m1.phi, m2.phi);
        assert_eq!(m1.theta, m2.theta);
    }

    #[test]
    fn rejects_empty_corpus_and_bad_params() {
        let corpus = corpus_of(&["a"]);
        let mut empty = corpus.clone();
        empty.docs = vec![vec![]];
        let params = LdaParams::for_k(2, 1);
        assert!(matches!(
            fit_lda(&empty, params.clone()),
            Err(Error::EmptyCorpus)
        ));
        let bad = LdaParams {
            burn_in: 10,
            iterations: 10,
            ..params
        };
        assert!(matches!(
            fit_lda(&corpus, bad),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn coherence_matches_hand_count() {
        // docs {[a,b],[a],[b]}: D(a)=2, D(b)=2, D(a,b)=1
        let corpus = corpus_of(&["a b", "a", "b"]);
        let params = LdaParams {
            k: 1,
            alpha: 0.5,
            beta: 0.01,
            iterations: 3,
            burn_in: 1,
            seed: 1,
        };
        let mut model = fit_lda(&corpus, params).unwrap();
        // force the ranking (a, b)
        model.phi[[0, 0]] = 0.6;
        model.phi[[0, 1]] = 0.4;
        let (scores, mean) = coherence(&model, &corpus, 2).unwrap();
        // C = ln((1+1)/2) = 0
        assert!(scores[0].abs() < 1e-12);
        assert!(mean.abs() < 1e-12);
    }

    #[test]
    fn coherence_sign_follows_cooccurrence() {
        // a and b always co-occur; a and c never
        let corpus = corpus_of(&["a b", "a b", "c"]);
        let params = LdaParams {
            k: 1,
            alpha: 0.5,
            beta: 0.01,
            iterations: 3,
            burn_in: 1,
            seed: 1,
        };
        let base = fit_lda(&corpus, params).unwrap();

        let mut pos = base.clone();
        pos.phi[[0, 0]] = 0.5;
        pos.phi[[0, 1]] = 0.4;
        pos.phi[[0, 2]] = 0.1;
        let (scores, _) = coherence(&pos, &corpus, 2).unwrap();
        assert!(scores[0] > 0.0); // ln((2+1)/2)

        let mut neg = base;
        neg.phi[[0, 0]] = 0.5;
        neg.phi[[0, 2]] = 0.4;
        neg.phi[[0, 1]] = 0.1;
        let (scores, _) = coherence(&neg, &corpus, 2).unwrap();
        assert!(scores[0] < 0.0); // ln(1/2)
    }

    #[test]
    fn coherence_bounded_by_pair_count_times_ln2() {
        let corpus = corpus_of(&["a b c d", "a b c", "b c d", "a c d"]);
        let model = fit_lda(
            &corpus,
            LdaParams {
                k: 2,
                alpha: 0.5,
                beta: 0.01,
                iterations: 20,
                burn_in: 5,
                seed: 8,
            },
        )
        .unwrap();
        let top_n = 3;
        let bound = (top_n * (top_n - 1)) as f64 / 2.0 * 2.0_f64.ln();
        let (scores, _) = coherence(&model, &corpus, top_n).unwrap();
        for s in scores {
            assert!(s <= bound + 1e-12);
        }
    }

    #[test]
    fn chooser_takes_argmax_then_smaller_k() {
        assert_eq!(choose_k(&[5, 9, 12], &[0.21, 0.499, 0.30]), 9);
        assert_eq!(choose_k(&[7], &[-1.0]), 7);
        assert_eq!(choose_k(&[4, 6], &[0.25, 0.25]), 4);
        assert_eq!(choose_k(&[6, 4], &[0.25, 0.25]), 4);
    }

    #[test]
    fn scan_runs_over_grid() {
        let corpus = corpus_of(&["a b a", "c d c", "a b", "c d", "a a b", "d c d"]);
        let params = LdaParams {
            k: 2,
            alpha: 0.5,
            beta: 0.01,
            iterations: 30,
            burn_in: 10,
            seed: 4,
        };
        let scan = select_topic_count(&corpus, &[2, 3], &params, 2).unwrap();
        assert_eq!(scan.grid, vec![2, 3]);
        assert_eq!(scan.scores.len(), 2);
        assert!(scan.grid.contains(&scan.chosen_k));
        let csv = scan.to_csv();
        assert!(csv.starts_with("k,mean_coherence\n2,"));
    }

    #[test]
    fn scan_rejects_small_k() {
        let corpus = corpus_of(&["a b", "c d"]);
        let params = LdaParams::for_k(2, 1);
        assert!(matches!(
            select_topic_count(&corpus, &[1, 2], &params, 2),
            Err(Error::InvalidParams(_))
        ));
    }
}
