//! Non-negative matrix factorization of the document-term matrix by
//! multiplicative updates on the squared Frobenius objective.
//!
//! The docs-by-terms matrix `A` (D x V) factors as `W (D x r) · H (r x V)`
//! with every entry kept non-negative. Each iteration updates `H` then `W`
//! with the Lee-Seung rules, guarded by a small epsilon in denominators,
//! and records `‖A − WH‖²_F`; the trace is non-increasing up to floating
//! point.

use ndarray::Array2;

use crate::corpus::{TermMatrix, Vocabulary};
use crate::error::{Error, Result};
use crate::model::{MethodTag, ModelParams, TopicModel};
use crate::rng::Rng;

const EPS: f64 = 1e-12;

/// Factorization parameters.
#[derive(Debug, Clone)]
pub struct NmfParams {
    /// Rank of the factorization; the topic count of the exported view.
    pub rank: usize,
    /// Maximum update iterations.
    pub iterations: usize,
    /// Stop when the relative objective change drops below this; zero
    /// runs every iteration.
    pub tol: f64,
    pub seed: u64,
    /// Entries initialize uniformly in (0, init_scale].
    pub init_scale: f64,
}

impl NmfParams {
    pub fn for_rank(rank: usize, seed: u64) -> Self {
        NmfParams {
            rank,
            iterations: 500,
            tol: 0.0,
            seed,
            init_scale: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.rank < 1 {
            return Err(Error::InvalidParams("rank must be >= 1".into()));
        }
        if self.iterations < 1 {
            return Err(Error::InvalidParams("iterations must be >= 1".into()));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidParams("tol must be >= 0".into()));
        }
        if self.init_scale.is_nan() || self.init_scale <= 0.0 {
            return Err(Error::InvalidParams("init_scale must be > 0".into()));
        }
        Ok(())
    }
}

/// The fitted factors plus the per-iteration objective trace.
#[derive(Debug, Clone)]
pub struct NmfModel {
    pub w: Array2<f64>,
    pub h: Array2<f64>,
    /// `‖A − WH‖²_F` after each completed iteration.
    pub objective_trace: Vec<f64>,
    pub params: NmfParams,
}

impl NmfModel {
    pub fn final_objective(&self) -> f64 {
        *self.objective_trace.last().expect("at least one iteration")
    }

    /// `iteration,objective` rows.
    pub fn trace_to_csv(&self) -> String {
        let mut out = String::from("iteration,objective\n");
        for (i, obj) in self.objective_trace.iter().enumerate() {
            out.push_str(&format!("{},{obj}\n", i + 1));
        }
        out
    }
}

fn frobenius_sq(a: &Array2<f64>, w: &Array2<f64>, h: &Array2<f64>) -> f64 {
    let diff = a - &w.dot(h);
    diff.iter().map(|x| x * x).sum()
}

/// Factor a non-negative matrix with multiplicative updates.
pub fn fit_nmf(matrix: &TermMatrix, params: NmfParams) -> Result<NmfModel> {
    params.validate()?;
    let a = &matrix.values;
    let (d, v) = a.dim();

    for ((row, col), &value) in a.indexed_iter() {
        if value < 0.0 {
            return Err(Error::NegativeInput { row, col, value });
        }
    }
    let limit = d.min(v);
    if params.rank > limit {
        return Err(Error::RankTooLarge {
            rank: params.rank,
            limit,
        });
    }

    let r = params.rank;
    let mut rng = Rng::new(params.seed);
    // (0, init_scale]: strictly positive so updates cannot stall at zero
    let mut init = |rows: usize, cols: usize| {
        Array2::from_shape_fn((rows, cols), |_| {
            params.init_scale * (1.0 - rng.next_f64())
        })
    };
    let mut w = init(d, r);
    let mut h = init(r, v);

    let mut trace = Vec::new();
    for _ in 0..params.iterations {
        // H <- H .* (WᵗA) ./ (WᵗW H + eps)
        let wt = w.t();
        let numer_h = wt.dot(a);
        let denom_h = wt.dot(&w).dot(&h);
        ndarray::Zip::from(&mut h)
            .and(&numer_h)
            .and(&denom_h)
            .for_each(|x, &n, &m| *x *= n / (m + EPS));

        // W <- W .* (AHᵗ) ./ (W H Hᵗ + eps)
        let ht = h.t();
        let numer_w = a.dot(&ht);
        let denom_w = w.dot(&h.dot(&ht));
        ndarray::Zip::from(&mut w)
            .and(&numer_w)
            .and(&denom_w)
            .for_each(|x, &n, &m| *x *= n / (m + EPS));

        let objective = frobenius_sq(a, &w, &h);
        let previous = trace.last().copied();
        trace.push(objective);

        if let Some(prev) = previous {
            if prev == 0.0 {
                break;
            }
            if (prev - objective).abs() / prev < params.tol {
                break;
            }
        }
    }

    Ok(NmfModel {
        w,
        h,
        objective_trace: trace,
        params,
    })
}

/// Rows whose sum was zero during normalization, flagged rather than fatal.
#[derive(Debug, Clone, Default)]
pub struct Degeneracy {
    pub phi_rows: Vec<usize>,
    pub theta_rows: Vec<usize>,
}

impl Degeneracy {
    pub fn is_clean(&self) -> bool {
        self.phi_rows.is_empty() && self.theta_rows.is_empty()
    }
}

fn normalize_rows(m: &Array2<f64>) -> (Array2<f64>, Vec<usize>) {
    let mut out = m.clone();
    let mut degenerate = Vec::new();
    let cols = m.ncols();
    for (i, mut row) in out.rows_mut().into_iter().enumerate() {
        let total: f64 = row.sum();
        if total > 0.0 {
            row.mapv_inplace(|x| x / total);
        } else {
            degenerate.push(i);
            row.fill(1.0 / cols as f64);
        }
    }
    (out, degenerate)
}

/// View the factors as a topic model: topics are the row-normalized rows
/// of `H`, document mixtures the row-normalized rows of `W`. Zero-sum rows
/// become uniform and are reported in the [`Degeneracy`] flags.
pub fn as_topic_model(model: &NmfModel, vocab: &Vocabulary) -> (TopicModel, Degeneracy) {
    let (phi, phi_rows) = normalize_rows(&model.h);
    let (theta, theta_rows) = normalize_rows(&model.w);
    (
        TopicModel {
            phi,
            theta,
            params: ModelParams::Nmf(model.params.clone()),
            method_tag: MethodTag::Nmf,
            vocab: vocab.clone(),
        },
        Degeneracy {
            phi_rows,
            theta_rows,
        },
    )
}
