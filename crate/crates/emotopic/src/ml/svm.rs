//! One-vs-rest linear SVM trained by seeded-shuffle subgradient descent
//! on the hinge loss with L2 regularization.

use super::FeatureTable;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, Rng};

const STD_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SvmParams {
    /// L2 regularization strength.
    pub lambda: f64,
    /// Passes over the training rows per binary problem.
    pub epochs: usize,
    pub seed: u64,
}

impl SvmParams {
    pub fn default_for(seed: u64) -> Self {
        SvmParams {
            lambda: 1e-4,
            epochs: 200,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.lambda.is_nan() || self.lambda <= 0.0 {
            return Err(Error::InvalidParams("lambda must be > 0".into()));
        }
        if self.epochs < 1 {
            return Err(Error::InvalidParams("epochs must be >= 1".into()));
        }
        Ok(())
    }
}

/// Trained one-vs-rest model with the feature standardization baked in.
#[derive(Debug, Clone)]
pub struct SvmModel {
    pub class_names: Vec<String>,
    means: Vec<f64>,
    stds: Vec<f64>,
    /// One (weights, bias) pair per class.
    hyperplanes: Vec<(Vec<f64>, f64)>,
}

fn standardizer(table: &FeatureTable) -> (Vec<f64>, Vec<f64>) {
    let f = table.num_features();
    let n = table.num_rows() as f64;
    let mut means = vec![0.0; f];
    for row in &table.rows {
        for (j, &x) in row.iter().enumerate() {
            means[j] += x;
        }
    }
    for m in means.iter_mut() {
        *m /= n;
    }
    let mut stds = vec![0.0; f];
    for row in &table.rows {
        for (j, &x) in row.iter().enumerate() {
            let d = x - means[j];
            stds[j] += d * d;
        }
    }
    for s in stds.iter_mut() {
        *s = (*s / n).sqrt().max(STD_FLOOR);
    }
    (means, stds)
}

/// Pegasos-style training: step size `1/(lambda * t)`, per-class epochs
/// over a deterministic shuffle from `derive_seed(seed, "svm-class-{c}")`.
pub fn train_svm(table: &FeatureTable, params: &SvmParams) -> Result<SvmModel> {
    params.validate()?;
    if table.rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    let present: std::collections::BTreeSet<usize> = table.labels.iter().copied().collect();
    if present.len() < 2 {
        return Err(Error::SingleClass);
    }

    let (means, stds) = standardizer(table);
    let scaled: Vec<Vec<f64>> = table
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| (x - means[j]) / stds[j])
                .collect()
        })
        .collect();

    let f = table.num_features();
    let n = table.num_rows();
    let mut hyperplanes = Vec::with_capacity(table.class_names.len());
    for class in 0..table.class_names.len() {
        let mut rng = Rng::new(derive_seed(params.seed, &format!("svm-class-{class}")));
        let mut w = vec![0.0; f];
        let mut b = 0.0;
        let mut order: Vec<usize> = (0..n).collect();
        let mut t = 1usize;
        for _ in 0..params.epochs {
            rng.shuffle(&mut order);
            for &i in &order {
                let y = if table.labels[i] == class { 1.0 } else { -1.0 };
                let x = &scaled[i];
                let margin = y * (dot(&w, x) + b);
                let eta = 1.0 / (params.lambda * t as f64);
                let shrink = 1.0 - eta * params.lambda;
                for wj in w.iter_mut() {
                    *wj *= shrink;
                }
                if margin < 1.0 {
                    for (wj, &xj) in w.iter_mut().zip(x) {
                        *wj += eta * y * xj;
                    }
                    b += eta * y;
                }
                t += 1;
            }
        }
        hyperplanes.push((w, b));
    }

    Ok(SvmModel {
        class_names: table.class_names.clone(),
        means,
        stds,
        hyperplanes,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl SvmModel {
    /// Per-class margins on the standardized input.
    pub fn margins(&self, x: &[f64]) -> Vec<f64> {
        let scaled: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(j, &v)| (v - self.means[j]) / self.stds[j])
            .collect();
        self.hyperplanes
            .iter()
            .map(|(w, b)| dot(w, &scaled) + b)
            .collect()
    }

    /// Argmax margin; ties break toward the earlier class.
    pub fn predict(&self, x: &[f64]) -> usize {
        let margins = self.margins(x);
        let mut best = 0;
        for (class, &m) in margins.iter().enumerate().skip(1) {
            if m > margins[best] {
                best = class;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: Vec<(Vec<f64>, usize)>, classes: &[&str]) -> FeatureTable {
        let f = rows[0].0.len();
        FeatureTable {
            feature_names: (0..f).map(|i| format!("topic{i}")).collect(),
            class_names: classes.iter().map(|c| c.to_string()).collect(),
            labels: rows.iter().map(|(_, l)| *l).collect(),
            rows: rows.into_iter().map(|(r, _)| r).collect(),
        }
    }

    fn separable() -> FeatureTable {
        let mut rows = Vec::new();
        for i in 0..10 {
            rows.push((vec![0.1 + 0.01 * i as f64, 1.0], 0));
            rows.push((vec![0.9 + 0.01 * i as f64, -1.0], 1));
        }
        table(rows, &["a", "b"])
    }

    #[test]
    fn separable_data_trains_above_95_percent() {
        let t = separable();
        let model = train_svm(&t, &SvmParams::default_for(7)).unwrap();
        let correct = t
            .rows
            .iter()
            .zip(&t.labels)
            .filter(|(row, &label)| model.predict(row) == label)
            .count();
        assert!(correct as f64 / t.num_rows() as f64 >= 0.95);
    }

    #[test]
    fn single_class_rejected() {
        let t = table(vec![(vec![1.0], 0), (vec![2.0], 0)], &["only"]);
        assert!(matches!(
            train_svm(&t, &SvmParams::default_for(1)),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn training_is_deterministic() {
        let t = separable();
        let params = SvmParams::default_for(13);
        let m1 = train_svm(&t, &params).unwrap();
        let m2 = train_svm(&t, &params).unwrap();
        for x in [[0.2, 0.5], [0.8, -0.5], [0.5, 0.0]] {
            assert_eq!(m1.margins(&x), m2.margins(&x));
        }
    }

    #[test]
    fn duplicated_rows_keep_training_decisions() {
        // standardization is exactly duplication-invariant; the per-sample
        // updates see each point twice per epoch, which preserves the
        // separable decision on training points
        let t = separable();
        let doubled = {
            let mut rows: Vec<(Vec<f64>, usize)> = Vec::new();
            for (row, &label) in t.rows.iter().zip(&t.labels) {
                rows.push((row.clone(), label));
                rows.push((row.clone(), label));
            }
            table(rows, &["a", "b"])
        };
        let m1 = train_svm(&t, &SvmParams::default_for(5)).unwrap();
        let m2 = train_svm(&doubled, &SvmParams::default_for(5)).unwrap();
        for (row, &label) in t.rows.iter().zip(&t.labels) {
            assert_eq!(m1.predict(row), label);
            assert_eq!(m2.predict(row), label);
        }
    }

    #[test]
    fn three_class_one_vs_rest() {
        let mut rows = Vec::new();
        for i in 0..8 {
            let jitter = 0.02 * i as f64;
            rows.push((vec![0.0 + jitter, 0.0], 0));
            rows.push((vec![5.0 + jitter, 0.0], 1));
            rows.push((vec![2.5 + jitter, 5.0], 2));
        }
        let t = table(rows, &["a", "b", "c"]);
        let model = train_svm(&t, &SvmParams::default_for(3)).unwrap();
        assert_eq!(model.predict(&[0.05, 0.1]), 0);
        assert_eq!(model.predict(&[5.05, 0.1]), 1);
        assert_eq!(model.predict(&[2.55, 5.1]), 2);
    }
}
