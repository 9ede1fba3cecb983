//! Gaussian naive Bayes on continuous topic-score features.

use super::FeatureTable;
use crate::error::{Error, Result};

const VARIANCE_FLOOR: f64 = 1e-9;

/// Per-class feature Gaussians with empirical log priors.
#[derive(Debug, Clone)]
pub struct GaussianNb {
    pub class_names: Vec<String>,
    log_priors: Vec<f64>,
    means: Vec<Vec<f64>>,
    variances: Vec<Vec<f64>>,
}

/// Fit class priors and per-class feature means/variances; variances are
/// floored at 1e-9 so constant features stay finite.
pub fn train_nb(table: &FeatureTable) -> Result<GaussianNb> {
    let c = table.class_names.len();
    let f = table.num_features();
    let n = table.num_rows();

    let mut counts = vec![0usize; c];
    for &label in &table.labels {
        counts[label] += 1;
    }
    if let Some(missing) = counts.iter().position(|&count| count == 0) {
        return Err(Error::MissingClass(table.class_names[missing].clone()));
    }

    let mut means = vec![vec![0.0; f]; c];
    for (row, &label) in table.rows.iter().zip(&table.labels) {
        for (j, &x) in row.iter().enumerate() {
            means[label][j] += x;
        }
    }
    for (class, mean) in means.iter_mut().enumerate() {
        for m in mean.iter_mut() {
            *m /= counts[class] as f64;
        }
    }

    let mut variances = vec![vec![0.0; f]; c];
    for (row, &label) in table.rows.iter().zip(&table.labels) {
        for (j, &x) in row.iter().enumerate() {
            let d = x - means[label][j];
            variances[label][j] += d * d;
        }
    }
    for (class, var) in variances.iter_mut().enumerate() {
        for v in var.iter_mut() {
            *v = (*v / counts[class] as f64).max(VARIANCE_FLOOR);
        }
    }

    let log_priors = counts
        .iter()
        .map(|&count| (count as f64 / n as f64).ln())
        .collect();

    Ok(GaussianNb {
        class_names: table.class_names.clone(),
        log_priors,
        means,
        variances,
    })
}

impl GaussianNb {
    /// Unnormalized log posterior per class:
    /// `ln prior + Σ_j ln N(x_j; μ, σ²)`.
    pub fn log_joint(&self, x: &[f64]) -> Vec<f64> {
        const LN_2PI: f64 = 1.8378770664093453;
        self.log_priors
            .iter()
            .enumerate()
            .map(|(class, &prior)| {
                let mut score = prior;
                for (j, &value) in x.iter().enumerate() {
                    let var = self.variances[class][j];
                    let d = value - self.means[class][j];
                    score += -0.5 * (LN_2PI + var.ln()) - d * d / (2.0 * var);
                }
                score
            })
            .collect()
    }

    /// Normalized posterior via log-sum-exp.
    pub fn posterior(&self, x: &[f64]) -> Vec<f64> {
        let joint = self.log_joint(x);
        let max = joint.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut exp: Vec<f64> = joint.iter().map(|&l| (l - max).exp()).collect();
        let total: f64 = exp.iter().sum();
        for e in exp.iter_mut() {
            *e /= total;
        }
        exp
    }

    /// Argmax class; ties break toward the earlier class.
    pub fn predict(&self, x: &[f64]) -> usize {
        let joint = self.log_joint(x);
        let mut best = 0;
        for (class, &score) in joint.iter().enumerate().skip(1) {
            if score > joint[best] {
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

    #[test]
    fn single_class_table_always_predicts_it() {
        let t = table(vec![(vec![1.0], 0), (vec![2.0], 0)], &["only"]);
        let nb = train_nb(&t).unwrap();
        assert_eq!(nb.predict(&[0.0]), 0);
        assert_eq!(nb.predict(&[100.0]), 0);
    }

    #[test]
    fn nearer_mean_wins_under_equal_variance() {
        // class a at 1.0, class b at 3.0, equal priors, floored variances:
        // query 1.4 is nearer a
        let t = table(vec![(vec![1.0], 0), (vec![3.0], 1)], &["a", "b"]);
        let nb = train_nb(&t).unwrap();
        assert_eq!(nb.predict(&[1.4]), 0);
        assert_eq!(nb.predict(&[2.6]), 1);
    }

    #[test]
    fn constant_feature_engages_variance_floor() {
        let t = table(
            vec![(vec![5.0, 1.0], 0), (vec![5.0, 2.0], 0), (vec![5.0, 9.0], 1)],
            &["a", "b"],
        );
        let nb = train_nb(&t).unwrap();
        let joint = nb.log_joint(&[5.0, 1.5]);
        assert!(joint.iter().all(|s| s.is_finite()));
        assert_eq!(nb.predict(&[5.0, 1.5]), 0);
    }

    #[test]
    fn missing_class_rejected() {
        let mut t = table(vec![(vec![1.0], 0)], &["a", "b"]);
        t.class_names = vec!["a".into(), "b".into()];
        assert!(matches!(train_nb(&t), Err(Error::MissingClass(name)) if name == "b"));
    }

    #[test]
    fn decision_invariant_to_prior_rescaling() {
        let t = table(
            vec![
                (vec![1.0, 0.2], 0),
                (vec![1.2, 0.1], 0),
                (vec![3.0, 0.9], 1),
                (vec![2.8, 1.1], 1),
            ],
            &["a", "b"],
        );
        let mut nb = train_nb(&t).unwrap();
        let queries = [[1.1, 0.15], [2.9, 1.0], [2.0, 0.5]];
        let base: Vec<usize> = queries.iter().map(|q| nb.predict(q)).collect();
        for p in nb.log_priors.iter_mut() {
            *p += 13.7;
        }
        let shifted: Vec<usize> = queries.iter().map(|q| nb.predict(q)).collect();
        assert_eq!(base, shifted);
    }

    #[test]
    fn posterior_sums_to_one() {
        let t = table(vec![(vec![1.0], 0), (vec![3.0], 1)], &["a", "b"]);
        let nb = train_nb(&t).unwrap();
        let post = nb.posterior(&[1.4]);
        assert!((post.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(post[0] > post[1]);
    }
}
