//! Emotion classification for short Turkish texts by topic modeling.
//!
//! Three back-ends fit topic models over a preprocessed tweet corpus:
//! plain LDA by collapsed Gibbs sampling, a staged variant that repeatedly
//! deletes below-mean-weight terms and refits on the shrunken dictionary,
//! and non-negative matrix factorization. Topics get class labels by
//! majority vote of training documents; documents classify directly as
//! the label of their highest-scoring topic; and per-document topic-score
//! vectors feed internal naive Bayes / random forest / linear SVM
//! classifiers under stratified cross-validation, with CSV and ARFF
//! exports for external tools.
//!
//! Every run is driven by one seed and is bit-reproducible. Start from
//! [`experiment::cmd_pipeline`] or the `emotopic` binary for end-to-end
//! runs, or compose the modules directly; the `examples/` directory has
//! one runnable example per capability.

pub mod corpus;
pub mod error;
pub mod experiment;
pub mod lda;
pub mod ml;
pub mod model;
pub mod nlda;
pub mod nmf;
pub mod pipeline;
pub mod rng;
pub mod synthetic;
pub mod text;

pub use error::{Error, ExitClass, Result};
