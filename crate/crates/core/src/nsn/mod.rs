//! Neurosymbolic classifier: a small feedforward network over record
//! features whose output is constrained by deterministic rules.

mod features;
mod metrics;
mod model;
mod network;
mod rules;

pub use features::{partitions, signed_log, FeatureExtractor};
pub use metrics::{evaluate_model, Evaluation, Metrics, SubsetAccuracy};
pub use model::{stratified_split, train_model, ClassLabel, Model, TrainConfig, Trained};
pub use network::{softmax, Adam, AdamConfig, Dense, Network};
pub use rules::{predict_with_rules, Prediction, Rule};

#[cfg(test)]
mod tests;
