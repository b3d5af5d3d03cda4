//! Symbolic post-processing of network output.

use serde::Serialize;

use super::model::Model;
use super::network::softmax;
use crate::arith::is_perfect_square;
use crate::database::PolyRecord;
use crate::error::{Error, Result};
use crate::galois::{candidates_from_signature, groups_of_degree, GroupId};
use crate::modp::Signature;
use crate::realroots::forced_alternating_or_symmetric;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Only one transitive group admits every observed cycle type.
    SignatureUniqueness,
    /// The number of non-real roots forces `A_n` or `S_n`.
    RealRootForcing,
    /// Classes on the wrong side of the discriminant parity are removed.
    ParityMask,
}

#[derive(Clone, Debug, Serialize)]
pub struct Prediction {
    /// Raw network distribution over the model's classes.
    pub network: Vec<f64>,
    /// Distribution after the parity mask.
    pub distribution: Vec<f64>,
    pub network_label: &'static GroupId,
    pub label: &'static GroupId,
    pub fired: Vec<Rule>,
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// Network prediction followed by the rules, in order: signature
/// uniqueness, real-root forcing, parity mask.
pub fn predict_with_rules(model: &Model, r: &PolyRecord) -> Result<Prediction> {
    if r.degree != model.degree {
        return Err(Error::DegreeMismatch {
            expected: model.degree,
            found: r.degree,
        });
    }
    let raw = model.extractor().extract(r)?;
    let logits = model.network.logits(&model.standardize(&raw));
    let network = softmax(&logits);
    let network_label = model.class_group(argmax(&network));
    let n = r.degree;
    let square = is_perfect_square(&r.delta);
    let mut fired = Vec::new();
    let mut label = None;

    let observed: Signature = r.cycle_types().into_iter().collect();
    if let Ok(c) = candidates_from_signature(n, &observed) {
        if c.len() == 1 {
            fired.push(Rule::SignatureUniqueness);
            label = Some(c[0]);
        }
    }

    let prime_degree = n == 3 || n == 5;
    if prime_degree {
        let real = r.extra_u64("real_roots").unwrap_or(n as u64) as usize;
        if forced_alternating_or_symmetric(n as u64, n - real).is_some() {
            fired.push(Rule::RealRootForcing);
            if label.is_none() {
                let groups = groups_of_degree(n)?;
                label = groups
                    .iter()
                    .find(|g| if square { g.is_alternating() } else { g.is_symmetric() });
            }
        }
    }

    let mut distribution = network.clone();
    let wrong: Vec<usize> = (0..model.labels.len())
        .filter(|&k| model.class_group(k).in_alternating != square)
        .collect();
    let right_exists = wrong.len() < model.labels.len();
    if !wrong.is_empty() && right_exists {
        fired.push(Rule::ParityMask);
        for &k in &wrong {
            distribution[k] = 0.0;
        }
        let total: f64 = distribution.iter().sum();
        if total > 0.0 {
            for p in distribution.iter_mut() {
                *p /= total;
            }
        } else {
            // every surviving probability underflowed; fall back to logits
            let masked: Vec<f64> = logits
                .iter()
                .enumerate()
                .map(|(k, &z)| if wrong.contains(&k) { f64::NEG_INFINITY } else { z })
                .collect();
            distribution = softmax(&masked);
        }
    }
    let label = label.unwrap_or_else(|| model.class_group(argmax(&distribution)));
    Ok(Prediction {
        network,
        distribution,
        network_label,
        label,
        fired,
    })
}
