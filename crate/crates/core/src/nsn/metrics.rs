//! Accuracy, confusion matrices and per-class scores.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use super::model::Model;
use super::rules::{predict_with_rules, Rule};
use crate::database::PolyRecord;
use crate::error::{Error, Result};
use crate::galois::groups_of_degree;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metrics {
    /// Every transitive group of the degree, in catalog order.
    pub classes: Vec<String>,
    pub accuracy: f64,
    /// Rows are true classes, columns predictions.
    pub confusion: Vec<Vec<u64>>,
    pub support: Vec<u64>,
    pub precision: Vec<Option<f64>>,
    pub recall: Vec<Option<f64>>,
}

impl Metrics {
    fn new(classes: Vec<String>, confusion: Vec<Vec<u64>>) -> Self {
        let k = classes.len();
        let support: Vec<u64> = confusion.iter().map(|row| row.iter().sum()).collect();
        let total: u64 = support.iter().sum();
        let correct: u64 = (0..k).map(|i| confusion[i][i]).sum();
        let predicted: Vec<u64> = (0..k).map(|j| (0..k).map(|i| confusion[i][j]).sum()).collect();
        let ratio = |a: u64, b: u64| (b > 0).then(|| a as f64 / b as f64);
        Self {
            precision: (0..k).map(|i| ratio(confusion[i][i], predicted[i])).collect(),
            recall: (0..k).map(|i| ratio(confusion[i][i], support[i])).collect(),
            accuracy: if total == 0 { 0.0 } else { correct as f64 / total as f64 },
            classes,
            confusion,
            support,
        }
    }

    pub fn recall_of(&self, class: &str) -> Option<f64> {
        let i = self.classes.iter().position(|c| c == class)?;
        self.recall[i]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubsetAccuracy {
    pub records: u64,
    pub correct: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub network: Metrics,
    pub hybrid: Metrics,
    pub rule_counts: BTreeMap<String, u64>,
    /// Hybrid accuracy on the records where signature uniqueness fired.
    pub signature_rule: SubsetAccuracy,
    /// Records where a fired rule excluded the true group.
    pub rule_violations: u64,
}

fn rule_name(r: Rule) -> &'static str {
    match r {
        Rule::SignatureUniqueness => "signature_uniqueness",
        Rule::RealRootForcing => "real_root_forcing",
        Rule::ParityMask => "parity_mask",
    }
}

/// Network-only and rule-augmented metrics on labeled records.
pub fn evaluate_model(model: &Model, records: &[PolyRecord]) -> Result<Evaluation> {
    if records.is_empty() {
        return Err(Error::DegenerateDataset("no records to evaluate".into()));
    }
    let groups = groups_of_degree(model.degree)?;
    let classes: Vec<String> = groups.iter().map(|g| g.name.to_string()).collect();
    let index = |id: [usize; 2]| groups.iter().position(|g| g.gap_id == id);
    let k = classes.len();
    let mut net = vec![vec![0u64; k]; k];
    let mut hyb = vec![vec![0u64; k]; k];
    let mut rule_counts = BTreeMap::new();
    let mut signature_rule = SubsetAccuracy::default();
    let mut rule_violations = 0;
    for r in records {
        let truth =
            index(r.group_gap_id).ok_or_else(|| Error::Malformed(format!("unknown group {:?}", r.group_gap_id)))?;
        let p = predict_with_rules(model, r)?;
        let n_pred = index(p.network_label.gap_id).expect("catalog group");
        let h_pred = index(p.label.gap_id).expect("catalog group");
        net[truth][n_pred] += 1;
        hyb[truth][h_pred] += 1;
        for rule in &p.fired {
            *rule_counts.entry(rule_name(*rule).to_string()).or_insert(0) += 1;
        }
        let true_group = &groups[truth];
        let violated = p.fired.iter().any(|rule| match rule {
            Rule::SignatureUniqueness | Rule::RealRootForcing => h_pred != truth,
            Rule::ParityMask => true_group.in_alternating != crate::arith::is_perfect_square(&r.delta),
        });
        if violated {
            rule_violations += 1;
        }
        if p.fired.contains(&Rule::SignatureUniqueness) {
            signature_rule.records += 1;
            if h_pred == truth {
                signature_rule.correct += 1;
            }
        }
    }
    Ok(Evaluation {
        network: Metrics::new(classes.clone(), net),
        hybrid: Metrics::new(classes, hyb),
        rule_counts,
        signature_rule,
        rule_violations,
    })
}

impl Evaluation {
    /// Plain-text report with per-class recall for both variants.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let fmt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
        writeln!(
            s,
            "accuracy  network {:.4}  hybrid {:.4}",
            self.network.accuracy, self.hybrid.accuracy
        )
        .unwrap();
        writeln!(
            s,
            "{:<6} {:>8} {:>10} {:>10} {:>10} {:>10}",
            "class", "support", "net_prec", "net_rec", "hyb_prec", "hyb_rec"
        )
        .unwrap();
        for (i, c) in self.network.classes.iter().enumerate() {
            writeln!(
                s,
                "{:<6} {:>8} {:>10} {:>10} {:>10} {:>10}",
                c,
                self.network.support[i],
                fmt(self.network.precision[i]),
                fmt(self.network.recall[i]),
                fmt(self.hybrid.precision[i]),
                fmt(self.hybrid.recall[i]),
            )
            .unwrap();
        }
        for (rule, count) in &self.rule_counts {
            writeln!(s, "rule {rule}: fired {count}").unwrap();
        }
        writeln!(
            s,
            "signature rule subset: {}/{} correct",
            self.signature_rule.correct, self.signature_rule.records
        )
        .unwrap();
        s
    }
}
