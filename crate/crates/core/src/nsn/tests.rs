use std::sync::OnceLock;

use super::*;
use crate::arith::canonicalize;
use crate::database::{build_record, census, run_census, CensusOptions, PolyRecord, RecordOptions};

fn records(n: usize, h: u64) -> Vec<PolyRecord> {
    let mut out = Vec::new();
    run_census(n, h, &CensusOptions::default(), |r| {
        out.push(r.clone());
        Ok(())
    })
    .unwrap();
    out
}

fn quintics() -> &'static Vec<PolyRecord> {
    static CELL: OnceLock<Vec<PolyRecord>> = OnceLock::new();
    CELL.get_or_init(|| records(5, 2))
}

fn small_config() -> TrainConfig {
    TrainConfig {
        epochs: 15,
        max_per_class: Some(400),
        ..Default::default()
    }
}

fn quintic_model() -> &'static Trained {
    static CELL: OnceLock<Trained> = OnceLock::new();
    CELL.get_or_init(|| train_model(quintics(), &small_config()).unwrap())
}

fn rec(c: &[i64]) -> PolyRecord {
    build_record(&canonicalize(c).unwrap(), &RecordOptions::default())
        .unwrap()
        .unwrap()
}

#[test]
fn training_is_deterministic() {
    let a = train_model(quintics(), &small_config()).unwrap();
    assert_eq!(a.model.to_json(), quintic_model().model.to_json());
}

#[test]
fn loss_decreases() {
    let h = &quintic_model().model.loss_history;
    assert!(h.iter().all(|l| l.is_finite()));
    assert!(h.last().unwrap() < &h[0]);
}

#[test]
fn separable_set_is_learned() {
    // C3 against S3 is decided by the discriminant-square flag alone
    let data = records(3, 4);
    let cfg = TrainConfig {
        max_per_class: Some(300),
        ..Default::default()
    };
    let t = train_model(&data, &cfg).unwrap();
    let correct = t
        .train
        .iter()
        .filter(|&&i| {
            let p = t.model.predict(&data[i]).unwrap();
            let best = (0..p.len()).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
            t.model.labels[best].gap_id == data[i].group_gap_id
        })
        .count();
    assert!(
        correct as f64 >= 0.99 * t.train.len() as f64,
        "{correct}/{}",
        t.train.len()
    );
}

#[test]
fn degenerate_datasets() {
    assert!(matches!(
        train_model(&[], &TrainConfig::default()),
        Err(crate::Error::DegenerateDataset(_))
    ));
    let one = vec![rec(&[1, 3, -4, 1])];
    assert!(matches!(
        train_model(&one, &TrainConfig::default()),
        Err(crate::Error::DegenerateDataset(_))
    ));
}

#[test]
fn split_is_stratified() {
    let (train, val) = stratified_split(quintics(), &small_config());
    for name in ["A5", "D5", "F5", "S5"] {
        let count = |idx: &[usize]| idx.iter().filter(|&&i| quintics()[i].group_name == name).count();
        assert!(count(&val) >= 1, "{name} missing from validation");
        assert!(count(&train) > count(&val));
    }
}

#[test]
fn signature_rule_overrides() {
    let m = &quintic_model().model;
    let mut r = rec(&[-1, -1, 0, 0, 0, 1]);
    r.signature = vec![vec![3, 2], vec![], vec![], vec![]];
    let p = predict_with_rules(m, &r).unwrap();
    assert!(p.fired.contains(&Rule::SignatureUniqueness));
    assert_eq!(p.label.name, "S5");
}

#[test]
fn parity_mask_zeroes_odd_groups() {
    let m = &quintic_model().model;
    let r = rec(&[-1, 1, 4, -3, -3, 1]);
    let p = predict_with_rules(m, &r).unwrap();
    assert!(p.fired.contains(&Rule::ParityMask));
    for (k, l) in m.labels.iter().enumerate() {
        if l.name == "F5" || l.name == "S5" {
            assert_eq!(p.distribution[k], 0.0);
        }
    }
    assert!((p.distribution.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    assert!((p.network.iter().sum::<f64>() - 1.0).abs() < 1e-9);
}

#[test]
fn without_rules_the_network_decides() {
    // train on square-discriminant classes only, then query a totally real
    // quintic whose signature does not single out a group
    let data: Vec<PolyRecord> = quintics()
        .iter()
        .filter(|r| r.group_name != "S5" && r.group_name != "F5")
        .cloned()
        .collect();
    let t = train_model(&data, &small_config()).unwrap();
    let r = rec(&[-1, 1, 4, -3, -3, 1]);
    let p = predict_with_rules(&t.model, &r).unwrap();
    assert!(p.fired.is_empty(), "{:?}", p.fired);
    assert_eq!(p.distribution, p.network);
    assert_eq!(p.label.gap_id, p.network_label.gap_id);
}

#[test]
fn evaluation_properties() {
    let t = quintic_model();
    let val: Vec<PolyRecord> = t.validation.iter().map(|&i| quintics()[i].clone()).collect();
    let e = evaluate_model(&t.model, &val).unwrap();
    for m in [&e.network, &e.hybrid] {
        assert_eq!(m.support.iter().sum::<u64>(), val.len() as u64);
        for (i, row) in m.confusion.iter().enumerate() {
            assert_eq!(row.iter().sum::<u64>(), m.support[i]);
        }
    }
    assert!(e.hybrid.accuracy >= e.network.accuracy);
    assert_eq!(e.signature_rule.correct, e.signature_rule.records);
    assert_eq!(e.rule_violations, 0);
    assert!(e.table().contains("C5"));
}

#[test]
fn degree_mismatch_in_prediction() {
    let m = &quintic_model().model;
    assert!(predict_with_rules(m, &rec(&[1, 3, -4, 1])).is_err());
}

#[test]
fn model_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    let m = &quintic_model().model;
    m.save(&path).unwrap();
    assert_eq!(&Model::load(&path).unwrap(), m);
}

#[test]
fn census_summary_unaffected_by_training() {
    assert_eq!(
        census(5, 1, &CensusOptions::default()).unwrap().records,
        records(5, 1).len() as u64
    );
}
