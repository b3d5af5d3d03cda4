//! Training and persistence of the classifier.

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::features::FeatureExtractor;
use super::network::{Adam, AdamConfig, Network};
use crate::database::PolyRecord;
use crate::error::{Error, Result};
use crate::galois::{group_by_gap_id, GroupId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    pub seed: u64,
    pub hidden: Vec<usize>,
    pub validation_fraction: f64,
    /// Per-class cap applied before the split, by seeded subsampling.
    pub max_per_class: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            batch_size: 128,
            adam: AdamConfig::default(),
            seed: 42,
            hidden: vec![64, 64, 64],
            validation_fraction: 0.2,
            max_per_class: Some(2000),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassLabel {
    pub gap_id: [usize; 2],
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub degree: usize,
    /// Indices of the extractor features kept after dropping constant ones.
    pub kept_features: Vec<usize>,
    pub feature_names: Vec<String>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub labels: Vec<ClassLabel>,
    pub network: Network,
    pub config: TrainConfig,
    /// Training-split loss before the first epoch and after each epoch.
    pub loss_history: Vec<f64>,
}

impl Model {
    pub fn extractor(&self) -> FeatureExtractor {
        FeatureExtractor::new(self.degree).expect("model degree is valid")
    }

    pub fn standardize(&self, raw: &[f64]) -> Vec<f64> {
        self.kept_features
            .iter()
            .enumerate()
            .map(|(i, &k)| (raw[k] - self.mean[i]) / self.std[i])
            .collect()
    }

    /// Network class distribution for a record.
    pub fn predict(&self, r: &PolyRecord) -> Result<Vec<f64>> {
        let raw = self.extractor().extract(r)?;
        Ok(self.network.predict(&self.standardize(&raw)))
    }

    pub fn class_group(&self, class: usize) -> &'static GroupId {
        group_by_gap_id(self.labels[class].gap_id).expect("labels come from the catalog")
    }

    pub fn class_of(&self, gap_id: [usize; 2]) -> Option<usize> {
        self.labels.iter().position(|l| l.gap_id == gap_id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("models always serialize")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let m: Model = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if m.kept_features.len() != m.network.inputs() || m.labels.len() != m.network.classes() {
            return Err(Error::Malformed("model shapes are inconsistent".into()));
        }
        Ok(m)
    }
}

/// A trained model and the split it was trained on, as indices into the
/// input records.
#[derive(Clone, Debug)]
pub struct Trained {
    pub model: Model,
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

/// Seeded stratified split of the records, after the per-class cap.
pub fn stratified_split(records: &[PolyRecord], cfg: &TrainConfig) -> (Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut by_class: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        by_class.entry(r.group_gap_id).or_default().push(i);
    }
    let (mut train, mut validation) = (Vec::new(), Vec::new());
    for (_, mut idx) in by_class {
        idx.shuffle(&mut rng);
        if let Some(cap) = cfg.max_per_class {
            idx.truncate(cap);
        }
        let n = idx.len();
        let n_val = if n >= 2 {
            ((n as f64 * cfg.validation_fraction).round() as usize).clamp(1, n - 1)
        } else {
            0
        };
        validation.extend_from_slice(&idx[..n_val]);
        train.extend_from_slice(&idx[n_val..]);
    }
    train.sort_unstable();
    validation.sort_unstable();
    (train, validation)
}

/// Trains a classifier on records of one degree.
pub fn train_model(records: &[PolyRecord], cfg: &TrainConfig) -> Result<Trained> {
    let first = records
        .first()
        .ok_or_else(|| Error::DegenerateDataset("no records".into()))?;
    let degree = first.degree;
    if let Some(r) = records.iter().find(|r| r.degree != degree) {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: r.degree,
        });
    }
    let mut gap_ids: Vec<[usize; 2]> = records.iter().map(|r| r.group_gap_id).collect();
    gap_ids.sort_unstable();
    gap_ids.dedup();
    if gap_ids.len() < 2 {
        return Err(Error::DegenerateDataset(format!(
            "only {} class present",
            gap_ids.len()
        )));
    }
    let labels: Vec<ClassLabel> = gap_ids
        .iter()
        .map(|&id| {
            let g = group_by_gap_id(id).ok_or_else(|| Error::Malformed(format!("unknown group {id:?}")))?;
            Ok(ClassLabel {
                gap_id: id,
                name: g.name.to_string(),
            })
        })
        .collect::<Result<_>>()?;
    let class_of = |r: &PolyRecord| gap_ids.binary_search(&r.group_gap_id).expect("present");

    let (train, validation) = stratified_split(records, cfg);
    let fx = FeatureExtractor::new(degree)?;
    let flags = fx.flag_mask();
    let names = fx.names();
    let raw: Vec<Vec<f64>> = train.iter().map(|&i| fx.extract(&records[i])).collect::<Result<_>>()?;
    let ys: Vec<usize> = train.iter().map(|&i| class_of(&records[i])).collect();

    let dim = fx.dimension();
    let count = raw.len() as f64;
    let (mut kept, mut mean, mut std) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..dim {
        let m = raw.iter().map(|x| x[k]).sum::<f64>() / count;
        let var = raw.iter().map(|x| (x[k] - m).powi(2)).sum::<f64>() / count;
        if var <= 1e-24 {
            continue;
        }
        kept.push(k);
        if flags[k] {
            mean.push(0.0);
            std.push(1.0);
        } else {
            mean.push(m);
            std.push(var.sqrt());
        }
    }
    let mut model = Model {
        degree,
        feature_names: kept.iter().map(|&k| names[k].clone()).collect(),
        kept_features: kept,
        mean,
        std,
        labels,
        network: Network { layers: Vec::new() },
        config: cfg.clone(),
        loss_history: Vec::new(),
    };
    let xs: Vec<Vec<f64>> = raw.iter().map(|x| model.standardize(x)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut sizes = vec![model.kept_features.len()];
    sizes.extend(&cfg.hidden);
    sizes.push(model.labels.len());
    let mut net = Network::new(&sizes, &mut rng);
    let mut opt = Adam::new(&net, cfg.adam);
    let all: Vec<&[f64]> = xs.iter().map(|x| x.as_slice()).collect();
    let mut history = vec![net.loss(&all, &ys)];
    let mut order: Vec<usize> = (0..xs.len()).collect();
    let batch = cfg.batch_size.max(1);
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(batch) {
            let bx: Vec<&[f64]> = chunk.iter().map(|&i| xs[i].as_slice()).collect();
            let by: Vec<usize> = chunk.iter().map(|&i| ys[i]).collect();
            let (_, grads) = net.loss_and_grad(&bx, &by);
            opt.step(&mut net, &grads);
        }
        history.push(net.loss(&all, &ys));
    }
    model.network = net;
    model.loss_history = history;
    Ok(Trained {
        model,
        train,
        validation,
    })
}
