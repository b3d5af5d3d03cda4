//! Dense ReLU network with a fused softmax cross-entropy head and Adam.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Fully connected layer; `weights` is row-major `outputs x inputs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Dense {
    /// He-uniform initialization.
    pub fn new<R: Rng>(inputs: usize, outputs: usize, rng: &mut R) -> Self {
        let limit = (6.0 / inputs as f64).sqrt();
        Self {
            inputs,
            outputs,
            weights: (0..inputs * outputs).map(|_| rng.gen_range(-limit..limit)).collect(),
            bias: vec![0.0; outputs],
        }
    }

    fn zeros_like(&self) -> Self {
        Self {
            inputs: self.inputs,
            outputs: self.outputs,
            weights: vec![0.0; self.weights.len()],
            bias: vec![0.0; self.bias.len()],
        }
    }

    fn apply(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for o in 0..self.outputs {
            let row = &self.weights[o * self.inputs..(o + 1) * self.inputs];
            let s: f64 = row.iter().zip(x).map(|(w, v)| w * v).sum();
            out.push(s + self.bias[o]);
        }
    }
}

/// Numerically stable softmax.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub layers: Vec<Dense>,
}

impl Network {
    /// `sizes` lists the input width, the hidden widths and the class
    /// count.
    pub fn new<R: Rng>(sizes: &[usize], rng: &mut R) -> Self {
        assert!(sizes.len() >= 2, "need at least input and output sizes");
        Self {
            layers: sizes.windows(2).map(|w| Dense::new(w[0], w[1], rng)).collect(),
        }
    }

    pub fn inputs(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn classes(&self) -> usize {
        self.layers.last().expect("nonempty").outputs
    }

    /// Activations of every layer: the input, the ReLU outputs of each
    /// hidden layer, and the logits.
    fn trace(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = vec![x.to_vec()];
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut out = Vec::with_capacity(layer.outputs);
            layer.apply(acts.last().expect("input"), &mut out);
            if i < last {
                for v in out.iter_mut() {
                    *v = v.max(0.0);
                }
            }
            acts.push(out);
        }
        acts
    }

    pub fn logits(&self, x: &[f64]) -> Vec<f64> {
        self.trace(x).pop().expect("logits")
    }

    pub fn predict(&self, x: &[f64]) -> Vec<f64> {
        softmax(&self.logits(x))
    }

    /// Mean cross-entropy over a batch.
    pub fn loss(&self, xs: &[&[f64]], ys: &[usize]) -> f64 {
        let total: f64 = xs.iter().zip(ys).map(|(x, &y)| cross_entropy(&self.logits(x), y)).sum();
        total / xs.len() as f64
    }

    /// Mean cross-entropy and its gradient with respect to every parameter.
    pub fn loss_and_grad(&self, xs: &[&[f64]], ys: &[usize]) -> (f64, Vec<Dense>) {
        let mut grads: Vec<Dense> = self.layers.iter().map(Dense::zeros_like).collect();
        let mut total = 0.0;
        let scale = 1.0 / xs.len() as f64;
        for (x, &y) in xs.iter().zip(ys) {
            let acts = self.trace(x);
            let logits = acts.last().expect("logits");
            total += cross_entropy(logits, y);
            // softmax and cross-entropy fuse to p - onehot(y)
            let mut delta = softmax(logits);
            delta[y] -= 1.0;
            for l in (0..self.layers.len()).rev() {
                let layer = &self.layers[l];
                let input = &acts[l];
                let g = &mut grads[l];
                for o in 0..layer.outputs {
                    let d = delta[o] * scale;
                    g.bias[o] += d;
                    let row = &mut g.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    for (w, v) in row.iter_mut().zip(input) {
                        *w += d * v;
                    }
                }
                if l > 0 {
                    let mut prev = vec![0.0; layer.inputs];
                    for o in 0..layer.outputs {
                        let row = &layer.weights[o * layer.inputs..(o + 1) * layer.inputs];
                        for (p, w) in prev.iter_mut().zip(row) {
                            *p += w * delta[o];
                        }
                    }
                    for (p, a) in prev.iter_mut().zip(input) {
                        if *a <= 0.0 {
                            *p = 0.0;
                        }
                    }
                    delta = prev;
                }
            }
        }
        (total * scale, grads)
    }
}

fn cross_entropy(logits: &[f64], y: usize) -> f64 {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + logits.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
    lse - logits[y]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

pub struct Adam {
    cfg: AdamConfig,
    m: Vec<Dense>,
    v: Vec<Dense>,
    t: i32,
}

impl Adam {
    pub fn new(net: &Network, cfg: AdamConfig) -> Self {
        Self {
            cfg,
            m: net.layers.iter().map(Dense::zeros_like).collect(),
            v: net.layers.iter().map(Dense::zeros_like).collect(),
            t: 0,
        }
    }

    pub fn step(&mut self, net: &mut Network, grads: &[Dense]) {
        self.t += 1;
        let c = self.cfg;
        let bc1 = 1.0 - c.beta1.powi(self.t);
        let bc2 = 1.0 - c.beta2.powi(self.t);
        let update = |p: &mut [f64], g: &[f64], m: &mut [f64], v: &mut [f64]| {
            for i in 0..p.len() {
                m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
                v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
                let mh = m[i] / bc1;
                let vh = v[i] / bc2;
                p[i] -= c.learning_rate * mh / (vh.sqrt() + c.epsilon);
            }
        };
        for (l, layer) in net.layers.iter_mut().enumerate() {
            update(
                &mut layer.weights,
                &grads[l].weights,
                &mut self.m[l].weights,
                &mut self.v[l].weights,
            );
            update(
                &mut layer.bias,
                &grads[l].bias,
                &mut self.m[l].bias,
                &mut self.v[l].bias,
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn softmax_sums_to_one() {
        let p = softmax(&[1000.0, -1000.0, 3.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let net = Network::new(&[3, 4, 2], &mut rng);
            let xs: Vec<Vec<f64>> = (0..6)
                .map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let ys: Vec<usize> = (0..6).map(|i| i % 2).collect();
            let refs: Vec<&[f64]> = xs.iter().map(|x| x.as_slice()).collect();
            let (_, grads) = net.loss_and_grad(&refs, &ys);
            let h = 1e-5;
            for l in 0..net.layers.len() {
                for which in 0..2 {
                    let len = if which == 0 {
                        net.layers[l].weights.len()
                    } else {
                        net.layers[l].bias.len()
                    };
                    for i in 0..len {
                        let perturbed = |delta: f64| {
                            let mut n = net.clone();
                            if which == 0 {
                                n.layers[l].weights[i] += delta;
                            } else {
                                n.layers[l].bias[i] += delta;
                            }
                            n.loss(&refs, &ys)
                        };
                        let numeric = (perturbed(h) - perturbed(-h)) / (2.0 * h);
                        let analytic = if which == 0 {
                            grads[l].weights[i]
                        } else {
                            grads[l].bias[i]
                        };
                        let err = (numeric - analytic).abs() / numeric.abs().max(analytic.abs()).max(1e-6);
                        assert!(err < 1e-4, "layer {l} param {i}: {numeric} vs {analytic}");
                    }
                }
            }
        }
    }

    #[test]
    fn adam_reduces_loss() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut net = Network::new(&[2, 8, 2], &mut rng);
        let xs: Vec<Vec<f64>> = (0..64)
            .map(|i| vec![(i % 8) as f64 - 3.5, (i / 8) as f64 - 3.5])
            .collect();
        let ys: Vec<usize> = xs.iter().map(|x| usize::from(x[0] + x[1] > 0.0)).collect();
        let refs: Vec<&[f64]> = xs.iter().map(|x| x.as_slice()).collect();
        let before = net.loss(&refs, &ys);
        let mut opt = Adam::new(
            &net,
            AdamConfig {
                learning_rate: 1e-2,
                ..Default::default()
            },
        );
        for _ in 0..200 {
            let (_, g) = net.loss_and_grad(&refs, &ys);
            opt.step(&mut net, &g);
        }
        assert!(net.loss(&refs, &ys) < before / 4.0);
    }
}
