//! A small fixed-architecture dense network: two rectified-linear hidden
//! layers of 20 and 10 units, a sigmoid output unit, and inverted dropout
//! after both hidden layers during training.

use crate::error::{Error, Result};
use crate::rng::{uniform, SeededRng};

pub const HIDDEN1: usize = 20;
pub const HIDDEN2: usize = 10;
/// Probability a hidden activation survives dropout during training.
pub const DROPOUT_KEEP: f64 = 0.9;

/// Weights are indexed source-major: `w1[i][j]` connects input i to
/// hidden-1 unit j.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseNet {
    w1: Vec<Vec<f64>>,
    b1: Vec<f64>,
    w2: Vec<Vec<f64>>,
    b2: Vec<f64>,
    w3: Vec<f64>,
    b3: f64,
}

/// Per-example intermediate state captured by a training-mode forward
/// pass; `a1`/`a2` are post-activation, post-mask values, and the masks
/// hold 0 or 1/keep_prob.
struct ExampleTrace {
    input: Vec<f64>,
    z1: Vec<f64>,
    a1: Vec<f64>,
    mask1: Vec<f64>,
    z2: Vec<f64>,
    a2: Vec<f64>,
    mask2: Vec<f64>,
    output: f64,
}

pub struct BatchTrace {
    examples: Vec<ExampleTrace>,
}

/// Parameter-shaped accumulator produced by backpropagation; entries are
/// sums over the batch, not means.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    pub w2: Vec<Vec<f64>>,
    pub b2: Vec<f64>,
    pub w3: Vec<f64>,
    pub b3: f64,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Symmetric uniform weights with bound √(6 / (fan_in + fan_out)) per
/// layer, zero biases. Weight draw order is layer by layer, source-major
/// within a layer; deterministic per seed.
pub fn init_net(input_dim: usize, seed: u64) -> DenseNet {
    assert!(input_dim >= 1, "input_dim must be positive");
    let mut rng = crate::rng::seeded(seed);
    let mut layer = |fan_in: usize, fan_out: usize| -> Vec<Vec<f64>> {
        let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
        (0..fan_in)
            .map(|_| (0..fan_out).map(|_| uniform(&mut rng, -bound, bound)).collect())
            .collect()
    };
    let w1 = layer(input_dim, HIDDEN1);
    let w2 = layer(HIDDEN1, HIDDEN2);
    let w3 = layer(HIDDEN2, 1).into_iter().map(|row| row[0]).collect();
    DenseNet { w1, b1: vec![0.0; HIDDEN1], w2, b2: vec![0.0; HIDDEN2], w3, b3: 0.0 }
}

impl DenseNet {
    /// All-zero parameters; every forward output is sigmoid(0) = 0.5.
    pub fn zeroed(input_dim: usize) -> Self {
        assert!(input_dim >= 1, "input_dim must be positive");
        DenseNet {
            w1: vec![vec![0.0; HIDDEN1]; input_dim],
            b1: vec![0.0; HIDDEN1],
            w2: vec![vec![0.0; HIDDEN2]; HIDDEN1],
            b2: vec![0.0; HIDDEN2],
            w3: vec![0.0; HIDDEN2],
            b3: 0.0,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.w1.len()
    }

    fn check_row(&self, row: &[f64]) -> Result<()> {
        if row.len() != self.input_dim() {
            return Err(Error::ShapeMismatch { expected: self.input_dim(), got: row.len() });
        }
        Ok(())
    }

    fn affine1(&self, row: &[f64]) -> Vec<f64> {
        let mut z1 = self.b1.clone();
        for (i, &x) in row.iter().enumerate() {
            for j in 0..HIDDEN1 {
                z1[j] += x * self.w1[i][j];
            }
        }
        z1
    }

    /// Deterministic inference pass without dropout.
    pub fn forward_eval(&self, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
        rows.iter()
            .map(|row| {
                self.check_row(row)?;
                let a1: Vec<f64> = self.affine1(row).iter().map(|&z| z.max(0.0)).collect();
                let mut z2 = self.b2.clone();
                for (j, &a) in a1.iter().enumerate() {
                    for k in 0..HIDDEN2 {
                        z2[k] += a * self.w2[j][k];
                    }
                }
                let mut z3 = self.b3;
                for (k, &z) in z2.iter().enumerate() {
                    z3 += z.max(0.0) * self.w3[k];
                }
                Ok(sigmoid(z3))
            })
            .collect()
    }

    /// Training pass with inverted dropout: each hidden activation is
    /// kept with probability `keep_prob` and scaled by 1/keep_prob, so
    /// expectations match evaluation mode. `keep_prob` = 1 reproduces
    /// evaluation outputs exactly. Masks draw from `rng` per example,
    /// layer 1 before layer 2.
    pub fn forward_train(
        &self,
        rows: &[Vec<f64>],
        rng: &mut SeededRng,
        keep_prob: f64,
    ) -> Result<(Vec<f64>, BatchTrace)> {
        assert!(keep_prob > 0.0 && keep_prob <= 1.0, "keep_prob in (0,1]");
        let mut outputs = Vec::with_capacity(rows.len());
        let mut examples = Vec::with_capacity(rows.len());
        for row in rows {
            self.check_row(row)?;
            let z1 = self.affine1(row);
            let mask1: Vec<f64> = (0..HIDDEN1)
                .map(|_| if uniform(rng, 0.0, 1.0) < keep_prob { 1.0 / keep_prob } else { 0.0 })
                .collect();
            let a1: Vec<f64> = z1.iter().zip(&mask1).map(|(&z, &m)| z.max(0.0) * m).collect();
            let mut z2 = self.b2.clone();
            for (j, &a) in a1.iter().enumerate() {
                for k in 0..HIDDEN2 {
                    z2[k] += a * self.w2[j][k];
                }
            }
            let mask2: Vec<f64> = (0..HIDDEN2)
                .map(|_| if uniform(rng, 0.0, 1.0) < keep_prob { 1.0 / keep_prob } else { 0.0 })
                .collect();
            let a2: Vec<f64> = z2.iter().zip(&mask2).map(|(&z, &m)| z.max(0.0) * m).collect();
            let mut z3 = self.b3;
            for (k, &a) in a2.iter().enumerate() {
                z3 += a * self.w3[k];
            }
            let output = sigmoid(z3);
            outputs.push(output);
            examples.push(ExampleTrace {
                input: row.clone(),
                z1,
                a1,
                mask1,
                z2,
                a2,
                mask2,
                output,
            });
        }
        Ok((outputs, BatchTrace { examples }))
    }

    /// Backpropagates d(loss)/d(prediction) through the traced pass and
    /// returns batch-summed parameter gradients.
    pub fn backward(&self, trace: &BatchTrace, dloss_doutput: &[f64]) -> Gradients {
        assert_eq!(trace.examples.len(), dloss_doutput.len(), "trace/grad length");
        let input_dim = self.input_dim();
        let mut g = Gradients {
            w1: vec![vec![0.0; HIDDEN1]; input_dim],
            b1: vec![0.0; HIDDEN1],
            w2: vec![vec![0.0; HIDDEN2]; HIDDEN1],
            b2: vec![0.0; HIDDEN2],
            w3: vec![0.0; HIDDEN2],
            b3: 0.0,
        };
        for (ex, &dl_df) in trace.examples.iter().zip(dloss_doutput) {
            let f = ex.output;
            let d3 = dl_df * f * (1.0 - f);
            for k in 0..HIDDEN2 {
                g.w3[k] += d3 * ex.a2[k];
            }
            g.b3 += d3;
            let d2: Vec<f64> = (0..HIDDEN2)
                .map(|k| {
                    let relu = if ex.z2[k] > 0.0 { 1.0 } else { 0.0 };
                    d3 * self.w3[k] * ex.mask2[k] * relu
                })
                .collect();
            for j in 0..HIDDEN1 {
                for k in 0..HIDDEN2 {
                    g.w2[j][k] += ex.a1[j] * d2[k];
                }
            }
            for k in 0..HIDDEN2 {
                g.b2[k] += d2[k];
            }
            let d1: Vec<f64> = (0..HIDDEN1)
                .map(|j| {
                    let back: f64 = (0..HIDDEN2).map(|k| self.w2[j][k] * d2[k]).sum();
                    let relu = if ex.z1[j] > 0.0 { 1.0 } else { 0.0 };
                    back * ex.mask1[j] * relu
                })
                .collect();
            for i in 0..input_dim {
                for j in 0..HIDDEN1 {
                    g.w1[i][j] += ex.input[i] * d1[j];
                }
            }
            for j in 0..HIDDEN1 {
                g.b1[j] += d1[j];
            }
        }
        g
    }

    /// Gradient-descent step: parameter -= scale · gradient.
    pub fn apply(&mut self, gradients: &Gradients, scale: f64) {
        for (row, grad) in self.w1.iter_mut().zip(&gradients.w1) {
            for (w, g) in row.iter_mut().zip(grad) {
                *w -= scale * g;
            }
        }
        for (b, g) in self.b1.iter_mut().zip(&gradients.b1) {
            *b -= scale * g;
        }
        for (row, grad) in self.w2.iter_mut().zip(&gradients.w2) {
            for (w, g) in row.iter_mut().zip(grad) {
                *w -= scale * g;
            }
        }
        for (b, g) in self.b2.iter_mut().zip(&gradients.b2) {
            *b -= scale * g;
        }
        for (w, g) in self.w3.iter_mut().zip(&gradients.w3) {
            *w -= scale * g;
        }
        self.b3 -= scale * gradients.b3;
    }

    /// Flat view of all parameters for finite-difference probing.
    pub fn parameter_count(&self) -> usize {
        let d = self.input_dim();
        d * HIDDEN1 + HIDDEN1 + HIDDEN1 * HIDDEN2 + HIDDEN2 + HIDDEN2 + 1
    }

    pub fn parameter(&self, index: usize) -> f64 {
        let d = self.input_dim();
        let mut i = index;
        if i < d * HIDDEN1 {
            return self.w1[i / HIDDEN1][i % HIDDEN1];
        }
        i -= d * HIDDEN1;
        if i < HIDDEN1 {
            return self.b1[i];
        }
        i -= HIDDEN1;
        if i < HIDDEN1 * HIDDEN2 {
            return self.w2[i / HIDDEN2][i % HIDDEN2];
        }
        i -= HIDDEN1 * HIDDEN2;
        if i < HIDDEN2 {
            return self.b2[i];
        }
        i -= HIDDEN2;
        if i < HIDDEN2 {
            return self.w3[i];
        }
        i -= HIDDEN2;
        assert_eq!(i, 0, "parameter index out of range");
        self.b3
    }

    pub fn parameter_mut(&mut self, index: usize) -> &mut f64 {
        let d = self.input_dim();
        let mut i = index;
        if i < d * HIDDEN1 {
            return &mut self.w1[i / HIDDEN1][i % HIDDEN1];
        }
        i -= d * HIDDEN1;
        if i < HIDDEN1 {
            return &mut self.b1[i];
        }
        i -= HIDDEN1;
        if i < HIDDEN1 * HIDDEN2 {
            return &mut self.w2[i / HIDDEN2][i % HIDDEN2];
        }
        i -= HIDDEN1 * HIDDEN2;
        if i < HIDDEN2 {
            return &mut self.b2[i];
        }
        i -= HIDDEN2;
        if i < HIDDEN2 {
            return &mut self.w3[i];
        }
        i -= HIDDEN2;
        assert_eq!(i, 0, "parameter index out of range");
        &mut self.b3
    }

    /// Gradient at the same flat index used by `parameter`.
    pub fn gradient(gradients: &Gradients, input_dim: usize, index: usize) -> f64 {
        let mut i = index;
        if i < input_dim * HIDDEN1 {
            return gradients.w1[i / HIDDEN1][i % HIDDEN1];
        }
        i -= input_dim * HIDDEN1;
        if i < HIDDEN1 {
            return gradients.b1[i];
        }
        i -= HIDDEN1;
        if i < HIDDEN1 * HIDDEN2 {
            return gradients.w2[i / HIDDEN2][i % HIDDEN2];
        }
        i -= HIDDEN1 * HIDDEN2;
        if i < HIDDEN2 {
            return gradients.b2[i];
        }
        i -= HIDDEN2;
        if i < HIDDEN2 {
            return gradients.w3[i];
        }
        i -= HIDDEN2;
        assert_eq!(i, 0, "gradient index out of range");
        gradients.b3
    }
}
