//! Binary cross entropy with a beta_opt-driven penalty weight on the
//! negative class, its analytic gradient, and batch-level precision/recall
//! aggregation.

use crate::error::{Error, Result};
use crate::fbeta::PrecisionRecall;

/// Prediction clamp applied before any log.
const EPS: f64 = 1e-7;

/// A batch of sigmoid outputs with {0,1} targets. Predictions are clamped
/// to [1e-7, 1 - 1e-7] at construction so every log below is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchPrediction {
    predictions: Vec<f64>,
    labels: Vec<u8>,
}

impl BatchPrediction {
    pub fn new(predictions: &[f64], labels: &[u8]) -> Result<Self> {
        if predictions.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if predictions.len() != labels.len() {
            return Err(Error::ShapeMismatch { expected: predictions.len(), got: labels.len() });
        }
        for &f in predictions {
            if !f.is_finite() {
                return Err(Error::InvalidParameter { name: "prediction", value: f });
            }
        }
        for &y in labels {
            if y > 1 {
                return Err(Error::InvalidParameter { name: "label", value: y as f64 });
            }
        }
        Ok(Self {
            predictions: predictions.iter().map(|f| f.clamp(EPS, 1.0 - EPS)).collect(),
            labels: labels.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.predictions.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty batches
    }

    pub fn predictions(&self) -> &[f64] {
        &self.predictions
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }
}

/// The squared beta_opt driving the negative-class weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyWeight {
    beta_opt_sq: f64,
}

impl PenaltyWeight {
    /// beta_opt_sq = 0; both weight branches collapse to 1.
    pub const UNWEIGHTED: PenaltyWeight = PenaltyWeight { beta_opt_sq: 0.0 };

    pub fn new(beta_opt_sq: f64) -> Result<Self> {
        if !(beta_opt_sq >= 0.0) || !beta_opt_sq.is_finite() {
            return Err(Error::InvalidParameter { name: "beta_opt_sq", value: beta_opt_sq });
        }
        Ok(Self { beta_opt_sq })
    }

    pub fn from_beta(beta_opt: f64) -> Result<Self> {
        Self::new(beta_opt * beta_opt)
    }

    pub fn beta_opt_sq(&self) -> f64 {
        self.beta_opt_sq
    }

    /// Weight for a negative-label term: misclassified side ((1-f) ≤ 0.5,
    /// boundary included) is divided by 1 + beta_opt_sq, the correct side
    /// multiplied by it.
    fn negative_weight(&self, one_minus_f: f64) -> f64 {
        if one_minus_f <= 0.5 {
            1.0 / (1.0 + self.beta_opt_sq)
        } else {
            1.0 + self.beta_opt_sq
        }
    }
}

/// Sum-reduced loss: -Σ [ y·ln f + (1-y)·ln(1-f)·w ]. Positive-label terms
/// are never weighted.
pub fn weighted_bce(batch: &BatchPrediction, weight: &PenaltyWeight) -> f64 {
    let mut sum = 0.0;
    for (&f, &y) in batch.predictions.iter().zip(&batch.labels) {
        if y == 1 {
            sum -= f.ln();
        } else {
            let omf = 1.0 - f;
            sum -= omf.ln() * weight.negative_weight(omf);
        }
    }
    sum
}

/// Element-wise d(loss)/d(f_i), treating the weight branch as constant:
/// y=1 → -1/f, y=0 → w/(1-f).
pub fn weighted_bce_grad(batch: &BatchPrediction, weight: &PenaltyWeight) -> Vec<f64> {
    batch
        .predictions
        .iter()
        .zip(&batch.labels)
        .map(|(&f, &y)| {
            if y == 1 {
                -1.0 / f
            } else {
                let omf = 1.0 - f;
                weight.negative_weight(omf) / omf
            }
        })
        .collect()
}

/// Confusion counts at `threshold` (prediction ≥ threshold is class 1);
/// None when either precision or recall has an empty denominator.
pub fn batch_precision_recall(batch: &BatchPrediction, threshold: f64) -> Option<PrecisionRecall> {
    let (mut tp, mut fp, mut fnc) = (0u32, 0u32, 0u32);
    for (&f, &y) in batch.predictions.iter().zip(&batch.labels) {
        let predicted = f >= threshold;
        match (predicted, y == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fnc += 1,
            (false, false) => {}
        }
    }
    if tp + fp == 0 || tp + fnc == 0 {
        return None;
    }
    let p = tp as f64 / (tp + fp) as f64;
    let r = tp as f64 / (tp + fnc) as f64;
    Some(PrecisionRecall::new(p, r).expect("ratios of counts are in [0,1]"))
}
