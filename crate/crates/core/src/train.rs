//! Mini-batch gradient-descent training of the dense network under
//! either plain cross entropy or the per-batch knee-weighted loss, with
//! per-epoch validation metrics and best-F1 selection.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::fbeta::PrecisionRecall;
use crate::knee::{knee_beta_opt, KneeConfig, PenaltyModel};
use crate::loss::{
    batch_precision_recall, weighted_bce, weighted_bce_grad, BatchPrediction, PenaltyWeight,
};
use crate::net::{DenseNet, DROPOUT_KEEP};
use crate::rng::seeded;
use crate::sim::LabeledDataset;

/// Which loss drives the update: plain cross entropy, or cross entropy
/// with the negative-class weight set per batch by the knee search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LossMode {
    Baseline,
    Penalty { model: PenaltyModel, knee: KneeConfig },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub loss_mode: LossMode,
    pub eval_threshold: f64,
}

impl TrainConfig {
    /// Defaults: 30 epochs, batch 128, learning rate 0.5 (applied to
    /// batch-mean gradients; smaller rates leave the minority class
    /// unlearned within 30 epochs at this data scale), threshold 0.5.
    pub fn baseline(seed: u64) -> Self {
        TrainConfig {
            epochs: 30,
            batch_size: 128,
            learning_rate: 0.5,
            seed,
            loss_mode: LossMode::Baseline,
            eval_threshold: 0.5,
        }
    }

    pub fn penalty(seed: u64, model: PenaltyModel, knee: KneeConfig) -> Self {
        TrainConfig { loss_mode: LossMode::Penalty { model, knee }, ..Self::baseline(seed) }
    }

    fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidParameter { name: "epochs", value: 0.0 });
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidParameter { name: "batch_size", value: 0.0 });
        }
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::InvalidParameter {
                name: "learning_rate",
                value: self.learning_rate,
            });
        }
        Ok(())
    }
}

/// Validation metrics after one epoch (`epoch` counts from 1).
/// `precision`, `recall`, and `f1` report 0 when the confusion counts
/// leave them undefined;
/// `mean_beta_opt` averages the per-batch β_opt (0 in baseline mode) and
/// `default_fraction` counts the batches that fell back to the default β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochMetrics {
    pub epoch: usize,
    pub train_loss: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub mean_beta_opt: f64,
    pub default_fraction: f64,
}

/// Per-column z-scoring fit on one dataset and reused on another;
/// constant columns pass through unscaled.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl Standardizer {
    pub fn fit(features: &[Vec<f64>]) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let dim = features[0].len();
        let n = features.len() as f64;
        let mut means = vec![0.0; dim];
        for row in features {
            if row.len() != dim {
                return Err(Error::ShapeMismatch { expected: dim, got: row.len() });
            }
            for (m, &x) in means.iter_mut().zip(row) {
                *m += x;
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut stds = vec![0.0; dim];
        for row in features {
            for ((s, &m), &x) in stds.iter_mut().zip(&means).zip(row) {
                *s += (x - m) * (x - m);
            }
        }
        for s in &mut stds {
            *s = (*s / n).sqrt();
            if *s < 1e-12 {
                *s = 1.0;
            }
        }
        Ok(Standardizer { means, stds })
    }

    pub fn transform(&self, features: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        features
            .iter()
            .map(|row| {
                if row.len() != self.means.len() {
                    return Err(Error::ShapeMismatch { expected: self.means.len(), got: row.len() });
                }
                Ok(row
                    .iter()
                    .zip(self.means.iter().zip(&self.stds))
                    .map(|(&x, (&m, &s))| (x - m) / s)
                    .collect())
            })
            .collect()
    }
}

fn f1_score(pr: &Option<PrecisionRecall>) -> f64 {
    match pr {
        Some(pr) if pr.precision() + pr.recall() > 0.0 => {
            2.0 * pr.precision() * pr.recall() / (pr.precision() + pr.recall())
        }
        _ => 0.0,
    }
}

/// Hard-threshold evaluation; F1 is the harmonic mean of precision and
/// recall, reported as 0 whenever either is undefined or both are 0.
pub fn evaluate(
    net: &DenseNet,
    data: &LabeledDataset,
    threshold: f64,
) -> Result<(Option<PrecisionRecall>, f64)> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let preds = net.forward_eval(&data.features)?;
    let batch = BatchPrediction::new(&preds, &data.labels)?;
    let pr = batch_precision_recall(&batch, threshold);
    let f1 = f1_score(&pr);
    Ok((pr, f1))
}

/// The highest validation F1 across the recorded epochs.
pub fn best_f1(metrics: &[EpochMetrics]) -> f64 {
    metrics.iter().fold(0.0, |acc, m| acc.max(m.f1))
}

/// Trains in place and returns one metrics row per epoch.
///
/// Features are z-scored with statistics fit on the training split only.
/// Each epoch reshuffles indices from the config-seeded stream, then per
/// batch: a dropout forward pass, batch precision/recall, the knee search
/// (penalty mode) for this batch's β_opt, and a gradient step of the
/// weighted loss scaled by learning_rate / batch length. Undefined batch
/// precision/recall falls back to the knee config's default β.
pub fn train(
    net: &mut DenseNet,
    train_data: &LabeledDataset,
    val_data: &LabeledDataset,
    config: &TrainConfig,
) -> Result<Vec<EpochMetrics>> {
    config.validate()?;
    if train_data.is_empty() || val_data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let standardizer = Standardizer::fit(&train_data.features)?;
    let x_train = standardizer.transform(&train_data.features)?;
    let x_val = LabeledDataset {
        features: standardizer.transform(&val_data.features)?,
        labels: val_data.labels.clone(),
        feature_names: val_data.feature_names,
    };
    if x_train[0].len() != net.input_dim() {
        return Err(Error::ShapeMismatch { expected: net.input_dim(), got: x_train[0].len() });
    }
    let mut rng = seeded(config.seed);
    let mut indices: Vec<usize> = (0..x_train.len()).collect();
    let mut metrics = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        indices.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        let mut beta_sum = 0.0;
        let mut defaults = 0usize;
        let mut batches = 0usize;
        for chunk in indices.chunks(config.batch_size) {
            let rows: Vec<Vec<f64>> = chunk.iter().map(|&i| x_train[i].clone()).collect();
            let labels: Vec<u8> = chunk.iter().map(|&i| train_data.labels[i]).collect();
            let (preds, trace) = net.forward_train(&rows, &mut rng, DROPOUT_KEEP)?;
            let batch = BatchPrediction::new(&preds, &labels)?;
            let (weight, beta_opt, used_default) = match &config.loss_mode {
                LossMode::Baseline => (PenaltyWeight::UNWEIGHTED, 0.0, false),
                LossMode::Penalty { model, knee } => match batch_precision_recall(&batch, 0.5) {
                    None => (PenaltyWeight::from_beta(knee.default_beta)?, knee.default_beta, true),
                    Some(pr) => {
                        let (beta_opt, trace) = knee_beta_opt(&pr, model, knee);
                        (PenaltyWeight::from_beta(beta_opt)?, beta_opt, trace.used_default)
                    }
                },
            };
            loss_sum += weighted_bce(&batch, &weight);
            let grads = net.backward(&trace, &weighted_bce_grad(&batch, &weight));
            net.apply(&grads, config.learning_rate / chunk.len() as f64);
            beta_sum += beta_opt;
            if used_default {
                defaults += 1;
            }
            batches += 1;
        }
        let (pr, f1) = evaluate(net, &x_val, config.eval_threshold)?;
        metrics.push(EpochMetrics {
            epoch: epoch + 1,
            train_loss: loss_sum / x_train.len() as f64,
            precision: pr.as_ref().map_or(0.0, PrecisionRecall::precision),
            recall: pr.as_ref().map_or(0.0, PrecisionRecall::recall),
            f1,
            mean_beta_opt: beta_sum / batches as f64,
            default_fraction: defaults as f64 / batches as f64,
        });
    }
    Ok(metrics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::UniformMixture;
    use crate::net::init_net;
    use crate::sim::{simulate_ust, SimConfig};

    fn easy_split() -> (LabeledDataset, LabeledDataset) {
        let config = SimConfig::new(1200, 0.25, 7).unwrap();
        simulate_ust(config, 3.2, 5.0, false).unwrap().split_alternating()
    }

    fn m1(beta_star: f64) -> PenaltyModel {
        PenaltyModel::Uniform(UniformMixture::new(beta_star).unwrap())
    }

    #[test]
    fn standardizer_zero_means_unit_stds() {
        let data = vec![vec![1.0, 10.0], vec![3.0, 30.0], vec![5.0, 20.0]];
        let s = Standardizer::fit(&data).unwrap();
        let t = s.transform(&data).unwrap();
        for col in 0..2 {
            let mean: f64 = t.iter().map(|r| r[col]).sum::<f64>() / 3.0;
            let var: f64 = t.iter().map(|r| r[col] * r[col]).sum::<f64>() / 3.0;
            assert!(mean.abs() <= 1e-12);
            assert!((var - 1.0).abs() <= 1e-12);
        }
        // Constant columns pass through shifted, not divided by 0.
        let flat = vec![vec![2.0], vec![2.0]];
        let s = Standardizer::fit(&flat).unwrap();
        assert_eq!(s.transform(&flat).unwrap(), vec![vec![0.0], vec![0.0]]);
    }

    #[test]
    fn training_is_deterministic_per_seed() {
        let (train_data, val_data) = easy_split();
        let config = TrainConfig { epochs: 3, ..TrainConfig::baseline(42) };
        let mut net_a = init_net(2, 42);
        let metrics_a = train(&mut net_a, &train_data, &val_data, &config).unwrap();
        let mut net_b = init_net(2, 42);
        let metrics_b = train(&mut net_b, &train_data, &val_data, &config).unwrap();
        assert_eq!(metrics_a, metrics_b);
        assert_eq!(net_a, net_b);
        let other = TrainConfig { epochs: 3, ..TrainConfig::baseline(43) };
        let mut net_c = init_net(2, 42);
        let metrics_c = train(&mut net_c, &train_data, &val_data, &other).unwrap();
        assert_ne!(metrics_a, metrics_c);
    }

    #[test]
    fn baseline_equals_penalty_with_zero_default_beta() {
        // A 2-point grid has no interior, so every batch takes the default
        // path; default β = 0 makes both weight branches 1, which is plain
        // cross entropy.
        let (train_data, val_data) = easy_split();
        let knee = KneeConfig { grid_size: 2, beta_max: 8.0, default_beta: 0.0 };
        let base_cfg = TrainConfig { epochs: 3, ..TrainConfig::baseline(5) };
        let pen_cfg = TrainConfig { epochs: 3, ..TrainConfig::penalty(5, m1(8.0), knee) };
        let mut base_net = init_net(2, 5);
        let base = train(&mut base_net, &train_data, &val_data, &base_cfg).unwrap();
        let mut pen_net = init_net(2, 5);
        let pen = train(&mut pen_net, &train_data, &val_data, &pen_cfg).unwrap();
        assert_eq!(base_net, pen_net);
        for (b, p) in base.iter().zip(&pen) {
            assert_eq!(b.train_loss, p.train_loss);
            assert_eq!((b.precision, b.recall, b.f1), (p.precision, p.recall, p.f1));
        }
        assert!(pen.iter().all(|m| m.default_fraction == 1.0));
    }

    #[test]
    fn forced_default_path_ignores_the_model() {
        // With the default path forced on every batch the mixture model is
        // never consulted, so the trajectory is that of constant β = 1.
        let (train_data, val_data) = easy_split();
        let knee = KneeConfig { grid_size: 2, beta_max: 8.0, default_beta: 1.0 };
        let cfg_a = TrainConfig { epochs: 3, ..TrainConfig::penalty(9, m1(8.0), knee) };
        let cfg_b = TrainConfig { epochs: 3, ..TrainConfig::penalty(9, m1(16.0), knee) };
        let mut net_a = init_net(2, 9);
        let a = train(&mut net_a, &train_data, &val_data, &cfg_a).unwrap();
        let mut net_b = init_net(2, 9);
        let b = train(&mut net_b, &train_data, &val_data, &cfg_b).unwrap();
        assert_eq!(net_a, net_b);
        assert_eq!(a, b);
        assert!(a.iter().all(|m| m.default_fraction == 1.0 && m.mean_beta_opt == 1.0));
    }

    #[test]
    fn metrics_f1_is_the_harmonic_mean_of_its_own_fields() {
        let (train_data, val_data) = easy_split();
        let config = TrainConfig { epochs: 5, ..TrainConfig::penalty(3, m1(8.0), KneeConfig::default()) };
        let mut net = init_net(2, 3);
        let metrics = train(&mut net, &train_data, &val_data, &config).unwrap();
        for m in &metrics {
            if m.precision + m.recall > 0.0 {
                let harmonic = 2.0 * m.precision * m.recall / (m.precision + m.recall);
                assert!((m.f1 - harmonic).abs() <= 1e-9, "epoch {}", m.epoch);
            } else {
                assert_eq!(m.f1, 0.0);
            }
        }
    }

    #[test]
    fn evaluate_reference_cases() {
        let data = LabeledDataset {
            features: vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
            labels: vec![1, 0, 1, 1],
            feature_names: &["x"],
        };
        // Zero net predicts 0.5 everywhere; threshold 0.5 marks all
        // positive: precision 3/4, recall 1.
        let net = DenseNet::zeroed(1);
        let (pr, f1) = evaluate(&net, &data, 0.5).unwrap();
        let pr = pr.unwrap();
        assert_eq!((pr.precision(), pr.recall()), (0.75, 1.0));
        assert!((f1 - 6.0 / 7.0).abs() <= 1e-12);
        // Raising the threshold above 0.5 marks none: undefined precision.
        let (pr, f1) = evaluate(&net, &data, 0.6).unwrap();
        assert!(pr.is_none());
        assert_eq!(f1, 0.0);
        assert!(evaluate(
            &net,
            &LabeledDataset { features: vec![], labels: vec![], feature_names: &["x"] },
            0.5
        )
        .is_err());
    }

    #[test]
    fn shape_and_emptiness_are_rejected() {
        let (train_data, val_data) = easy_split();
        let config = TrainConfig { epochs: 1, ..TrainConfig::baseline(1) };
        let mut wrong = init_net(3, 1);
        assert_eq!(
            train(&mut wrong, &train_data, &val_data, &config),
            Err(Error::ShapeMismatch { expected: 3, got: 2 })
        );
        let empty = LabeledDataset { features: vec![], labels: vec![], feature_names: &[] };
        let mut net = init_net(2, 1);
        assert_eq!(train(&mut net, &empty, &val_data, &config), Err(Error::EmptyDataset));
        assert_eq!(train(&mut net, &train_data, &empty, &config), Err(Error::EmptyDataset));
        let bad = TrainConfig { learning_rate: 0.0, ..config };
        assert!(train(&mut net, &train_data, &val_data, &bad).is_err());
    }

    #[test]
    fn no_signal_scenario_caps_best_f1() {
        // a = b = 4 makes both labels draw from the same volume law, so
        // nothing beats base-rate guessing.
        for seed in 0..5 {
            let sim = SimConfig::new(1200, 0.25, 2000 + seed).unwrap();
            let (train_data, val_data) =
                simulate_ust(sim, 4.0, 4.0, false).unwrap().split_alternating();
            for config in [
                TrainConfig::baseline(seed),
                TrainConfig::penalty(seed, m1(8.0), KneeConfig::default()),
            ] {
                let mut net = init_net(2, seed);
                let metrics = train(&mut net, &train_data, &val_data, &config).unwrap();
                let best = best_f1(&metrics);
                assert!(best < 0.55, "seed {seed} {:?}: best F1 {best}", config.loss_mode);
            }
        }
    }

    #[test]
    fn easy_scenario_learns_well() {
        let (train_data, val_data) = easy_split();
        let config = TrainConfig::baseline(1);
        let mut net = init_net(2, 1);
        let metrics = train(&mut net, &train_data, &val_data, &config).unwrap();
        assert!(best_f1(&metrics) >= 0.90, "best F1 {}", best_f1(&metrics));
    }
}
