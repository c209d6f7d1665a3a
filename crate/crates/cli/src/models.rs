//! Loss-model identifiers and named scenario presets.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;

use fbeta_core::dist::{GaussInvExpMixture, UniformMixture};
use fbeta_core::knee::{KneeConfig, PenaltyModel};
use fbeta_core::sim::{simulate_pv, simulate_ust, LabeledDataset, SimConfig};
use fbeta_core::train::TrainConfig;

/// Every knee search sweeps 300 beta values and falls back to 1 on
/// degenerate batches; m1 models cap the sweep at their own beta*,
/// m2 models at a fixed 16.
const KNEE_GRID: usize = 300;
const KNEE_DEFAULT: f64 = 1.0;
const M2_BETA_MAX: f64 = 16.0;

/// A loss configuration: `mb` (unweighted baseline), `m1_<beta*>`
/// (uniform mixture penalty), or `m2_<lambda>_<sigma2>` (Gaussian over
/// inverse-exponential penalty).
#[derive(Clone, Debug, PartialEq)]
pub enum ModelId {
    Baseline,
    M1(f64),
    M2(f64, f64),
}

impl ModelId {
    /// The ten models of the benchmark table.
    pub fn reference_set() -> Vec<ModelId> {
        vec![
            ModelId::Baseline,
            ModelId::M1(8.0),
            ModelId::M1(16.0),
            ModelId::M1(32.0),
            ModelId::M2(0.5, 0.5),
            ModelId::M2(0.5, 2.0),
            ModelId::M2(2.0, 0.5),
            ModelId::M2(2.0, 2.0),
            ModelId::M2(0.01, 0.01),
            ModelId::M2(5.0, 5.0),
        ]
    }

    /// Training configuration carrying this model's loss mode and the
    /// shared defaults for everything else.
    pub fn train_config(&self, seed: u64) -> fbeta_core::Result<TrainConfig> {
        Ok(match *self {
            ModelId::Baseline => TrainConfig::baseline(seed),
            ModelId::M1(beta_star) => TrainConfig::penalty(
                seed,
                PenaltyModel::Uniform(UniformMixture::new(beta_star)?),
                KneeConfig {
                    grid_size: KNEE_GRID,
                    beta_max: beta_star,
                    default_beta: KNEE_DEFAULT,
                },
            ),
            ModelId::M2(lambda, sigma2) => TrainConfig::penalty(
                seed,
                PenaltyModel::GaussInvExp(GaussInvExpMixture::new(lambda, sigma2)?),
                KneeConfig {
                    grid_size: KNEE_GRID,
                    beta_max: M2_BETA_MAX,
                    default_beta: KNEE_DEFAULT,
                },
            ),
        })
    }
}

impl FromStr for ModelId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "baseline" || s == "mb" {
            return Ok(ModelId::Baseline);
        }
        if let Some(beta) = s.strip_prefix("m1_") {
            let beta = beta.parse().map_err(|_| format!("bad beta* in model id {s:?}"))?;
            return Ok(ModelId::M1(beta));
        }
        if let Some(params) = s.strip_prefix("m2_") {
            if let Some((lambda, sigma2)) = params.split_once('_') {
                let lambda =
                    lambda.parse().map_err(|_| format!("bad lambda in model id {s:?}"))?;
                let sigma2 =
                    sigma2.parse().map_err(|_| format!("bad sigma2 in model id {s:?}"))?;
                return Ok(ModelId::M2(lambda, sigma2));
            }
        }
        Err(format!("unknown model id {s:?}; expected mb, m1_<beta*>, or m2_<lambda>_<sigma2>"))
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::Baseline => write!(f, "mb"),
            ModelId::M1(beta_star) => write!(f, "m1_{beta_star}"),
            ModelId::M2(lambda, sigma2) => write!(f, "m2_{lambda}_{sigma2}"),
        }
    }
}

/// The six benchmark scenarios with their fixed generator parameters.
/// Easy tank scenarios pit a clearly flattened ellipse against the
/// cylinder; hard ones a near-circular ellipse. Easy vessel scenarios use
/// a small head-thickness variation; hard ones a large one.
#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScenarioId {
    CveEasy,
    CveHard,
    ChvehEasy,
    ChvehHard,
    PvEasy,
    PvHard,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 6] = [
        ScenarioId::CveEasy,
        ScenarioId::CveHard,
        ScenarioId::ChvehEasy,
        ScenarioId::ChvehHard,
        ScenarioId::PvEasy,
        ScenarioId::PvHard,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::CveEasy => "cve-easy",
            ScenarioId::CveHard => "cve-hard",
            ScenarioId::ChvehEasy => "chveh-easy",
            ScenarioId::ChvehHard => "chveh-hard",
            ScenarioId::PvEasy => "pv-easy",
            ScenarioId::PvHard => "pv-hard",
        }
    }

    pub fn dataset(
        self,
        size: usize,
        imbalance: f64,
        seed: u64,
    ) -> fbeta_core::Result<LabeledDataset> {
        let config = SimConfig::new(size, imbalance, seed)?;
        match self {
            ScenarioId::CveEasy => simulate_ust(config, 3.2, 5.0, false),
            ScenarioId::CveHard => simulate_ust(config, 3.8, 4.2105, false),
            ScenarioId::ChvehEasy => simulate_ust(config, 3.2, 5.0, true),
            ScenarioId::ChvehHard => simulate_ust(config, 3.8, 4.2105, true),
            ScenarioId::PvEasy => simulate_pv(config, 1.7887, 0.0313),
            ScenarioId::PvHard => simulate_pv(config, 1.7887, 0.2817),
        }
    }
}
