//! Knee-point search for beta_opt from a single precision/recall pair.
//!
//! A grid of candidate betas is mapped through F_beta to z values, the
//! penalty model's CDF turns those into probabilities, and the knee of the
//! normalized curve (local maxima of the difference from the diagonal)
//! yields beta_opt. Every degenerate path falls back to the default beta.

use crate::dist::{cdf_gaie, cdf_uiu, CdfQuery, GaussInvExpMixture, UniformMixture};
use crate::error::{Error, Result};
use crate::fbeta::{f_beta, PrecisionRecall};

/// Which mixture family supplies the probabilities for the knee search.
///
/// The mixture's parameters stay fixed for the whole search; the grid
/// candidate enters only through z = F_beta(p, r). On the p = r diagonal z
/// is therefore constant and the search degenerates to the default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PenaltyModel {
    Uniform(UniformMixture),
    GaussInvExp(GaussInvExpMixture),
}

impl PenaltyModel {
    pub fn cdf(&self, query: &CdfQuery) -> Result<f64> {
        match self {
            PenaltyModel::Uniform(m) => cdf_uiu(query, m),
            PenaltyModel::GaussInvExp(m) => cdf_gaie(query, m),
        }
    }
}

/// Grid size, grid endpoint, and the fallback beta for degenerate inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KneeConfig {
    pub grid_size: usize,
    pub beta_max: f64,
    pub default_beta: f64,
}

impl KneeConfig {
    pub fn new(grid_size: usize, beta_max: f64) -> Result<Self> {
        if grid_size == 0 {
            return Err(Error::InvalidParameter { name: "grid_size", value: 0.0 });
        }
        if !(beta_max > 0.0) || !beta_max.is_finite() {
            return Err(Error::InvalidParameter { name: "beta_max", value: beta_max });
        }
        Ok(Self { grid_size, beta_max, default_beta: 1.0 })
    }
}

impl Default for KneeConfig {
    /// 300 grid points up to beta_max 16, defaulting to beta 1.
    fn default() -> Self {
        Self { grid_size: 300, beta_max: 16.0, default_beta: 1.0 }
    }
}

/// Every intermediate array of the knee search, for diagnostics and
/// equivalence testing. On the default path the arrays stop at whatever
/// stage degenerated; `used_default` is the authoritative flag.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KneeTrace {
    pub b_s: Vec<f64>,
    pub p_s: Vec<f64>,
    pub b_sn: Vec<f64>,
    pub p_sn: Vec<f64>,
    pub b_d: Vec<f64>,
    pub p_d: Vec<f64>,
    pub b_lmx: Vec<f64>,
    pub p_lmx: Vec<f64>,
    pub beta_opt: f64,
    pub used_default: bool,
}

/// The candidate grid: `grid_size` equally spaced values ending exactly at
/// `beta_max`, starting at beta_max/grid_size so all candidates are
/// strictly positive.
pub fn beta_grid(config: &KneeConfig) -> Vec<f64> {
    let n = config.grid_size;
    (1..=n)
        .map(|i| {
            if i == n {
                config.beta_max // exact endpoint, no round-trip error
            } else {
                config.beta_max * i as f64 / n as f64
            }
        })
        .collect()
}

fn array_max(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn array_min(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Runs the knee search; never fails. Degenerate inputs (CDF errors, flat
/// curves, no interior maxima, nonpositive mean) resolve to
/// `config.default_beta` with `used_default` set.
pub fn knee_beta_opt(
    pr: &PrecisionRecall,
    model: &PenaltyModel,
    config: &KneeConfig,
) -> (f64, KneeTrace) {
    let mut trace =
        KneeTrace { beta_opt: config.default_beta, used_default: true, ..KneeTrace::default() };
    trace.b_s = beta_grid(config);

    for &b in &trace.b_s {
        let z = match f_beta(pr, b) {
            Ok(z) => z,
            Err(_) => return (config.default_beta, trace),
        };
        match model.cdf(&CdfQuery::new(z, *pr)) {
            Ok(p_i) => trace.p_s.push(p_i),
            Err(_) => return (config.default_beta, trace),
        }
    }

    // A falling curve (r < p) is converted to a rising one by reflecting
    // against its maximum, so the knee is always a maximum of the
    // difference curve.
    if pr.recall() < pr.precision() {
        let p_max = array_max(&trace.p_s);
        for p_i in &mut trace.p_s {
            *p_i = p_max - *p_i;
        }
    }

    let b_max = array_max(&trace.b_s);
    let p_max = array_max(&trace.p_s);
    let b_min = array_min(&trace.b_s);
    let p_min = array_min(&trace.p_s);
    if b_max == b_min || p_max == p_min {
        return (config.default_beta, trace);
    }

    let n = trace.b_s.len();
    for i in 0..n {
        trace.b_sn.push((trace.b_s[i] - b_min) / (b_max - b_min));
        trace.p_sn.push((trace.p_s[i] - p_min) / (p_max - p_min));
    }
    for i in 0..n {
        trace.b_d.push(trace.b_sn[i]);
        trace.p_d.push(trace.p_sn[i] - trace.b_sn[i]);
    }
    for i in 1..n.saturating_sub(1) {
        if trace.p_d[i - 1] < trace.p_d[i] && trace.p_d[i + 1] < trace.p_d[i] {
            trace.p_lmx.push(trace.p_d[i]);
            trace.b_lmx.push(trace.b_d[i]);
        }
    }

    if trace.p_lmx.is_empty() {
        return (config.default_beta, trace);
    }
    let mean = trace.p_lmx.iter().sum::<f64>() / trace.p_lmx.len() as f64;
    if mean <= 0.0 {
        return (config.default_beta, trace);
    }
    trace.beta_opt = mean;
    trace.used_default = false;
    (mean, trace)
}

/// beta_opt over a resolution x resolution grid of (p, r) at k/resolution,
/// k = 1..=resolution; row index varies p, column index varies r.
pub fn beta_opt_surface(
    model: &PenaltyModel,
    config: &KneeConfig,
    resolution: usize,
) -> Vec<Vec<f64>> {
    assert!(resolution >= 2, "surface needs at least a 2x2 grid");
    (1..=resolution)
        .map(|i| {
            let p = i as f64 / resolution as f64;
            (1..=resolution)
                .map(|j| {
                    let r = j as f64 / resolution as f64;
                    let pr = PrecisionRecall::new(p, r).expect("grid point in unit square");
                    knee_beta_opt(&pr, model, config).0
                })
                .collect()
        })
        .collect()
}
