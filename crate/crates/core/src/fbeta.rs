//! Effectiveness measure, the generalized F-beta family, and the
//! multiplicative decomposition used by the distribution modules.

use crate::error::{Error, Result};

/// A validated precision/recall pair in the unit square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionRecall {
    precision: f64,
    recall: f64,
}

impl PrecisionRecall {
    /// Rejects values outside [0, 1] or non-finite.
    pub fn new(precision: f64, recall: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&precision) || !precision.is_finite() {
            return Err(Error::InvalidParameter {
                name: "precision",
                value: precision,
            });
        }
        if !(0.0..=1.0).contains(&recall) || !recall.is_finite() {
            return Err(Error::InvalidParameter {
                name: "recall",
                value: recall,
            });
        }
        Ok(Self { precision, recall })
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }

    pub fn recall(&self) -> f64 {
        self.recall
    }

    /// The product p·r, the location parameter shared by both mixture models.
    pub fn r_prime(&self) -> f64 {
        self.precision * self.recall
    }
}

/// Derivative order n for the generalized F-beta family; n = 2 is a pole of
/// the exponent −2/(n−2) and is rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralOrder {
    n: f64,
}

impl GeneralOrder {
    /// Order 1, which recovers the classic F-beta.
    pub const CLASSIC: GeneralOrder = GeneralOrder { n: 1.0 };

    pub fn new(n: f64) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() || n == 2.0 {
            return Err(Error::InvalidParameter { name: "order", value: n });
        }
        Ok(Self { n })
    }

    pub fn get(&self) -> f64 {
        self.n
    }

    /// The weight exponent −2/(n−2); equals 2 at the classic order.
    fn exponent(&self) -> f64 {
        -2.0 / (self.n - 2.0)
    }
}

/// The additive split of F-beta's numerator and denominator: X₁ = r′ + β′
/// and X₂ = (β″ + r)⁻¹ multiply back to F-beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    /// p·r
    pub r_prime: f64,
    /// β²·p·r
    pub beta_prime: f64,
    /// β²·p
    pub beta_double_prime: f64,
}

/// Weighted-harmonic effectiveness E = 1 − 1/(α/p + (1−α)/r).
///
/// Requires p > 0 and r > 0 so both reciprocals exist.
pub fn effectiveness(pr: &PrecisionRecall, alpha: f64) -> Result<f64> {
    assert!((0.0..=1.0).contains(&alpha), "alpha must be in [0,1]");
    let (p, r) = (pr.precision(), pr.recall());
    if p == 0.0 || r == 0.0 {
        return Err(Error::DegenerateInput("effectiveness requires p > 0 and r > 0"));
    }
    Ok(1.0 - 1.0 / (alpha / p + (1.0 - alpha) / r))
}

/// Generalized F-beta: ((β^(−2/(n−2)) + 1)·p·r) / (β^(−2/(n−2))·p + r).
///
/// At order 1 this is the classic F-beta. Only p = r = 0 is undefined (0/0);
/// a single zero coordinate yields 0.
pub fn f_beta_general(pr: &PrecisionRecall, beta: f64, order: GeneralOrder) -> Result<f64> {
    assert!(beta > 0.0, "beta must be positive");
    let (p, r) = (pr.precision(), pr.recall());
    if p == 0.0 && r == 0.0 {
        return Err(Error::DegenerateInput("f_beta is 0/0 at p = r = 0"));
    }
    let c = beta.powf(order.exponent());
    Ok(((c + 1.0) * p * r) / (c * p + r))
}

/// Classic F-beta (order 1).
pub fn f_beta(pr: &PrecisionRecall, beta: f64) -> Result<f64> {
    f_beta_general(pr, beta, GeneralOrder::CLASSIC)
}

/// The alpha that makes the effectiveness measure coincide with F-beta at
/// derivative order n: 1/(β^(−2/(n−2)) + 1).
pub fn alpha_n(beta: f64, order: GeneralOrder) -> f64 {
    assert!(beta > 0.0, "beta must be positive");
    1.0 / (beta.powf(order.exponent()) + 1.0)
}

/// Splits (p, r, β) into the numerator/denominator components whose
/// ratio reconstructs the classic F-beta.
pub fn decompose(pr: &PrecisionRecall, beta: f64) -> Decomposition {
    assert!(beta > 0.0, "beta must be positive");
    let b2 = beta * beta;
    Decomposition {
        r_prime: pr.r_prime(),
        beta_prime: b2 * pr.r_prime(),
        beta_double_prime: b2 * pr.precision(),
    }
}
