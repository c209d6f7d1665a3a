//! Brute-force sampling estimates of Pr(F_β ≤ z) for both mixture models.
//!
//! These estimators are deliberately independent of the closed forms: they
//! draw the decomposition components directly and count, which is what the
//! verification harness compares the closed forms against.

use crate::dist::{GaussInvExpMixture, UniformMixture};
use crate::error::{Error, Result};
use crate::fbeta::PrecisionRecall;
use crate::rng::{self, SeededRng};

/// A sampled probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub probability: f64,
    pub standard_error: f64,
    pub sample_count: u64,
    pub seed: u64,
}

impl OracleEstimate {
    fn from_hits(hits: u64, count: u64, seed: u64) -> Self {
        let probability = hits as f64 / count as f64;
        let standard_error = (probability * (1.0 - probability) / count as f64).sqrt();
        Self { probability, standard_error, sample_count: count, seed }
    }
}

/// Estimates Pr(X₁·X₂ ≤ z) for X₁ = r′ + U(0,β*), X₂ = 1/(U(0,β*) + r).
///
/// `count` must be at least 10⁴ for the standard error to be meaningful.
pub fn sample_uiu(
    pr: &PrecisionRecall,
    model: &UniformMixture,
    z: f64,
    count: u64,
    seed: u64,
) -> Result<OracleEstimate> {
    assert!(count >= 10_000, "oracle needs at least 1e4 samples");
    let r = pr.recall();
    if r == 0.0 {
        return Err(Error::DegenerateInput("sample_uiu requires recall > 0"));
    }
    let rp = pr.r_prime();
    let bs = model.beta_star();
    let mut stream: SeededRng = rng::seeded(seed);
    let mut hits = 0u64;
    for _ in 0..count {
        let x1 = rp + rng::uniform(&mut stream, 0.0, bs);
        let x2 = 1.0 / (rng::uniform(&mut stream, 0.0, bs) + r);
        if x1 * x2 <= z {
            hits += 1;
        }
    }
    Ok(OracleEstimate::from_hits(hits, count, seed))
}

/// Estimates Pr(X₁·X₂ ≤ z) for X₁ = r′ + Gaussian(0,σ²),
/// X₂ = 1/(Exponential(λ) + r).
///
/// With r = 0 an exactly-zero exponential draw would divide by zero; that
/// probability-zero event is resampled. `count` must be at least 10⁴.
pub fn sample_gaie(
    pr: &PrecisionRecall,
    model: &GaussInvExpMixture,
    z: f64,
    count: u64,
    seed: u64,
) -> Result<OracleEstimate> {
    assert!(count >= 10_000, "oracle needs at least 1e4 samples");
    let r = pr.recall();
    let rp = pr.r_prime();
    let (lam, s2) = (model.lambda(), model.sigma2());
    let mut stream: SeededRng = rng::seeded(seed);
    let mut hits = 0u64;
    for _ in 0..count {
        let x1 = rp + rng::gaussian(&mut stream, 0.0, s2);
        let denom = loop {
            let d = rng::exponential(&mut stream, lam) + r;
            if d > 0.0 {
                break d;
            }
        };
        if x1 / denom <= z {
            hits += 1;
        }
    }
    Ok(OracleEstimate::from_hits(hits, count, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{cdf_gaie, cdf_uiu, norm_cdf, CdfQuery};

    fn pr(p: f64, r: f64) -> PrecisionRecall {
        PrecisionRecall::new(p, r).unwrap()
    }

    #[test]
    fn support_bounds_give_exact_zero_and_one() {
        let model = UniformMixture::new(8.0).unwrap();
        let below = sample_uiu(&pr(0.5, 0.5), &model, 0.01, 100_000, 7).unwrap();
        assert_eq!(below.probability, 0.0);
        let above = sample_uiu(&pr(0.5, 0.5), &model, 20.0, 100_000, 7).unwrap();
        assert_eq!(above.probability, 1.0);
    }

    #[test]
    fn total_mass_at_huge_z() {
        let model = GaussInvExpMixture::new(0.5, 0.5).unwrap();
        let est = sample_gaie(&pr(0.5, 0.5), &model, 1e6, 10_000, 1).unwrap();
        assert_eq!(est.probability, 1.0);
    }

    #[test]
    fn uiu_estimate_brackets_closed_form() {
        let model = UniformMixture::new(8.0).unwrap();
        let q = CdfQuery::new(0.4, pr(0.5, 0.5));
        let closed = cdf_uiu(&q, &model).unwrap();
        let est = sample_uiu(&pr(0.5, 0.5), &model, 0.4, 1_000_000, 42).unwrap();
        let d = (closed - est.probability).abs();
        assert!(d <= 3.0 * est.standard_error, "|d|={d} > 3SE={}", 3.0 * est.standard_error);
    }

    #[test]
    fn gaie_estimate_brackets_closed_form() {
        let model = GaussInvExpMixture::new(2.0, 0.5).unwrap();
        let q = CdfQuery::new(0.8, pr(0.3, 0.9));
        let closed = cdf_gaie(&q, &model).unwrap();
        let est = sample_gaie(&pr(0.3, 0.9), &model, 0.8, 1_000_000, 9).unwrap();
        let d = (closed - est.probability).abs();
        assert!(d <= 3.0 * est.standard_error, "|d|={d} > 3SE={}", 3.0 * est.standard_error);
    }

    #[test]
    fn gaie_zero_point_matches_normal_cdf() {
        let model = GaussInvExpMixture::new(0.5, 0.5).unwrap();
        let est = sample_gaie(&pr(0.7, 0.6), &model, 0.0, 1_000_000, 1).unwrap();
        let want = norm_cdf(0.0, 0.42, 0.5);
        assert!((est.probability - want).abs() <= 3.0 * est.standard_error);
    }

    #[test]
    fn zero_recall_supported_only_for_the_exponential_family() {
        let u = UniformMixture::new(8.0).unwrap();
        assert!(sample_uiu(&pr(0.5, 0.0), &u, 0.4, 10_000, 7).is_err());
        // The exponential denominator is positive almost surely, so r = 0
        // still samples fine.
        let g = GaussInvExpMixture::new(1.0, 1.0).unwrap();
        let est = sample_gaie(&pr(0.5, 0.0), &g, 0.3, 10_000, 7).unwrap();
        assert!(est.probability > 0.0 && est.probability < 1.0);
    }

    #[test]
    fn estimates_are_deterministic_per_seed() {
        let model = UniformMixture::new(16.0).unwrap();
        let a = sample_uiu(&pr(0.3, 0.7), &model, 0.5, 50_000, 123).unwrap();
        let b = sample_uiu(&pr(0.3, 0.7), &model, 0.5, 50_000, 123).unwrap();
        assert_eq!(a.probability.to_bits(), b.probability.to_bits());
        let c = sample_uiu(&pr(0.3, 0.7), &model, 0.5, 50_000, 124).unwrap();
        assert_ne!(a.probability.to_bits(), c.probability.to_bits());
    }

    #[test]
    fn same_seed_estimates_are_monotone_in_z() {
        let model = GaussInvExpMixture::new(1.0, 1.0).unwrap();
        let mut prev = -1.0;
        for z in [-0.5, 0.0, 0.2, 0.5, 0.9, 1.5, 3.0] {
            let est = sample_gaie(&pr(0.4, 0.6), &model, z, 50_000, 5).unwrap();
            assert!(est.probability >= prev, "z={z}");
            prev = est.probability;
        }
    }

    #[test]
    fn standard_error_matches_binomial_formula() {
        let model = UniformMixture::new(8.0).unwrap();
        let est = sample_uiu(&pr(0.5, 0.5), &model, 0.4, 64_000, 3).unwrap();
        let want = (est.probability * (1.0 - est.probability) / 64_000.0).sqrt();
        assert_eq!(est.standard_error, want);
        assert_eq!(est.sample_count, 64_000);
        assert_eq!(est.seed, 3);
    }
}
