//! Parametric bootstrap of the plug-in reliability estimate for known
//! scale, and the three interval constructions built on it.
//!
//! Each replicate regenerates both record samples from the fitted shapes,
//! refits, and re-evaluates the reliability. Replicate `b` draws from its
//! own counter-mode stream derived from `(seed, b)`, so the collected
//! estimates do not depend on evaluation order.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::classical::{self, check_level_complement, IntervalEstimate, IntervalMethod, MleFit};
use crate::error::{Error, Result};
use crate::math;
use crate::pareto::{self, ParetoParams};
use crate::reliability::SystemSpec;

/// The bootstrap distribution of the reliability estimate: `estimates` are
/// the replicate values, `point` the original plug-in estimate and `se_hat`
/// the sample standard deviation of the replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapSample {
    estimates: Vec<f64>,
    point: f64,
    se_hat: f64,
}

impl BootstrapSample {
    /// Wraps externally produced replicate estimates around a point
    /// estimate; the spread is recomputed from the replicates.
    pub fn from_estimates(estimates: Vec<f64>, point: f64) -> Result<Self> {
        if estimates.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "estimates",
                value: estimates.len() as f64,
                reason: "need at least two bootstrap replicates",
            });
        }
        let b = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / b;
        let ss: f64 = estimates.iter().map(|e| (e - mean) * (e - mean)).sum();
        let se_hat = math::sqrt(ss / (b - 1.0));
        Ok(BootstrapSample {
            estimates,
            point,
            se_hat,
        })
    }

    pub fn estimates(&self) -> &[f64] {
        &self.estimates
    }

    pub fn point(&self) -> f64 {
        self.point
    }

    pub fn se_hat(&self) -> f64 {
        self.se_hat
    }

    pub fn len(&self) -> usize {
        self.estimates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.estimates.is_empty()
    }
}

/// Generates `b_count` parametric bootstrap replicates of the reliability
/// estimate from a known-scale fit.
pub fn boot_samples(
    fit: &MleFit,
    theta: f64,
    spec: &SystemSpec,
    b_count: usize,
    seed: u64,
) -> Result<BootstrapSample> {
    if b_count < 2 {
        return Err(Error::InvalidParameter {
            name: "b_count",
            value: b_count as f64,
            reason: "need at least two bootstrap replicates",
        });
    }
    let strength = ParetoParams::new(fit.alpha1_hat, theta)?;
    let stress = ParetoParams::new(fit.alpha2_hat, theta)?;
    let point = classical::mle_r_sk(fit, spec)?.value();

    let mut estimates = Vec::with_capacity(b_count);
    for b in 0..b_count {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let rec_r = pareto::gen_records(&strength, fit.n, &mut rng)?;
        let rec_s = pareto::gen_records(&stress, fit.m, &mut rng)?;
        let refit = classical::mle_known_theta(&rec_r, &rec_s, theta)?;
        estimates.push(classical::mle_r_sk(&refit, spec)?.value());
    }

    let mean = estimates.iter().sum::<f64>() / b_count as f64;
    let ss: f64 = estimates.iter().map(|e| (e - mean) * (e - mean)).sum();
    let se_hat = math::sqrt(ss / (b_count - 1) as f64);
    Ok(BootstrapSample {
        estimates,
        point,
        se_hat,
    })
}

/// Empirical quantile by linear interpolation between order statistics at
/// `h = (B-1) q + 1`; the single rule used everywhere in this module.
fn empirical_quantile(sorted: &[f64], q: f64) -> f64 {
    let b = sorted.len();
    let h = (b - 1) as f64 * q;
    let lo = libm::floor(h) as usize;
    let frac = h - lo as f64;
    if lo + 1 >= b {
        sorted[b - 1]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Standard-normal bootstrap interval `R_hat +- z_{1-beta/2} * se_hat`.
pub fn boot_normal_ci(bs: &BootstrapSample, beta: f64) -> Result<IntervalEstimate> {
    check_level_complement(beta)?;
    let z = math::std_normal_quantile(1.0 - beta / 2.0)?;
    Ok(IntervalEstimate::clamped(
        bs.point - z * bs.se_hat,
        bs.point + z * bs.se_hat,
        1.0 - beta,
        IntervalMethod::BootNormal,
    ))
}

/// Percentile interval: the empirical `beta/2` and `1-beta/2` quantiles of
/// the replicate estimates.
pub fn boot_percentile_ci(bs: &BootstrapSample, beta: f64) -> Result<IntervalEstimate> {
    check_level_complement(beta)?;
    let mut sorted = bs.estimates.clone();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(IntervalEstimate::clamped(
        empirical_quantile(&sorted, beta / 2.0),
        empirical_quantile(&sorted, 1.0 - beta / 2.0),
        1.0 - beta,
        IntervalMethod::BootPercentile,
    ))
}

/// Studentised-style interval from `T_b = (R_b - R_hat) / se_hat`
/// (the common large-sample simplification standardising every replicate
/// by the one bootstrap standard error rather than a nested bootstrap):
/// `(R_hat - t_{1-beta/2} se_hat, R_hat - t_{beta/2} se_hat)`.
pub fn boot_t_ci(bs: &BootstrapSample, beta: f64) -> Result<IntervalEstimate> {
    check_level_complement(beta)?;
    if bs.len() < 50 {
        return Err(Error::InvalidParameter {
            name: "b_count",
            value: bs.len() as f64,
            reason: "studentised quantiles need at least 50 replicates",
        });
    }
    if bs.se_hat == 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    let mut t: Vec<f64> = bs
        .estimates
        .iter()
        .map(|e| (e - bs.point) / bs.se_hat)
        .collect();
    t.sort_unstable_by(f64::total_cmp);
    let t_lo = empirical_quantile(&t, beta / 2.0);
    let t_hi = empirical_quantile(&t, 1.0 - beta / 2.0);
    Ok(IntervalEstimate::clamped(
        bs.point - t_hi * bs.se_hat,
        bs.point - t_lo * bs.se_hat,
        1.0 - beta,
        IntervalMethod::BootT,
    ))
}
