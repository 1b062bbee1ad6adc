//! Pareto distribution primitives and upper-record-value machinery.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::math;

/// Shape/scale parameter pair of a Pareto law with density
/// `alpha * theta^alpha / x^(alpha+1)` on `x >= theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoParams {
    alpha: f64,
    theta: f64,
}

impl ParetoParams {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "shape must be positive and finite",
            });
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "scale must be positive and finite",
            });
        }
        Ok(Self { alpha, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// A strictly increasing sequence of upper record values.
///
/// Logarithms of the records are computed once at construction; every
/// estimator downstream works on them.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordSample {
    values: Vec<f64>,
    ln_values: Vec<f64>,
}

impl RecordSample {
    /// Validates and wraps a record sequence: strictly increasing, strictly
    /// positive, at least two entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InsufficientRecords {
                found: values.len(),
            });
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "record",
                    value: v,
                    reason: "records must be positive and finite",
                });
            }
            if i > 0 && v <= values[i - 1] {
                return Err(Error::NotIncreasing { index: i });
            }
        }
        let ln_values = values.iter().map(|&v| math::ln(v)).collect();
        Ok(Self { values, ln_values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("records are never empty")
    }

    pub fn ln_first(&self) -> f64 {
        self.ln_values[0]
    }

    pub fn ln_last(&self) -> f64 {
        *self.ln_values.last().expect("records are never empty")
    }

    /// Sum of the log-records (every record included).
    pub fn sum_ln(&self) -> f64 {
        self.ln_values.iter().sum()
    }
}

/// Density of the Pareto law; zero below the scale.
pub fn pdf(x: f64, p: &ParetoParams) -> f64 {
    if x < p.theta {
        return 0.0;
    }
    p.alpha * math::powf(p.theta, p.alpha) * math::powf(x, -(p.alpha + 1.0))
}

/// Distribution function; zero below the scale, `1 - (theta/x)^alpha` above.
pub fn cdf(x: f64, p: &ParetoParams) -> f64 {
    if x < p.theta {
        return 0.0;
    }
    1.0 - math::powf(p.theta / x, p.alpha)
}

/// Quantile function `theta * (1-u)^(-1/alpha)` for `u` in (0,1).
pub fn quantile(u: f64, p: &ParetoParams) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidParameter {
            name: "u",
            value: u,
            reason: "quantile level must lie strictly inside (0,1)",
        });
    }
    Ok(p.theta * math::powf(1.0 - u, -1.0 / p.alpha))
}

/// Draws the first `n` upper records of an i.i.d. Pareto sequence.
///
/// Uses the exponential representation: `ln(X/theta)` is exponential with
/// rate `alpha`, and the record increments of an exponential sequence are
/// again i.i.d. exponential, so the i-th log-record is a running sum of
/// `Exp(alpha)` variables. Exact and O(n), where rejection sampling against
/// the raw sequence would stall (records of heavy tails arrive
/// exponentially rarely).
pub fn gen_records<R: Rng + ?Sized>(
    p: &ParetoParams,
    n: usize,
    rng: &mut R,
) -> Result<RecordSample> {
    if n < 2 {
        return Err(Error::InsufficientRecords { found: n });
    }
    let exp = Exp::new(p.alpha).expect("alpha validated at construction");
    let mut values = Vec::with_capacity(n);
    let mut g = 0.0;
    for _ in 0..n {
        g += exp.sample(rng);
        values.push(p.theta * math::exp(g));
    }
    RecordSample::new(values)
}

/// Joint log-likelihood of two independent record samples, strength records
/// with shape `a1` and stress records with shape `a2`, sharing scale `theta`:
///
/// `n ln a1 + m ln a2 + (a1+a2) ln theta - a1 ln r_n - a2 ln s_m
///  - sum ln r_i - sum ln s_i`,  valid for `theta < min(r_1, s_1)`.
pub fn log_likelihood(
    a1: f64,
    a2: f64,
    theta: f64,
    rec_r: &RecordSample,
    rec_s: &RecordSample,
) -> Result<f64> {
    if !(a1 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "a1",
            value: a1,
            reason: "shape must be positive",
        });
    }
    if !(a2 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "a2",
            value: a2,
            reason: "shape must be positive",
        });
    }
    let min_record = rec_r.first().min(rec_s.first());
    if !(theta > 0.0) || theta >= min_record {
        return Err(Error::SupportViolation { theta, min_record });
    }
    let n = rec_r.len() as f64;
    let m = rec_s.len() as f64;
    Ok(n * math::ln(a1) + m * math::ln(a2) + (a1 + a2) * math::ln(theta)
        - a1 * rec_r.ln_last()
        - a2 * rec_s.ln_last()
        - rec_r.sum_ln()
        - rec_s.sum_ln())
}

/// Two-sided one-sample Kolmogorov-Smirnov statistic
/// `D = max(D+, D-)` of `data` against the given Pareto law.
pub fn ks_statistic(data: &[f64], p: &ParetoParams) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut sorted: Vec<f64> = data.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x, p);
        let d_plus = (i + 1) as f64 / n - f;
        let d_minus = f - i as f64 / n;
        d = d.max(d_plus).max(d_minus);
    }
    Ok(d)
}

/// Extracts the upper records (successive strict maxima, first element
/// always included) from a raw observation sequence.
pub fn extract_upper_records(raw: &[f64]) -> Result<RecordSample> {
    if raw.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut records = Vec::new();
    let mut current = f64::NEG_INFINITY;
    for &x in raw {
        if x > current {
            records.push(x);
            current = x;
        }
    }
    RecordSample::new(records)
}
