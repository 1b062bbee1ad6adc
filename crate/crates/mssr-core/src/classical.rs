//! Likelihood-based estimation: MLE of the shapes (scale known or not),
//! the plug-in reliability estimate, the uniformly minimum-variance
//! unbiased estimator for known scale, and the delta-method confidence
//! interval.

use crate::error::{Error, Result};
use crate::math::{self, KahanSum};
use crate::pareto::RecordSample;
use crate::reliability::{self, Reliability, SystemSpec};

/// Maximum-likelihood shape estimates for a record-sample pair.
///
/// `theta_hat` is populated only when the scale was estimated
/// (`min(r_1, s_1)`); in known-scale fits the scale never enters the fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleFit {
    pub alpha1_hat: f64,
    pub alpha2_hat: f64,
    pub theta_hat: Option<f64>,
    pub n: usize,
    pub m: usize,
}

/// How an interval estimate was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalMethod {
    Asymptotic,
    BootNormal,
    BootPercentile,
    BootT,
    Hpd,
}

impl IntervalMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            IntervalMethod::Asymptotic => "asymptotic",
            IntervalMethod::BootNormal => "boot-normal",
            IntervalMethod::BootPercentile => "boot-p",
            IntervalMethod::BootT => "boot-t",
            IntervalMethod::Hpd => "hpd",
        }
    }
}

/// A two-sided interval for the reliability.
///
/// Endpoints are clamped to [0,1] after construction; `raw_width` keeps the
/// pre-clamp length, which is what simulation-study average lengths are
/// computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalEstimate {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: IntervalMethod,
    pub raw_width: f64,
}

impl IntervalEstimate {
    pub(crate) fn clamped(lower: f64, upper: f64, level: f64, method: IntervalMethod) -> Self {
        IntervalEstimate {
            lower: lower.max(0.0),
            upper: upper.min(1.0).max(lower.max(0.0)),
            level,
            method,
            raw_width: upper - lower,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

pub(crate) fn check_level_complement(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "level complement must lie strictly inside (0,1)",
        });
    }
    Ok(())
}

/// MLE with the scale estimated by the smallest record overall:
/// `theta_hat = min(r_1, s_1)`, `alpha1_hat = n / ln(r_n/theta_hat)`,
/// `alpha2_hat = m / ln(s_m/theta_hat)`.
pub fn mle_unknown_theta(rec_r: &RecordSample, rec_s: &RecordSample) -> MleFit {
    let ln_theta = rec_r.ln_first().min(rec_s.ln_first());
    MleFit {
        alpha1_hat: rec_r.len() as f64 / (rec_r.ln_last() - ln_theta),
        alpha2_hat: rec_s.len() as f64 / (rec_s.ln_last() - ln_theta),
        theta_hat: Some(rec_r.first().min(rec_s.first())),
        n: rec_r.len(),
        m: rec_s.len(),
    }
}

/// MLE of the shapes when the common scale is known.
pub fn mle_known_theta(rec_r: &RecordSample, rec_s: &RecordSample, theta: f64) -> Result<MleFit> {
    let min_record = rec_r.first().min(rec_s.first());
    if !(theta > 0.0) || theta > min_record {
        return Err(Error::SupportViolation { theta, min_record });
    }
    let ln_theta = math::ln(theta);
    Ok(MleFit {
        alpha1_hat: rec_r.len() as f64 / (rec_r.ln_last() - ln_theta),
        alpha2_hat: rec_s.len() as f64 / (rec_s.ln_last() - ln_theta),
        theta_hat: None,
        n: rec_r.len(),
        m: rec_s.len(),
    })
}

/// Plug-in reliability estimate (MLE invariance).
pub fn mle_r_sk(fit: &MleFit, spec: &SystemSpec) -> Result<Reliability> {
    reliability::r_sk(fit.alpha1_hat, fit.alpha2_hat, spec)
}

/// UMVUE of the single expansion term `a2 / (a1 d + a2)` from the complete
/// sufficient statistics `u1 = ln(r_n/theta)`, `u2 = ln(s_m/theta)`.
///
/// Two alternating hypergeometric-style series, one per side of the
/// boundary `u2 = u1/d`; gamma-ratio coefficients are evaluated as
/// `exp(ln-gamma sums)` with explicit sign handling, since direct factorial
/// ratios overflow near n, m ~ 20 while the alternating signs amplify any
/// rounding.
pub fn umvue_varphi(u1: f64, u2: f64, d: u32, n: usize, m: usize) -> Result<f64> {
    if !(u1 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "u1",
            value: u1,
            reason: "log-spacing must be positive",
        });
    }
    if !(u2 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "u2",
            value: u2,
            reason: "log-spacing must be positive",
        });
    }
    if d < 1 {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d as f64,
            reason: "requires d >= 1",
        });
    }
    if n < 2 || m < 2 {
        return Err(Error::InsufficientRecords { found: n.min(m) });
    }
    let (nf, mf) = (n as f64, m as f64);
    let lg_base = math::ln_gamma(mf) + math::ln_gamma(nf);
    let mut acc = KahanSum::default();
    if u2 < u1 / d as f64 {
        let ln_ratio = math::ln(d as f64 * u2 / u1);
        for z in 0..n {
            let zf = z as f64;
            let lg = lg_base - math::ln_gamma(mf + zf) - math::ln_gamma(nf - zf) + zf * ln_ratio;
            let term = math::exp(lg);
            acc.add(if z % 2 == 0 { term } else { -term });
        }
    } else {
        let ln_ratio = math::ln(u1 / (d as f64 * u2));
        for z in 0..m - 1 {
            let zf = z as f64;
            let lg = lg_base - math::ln_gamma(nf + zf + 1.0) - math::ln_gamma(mf - zf - 1.0)
                + (zf + 1.0) * ln_ratio;
            let term = math::exp(lg);
            acc.add(if z % 2 == 0 { term } else { -term });
        }
    }
    Ok(acc.value())
}

/// UMVUE of the system reliability for known scale: the reliability
/// expansion with every term Rao-Blackwellised through [`umvue_varphi`].
///
/// The point estimate is deliberately not clamped to [0,1]: truncation
/// would destroy exact unbiasedness, the estimator's defining property.
pub fn umvue_r_sk(
    rec_r: &RecordSample,
    rec_s: &RecordSample,
    theta: f64,
    spec: &SystemSpec,
) -> Result<f64> {
    let min_record = rec_r.first().min(rec_s.first());
    if !(theta > 0.0) || theta > min_record {
        return Err(Error::SupportViolation { theta, min_record });
    }
    let ln_theta = math::ln(theta);
    let u1 = rec_r.ln_last() - ln_theta;
    let u2 = rec_s.ln_last() - ln_theta;
    let mut acc = KahanSum::default();
    for (coeff, d) in spec.terms() {
        acc.add(coeff as f64 * umvue_varphi(u1, u2, d, rec_r.len(), rec_s.len())?);
    }
    Ok(acc.value())
}

/// Delta-method asymptotic variance of the plug-in reliability estimate for
/// known scale: `w1^2 a1^2/n + w2^2 a2^2/m` evaluated at the fit (the shape
/// information matrix is diagonal with entries `n/a1^2`, `m/a2^2`).
pub fn asymptotic_variance(fit: &MleFit, spec: &SystemSpec) -> Result<f64> {
    let (w1, w2) = reliability::grad_r(fit.alpha1_hat, fit.alpha2_hat, spec)?;
    let a1 = fit.alpha1_hat;
    let a2 = fit.alpha2_hat;
    Ok(w1 * w1 * a1 * a1 / fit.n as f64 + w2 * w2 * a2 * a2 / fit.m as f64)
}

/// Two-sided asymptotic confidence interval
/// `R_hat +- z_{1-beta/2} * sqrt(AV)`, clamped to [0,1].
pub fn asymptotic_ci(fit: &MleFit, spec: &SystemSpec, beta: f64) -> Result<IntervalEstimate> {
    check_level_complement(beta)?;
    let r_hat = mle_r_sk(fit, spec)?.value();
    let se = math::sqrt(asymptotic_variance(fit, spec)?);
    let z = math::std_normal_quantile(1.0 - beta / 2.0)?;
    Ok(IntervalEstimate::clamped(
        r_hat - z * se,
        r_hat + z * se,
        1.0 - beta,
        IntervalMethod::Asymptotic,
    ))
}
