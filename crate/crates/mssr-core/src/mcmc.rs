//! Posterior sampling for the reliability: a plain Gibbs sampler when the
//! scale is known (both shape conditionals are gamma) and a
//! Metropolis-within-Gibbs scheme when it is not (the scale conditional has
//! no standard form and is updated by a Gaussian random walk).
//!
//! Chains are fully reproducible: all randomness comes from the seed in
//! [`McmcConfig`].

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::classical::{self, IntervalEstimate, IntervalMethod};
use crate::error::{Error, Result};
use crate::lindley::PriorConfig;
use crate::math;
use crate::pareto::RecordSample;
use crate::reliability::{self, SystemSpec};

/// Sampler configuration. `chain_length` counts every sweep, including the
/// `burn_in` prefix that is discarded; `proposal_sd` is the scale of the
/// random-walk proposal for the scale parameter (`None` picks a tenth of
/// the smallest record and adapts during burn-in).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McmcConfig {
    pub chain_length: usize,
    pub burn_in: usize,
    pub proposal_sd: Option<f64>,
    pub seed: u64,
    pub thinning: usize,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig {
            chain_length: 11_000,
            burn_in: 1_000,
            proposal_sd: None,
            seed: 0,
            thinning: 1,
        }
    }
}

impl McmcConfig {
    fn validate(&self) -> Result<()> {
        if self.burn_in >= self.chain_length {
            return Err(Error::InvalidParameter {
                name: "burn_in",
                value: self.burn_in as f64,
                reason: "burn-in must be shorter than the chain",
            });
        }
        if self.thinning < 1 {
            return Err(Error::InvalidParameter {
                name: "thinning",
                value: self.thinning as f64,
                reason: "thinning must be at least 1",
            });
        }
        if let Some(sd) = self.proposal_sd {
            if !(sd > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "proposal_sd",
                    value: sd,
                    reason: "proposal scale must be positive",
                });
            }
        }
        Ok(())
    }
}

/// One retained sweep of the sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainDraw {
    pub alpha1: f64,
    pub alpha2: f64,
    pub theta: f64,
    pub r: f64,
}

/// Post-burn-in draws together with the scale-move acceptance rate
/// (1.0 in known-scale mode, where no accept/reject step exists).
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorChain {
    draws: Vec<ChainDraw>,
    acceptance_rate: f64,
    tuning_warning: bool,
}

impl PosteriorChain {
    /// Wraps precomputed draws; used by harnesses and tests.
    pub fn from_draws(draws: Vec<ChainDraw>, acceptance_rate: f64) -> Self {
        let tuning_warning = !(0.05..=0.95).contains(&acceptance_rate);
        PosteriorChain {
            draws,
            acceptance_rate,
            tuning_warning,
        }
    }

    pub fn draws(&self) -> &[ChainDraw] {
        &self.draws
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn r_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.draws.iter().map(|d| d.r)
    }

    /// Acceptance rate of the scale random-walk moves after burn-in.
    pub fn acceptance_rate(&self) -> f64 {
        self.acceptance_rate
    }

    /// Set when the post-burn-in acceptance rate fell outside [0.05, 0.95];
    /// the chain is still usable, but the proposal scale deserves a look.
    pub fn tuning_warning(&self) -> bool {
        self.tuning_warning
    }
}

fn shape_posterior(
    len: usize,
    prior_a: f64,
    prior_b: f64,
    ln_top_record: f64,
    ln_theta: f64,
) -> Gamma<f64> {
    let shape = len as f64 + prior_a;
    let rate = prior_b + (ln_top_record - ln_theta);
    Gamma::new(shape, 1.0 / rate).expect("positive shape and rate")
}

/// Gibbs sampler for known scale: the shape conditionals are
/// `Gamma(n + a1, b1 + ln(r_n/theta))` and `Gamma(m + a2, b2 + ln(s_m/theta))`
/// (rate parameterisation), drawn independently each sweep.
pub fn gibbs_known_theta(
    rec_r: &RecordSample,
    rec_s: &RecordSample,
    theta: f64,
    prior: &PriorConfig,
    spec: &SystemSpec,
    cfg: &McmcConfig,
) -> Result<PosteriorChain> {
    cfg.validate()?;
    let min_record = rec_r.first().min(rec_s.first());
    if !(theta > 0.0) || theta > min_record {
        return Err(Error::SupportViolation { theta, min_record });
    }
    let ln_theta = math::ln(theta);
    let g1 = shape_posterior(rec_r.len(), prior.a1, prior.b1, rec_r.ln_last(), ln_theta);
    let g2 = shape_posterior(rec_s.len(), prior.a2, prior.b2, rec_s.ln_last(), ln_theta);
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let retained = (cfg.chain_length - cfg.burn_in).div_ceil(cfg.thinning);
    let mut draws = Vec::with_capacity(retained);
    for t in 0..cfg.chain_length {
        let alpha1 = g1.sample(&mut rng);
        let alpha2 = g2.sample(&mut rng);
        if t >= cfg.burn_in && (t - cfg.burn_in).is_multiple_of(cfg.thinning) {
            let r = reliability::r_sk(alpha1, alpha2, spec)?.value();
            draws.push(ChainDraw {
                alpha1,
                alpha2,
                theta,
                r,
            });
        }
    }
    Ok(PosteriorChain {
        draws,
        acceptance_rate: 1.0,
        tuning_warning: false,
    })
}

/// Metropolis-within-Gibbs sampler for unknown scale.
///
/// Each sweep updates the scale by a Gaussian random walk targeting its
/// full conditional, proportional to `theta^(a1+a2+a3-1) exp(-b3 theta)` on
/// `(0, min(r_1, s_1))` (the exponent with `a3 - 1` is the one consistent
/// with the joint posterior); proposals outside the support are rejected.
/// The shape draws of sweep `t` condition on the scale of sweep `t-1`,
/// which leaves every marginal unchanged. The proposal scale defaults to a
/// tenth of the smallest record and is adapted during burn-in towards a
/// 30-45% acceptance rate, then frozen so the stationary law is untouched.
pub fn mh_within_gibbs(
    rec_r: &RecordSample,
    rec_s: &RecordSample,
    prior: &PriorConfig,
    spec: &SystemSpec,
    cfg: &McmcConfig,
) -> Result<PosteriorChain> {
    cfg.validate()?;
    let min_record = rec_r.first().min(rec_s.first());
    let fit = classical::mle_unknown_theta(rec_r, rec_s);
    let mut alpha1 = fit.alpha1_hat;
    let mut alpha2 = fit.alpha2_hat;
    // Start strictly inside the support rather than on its edge.
    let mut theta = 0.99 * min_record;
    let mut sd = cfg.proposal_sd.unwrap_or(0.1 * min_record);
    let adapt = cfg.proposal_sd.is_none();

    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let retained = (cfg.chain_length - cfg.burn_in).div_ceil(cfg.thinning);
    let mut draws = Vec::with_capacity(retained);
    let mut accepted_post = 0usize;
    let mut attempted_post = 0usize;
    let mut accepted_window = 0usize;
    const ADAPT_WINDOW: usize = 100;

    for t in 0..cfg.chain_length {
        // Scale move given the current shapes.
        let proposal = Normal::new(theta, sd).expect("finite proposal scale");
        let candidate = proposal.sample(&mut rng);
        let theta_prev = theta;
        let mut accepted = false;
        if candidate > 0.0 && candidate < min_record {
            let exponent = alpha1 + alpha2 + prior.a3 - 1.0;
            let log_ratio = exponent * (math::ln(candidate) - math::ln(theta))
                - prior.b3 * (candidate - theta);
            if log_ratio >= 0.0 || math::ln(rng.random::<f64>()) < log_ratio {
                theta = candidate;
                accepted = true;
            }
        }
        if t >= cfg.burn_in {
            attempted_post += 1;
            accepted_post += accepted as usize;
        } else {
            accepted_window += accepted as usize;
            if adapt && (t + 1) % ADAPT_WINDOW == 0 {
                let rate = accepted_window as f64 / ADAPT_WINDOW as f64;
                if rate < 0.30 {
                    sd *= 0.8;
                } else if rate > 0.45 {
                    sd *= 1.25;
                }
                sd = sd.clamp(1e-10 * min_record, 10.0 * min_record);
                accepted_window = 0;
            }
        }

        // Shape draws conditioned on the previous sweep's scale.
        let g1 = shape_posterior(
            rec_r.len(),
            prior.a1,
            prior.b1,
            rec_r.ln_last(),
            math::ln(theta_prev),
        );
        let g2 = shape_posterior(
            rec_s.len(),
            prior.a2,
            prior.b2,
            rec_s.ln_last(),
            math::ln(theta_prev),
        );
        alpha1 = g1.sample(&mut rng);
        alpha2 = g2.sample(&mut rng);

        assert!(theta > 0.0 && theta < min_record, "scale left its support");
        if t >= cfg.burn_in && (t - cfg.burn_in).is_multiple_of(cfg.thinning) {
            let r = reliability::r_sk(alpha1, alpha2, spec)?.value();
            draws.push(ChainDraw {
                alpha1,
                alpha2,
                theta,
                r,
            });
        }
    }
    let acceptance_rate = accepted_post as f64 / attempted_post.max(1) as f64;
    Ok(PosteriorChain {
        draws,
        acceptance_rate,
        tuning_warning: !(0.05..=0.95).contains(&acceptance_rate),
    })
}

/// Posterior mean of the reliability draws (squared-error Bayes estimate).
pub fn point_sel(chain: &PosteriorChain) -> Result<f64> {
    if chain.is_empty() {
        return Err(Error::EmptyChain);
    }
    Ok(chain.r_values().sum::<f64>() / chain.len() as f64)
}

/// LINEX Bayes estimate `-(1/c) ln mean(exp(-c R))`, evaluated through a
/// max-shifted log-sum-exp so extreme `c` cannot overflow.
pub fn point_linex(chain: &PosteriorChain, c: f64) -> Result<f64> {
    if chain.is_empty() {
        return Err(Error::EmptyChain);
    }
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidParameter {
            name: "c",
            value: c,
            reason: "LINEX loss is undefined at c = 0",
        });
    }
    let max = chain
        .r_values()
        .map(|r| -c * r)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = chain.r_values().map(|r| math::exp(-c * r - max)).sum();
    let ln_mean = max + math::ln(sum / chain.len() as f64);
    Ok(-ln_mean / c)
}

/// Highest-posterior-density interval by the sorted-draw sliding window:
/// among all contiguous windows holding `ceil(level * T)` draws, the
/// narrowest one (ties resolved towards the smallest lower endpoint).
pub fn hpd_interval(chain: &PosteriorChain, level: f64) -> Result<IntervalEstimate> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter {
            name: "level",
            value: level,
            reason: "credible level must lie strictly inside (0,1)",
        });
    }
    const MIN_LEN: usize = 100;
    if chain.len() < MIN_LEN {
        return Err(Error::ChainTooShort {
            len: chain.len(),
            min: MIN_LEN,
        });
    }
    let mut sorted: Vec<f64> = chain.r_values().collect();
    sorted.sort_unstable_by(f64::total_cmp);
    let t = sorted.len();
    let w = libm::ceil(level * t as f64) as usize;
    let w = w.clamp(1, t);
    let mut best_j = 0;
    let mut best_width = f64::INFINITY;
    for j in 0..=t - w {
        let width = sorted[j + w - 1] - sorted[j];
        if width < best_width {
            best_width = width;
            best_j = j;
        }
    }
    Ok(IntervalEstimate::clamped(
        sorted[best_j],
        sorted[best_j + w - 1],
        level,
        IntervalMethod::Hpd,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn records() -> (RecordSample, RecordSample) {
        (
            RecordSample::new(alloc::vec![0.40, 82.85, 89.29, 215.10]).unwrap(),
            RecordSample::new(alloc::vec![0.47, 0.73, 1.40, 2.38]).unwrap(),
        )
    }

    fn prior() -> PriorConfig {
        PriorConfig::new([3.0, 3.0, 3.0], [1.5, 1.5, 1.5]).unwrap()
    }

    fn constant_chain(r: f64, len: usize) -> PosteriorChain {
        let draws = (0..len)
            .map(|_| ChainDraw {
                alpha1: 1.0,
                alpha2: 1.0,
                theta: 0.5,
                r,
            })
            .collect();
        PosteriorChain::from_draws(draws, 1.0)
    }

    #[test]
    fn config_validation() {
        let bad = McmcConfig {
            chain_length: 100,
            burn_in: 100,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad_thin = McmcConfig {
            thinning: 0,
            ..Default::default()
        };
        assert!(bad_thin.validate().is_err());
    }

    #[test]
    fn point_estimates_on_constant_chain() {
        let chain = constant_chain(0.7, 50);
        assert_abs_diff_eq!(point_sel(&chain).unwrap(), 0.7, epsilon = 1e-15);
        for &c in &[-2.0, 0.5, 1.0, 7.0] {
            assert_abs_diff_eq!(point_linex(&chain, c).unwrap(), 0.7, epsilon = 1e-12);
        }
        assert!(point_linex(&chain, 0.0).is_err());
        let empty = PosteriorChain::from_draws(alloc::vec::Vec::new(), 1.0);
        assert!(point_sel(&empty).is_err());
        assert!(point_linex(&empty, 1.0).is_err());
    }

    #[test]
    fn two_point_chain_mean() {
        let mut draws = alloc::vec::Vec::new();
        for &r in &[0.6, 0.8] {
            draws.push(ChainDraw {
                alpha1: 1.0,
                alpha2: 1.0,
                theta: 0.5,
                r,
            });
        }
        let chain = PosteriorChain::from_draws(draws, 1.0);
        assert_abs_diff_eq!(point_sel(&chain).unwrap(), 0.7, epsilon = 1e-15);
        // Jensen: strictly convex transform pulls the LINEX value below the mean.
        assert!(point_linex(&chain, 1.0).unwrap() < 0.7);
        assert!(point_linex(&chain, -1.0).unwrap() > 0.7);
    }

    #[test]
    fn linex_monotone_in_c() {
        let (rec_r, rec_s) = records();
        let cfg = McmcConfig {
            chain_length: 3000,
            burn_in: 500,
            seed: 9,
            ..Default::default()
        };
        let spec = SystemSpec::new(2, 4).unwrap();
        let chain = mh_within_gibbs(&rec_r, &rec_s, &prior(), &spec, &cfg).unwrap();
        let mut last = f64::INFINITY;
        for &c in &[-1.5, -1.0, -0.5, 0.5, 1.0, 1.5] {
            let v = point_linex(&chain, c).unwrap();
            assert!(v <= last + 1e-12, "LINEX must be nonincreasing in c");
            last = v;
        }
        let sel = point_sel(&chain).unwrap();
        assert!(point_linex(&chain, 1.0).unwrap() < sel);
    }

    #[test]
    fn chains_are_seed_deterministic() {
        let (rec_r, rec_s) = records();
        let spec = SystemSpec::new(2, 4).unwrap();
        let cfg = McmcConfig {
            chain_length: 500,
            burn_in: 100,
            seed: 1234,
            ..Default::default()
        };
        let a = mh_within_gibbs(&rec_r, &rec_s, &prior(), &spec, &cfg).unwrap();
        let b = mh_within_gibbs(&rec_r, &rec_s, &prior(), &spec, &cfg).unwrap();
        assert_eq!(a, b);
        let g1 = gibbs_known_theta(&rec_r, &rec_s, 0.4, &prior(), &spec, &cfg).unwrap();
        let g2 = gibbs_known_theta(&rec_r, &rec_s, 0.4, &prior(), &spec, &cfg).unwrap();
        assert_eq!(g1, g2);
        assert_abs_diff_eq!(g1.acceptance_rate(), 1.0);
    }

    #[test]
    fn theta_draws_respect_support() {
        let (rec_r, rec_s) = records();
        let spec = SystemSpec::new(2, 4).unwrap();
        let cfg = McmcConfig {
            chain_length: 2000,
            burn_in: 200,
            seed: 5,
            ..Default::default()
        };
        let chain = mh_within_gibbs(&rec_r, &rec_s, &prior(), &spec, &cfg).unwrap();
        for d in chain.draws() {
            assert!(d.theta > 0.0 && d.theta < 0.40);
            assert!(d.alpha1 > 0.0 && d.alpha2 > 0.0);
            assert!(d.r > 0.0 && d.r < 1.0);
        }
    }

    #[test]
    fn tight_prior_pulls_theta_down() {
        let (rec_r, rec_s) = records();
        let spec = SystemSpec::new(2, 4).unwrap();
        let cfg = McmcConfig {
            chain_length: 4000,
            burn_in: 1000,
            seed: 2,
            ..Default::default()
        };
        let loose = mh_within_gibbs(&rec_r, &rec_s, &prior(), &spec, &cfg).unwrap();
        let heavy = PriorConfig::new([3.0, 3.0, 3.0], [1.5, 1.5, 5000.0]).unwrap();
        let pulled = mh_within_gibbs(&rec_r, &rec_s, &heavy, &spec, &cfg).unwrap();
        let mean = |c: &PosteriorChain| {
            c.draws().iter().map(|d| d.theta).sum::<f64>() / c.len() as f64
        };
        assert!(mean(&pulled) < 0.5 * mean(&loose));
    }

    #[test]
    fn hpd_on_uniform_grid() {
        let draws: Vec<ChainDraw> = (1..=100)
            .map(|i| ChainDraw {
                alpha1: 1.0,
                alpha2: 1.0,
                theta: 0.5,
                r: i as f64 / 100.0,
            })
            .collect();
        let chain = PosteriorChain::from_draws(draws, 1.0);
        let hpd = hpd_interval(&chain, 0.95).unwrap();
        // Every window spans 0.94; ties resolve to the lowest start.
        assert_abs_diff_eq!(hpd.lower, 0.01, epsilon = 1e-12);
        assert_abs_diff_eq!(hpd.upper, 0.95, epsilon = 1e-12);
        assert!(hpd_interval(&constant_chain(0.5, 99), 0.95).is_err());
        assert!(hpd_interval(&chain, 0.0).is_err());
        assert!(hpd_interval(&chain, 1.0).is_err());
    }

    #[test]
    fn hpd_beats_equal_tails_on_skewed_draws() {
        // A right-skewed cloud: the minimal window must not be wider than
        // the equal-tailed interval on the same draws.
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        let gamma = Gamma::new(3.0, 0.05).unwrap();
        let draws: Vec<ChainDraw> = (0..5000)
            .map(|_| {
                let r: f64 = 0.1 + gamma.sample(&mut rng);
                ChainDraw {
                    alpha1: 1.0,
                    alpha2: 1.0,
                    theta: 0.5,
                    r: r.min(0.999),
                }
            })
            .collect();
        let chain = PosteriorChain::from_draws(draws, 1.0);
        let hpd = hpd_interval(&chain, 0.9).unwrap();
        let mut sorted: Vec<f64> = chain.r_values().collect();
        sorted.sort_unstable_by(f64::total_cmp);
        let lo = sorted[(0.05 * sorted.len() as f64) as usize];
        let hi = sorted[(0.95 * sorted.len() as f64) as usize - 1];
        assert!(hpd.width() <= hi - lo + 1e-12);
    }
}
