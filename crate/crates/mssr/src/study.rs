//! Monte Carlo study engine: point-estimator performance (average estimate
//! and mean squared error against the true reliability), interval coverage
//! and length, bias sweeps across the reliability range, and the
//! real-data pipeline.
//!
//! Replication `i` draws from a counter-mode stream derived from
//! `(seed, i)`, so any single cell can be reproduced in isolation and
//! parallel runs aggregate to bit-identical results in replication order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use mssr_core::bootstrap::{boot_normal_ci, boot_percentile_ci, boot_samples, boot_t_ci};
use mssr_core::classical::{
    asymptotic_ci, mle_known_theta, mle_r_sk, mle_unknown_theta, umvue_r_sk,
};
use mssr_core::lindley::{lindley_estimate_2param, lindley_estimate_3param, Loss};
use mssr_core::mcmc::{gibbs_known_theta, hpd_interval, mh_within_gibbs, point_linex, point_sel};
use mssr_core::pareto::{extract_upper_records, gen_records, ks_statistic};
use mssr_core::reliability::r_sk;
use mssr_core::{
    IntervalEstimate, McmcConfig, ParetoParams, PosteriorChain, PriorConfig, RecordSample,
    SystemSpec,
};

use crate::{Error, Result};

/// Point estimators a study can evaluate. `Oracle` returns the true
/// reliability and exists as a harness self-check (its MSE must be zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointEstimatorKind {
    Mle,
    Umvue,
    LindleySel,
    LindleyLinex,
    McmcSel,
    McmcLinex,
    Oracle,
}

impl PointEstimatorKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "mle" => Ok(Self::Mle),
            "umvue" => Ok(Self::Umvue),
            "lindley-sel" => Ok(Self::LindleySel),
            "lindley-linex" => Ok(Self::LindleyLinex),
            "mcmc-sel" => Ok(Self::McmcSel),
            "mcmc-linex" => Ok(Self::McmcLinex),
            "oracle" => Ok(Self::Oracle),
            other => Err(Error::config(format!("unknown point estimator `{other}`"))),
        }
    }

    fn needs_chain(&self) -> bool {
        matches!(self, Self::McmcSel | Self::McmcLinex)
    }

    fn is_linex(&self) -> bool {
        matches!(self, Self::LindleyLinex | Self::McmcLinex)
    }
}

/// Interval constructions a coverage study can evaluate. `FullRange`
/// always returns [0,1] and exists as a harness self-check (its coverage
/// must be one and its length one).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalKind {
    Asymptotic,
    BootNormal,
    BootP,
    BootT,
    Hpd,
    FullRange,
}

impl IntervalKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "asymptotic" => Ok(Self::Asymptotic),
            "boot-normal" => Ok(Self::BootNormal),
            "boot-p" => Ok(Self::BootP),
            "boot-t" => Ok(Self::BootT),
            "hpd" => Ok(Self::Hpd),
            "full-range" => Ok(Self::FullRange),
            other => Err(Error::config(format!("unknown interval kind `{other}`"))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::Asymptotic => "asymptotic",
            Self::BootNormal => "boot-normal",
            Self::BootP => "boot-p",
            Self::BootT => "boot-t",
            Self::Hpd => "hpd",
            Self::FullRange => "full-range",
        }
    }
}

/// Full description of a simulation scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub alpha1: f64,
    pub alpha2: f64,
    pub theta: f64,
    pub theta_known: bool,
    pub specs: Vec<(u32, u32)>,
    pub sizes: Vec<(usize, usize)>,
    pub replications: usize,
    pub point_estimators: Vec<PointEstimatorKind>,
    pub intervals: Vec<IntervalKind>,
    pub prior_a: [f64; 3],
    pub prior_b: [f64; 3],
    pub linex_cs: Vec<f64>,
    pub levels: Vec<f64>,
    pub seed: u64,
    pub bootstrap_b: usize,
    pub mcmc_length: usize,
    pub mcmc_burn_in: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            alpha1: 2.0,
            alpha2: 4.0,
            theta: 1.5,
            theta_known: false,
            specs: vec![(2, 4)],
            sizes: vec![(20, 20)],
            replications: 1000,
            point_estimators: vec![PointEstimatorKind::Mle],
            intervals: Vec::new(),
            prior_a: [2.0, 2.0, 2.0],
            prior_b: [1.5, 1.5, 1.5],
            linex_cs: vec![1.0],
            levels: vec![0.95],
            seed: 0,
            bootstrap_b: 2000,
            mcmc_length: 11_000,
            mcmc_burn_in: 1_000,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::config("replications must be at least 1"));
        }
        if self.specs.is_empty() {
            return Err(Error::config("at least one (s,k) spec is required"));
        }
        for &(s, k) in &self.specs {
            SystemSpec::new(s, k).map_err(|e| Error::config(e.to_string()))?;
        }
        if self.sizes.is_empty() {
            return Err(Error::config("at least one (n,m) size is required"));
        }
        for &(n, m) in &self.sizes {
            if n < 2 || m < 2 {
                return Err(Error::config("record sample sizes must be at least 2"));
            }
        }
        for &c in &self.linex_cs {
            if c == 0.0 || !c.is_finite() {
                return Err(Error::config("linex_c values must be nonzero"));
            }
        }
        for &l in &self.levels {
            if !(l > 0.0 && l < 1.0) {
                return Err(Error::config("levels must lie strictly inside (0,1)"));
            }
        }
        ParetoParams::new(self.alpha1, self.theta).map_err(|e| Error::config(e.to_string()))?;
        ParetoParams::new(self.alpha2, self.theta).map_err(|e| Error::config(e.to_string()))?;
        PriorConfig::new(self.prior_a, self.prior_b).map_err(|e| Error::config(e.to_string()))?;
        if self.mcmc_burn_in >= self.mcmc_length {
            return Err(Error::config("mcmc_burn_in must be below mcmc_length"));
        }
        if !self.theta_known {
            if self.point_estimators.contains(&PointEstimatorKind::Umvue) {
                return Err(Error::config(
                    "the umvue estimator requires theta_known = true",
                ));
            }
            for iv in &self.intervals {
                if matches!(
                    iv,
                    IntervalKind::Asymptotic
                        | IntervalKind::BootNormal
                        | IntervalKind::BootP
                        | IntervalKind::BootT
                ) {
                    return Err(Error::config(format!(
                        "interval `{}` requires theta_known = true",
                        iv.tag()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn prior(&self) -> PriorConfig {
        PriorConfig::new(self.prior_a, self.prior_b).expect("validated")
    }

    fn mcmc_config(&self, seed: u64) -> McmcConfig {
        McmcConfig {
            chain_length: self.mcmc_length,
            burn_in: self.mcmc_burn_in,
            proposal_sd: None,
            seed,
            thinning: 1,
        }
    }
}

/// One cell of study output. Point rows carry `ae`/`mse`; interval rows
/// carry `cp`/`al`/`level`. `failures` counts replications excluded because
/// the estimator reported a numerical failure (they are never imputed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McRow {
    pub estimator: String,
    pub n: usize,
    pub m: usize,
    pub s: u32,
    pub k: u32,
    pub true_r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ae: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mse: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub al: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    pub failures: usize,
}

/// Expanded point-estimator list: LINEX estimators appear once per
/// asymmetry value.
fn expand_point(cfg: &ScenarioConfig) -> Vec<(PointEstimatorKind, Option<f64>, String)> {
    let mut out = Vec::new();
    for &kind in &cfg.point_estimators {
        if kind.is_linex() {
            for &c in &cfg.linex_cs {
                let base = match kind {
                    PointEstimatorKind::LindleyLinex => "lindley-linex",
                    _ => "mcmc-linex",
                };
                out.push((kind, Some(c), format!("{base}[c={c}]")));
            }
        } else {
            let tag = match kind {
                PointEstimatorKind::Mle => "mle",
                PointEstimatorKind::Umvue => "umvue",
                PointEstimatorKind::LindleySel => "lindley-sel",
                PointEstimatorKind::McmcSel => "mcmc-sel",
                PointEstimatorKind::Oracle => "oracle",
                _ => unreachable!(),
            };
            out.push((kind, None, tag.to_string()));
        }
    }
    out
}

/// Per-replication values: spec index, then cell index, `None` on failure.
type RepPointValues = Vec<Vec<Option<f64>>>;
type RepIntervalValues = Vec<Vec<Option<(bool, f64)>>>;

struct RepContext {
    rec_r: RecordSample,
    rec_s: RecordSample,
    chain_seed: u64,
    boot_seed: u64,
}

/// Generates the data and derived seeds of replication `rep`; everything
/// downstream is deterministic given this context.
fn replication_context(cfg: &ScenarioConfig, n: usize, m: usize, rep: usize) -> RepContext {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(rep as u64 + 1);
    let strength = ParetoParams::new(cfg.alpha1, cfg.theta).expect("validated");
    let stress = ParetoParams::new(cfg.alpha2, cfg.theta).expect("validated");
    let rec_r = gen_records(&strength, n, &mut rng).expect("n >= 2");
    let rec_s = gen_records(&stress, m, &mut rng).expect("m >= 2");
    let chain_seed = rng.random();
    let boot_seed = rng.random();
    RepContext {
        rec_r,
        rec_s,
        chain_seed,
        boot_seed,
    }
}

fn run_chain(cfg: &ScenarioConfig, ctx: &RepContext, spec: &SystemSpec) -> mssr_core::Result<PosteriorChain> {
    let mcmc = cfg.mcmc_config(ctx.chain_seed);
    if cfg.theta_known {
        gibbs_known_theta(&ctx.rec_r, &ctx.rec_s, cfg.theta, &cfg.prior(), spec, &mcmc)
    } else {
        mh_within_gibbs(&ctx.rec_r, &ctx.rec_s, &cfg.prior(), spec, &mcmc)
    }
}

fn point_value(
    cfg: &ScenarioConfig,
    ctx: &RepContext,
    spec: &SystemSpec,
    kind: PointEstimatorKind,
    c: Option<f64>,
    truth: f64,
    chain: Option<&PosteriorChain>,
) -> mssr_core::Result<f64> {
    let prior = cfg.prior();
    match kind {
        PointEstimatorKind::Oracle => Ok(truth),
        PointEstimatorKind::Mle => {
            let fit = if cfg.theta_known {
                mle_known_theta(&ctx.rec_r, &ctx.rec_s, cfg.theta)?
            } else {
                mle_unknown_theta(&ctx.rec_r, &ctx.rec_s)
            };
            Ok(mle_r_sk(&fit, spec)?.value())
        }
        PointEstimatorKind::Umvue => umvue_r_sk(&ctx.rec_r, &ctx.rec_s, cfg.theta, spec),
        PointEstimatorKind::LindleySel => {
            if cfg.theta_known {
                lindley_estimate_2param(&ctx.rec_r, &ctx.rec_s, cfg.theta, &prior, spec, Loss::Sel)
            } else {
                lindley_estimate_3param(&ctx.rec_r, &ctx.rec_s, &prior, spec, Loss::Sel)
            }
        }
        PointEstimatorKind::LindleyLinex => {
            let loss = Loss::Linex(c.expect("linex estimators carry c"));
            if cfg.theta_known {
                lindley_estimate_2param(&ctx.rec_r, &ctx.rec_s, cfg.theta, &prior, spec, loss)
            } else {
                lindley_estimate_3param(&ctx.rec_r, &ctx.rec_s, &prior, spec, loss)
            }
        }
        PointEstimatorKind::McmcSel => point_sel(chain.expect("chain prepared")),
        PointEstimatorKind::McmcLinex => {
            point_linex(chain.expect("chain prepared"), c.expect("linex carries c"))
        }
    }
}

/// Average-estimate / mean-squared-error study over every
/// (size, spec, estimator) cell.
pub fn run_point_study(cfg: &ScenarioConfig) -> Result<Vec<McRow>> {
    cfg.validate()?;
    let estimators = expand_point(cfg);
    let specs: Vec<SystemSpec> = cfg
        .specs
        .iter()
        .map(|&(s, k)| SystemSpec::new(s, k).expect("validated"))
        .collect();
    let needs_chain = cfg.point_estimators.iter().any(|e| e.needs_chain());

    let mut rows = Vec::new();
    for &(n, m) in &cfg.sizes {
        let per_rep: Vec<RepPointValues> = (0..cfg.replications)
            .into_par_iter()
            .map(|rep| {
                let ctx = replication_context(cfg, n, m, rep);
                specs
                    .iter()
                    .map(|spec| {
                        let truth = r_sk(cfg.alpha1, cfg.alpha2, spec)
                            .expect("validated")
                            .value();
                        let chain = if needs_chain {
                            run_chain(cfg, &ctx, spec).ok()
                        } else {
                            None
                        };
                        estimators
                            .iter()
                            .map(|&(kind, c, _)| {
                                if kind.needs_chain() && chain.is_none() {
                                    return None;
                                }
                                point_value(cfg, &ctx, spec, kind, c, truth, chain.as_ref()).ok()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        for (spec_idx, spec) in specs.iter().enumerate() {
            let truth = r_sk(cfg.alpha1, cfg.alpha2, spec).expect("validated").value();
            for (est_idx, (_, _, tag)) in estimators.iter().enumerate() {
                let mut sum = 0.0;
                let mut sum_sq = 0.0;
                let mut ok = 0usize;
                for rep in &per_rep {
                    if let Some(v) = rep[spec_idx][est_idx] {
                        sum += v;
                        sum_sq += (v - truth) * (v - truth);
                        ok += 1;
                    }
                }
                let (ae, mse) = if ok > 0 {
                    (Some(sum / ok as f64), Some(sum_sq / ok as f64))
                } else {
                    (None, None)
                };
                rows.push(McRow {
                    estimator: tag.clone(),
                    n,
                    m,
                    s: spec.s(),
                    k: spec.k(),
                    true_r: truth,
                    ae,
                    mse,
                    cp: None,
                    al: None,
                    level: None,
                    failures: cfg.replications - ok,
                });
            }
        }
    }
    Ok(rows)
}

fn interval_value(
    cfg: &ScenarioConfig,
    ctx: &RepContext,
    spec: &SystemSpec,
    kind: IntervalKind,
    level: f64,
    chain: Option<&PosteriorChain>,
) -> mssr_core::Result<IntervalEstimate> {
    let beta = 1.0 - level;
    match kind {
        IntervalKind::Asymptotic => {
            let fit = mle_known_theta(&ctx.rec_r, &ctx.rec_s, cfg.theta)?;
            asymptotic_ci(&fit, spec, beta)
        }
        IntervalKind::BootNormal | IntervalKind::BootP | IntervalKind::BootT => {
            let fit = mle_known_theta(&ctx.rec_r, &ctx.rec_s, cfg.theta)?;
            let bs = boot_samples(&fit, cfg.theta, spec, cfg.bootstrap_b, ctx.boot_seed)?;
            match kind {
                IntervalKind::BootNormal => boot_normal_ci(&bs, beta),
                IntervalKind::BootP => boot_percentile_ci(&bs, beta),
                _ => boot_t_ci(&bs, beta),
            }
        }
        IntervalKind::Hpd => hpd_interval(chain.expect("chain prepared"), level),
        IntervalKind::FullRange => Ok(IntervalEstimate {
            lower: 0.0,
            upper: 1.0,
            level,
            method: mssr_core::IntervalMethod::Hpd,
            raw_width: 1.0,
        }),
    }
}

/// Coverage-probability / average-length study. Coverage counts intervals
/// containing the true reliability; lengths average the raw (pre-clamp)
/// widths, which is what published simulation tables report.
pub fn run_coverage_study(cfg: &ScenarioConfig) -> Result<Vec<McRow>> {
    cfg.validate()?;
    if cfg.intervals.is_empty() {
        return Err(Error::config("no interval kinds selected"));
    }
    let specs: Vec<SystemSpec> = cfg
        .specs
        .iter()
        .map(|&(s, k)| SystemSpec::new(s, k).expect("validated"))
        .collect();
    let needs_chain = cfg.intervals.contains(&IntervalKind::Hpd);
    let cells: Vec<(IntervalKind, f64)> = cfg
        .intervals
        .iter()
        .flat_map(|&iv| cfg.levels.iter().map(move |&l| (iv, l)))
        .collect();

    let mut rows = Vec::new();
    for &(n, m) in &cfg.sizes {
        let per_rep: Vec<RepIntervalValues> = (0..cfg.replications)
            .into_par_iter()
            .map(|rep| {
                let ctx = replication_context(cfg, n, m, rep);
                specs
                    .iter()
                    .map(|spec| {
                        let truth = r_sk(cfg.alpha1, cfg.alpha2, spec)
                            .expect("validated")
                            .value();
                        let chain = if needs_chain {
                            run_chain(cfg, &ctx, spec).ok()
                        } else {
                            None
                        };
                        cells
                            .iter()
                            .map(|&(kind, level)| {
                                if kind == IntervalKind::Hpd && chain.is_none() {
                                    return None;
                                }
                                interval_value(cfg, &ctx, spec, kind, level, chain.as_ref())
                                    .ok()
                                    .map(|ci| (ci.contains(truth), ci.raw_width))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        for (spec_idx, spec) in specs.iter().enumerate() {
            let truth = r_sk(cfg.alpha1, cfg.alpha2, spec).expect("validated").value();
            for (cell_idx, &(kind, level)) in cells.iter().enumerate() {
                let mut covered = 0usize;
                let mut width_sum = 0.0;
                let mut ok = 0usize;
                for rep in &per_rep {
                    if let Some((hit, width)) = rep[spec_idx][cell_idx] {
                        covered += hit as usize;
                        width_sum += width;
                        ok += 1;
                    }
                }
                let (cp, al) = if ok > 0 {
                    (Some(covered as f64 / ok as f64), Some(width_sum / ok as f64))
                } else {
                    (None, None)
                };
                rows.push(McRow {
                    estimator: kind.tag().to_string(),
                    n,
                    m,
                    s: spec.s(),
                    k: spec.k(),
                    true_r: truth,
                    ae: None,
                    mse: None,
                    cp,
                    al,
                    level: Some(level),
                    failures: cfg.replications - ok,
                });
            }
        }
    }
    Ok(rows)
}

/// Solves `r_sk(alpha1, x, spec) = target` for the stress shape `x` by
/// bisection (the reliability is strictly increasing in the stress shape).
pub fn solve_alpha2_for_target(alpha1: f64, spec: &SystemSpec, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::config("target reliability must lie inside (0,1)"));
    }
    let (mut lo, mut hi) = (1e-6_f64, 1e6_f64);
    let f = |a2: f64| -> mssr_core::Result<f64> {
        Ok(r_sk(alpha1, a2, spec)?.value() - target)
    };
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::Core(mssr_core::Error::SolverBracketing { lo, hi }));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm.abs() <= 1e-12 {
            return Ok(mid);
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One bias-sweep cell: the stress shape solved to hit `target_r`, and the
/// mean bias of each estimator there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasRow {
    pub target_r: f64,
    pub solved_alpha2: f64,
    pub estimator: String,
    pub n: usize,
    pub m: usize,
    pub s: u32,
    pub k: u32,
    pub mean_bias: f64,
    pub failures: usize,
}

/// Mean bias of every configured estimator across a grid of target
/// reliabilities. The strength shape stays at the scenario value; the
/// stress shape is solved per target (this parameterisation is echoed in
/// the output metadata).
pub fn bias_sweep(cfg: &ScenarioConfig, r_grid: &[f64]) -> Result<Vec<BiasRow>> {
    cfg.validate()?;
    if r_grid.is_empty() {
        return Err(Error::config("empty reliability grid"));
    }
    let mut rows = Vec::new();
    for &(s, k) in &cfg.specs {
        let spec = SystemSpec::new(s, k).expect("validated");
        for &target in r_grid {
            let alpha2 = solve_alpha2_for_target(cfg.alpha1, &spec, target)?;
            let mut sub = cfg.clone();
            sub.alpha2 = alpha2;
            sub.specs = vec![(s, k)];
            for row in run_point_study(&sub)? {
                rows.push(BiasRow {
                    target_r: target,
                    solved_alpha2: alpha2,
                    estimator: row.estimator,
                    n: row.n,
                    m: row.m,
                    s,
                    k,
                    mean_bias: row.ae.map(|ae| ae - target).unwrap_or(f64::NAN),
                    failures: row.failures,
                });
            }
        }
    }
    Ok(rows)
}

/// Kolmogorov-Smirnov check of a raw dataset against a candidate fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsCheck {
    pub alpha: f64,
    pub theta: f64,
    pub distance: f64,
}

/// Everything the real-data pipeline produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealDataReport {
    pub strength_records: Vec<f64>,
    pub stress_records: Vec<f64>,
    pub n: usize,
    pub m: usize,
    pub s: u32,
    pub k: u32,
    pub theta_hat: f64,
    pub alpha1_hat: f64,
    pub alpha2_hat: f64,
    pub r_mle: f64,
    pub linex_c: f64,
    pub lindley_sel: f64,
    pub lindley_linex: f64,
    pub mcmc_sel: f64,
    pub mcmc_linex: f64,
    pub hpd_level: f64,
    pub hpd_lower: f64,
    pub hpd_upper: f64,
    pub mcmc_acceptance: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_strength: Option<KsCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_stress: Option<KsCheck>,
}

/// Pipeline knobs for [`real_data_pipeline`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub spec: SystemSpec,
    pub prior: PriorConfig,
    pub linex_c: f64,
    pub level: f64,
    pub mcmc: McmcConfig,
    /// Optional goodness-of-fit checks of the raw datasets against
    /// candidate Pareto fits (strength, stress).
    pub ks_fits: Option<(ParetoParams, ParetoParams)>,
}

fn estimator_err(name: &str) -> impl FnOnce(mssr_core::Error) -> Error + '_ {
    move |source| Error::Estimator {
        name: name.to_string(),
        source,
    }
}

/// End-to-end analysis of a raw strength/stress dataset pair: record
/// extraction, MLE, Taylor-approximated and chain-based Bayes estimates,
/// and the highest-posterior-density interval.
pub fn real_data_pipeline(
    strength_raw: &[f64],
    stress_raw: &[f64],
    cfg: &PipelineConfig,
) -> Result<RealDataReport> {
    let rec_r = extract_upper_records(strength_raw)?;
    let rec_s = extract_upper_records(stress_raw)?;
    let fit = mle_unknown_theta(&rec_r, &rec_s);
    let r_mle = mle_r_sk(&fit, &cfg.spec)
        .map_err(estimator_err("mle"))?
        .value();

    let lindley_sel =
        lindley_estimate_3param(&rec_r, &rec_s, &cfg.prior, &cfg.spec, Loss::Sel)
            .map_err(estimator_err("lindley-sel"))?;
    let lindley_linex = lindley_estimate_3param(
        &rec_r,
        &rec_s,
        &cfg.prior,
        &cfg.spec,
        Loss::Linex(cfg.linex_c),
    )
    .map_err(estimator_err("lindley-linex"))?;

    let chain = mh_within_gibbs(&rec_r, &rec_s, &cfg.prior, &cfg.spec, &cfg.mcmc)
        .map_err(estimator_err("mcmc"))?;
    let mcmc_sel = point_sel(&chain).map_err(estimator_err("mcmc-sel"))?;
    let mcmc_linex =
        point_linex(&chain, cfg.linex_c).map_err(estimator_err("mcmc-linex"))?;
    let hpd = hpd_interval(&chain, cfg.level).map_err(estimator_err("hpd"))?;

    let ks = |data: &[f64], p: &ParetoParams| -> Result<KsCheck> {
        Ok(KsCheck {
            alpha: p.alpha(),
            theta: p.theta(),
            distance: ks_statistic(data, p).map_err(estimator_err("ks"))?,
        })
    };
    let (ks_strength, ks_stress) = match &cfg.ks_fits {
        Some((pr, ps)) => (Some(ks(strength_raw, pr)?), Some(ks(stress_raw, ps)?)),
        None => (None, None),
    };

    Ok(RealDataReport {
        strength_records: rec_r.values().to_vec(),
        stress_records: rec_s.values().to_vec(),
        n: rec_r.len(),
        m: rec_s.len(),
        s: cfg.spec.s(),
        k: cfg.spec.k(),
        theta_hat: fit.theta_hat.expect("unknown-theta fit"),
        alpha1_hat: fit.alpha1_hat,
        alpha2_hat: fit.alpha2_hat,
        r_mle,
        linex_c: cfg.linex_c,
        lindley_sel,
        lindley_linex,
        mcmc_sel,
        mcmc_linex,
        hpd_level: cfg.level,
        hpd_lower: hpd.lower,
        hpd_upper: hpd.upper,
        mcmc_acceptance: chain.acceptance_rate(),
        seed: cfg.mcmc.seed,
        ks_strength,
        ks_stress,
    })
}

/// Record samples from line-oriented plain decimal text.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| Error::config(format!("line {}: `{line}` is not a number", i + 1)))?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::config("no values found in input"));
    }
    Ok(out)
}

/// Builds a validated record sample from raw file values, optionally
/// extracting records first.
pub fn records_from_values(values: Vec<f64>, extract: bool) -> Result<RecordSample> {
    if extract {
        Ok(extract_upper_records(&values)?)
    } else {
        Ok(RecordSample::new(values)?)
    }
}
