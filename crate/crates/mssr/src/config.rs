//! Plain-text `key = value` scenario files, inline overrides, and the
//! canonical form used for the reproducibility hash echoed into outputs.

use crate::study::{IntervalKind, PointEstimatorKind, ScenarioConfig};
use crate::{Error, Result};

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse()
        .map_err(|_| Error::config(format!("{key}: `{v}` is not a number")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse()
        .map_err(|_| Error::config(format!("{key}: `{v}` is not a count")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::config(format!("{key}: `{v}` is not a boolean"))),
    }
}

fn parse_list<T, F: Fn(&str) -> Result<T>>(v: &str, f: F) -> Result<Vec<T>> {
    v.split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(f)
        .collect()
}

/// `2,4; 3,5` -> [(2,4), (3,5)]
fn parse_pairs<T: Copy, F: Fn(&str) -> Result<T>>(key: &str, v: &str, f: F) -> Result<Vec<(T, T)>> {
    let mut out = Vec::new();
    for part in v.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let mut it = part.split(',').map(|s| s.trim());
        let a = it
            .next()
            .ok_or_else(|| Error::config(format!("{key}: empty pair")))?;
        let b = it
            .next()
            .ok_or_else(|| Error::config(format!("{key}: `{part}` is not a pair")))?;
        if it.next().is_some() {
            return Err(Error::config(format!("{key}: `{part}` has extra entries")));
        }
        out.push((f(a)?, f(b)?));
    }
    if out.is_empty() {
        return Err(Error::config(format!("{key}: no pairs given")));
    }
    Ok(out)
}

/// `a1,a2,a3 : b1,b2,b3` -> two hyperparameter triples.
pub fn parse_prior(v: &str) -> Result<([f64; 3], [f64; 3])> {
    let mut halves = v.split(':');
    let a = halves
        .next()
        .ok_or_else(|| Error::config("prior: missing shape triple"))?;
    let b = halves
        .next()
        .ok_or_else(|| Error::config("prior: expected `a1,a2,a3:b1,b2,b3`"))?;
    if halves.next().is_some() {
        return Err(Error::config("prior: too many `:` separators"));
    }
    let to_triple = |s: &str, what: &str| -> Result<[f64; 3]> {
        let vals = parse_list(s, |x| parse_f64("prior", x))?;
        match vals.len() {
            3 => Ok([vals[0], vals[1], vals[2]]),
            // A pair is accepted for known-scale work; the scale entry is
            // padded with a unit hyperparameter and ignored downstream.
            2 => Ok([vals[0], vals[1], 1.0]),
            _ => Err(Error::config(format!(
                "prior: {what} needs 2 or 3 entries, got {}",
                vals.len()
            ))),
        }
    };
    Ok((to_triple(a, "shape triple")?, to_triple(b, "rate triple")?))
}

/// Applies one `key = value` assignment to the config.
pub fn apply_assignment(cfg: &mut ScenarioConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "alpha1" => cfg.alpha1 = parse_f64(key, value)?,
        "alpha2" => cfg.alpha2 = parse_f64(key, value)?,
        "theta" => cfg.theta = parse_f64(key, value)?,
        "theta_known" => cfg.theta_known = parse_bool(key, value)?,
        "specs" => {
            cfg.specs = parse_pairs(key, value, |s| {
                s.parse::<u32>()
                    .map_err(|_| Error::config(format!("specs: `{s}` is not an integer")))
            })?
        }
        "sizes" => cfg.sizes = parse_pairs(key, value, |s| parse_usize(key, s))?,
        "replications" => cfg.replications = parse_usize(key, value)?,
        "point_estimators" => {
            cfg.point_estimators = parse_list(value, PointEstimatorKind::parse)?
        }
        "intervals" => cfg.intervals = parse_list(value, IntervalKind::parse)?,
        "prior" => {
            let (a, b) = parse_prior(value)?;
            cfg.prior_a = a;
            cfg.prior_b = b;
        }
        "linex_c" => cfg.linex_cs = parse_list(value, |s| parse_f64(key, s))?,
        "levels" => cfg.levels = parse_list(value, |s| parse_f64(key, s))?,
        "seed" => {
            cfg.seed = value
                .trim()
                .parse()
                .map_err(|_| Error::config(format!("seed: `{value}` is not an integer")))?
        }
        "bootstrap_b" => cfg.bootstrap_b = parse_usize(key, value)?,
        "mcmc_length" => cfg.mcmc_length = parse_usize(key, value)?,
        "mcmc_burn_in" => cfg.mcmc_burn_in = parse_usize(key, value)?,
        other => return Err(Error::config(format!("unknown configuration key `{other}`"))),
    }
    Ok(())
}

/// Parses a whole scenario file (`#` comments and blank lines ignored).
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {}: expected `key = value`", lineno + 1)))?;
        apply_assignment(&mut cfg, key.trim(), value.trim())
            .map_err(|e| Error::config(format!("line {}: {e}", lineno + 1)))?;
    }
    Ok(cfg)
}

/// Canonical single-line rendering of a config; feeding it back through
/// the parser reproduces the config, and its hash is echoed into outputs.
pub fn canonical_string(cfg: &ScenarioConfig) -> String {
    let join_pairs = |pairs: &[(usize, usize)]| {
        pairs
            .iter()
            .map(|(a, b)| format!("{a},{b}"))
            .collect::<Vec<_>>()
            .join(";")
    };
    let spec_pairs = cfg
        .specs
        .iter()
        .map(|(a, b)| format!("{a},{b}"))
        .collect::<Vec<_>>()
        .join(";");
    let floats = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    let estimators = cfg
        .point_estimators
        .iter()
        .map(|e| serde_json::to_string(e).unwrap().trim_matches('"').to_string())
        .collect::<Vec<_>>()
        .join(",");
    let intervals = cfg
        .intervals
        .iter()
        .map(|iv| iv.tag().to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "alpha1={};alpha2={};theta={};theta_known={};specs={};sizes={};replications={};\
         point_estimators={};intervals={};prior={}:{};linex_c={};levels={};bootstrap_b={};\
         mcmc_length={};mcmc_burn_in={}",
        cfg.alpha1,
        cfg.alpha2,
        cfg.theta,
        cfg.theta_known,
        spec_pairs,
        join_pairs(&cfg.sizes),
        cfg.replications,
        estimators,
        intervals,
        floats(&cfg.prior_a),
        floats(&cfg.prior_b),
        floats(&cfg.linex_cs),
        floats(&cfg.levels),
        cfg.bootstrap_b,
        cfg.mcmc_length,
        cfg.mcmc_burn_in,
    )
}

/// FNV-1a over the canonical string; a stable fingerprint for
/// reproducibility lines, not a cryptographic digest.
pub fn config_hash(cfg: &ScenarioConfig) -> u64 {
    fnv1a(canonical_string(cfg).as_bytes())
}

pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
