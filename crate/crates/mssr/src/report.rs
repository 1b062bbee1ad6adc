//! Output formats: CSV with a reproducibility comment line, and JSON
//! mirroring the same numbers. Both render floats through Rust's shortest
//! round-trip formatting, so the two formats always carry identical values.

use std::io::Write;

use serde_json::json;

use crate::study::{BiasRow, McRow, RealDataReport};
use crate::Result;

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

/// Reproducibility header: every run can be replayed from its seed and
/// config fingerprint.
pub fn repro_line(seed: u64, config_hash: u64) -> String {
    format!("# seed={seed} config_hash={config_hash:016x}")
}

pub fn write_mc_rows_csv<W: Write>(
    out: &mut W,
    rows: &[McRow],
    seed: u64,
    config_hash: u64,
) -> Result<()> {
    writeln!(out, "{}", repro_line(seed, config_hash))?;
    writeln!(out, "estimator,n,m,s,k,true_r,ae,mse,cp,al,level,failures")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.estimator,
            r.n,
            r.m,
            r.s,
            r.k,
            r.true_r,
            opt(r.ae),
            opt(r.mse),
            opt(r.cp),
            opt(r.al),
            opt(r.level),
            r.failures
        )?;
    }
    Ok(())
}

pub fn mc_rows_json(rows: &[McRow], seed: u64, config_hash: u64) -> serde_json::Value {
    json!({
        "seed": seed,
        "config_hash": format!("{config_hash:016x}"),
        "rows": rows,
    })
}

pub fn write_bias_rows_csv<W: Write>(
    out: &mut W,
    rows: &[BiasRow],
    seed: u64,
    config_hash: u64,
) -> Result<()> {
    writeln!(out, "{}", repro_line(seed, config_hash))?;
    writeln!(
        out,
        "# alpha1 held fixed; alpha2 solved per target reliability"
    )?;
    writeln!(
        out,
        "target_r,solved_alpha2,estimator,n,m,s,k,mean_bias,failures"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.target_r, r.solved_alpha2, r.estimator, r.n, r.m, r.s, r.k, r.mean_bias, r.failures
        )?;
    }
    Ok(())
}

pub fn bias_rows_json(rows: &[BiasRow], seed: u64, config_hash: u64) -> serde_json::Value {
    json!({
        "seed": seed,
        "config_hash": format!("{config_hash:016x}"),
        "parameterisation": "alpha1 fixed, alpha2 solved per target reliability",
        "rows": rows,
    })
}

/// Flat `key,value` CSV rendering of the real-data report.
pub fn write_report_csv<W: Write>(out: &mut W, report: &RealDataReport) -> Result<()> {
    writeln!(out, "# seed={}", report.seed)?;
    writeln!(out, "key,value")?;
    let mut kv: Vec<(String, String)> = vec![
        ("n".into(), report.n.to_string()),
        ("m".into(), report.m.to_string()),
        ("s".into(), report.s.to_string()),
        ("k".into(), report.k.to_string()),
        ("theta_hat".into(), format!("{}", report.theta_hat)),
        ("alpha1_hat".into(), format!("{}", report.alpha1_hat)),
        ("alpha2_hat".into(), format!("{}", report.alpha2_hat)),
        ("r_mle".into(), format!("{}", report.r_mle)),
        ("linex_c".into(), format!("{}", report.linex_c)),
        ("lindley_sel".into(), format!("{}", report.lindley_sel)),
        ("lindley_linex".into(), format!("{}", report.lindley_linex)),
        ("mcmc_sel".into(), format!("{}", report.mcmc_sel)),
        ("mcmc_linex".into(), format!("{}", report.mcmc_linex)),
        ("hpd_level".into(), format!("{}", report.hpd_level)),
        ("hpd_lower".into(), format!("{}", report.hpd_lower)),
        ("hpd_upper".into(), format!("{}", report.hpd_upper)),
        (
            "mcmc_acceptance".into(),
            format!("{}", report.mcmc_acceptance),
        ),
    ];
    for (label, records) in [
        ("strength_records", &report.strength_records),
        ("stress_records", &report.stress_records),
    ] {
        kv.push((
            label.into(),
            records
                .iter()
                .map(|v| format!("{v}"))
                .collect::<Vec<_>>()
                .join(";"),
        ));
    }
    if let Some(ks) = &report.ks_strength {
        kv.push(("ks_strength_alpha".into(), format!("{}", ks.alpha)));
        kv.push(("ks_strength_theta".into(), format!("{}", ks.theta)));
        kv.push(("ks_strength_distance".into(), format!("{}", ks.distance)));
    }
    if let Some(ks) = &report.ks_stress {
        kv.push(("ks_stress_alpha".into(), format!("{}", ks.alpha)));
        kv.push(("ks_stress_theta".into(), format!("{}", ks.theta)));
        kv.push(("ks_stress_distance".into(), format!("{}", ks.distance)));
    }
    for (k, v) in kv {
        writeln!(out, "{k},{v}")?;
    }
    Ok(())
}

/// Chain dump: one retained draw per line, comma-separated, header included.
pub fn write_chain_csv<W: Write>(out: &mut W, chain: &mssr_core::PosteriorChain) -> Result<()> {
    writeln!(out, "alpha1,alpha2,theta,r")?;
    for d in chain.draws() {
        writeln!(out, "{},{},{},{}", d.alpha1, d.alpha2, d.theta, d.r)?;
    }
    Ok(())
}
