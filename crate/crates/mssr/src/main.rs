//! `mssr`: estimation and simulation for s-out-of-k stress-strength
//! reliability under Pareto strength/stress models observed through upper
//! record values.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::json;

use mssr::config::{apply_assignment, config_hash, parse_prior, parse_scenario};
use mssr::data::{INSULATING_FLUID_STRENGTH, INSULATING_FLUID_STRESS};
use mssr::report::{
    bias_rows_json, mc_rows_json, write_bias_rows_csv, write_chain_csv, write_mc_rows_csv,
    write_report_csv,
};
use mssr::study::{
    bias_sweep, parse_values, real_data_pipeline, records_from_values, run_coverage_study,
    run_point_study, PipelineConfig, ScenarioConfig,
};
use mssr::{Error, Result};
use mssr_core::bootstrap::{boot_normal_ci, boot_percentile_ci, boot_samples, boot_t_ci};
use mssr_core::classical::{
    asymptotic_ci, mle_known_theta, mle_r_sk, mle_unknown_theta, umvue_r_sk,
};
use mssr_core::lindley::{lindley_estimate_2param, lindley_estimate_3param, Loss};
use mssr_core::mcmc::{gibbs_known_theta, hpd_interval, mh_within_gibbs, point_linex, point_sel};
use mssr_core::{IntervalEstimate, McmcConfig, ParetoParams, PriorConfig, SystemSpec};

#[derive(Parser)]
#[command(name = "mssr", version, about = "Multicomponent stress-strength reliability from upper record values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for all randomness; derived from entropy (and echoed) if absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Point and interval estimates from two record files.
    Estimate(EstimateArgs),
    /// Extract the upper records from a raw data file.
    Records(RecordsArgs),
    /// Monte Carlo point-estimator study (AE / MSE per cell).
    Simulate(StudyArgs),
    /// Monte Carlo interval study (coverage / average length per cell).
    Coverage(StudyArgs),
    /// Mean-bias sweep across a grid of target reliabilities.
    BiasSweep(BiasArgs),
    /// Parametric bootstrap intervals on user data (known scale).
    Bootstrap(BootstrapArgs),
    /// End-to-end analysis of the bundled insulating-fluid data.
    RealExample(RealExampleArgs),
}

#[derive(Args)]
struct EstimateArgs {
    /// Strength records, one decimal per line.
    #[arg(long)]
    strength: PathBuf,
    /// Stress records, one decimal per line.
    #[arg(long)]
    stress: PathBuf,
    /// Treat the input files as raw sequences and extract upper records.
    #[arg(long)]
    extract_records: bool,
    /// System spec as `s,k`.
    #[arg(long, default_value = "2,4")]
    spec: String,
    /// Known common scale; omitting it switches to scale-estimated mode.
    #[arg(long)]
    theta: Option<f64>,
    /// Gamma prior `a1,a2,a3:b1,b2,b3`; enables the Bayes estimators.
    #[arg(long)]
    prior: Option<String>,
    /// LINEX asymmetry values.
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    linex_c: Vec<f64>,
    /// Confidence / credible levels.
    #[arg(long, value_delimiter = ',', default_value = "0.95")]
    levels: Vec<f64>,
    /// Bootstrap replicates (0 disables bootstrap intervals).
    #[arg(long, default_value_t = 2000)]
    boot_b: usize,
    #[command(flatten)]
    mcmc: McmcArgs,
    /// Write the retained posterior draws to this CSV path.
    #[arg(long)]
    dump_chain: Option<PathBuf>,
}

#[derive(Args)]
struct McmcArgs {
    /// Total sweeps, burn-in included.
    #[arg(long, default_value_t = 11_000)]
    mcmc_length: usize,
    /// Discarded prefix.
    #[arg(long, default_value_t = 1_000)]
    mcmc_burn_in: usize,
}

#[derive(Args)]
struct RecordsArgs {
    /// Raw data file, one decimal per line.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct StudyArgs {
    /// Scenario file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Inline overrides, e.g. `--set replications=200`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Args)]
struct BiasArgs {
    #[command(flatten)]
    study: StudyArgs,
    /// Grid of target reliabilities: `start:end:step` or a comma list.
    #[arg(long, default_value = "0.1:0.9:0.1")]
    grid: String,
}

#[derive(Args)]
struct BootstrapArgs {
    #[arg(long)]
    strength: PathBuf,
    #[arg(long)]
    stress: PathBuf,
    #[arg(long)]
    extract_records: bool,
    /// Known common scale (the bootstrap is defined for known scale).
    #[arg(long)]
    theta: f64,
    #[arg(long, default_value = "2,4")]
    spec: String,
    /// Bootstrap replicates.
    #[arg(long, default_value_t = 2000)]
    b: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.95")]
    levels: Vec<f64>,
}

#[derive(Args)]
struct RealExampleArgs {
    #[arg(long, default_value = "2,4")]
    spec: String,
    #[arg(long, default_value = "3,3,3:1.5,1.5,1.5")]
    prior: String,
    #[arg(long, default_value_t = 1.0)]
    linex_c: f64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[command(flatten)]
    mcmc: McmcArgs,
    #[arg(long)]
    dump_chain: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("MSSR_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mssr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn resolve_seed(cli_seed: Option<u64>, config_seed: Option<u64>) -> u64 {
    cli_seed
        .or(config_seed)
        .unwrap_or_else(|| rand::rng().random())
}

fn parse_spec(text: &str) -> Result<SystemSpec> {
    let (s, k) = text
        .split_once(',')
        .ok_or_else(|| Error::config(format!("spec `{text}` is not of the form s,k")))?;
    let s: u32 = s
        .trim()
        .parse()
        .map_err(|_| Error::config(format!("spec: `{s}` is not an integer")))?;
    let k: u32 = k
        .trim()
        .parse()
        .map_err(|_| Error::config(format!("spec: `{k}` is not an integer")))?;
    Ok(SystemSpec::new(s, k)?)
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))
}

fn emit(cli_out: &Option<PathBuf>, content: &str) -> Result<()> {
    match cli_out {
        Some(path) => {
            fs::write(path, content)?;
            Ok(())
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn interval_json(ci: &IntervalEstimate) -> serde_json::Value {
    json!({
        "method": ci.method.tag(),
        "level": ci.level,
        "lower": ci.lower,
        "upper": ci.upper,
        "raw_width": ci.raw_width,
    })
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Estimate(args) => cmd_estimate(&cli, args),
        Command::Records(args) => cmd_records(&cli, args),
        Command::Simulate(args) => cmd_study(&cli, args, StudyKind::Point),
        Command::Coverage(args) => cmd_study(&cli, args, StudyKind::Coverage),
        Command::BiasSweep(args) => cmd_bias(&cli, args),
        Command::Bootstrap(args) => cmd_bootstrap(&cli, args),
        Command::RealExample(args) => cmd_real_example(&cli, args),
    }
}

fn load_records(path: &Path, extract: bool) -> Result<mssr_core::RecordSample> {
    let values = parse_values(&read_file(path)?)?;
    records_from_values(values, extract)
}

fn cmd_estimate(cli: &Cli, args: &EstimateArgs) -> Result<()> {
    let spec = parse_spec(&args.spec)?;
    let rec_r = load_records(&args.strength, args.extract_records)?;
    let rec_s = load_records(&args.stress, args.extract_records)?;
    let seed = resolve_seed(cli.seed, None);
    for &c in &args.linex_c {
        if c == 0.0 {
            return Err(Error::config("linex_c must be nonzero"));
        }
    }
    for &l in &args.levels {
        if !(l > 0.0 && l < 1.0) {
            return Err(Error::config("levels must lie inside (0,1)"));
        }
    }

    let prior = args
        .prior
        .as_deref()
        .map(|p| -> Result<PriorConfig> {
            let (a, b) = parse_prior(p)?;
            Ok(PriorConfig::new(a, b)?)
        })
        .transpose()?;
    if prior.is_some() && args.theta.is_some() {
        eprintln!("mssr: known-scale mode ignores the scale prior pair (a3, b3)");
    }

    let mut kv: Vec<(String, serde_json::Value)> = vec![
        ("seed".into(), json!(seed)),
        ("s".into(), json!(spec.s())),
        ("k".into(), json!(spec.k())),
        ("n".into(), json!(rec_r.len())),
        ("m".into(), json!(rec_s.len())),
    ];

    let mut intervals: Vec<IntervalEstimate> = Vec::new();
    let named = |name: &'static str| move |e: mssr_core::Error| Error::Estimator {
        name: name.into(),
        source: e,
    };

    let fit = match args.theta {
        Some(theta) => {
            let fit = mle_known_theta(&rec_r, &rec_s, theta).map_err(named("mle"))?;
            kv.push(("theta_mode".into(), json!("known")));
            kv.push(("theta".into(), json!(theta)));
            let umvue = umvue_r_sk(&rec_r, &rec_s, theta, &spec).map_err(named("umvue"))?;
            kv.push(("umvue".into(), json!(umvue)));
            for &level in &args.levels {
                intervals.push(asymptotic_ci(&fit, &spec, 1.0 - level).map_err(named("asymptotic"))?);
            }
            if args.boot_b > 0 {
                let bs = boot_samples(&fit, theta, &spec, args.boot_b, seed)
                    .map_err(named("bootstrap"))?;
                kv.push(("bootstrap_se".into(), json!(bs.se_hat())));
                for &level in &args.levels {
                    intervals
                        .push(boot_normal_ci(&bs, 1.0 - level).map_err(named("boot-normal"))?);
                    intervals.push(boot_percentile_ci(&bs, 1.0 - level).map_err(named("boot-p"))?);
                    intervals.push(boot_t_ci(&bs, 1.0 - level).map_err(named("boot-t"))?);
                }
            }
            fit
        }
        None => {
            let fit = mle_unknown_theta(&rec_r, &rec_s);
            kv.push(("theta_mode".into(), json!("estimated")));
            kv.push(("theta".into(), json!(fit.theta_hat.expect("estimated"))));
            fit
        }
    };
    kv.push(("alpha1_hat".into(), json!(fit.alpha1_hat)));
    kv.push(("alpha2_hat".into(), json!(fit.alpha2_hat)));
    kv.push((
        "r_mle".into(),
        json!(mle_r_sk(&fit, &spec).map_err(named("mle"))?.value()),
    ));

    if let Some(prior) = prior {
        let (lindley_sel, lindley_cs): (f64, Vec<(f64, f64)>) = match args.theta {
            Some(theta) => {
                let sel =
                    lindley_estimate_2param(&rec_r, &rec_s, theta, &prior, &spec, Loss::Sel)
                        .map_err(named("lindley-sel"))?;
                let cs = args
                    .linex_c
                    .iter()
                    .map(|&c| {
                        lindley_estimate_2param(
                            &rec_r,
                            &rec_s,
                            theta,
                            &prior,
                            &spec,
                            Loss::Linex(c),
                        )
                        .map(|v| (c, v))
                        .map_err(named("lindley-linex"))
                    })
                    .collect::<Result<_>>()?;
                (sel, cs)
            }
            None => {
                let sel = lindley_estimate_3param(&rec_r, &rec_s, &prior, &spec, Loss::Sel)
                    .map_err(named("lindley-sel"))?;
                let cs = args
                    .linex_c
                    .iter()
                    .map(|&c| {
                        lindley_estimate_3param(&rec_r, &rec_s, &prior, &spec, Loss::Linex(c))
                            .map(|v| (c, v))
                            .map_err(named("lindley-linex"))
                    })
                    .collect::<Result<_>>()?;
                (sel, cs)
            }
        };
        kv.push(("lindley_sel".into(), json!(lindley_sel)));
        for (c, v) in lindley_cs {
            kv.push((format!("lindley_linex[c={c}]"), json!(v)));
        }

        let mcmc = McmcConfig {
            chain_length: args.mcmc.mcmc_length,
            burn_in: args.mcmc.mcmc_burn_in,
            proposal_sd: None,
            seed,
            thinning: 1,
        };
        let chain = match args.theta {
            Some(theta) => gibbs_known_theta(&rec_r, &rec_s, theta, &prior, &spec, &mcmc),
            None => mh_within_gibbs(&rec_r, &rec_s, &prior, &spec, &mcmc),
        }
        .map_err(named("mcmc"))?;
        kv.push((
            "mcmc_sel".into(),
            json!(point_sel(&chain).map_err(named("mcmc-sel"))?),
        ));
        for &c in &args.linex_c {
            kv.push((
                format!("mcmc_linex[c={c}]"),
                json!(point_linex(&chain, c).map_err(named("mcmc-linex"))?),
            ));
        }
        for &level in &args.levels {
            intervals.push(hpd_interval(&chain, level).map_err(named("hpd"))?);
        }
        kv.push(("mcmc_acceptance".into(), json!(chain.acceptance_rate())));
        if chain.tuning_warning() {
            kv.push(("mcmc_tuning_warning".into(), json!(true)));
        }
        if let Some(path) = &args.dump_chain {
            let mut buf = Vec::new();
            write_chain_csv(&mut buf, &chain)?;
            fs::write(path, buf)?;
        }
    }

    match cli.output {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (k, v) in kv {
                obj.insert(k, v);
            }
            obj.insert(
                "intervals".into(),
                json!(intervals.iter().map(interval_json).collect::<Vec<_>>()),
            );
            emit(&cli.out, &format!("{:#}\n", serde_json::Value::Object(obj)))
        }
        Format::Csv => {
            let mut out = String::new();
            out.push_str("key,value\n");
            for (k, v) in kv {
                let rendered = match v {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                out.push_str(&format!("{k},{rendered}\n"));
            }
            for ci in &intervals {
                out.push_str(&format!(
                    "interval[{},{}],{};{}\n",
                    ci.method.tag(),
                    ci.level,
                    ci.lower,
                    ci.upper
                ));
            }
            emit(&cli.out, &out)
        }
    }
}

fn cmd_records(cli: &Cli, args: &RecordsArgs) -> Result<()> {
    let values = parse_values(&read_file(&args.input)?)?;
    let rec = records_from_values(values, true)?;
    match cli.output {
        Format::Json => emit(&cli.out, &format!("{}\n", json!({ "records": rec.values() }))),
        Format::Csv => {
            let mut out = String::from("record\n");
            for v in rec.values() {
                out.push_str(&format!("{v}\n"));
            }
            emit(&cli.out, &out)
        }
    }
}

enum StudyKind {
    Point,
    Coverage,
}

fn load_scenario(cli: &Cli, args: &StudyArgs) -> Result<(ScenarioConfig, u64)> {
    let text = read_file(&args.config)?;
    let has_seed_line = text
        .lines()
        .any(|l| l.trim_start().starts_with("seed") && l.contains('='));
    let mut cfg = parse_scenario(&text)?;
    let mut seed_overridden = false;
    for assignment in &args.sets {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::config(format!("--set `{assignment}` is not KEY=VALUE")))?;
        if key.trim() == "seed" {
            seed_overridden = true;
        }
        apply_assignment(&mut cfg, key.trim(), value.trim())?;
    }
    let config_seed = (has_seed_line || seed_overridden).then_some(cfg.seed);
    cfg.seed = resolve_seed(cli.seed, config_seed);
    cfg.validate()?;
    let hash = config_hash(&cfg);
    Ok((cfg, hash))
}

fn cmd_study(cli: &Cli, args: &StudyArgs, kind: StudyKind) -> Result<()> {
    let (cfg, hash) = load_scenario(cli, args)?;
    let rows = match kind {
        StudyKind::Point => run_point_study(&cfg)?,
        StudyKind::Coverage => run_coverage_study(&cfg)?,
    };
    match cli.output {
        Format::Csv => {
            let mut buf = Vec::new();
            write_mc_rows_csv(&mut buf, &rows, cfg.seed, hash)?;
            emit(&cli.out, &String::from_utf8(buf).expect("utf8 csv"))
        }
        Format::Json => emit(
            &cli.out,
            &format!("{:#}\n", mc_rows_json(&rows, cfg.seed, hash)),
        ),
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parse_one = |s: &str| -> Result<f64> {
        s.trim()
            .parse()
            .map_err(|_| Error::config(format!("grid: `{s}` is not a number")))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::config("grid must be start:end:step or a comma list"));
        }
        let (start, end, step) = (parse_one(parts[0])?, parse_one(parts[1])?, parse_one(parts[2])?);
        if step <= 0.0 {
            return Err(Error::config("grid step must be positive"));
        }
        let mut out = Vec::new();
        let mut x = start;
        while x <= end + 1e-12 {
            out.push(x);
            x += step;
        }
        Ok(out)
    } else {
        text.split(',').map(parse_one).collect()
    }
}

fn cmd_bias(cli: &Cli, args: &BiasArgs) -> Result<()> {
    let (cfg, hash) = load_scenario(cli, &args.study)?;
    let grid = parse_grid(&args.grid)?;
    for &r in &grid {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::config("grid targets must lie inside (0,1)"));
        }
    }
    let rows = bias_sweep(&cfg, &grid)?;
    match cli.output {
        Format::Csv => {
            let mut buf = Vec::new();
            write_bias_rows_csv(&mut buf, &rows, cfg.seed, hash)?;
            emit(&cli.out, &String::from_utf8(buf).expect("utf8 csv"))
        }
        Format::Json => emit(
            &cli.out,
            &format!("{:#}\n", bias_rows_json(&rows, cfg.seed, hash)),
        ),
    }
}

fn cmd_bootstrap(cli: &Cli, args: &BootstrapArgs) -> Result<()> {
    let spec = parse_spec(&args.spec)?;
    let rec_r = load_records(&args.strength, args.extract_records)?;
    let rec_s = load_records(&args.stress, args.extract_records)?;
    let seed = resolve_seed(cli.seed, None);
    let named = |name: &'static str| move |e: mssr_core::Error| Error::Estimator {
        name: name.into(),
        source: e,
    };
    let fit = mle_known_theta(&rec_r, &rec_s, args.theta).map_err(named("mle"))?;
    let bs = boot_samples(&fit, args.theta, &spec, args.b, seed).map_err(named("bootstrap"))?;
    let mut intervals = Vec::new();
    for &level in &args.levels {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::config("levels must lie inside (0,1)"));
        }
        intervals.push(boot_normal_ci(&bs, 1.0 - level).map_err(named("boot-normal"))?);
        intervals.push(boot_percentile_ci(&bs, 1.0 - level).map_err(named("boot-p"))?);
        intervals.push(boot_t_ci(&bs, 1.0 - level).map_err(named("boot-t"))?);
    }
    let body = json!({
        "seed": seed,
        "b": args.b,
        "point": bs.point(),
        "se_hat": bs.se_hat(),
        "intervals": intervals.iter().map(interval_json).collect::<Vec<_>>(),
    });
    match cli.output {
        Format::Json => emit(&cli.out, &format!("{body:#}\n")),
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&format!("# seed={seed}\n"));
            out.push_str("key,value\n");
            out.push_str(&format!("point,{}\n", bs.point()));
            out.push_str(&format!("se_hat,{}\n", bs.se_hat()));
            for ci in &intervals {
                out.push_str(&format!(
                    "interval[{},{}],{};{}\n",
                    ci.method.tag(),
                    ci.level,
                    ci.lower,
                    ci.upper
                ));
            }
            emit(&cli.out, &out)
        }
    }
}

fn cmd_real_example(cli: &Cli, args: &RealExampleArgs) -> Result<()> {
    let spec = parse_spec(&args.spec)?;
    let (a, b) = parse_prior(&args.prior)?;
    let seed = resolve_seed(cli.seed, None);
    let cfg = PipelineConfig {
        spec,
        prior: PriorConfig::new(a, b)?,
        linex_c: args.linex_c,
        level: args.level,
        mcmc: McmcConfig {
            chain_length: args.mcmc.mcmc_length,
            burn_in: args.mcmc.mcmc_burn_in,
            proposal_sd: None,
            seed,
            thinning: 1,
        },
        ks_fits: Some((
            ParetoParams::new(0.3, 0.8)?,
            ParetoParams::new(1.4, 0.8)?,
        )),
    };
    let report = real_data_pipeline(&INSULATING_FLUID_STRENGTH, &INSULATING_FLUID_STRESS, &cfg)?;
    if let Some(path) = &args.dump_chain {
        // Re-run the same seeded chain for the dump.
        let rec_r = records_from_values(INSULATING_FLUID_STRENGTH.to_vec(), true)?;
        let rec_s = records_from_values(INSULATING_FLUID_STRESS.to_vec(), true)?;
        let chain = mh_within_gibbs(&rec_r, &rec_s, &cfg.prior, &cfg.spec, &cfg.mcmc)?;
        let mut buf = Vec::new();
        write_chain_csv(&mut buf, &chain)?;
        fs::write(path, buf)?;
    }
    match cli.output {
        Format::Json => emit(&cli.out, &format!("{:#}\n", serde_json::to_value(&report).expect("serializable report"))),
        Format::Csv => {
            let mut buf = Vec::new();
            write_report_csv(&mut buf, &report)?;
            emit(&cli.out, &String::from_utf8(buf).expect("utf8 csv"))
        }
    }
}
