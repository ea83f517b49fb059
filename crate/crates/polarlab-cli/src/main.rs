//! polarlab: reproducible channel-polarization experiments.
//!
//! Subcommands: `polarize` (exact spectrum dump), `scaling` (threshold
//! fractions vs the Gaussian-tail target), `kernel` (partial distances and
//! exponents), `code` (construction, union bound, SC simulation), `mindist`
//! (minimum-distance analysis), `converse` (spectrum fractions against the
//! exact binomial converse bound).
//!
//! Every output embeds the experiment config and seed; reruns with the same
//! config and seed are byte-identical for any `--workers` value.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use polarlab::channel::{DiscreteBMC, ErasureParameter};
use polarlab::code::{md_rate_condition, simulate_bler, PolarCode};
use polarlab::kernel::{BinaryKernel, KernelProfile};
use polarlab::polarization::{
    enumerate_bec_spectrum, enumerate_exact_spectrum, AnomalyFn, DualLogValue, SamplePath,
    ZSpectrum, ZTrajectory,
};
use polarlab::scaling::{
    converse_dominance_bound, fraction_at_exponent, q_function, rate_to_t, union_bound_pe,
    ScalingThreshold,
};
use polarlab::sim::{derive_seed, run_partitioned, trial_rng};

/// Default master seed when neither --seed nor POLARLAB_SEED is given.
const DEFAULT_SEED: u64 = 24601;

#[derive(Parser)]
#[command(
    name = "polarlab",
    version,
    about = "Channel polarization laboratory",
    after_help = "The master seed defaults to 24601; the POLARLAB_SEED environment variable \
                  overrides the default, and --seed overrides both."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the exact Bhattacharyya spectrum at one level.
    Polarize(PolarizeArgs),
    /// Threshold fractions against the Q(t) * I(W) target.
    Scaling(ScalingArgs),
    /// Partial distances, exponent, and variance of a binary kernel.
    Kernel(KernelArgs),
    /// Construct a code, bound its error, and simulate SC decoding.
    Code(CodeArgs),
    /// Minimum-distance analysis of a constructed code.
    Mindist(MindistArgs),
    /// Spectrum fractions and the exact binomial converse bound.
    Converse(ConverseArgs),
}

#[derive(Args)]
struct CommonOut {
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct PolarizeArgs {
    /// Erasure probability of a BEC (shortcut for --channel bec:EPS).
    #[arg(long, conflicts_with = "channel")]
    bec: Option<f64>,
    /// Channel: bec:EPS, bsc:P, or a JSON channel file.
    #[arg(long)]
    channel: Option<String>,
    /// Level n (the spectrum has 2^n rows).
    #[arg(long)]
    n: usize,
    /// Dump one sampled n-step trajectory instead of the spectrum
    /// (CSV columns step,bit,log2_z; bit 1 is the minus branch).
    #[arg(long)]
    trajectory: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: CommonOut,
}

#[derive(Args)]
struct ScalingArgs {
    /// Erasure probability of a BEC (shortcut for --channel bec:EPS).
    #[arg(long, conflicts_with = "channel")]
    bec: Option<f64>,
    /// Channel: bec:EPS, bsc:P, or a JSON channel file.
    #[arg(long)]
    channel: Option<String>,
    /// Comma-separated list of levels.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Comma-separated t grid.
    #[arg(
        long = "t-grid",
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "-2.0,-1.5,-1.0,-0.5,0.0,0.5,1.0,1.5,2.0"
    )]
    t_grid: Vec<f64>,
    /// Anomaly term: 0, log:C (C*log2 n), or pow:C:A (C*n^A, A < 1/2).
    #[arg(long, default_value = "0")]
    f: String,
    /// Exhaustive spectrum enumeration (the default).
    #[arg(long, conflicts_with = "paths")]
    exhaustive: bool,
    /// Sample this many trajectories per level instead of enumerating.
    #[arg(long)]
    paths: Option<usize>,
    /// Optional rate: adds the admissible t ceiling Q^{-1}(R/I(W)) to the
    /// metadata and rejects rates at or above capacity.
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for path sampling (never affects the output bytes).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    out: CommonOut,
}

#[derive(Args)]
struct KernelArgs {
    /// Text file with one 0/1 row per line.
    #[arg(long, conflicts_with = "worst_case")]
    matrix: Option<PathBuf>,
    /// The l-by-l kernel with partial distances (1, ..., 1, 2).
    #[arg(long = "worst-case")]
    worst_case: Option<usize>,
    /// Output file (stdout when absent); kernel output is JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CodeArgs {
    /// Erasure probability of the BEC.
    #[arg(long)]
    bec: f64,
    /// Level n (block length 2^n).
    #[arg(long)]
    n: usize,
    /// Code rate in (0, 1].
    #[arg(long)]
    rate: f64,
    /// SC decoding trials.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the simulation (never affects the output bytes).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output file (stdout when absent); code output is JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MindistArgs {
    #[arg(long)]
    bec: f64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rate: f64,
    /// Output file (stdout when absent); mindist output is JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConverseArgs {
    /// Erasure probability of a BEC (shortcut for --channel bec:EPS).
    #[arg(long, conflicts_with = "channel")]
    bec: Option<f64>,
    /// Channel: bec:EPS, bsc:P, or a JSON channel file.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    n: usize,
    /// Comma-separated threshold exponents e (default: the integers 0..=n).
    #[arg(long = "e-grid", value_delimiter = ',', allow_hyphen_values = true)]
    e_grid: Option<Vec<f64>>,
    #[command(flatten)]
    out: CommonOut,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // {:#} flattens the context chain onto one line.
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Polarize(args) => polarize(args),
        Command::Scaling(args) => scaling(args),
        Command::Kernel(args) => kernel(args),
        Command::Code(args) => code(args),
        Command::Mindist(args) => mindist(args),
        Command::Converse(args) => converse(args),
    }
}

/// 17 significant digits: round-trip exact for f64.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("POLARLAB_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_SEED)
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

/// Parse bec:EPS, bsc:P, or a JSON channel file with key "outputs" (list of
/// [w0, w1] pairs) or the shorthands {"bec": eps} / {"bsc": p}.
fn parse_channel(spec: &str) -> Result<(DiscreteBMC, String)> {
    if let Some(e) = spec.strip_prefix("bec:") {
        let e: f64 = e.parse().with_context(|| format!("erasure probability in {spec:?}"))?;
        let eps = ErasureParameter::new(e)?;
        return Ok((DiscreteBMC::bec(eps), format!("bec:{e}")));
    }
    if let Some(p) = spec.strip_prefix("bsc:") {
        let p: f64 = p.parse().with_context(|| format!("crossover probability in {spec:?}"))?;
        return Ok((DiscreteBMC::bsc(p)?, format!("bsc:{p}")));
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading channel file {spec:?}"))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("malformed channel file {spec:?}"))?;
    let channel = channel_from_json(&value)
        .with_context(|| format!("malformed channel file {spec:?}"))?;
    Ok((channel, format!("file:{spec}")))
}

fn channel_from_json(value: &serde_json::Value) -> Result<DiscreteBMC> {
    let obj = value.as_object().ok_or_else(|| anyhow!("expected a JSON object"))?;
    if let Some(e) = obj.get("bec") {
        let e = e.as_f64().ok_or_else(|| anyhow!("\"bec\" must be a number"))?;
        return Ok(DiscreteBMC::bec(ErasureParameter::new(e)?));
    }
    if let Some(p) = obj.get("bsc") {
        let p = p.as_f64().ok_or_else(|| anyhow!("\"bsc\" must be a number"))?;
        return Ok(DiscreteBMC::bsc(p)?);
    }
    let outputs = obj
        .get("outputs")
        .and_then(|o| o.as_array())
        .ok_or_else(|| anyhow!("expected key \"outputs\" with a list of [w0, w1] pairs"))?;
    let mut pairs = Vec::with_capacity(outputs.len());
    for row in outputs {
        let pair = row.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
            anyhow!("each output must be a [w0, w1] pair")
        })?;
        let w0 = pair[0].as_f64().ok_or_else(|| anyhow!("w0 must be a number"))?;
        let w1 = pair[1].as_f64().ok_or_else(|| anyhow!("w1 must be a number"))?;
        pairs.push((w0, w1));
    }
    Ok(DiscreteBMC::new(pairs)?)
}

fn parse_anomaly(spec: &str) -> Result<(AnomalyFn, String)> {
    if spec == "0" {
        return Ok((AnomalyFn::Zero, "0".into()));
    }
    if let Some(c) = spec.strip_prefix("log:") {
        let c: f64 = c.parse().with_context(|| format!("anomaly spec {spec:?}"))?;
        return Ok((AnomalyFn::LogScaled(c), format!("log:{c}")));
    }
    if let Some(rest) = spec.strip_prefix("pow:") {
        let (c, a) = rest
            .split_once(':')
            .ok_or_else(|| anyhow!("anomaly spec {spec:?}: expected pow:C:A"))?;
        let c: f64 = c.parse().with_context(|| format!("anomaly spec {spec:?}"))?;
        let a: f64 = a.parse().with_context(|| format!("anomaly spec {spec:?}"))?;
        return Ok((AnomalyFn::power(c, a)?, format!("pow:{c}:{a}")));
    }
    bail!("anomaly spec {spec:?}: expected 0, log:C, or pow:C:A");
}

/// Spectrum for a parsed channel: closed-form recursion when the channel is
/// an erasure channel, exact transform-and-merge otherwise (alphabet cap
/// permitting).
fn spectrum_for(channel: &DiscreteBMC, n: usize) -> Result<ZSpectrum> {
    if let Some(e) = as_bec(channel) {
        return Ok(enumerate_bec_spectrum(ErasureParameter::new(e)?, n)?);
    }
    Ok(enumerate_exact_spectrum(channel, n)?)
}

/// Detect the three-output erasure shape: (a, 0), (e, e), (0, a).
fn as_bec(channel: &DiscreteBMC) -> Option<f64> {
    let o = channel.outputs();
    if o.len() == 3 && o[0].1 == 0.0 && o[1].0 == o[1].1 && o[2].0 == 0.0 && o[0].0 == o[2].1 {
        return Some(o[1].0);
    }
    None
}

fn channel_choice(bec: Option<f64>, channel: &Option<String>, cmd: &str) -> Result<String> {
    match (bec, channel) {
        (Some(e), _) => Ok(format!("bec:{e}")),
        (None, Some(c)) => Ok(c.clone()),
        (None, None) => bail!("{cmd} needs --bec or --channel"),
    }
}

fn polarize(args: PolarizeArgs) -> Result<()> {
    let spec_str = channel_choice(args.bec, &args.channel, "polarize")?;
    let (channel, channel_desc) = parse_channel(&spec_str)?;
    if args.trajectory {
        return trajectory_dump(&args, &channel, &channel_desc);
    }
    let spectrum = spectrum_for(&channel, args.n)?;
    let config = format!("polarize --channel {channel_desc} --n {}", args.n);

    let content = match args.out.format {
        Format::Csv => {
            let mut s = format!("# polarlab {config}\n");
            s.push_str("index,log2_z,log2_neg_log2_z\n");
            for (i, z) in spectrum.values().iter().enumerate() {
                let loglog = match z.log2_neg_log2() {
                    _ if z.ln_value() >= -std::f64::consts::LN_2 => String::new(),
                    Some(ll) => fmt(ll),
                    None => "inf".into(), // exact zero: below every threshold
                };
                s.push_str(&format!("{i},{},{loglog}\n", fmt(z.log2_value())));
            }
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = spectrum
                .values()
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    serde_json::json!({
                        "index": i,
                        "log2_z": json_f64(z.log2_value()),
                        "log2_neg_log2_z": z.log2_neg_log2().map_or(serde_json::Value::Null, json_f64),
                    })
                })
                .collect();
            let doc = serde_json::json!({ "config": config, "rows": rows });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
    };
    write_output(&args.out.out, &content)
}

fn json_f64(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x)
        .map(serde_json::Value::Number)
        .unwrap_or_else(|| serde_json::Value::String(format!("{x}")))
}

/// One sampled erasure trajectory as step,bit,log2_z rows; bit 1 marks the
/// minus branch, and the step-0 row has no bit.
fn trajectory_dump(args: &PolarizeArgs, channel: &DiscreteBMC, desc: &str) -> Result<()> {
    if as_bec(channel).is_none() {
        bail!("trajectory dumps follow the exact erasure recursion and require a BEC channel");
    }
    let seed = resolve_seed(args.seed);
    let start = DualLogValue::from_prob(channel.bhattacharyya())?;
    let traj = ZTrajectory::sample_bec(start, args.n, seed);
    let config = format!("polarize --channel {desc} --n {} --trajectory --seed {seed}", args.n);
    let content = match args.out.format {
        Format::Csv => {
            let mut s = format!("# polarlab {config}\n");
            s.push_str("step,bit,log2_z\n");
            for (i, z) in traj.values().iter().enumerate() {
                let bit = if i == 0 {
                    String::new()
                } else {
                    u8::from(traj.path().bits()[i - 1]).to_string()
                };
                s.push_str(&format!("{i},{bit},{}\n", fmt(z.log2_value())));
            }
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = traj
                .values()
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    let bit = if i == 0 {
                        serde_json::Value::Null
                    } else {
                        serde_json::json!(u8::from(traj.path().bits()[i - 1]))
                    };
                    serde_json::json!({
                        "step": i,
                        "bit": bit,
                        "log2_z": json_f64(z.log2_value()),
                    })
                })
                .collect();
            let doc = serde_json::json!({ "config": config, "rows": rows });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
    };
    write_output(&args.out.out, &content)
}

fn scaling(args: ScalingArgs) -> Result<()> {
    let spec_str = channel_choice(args.bec, &args.channel, "scaling")?;
    let (channel, channel_desc) = parse_channel(&spec_str)?;
    let (f, f_desc) = parse_anomaly(&args.f)?;
    let mut t_grid = args.t_grid.clone();
    t_grid.sort_by(|a, b| a.partial_cmp(b).expect("t grid values must be numbers"));
    let seed = resolve_seed(args.seed);
    let i_w = channel.symmetric_capacity();
    let z0 = channel.bhattacharyya();
    let mode = match args.paths {
        Some(p) => format!("paths {p}"),
        None => "exhaustive".into(),
    };
    let mut config = format!(
        "scaling --channel {channel_desc} --n {} --t-grid {} --f {f_desc} --{mode} --seed {seed}",
        join(&args.n),
        join(&t_grid),
    );
    if let Some(rate) = args.rate {
        let t_max = rate_to_t(rate, i_w)?;
        config.push_str(&format!(" --rate {rate} (admissible_t_max {})", fmt(t_max)));
    }

    if args.paths.is_some() && as_bec(&channel).is_none() {
        bail!("path sampling requires a BEC channel; use exhaustive mode for general channels");
    }

    let mut rows: Vec<(usize, f64, f64, f64, Option<f64>)> = Vec::new();
    for &n in &args.n {
        let values: Vec<DualLogValue> = match args.paths {
            None => spectrum_for(&channel, n)?.values().to_vec(),
            Some(paths) => {
                let start = DualLogValue::from_prob(z0)?;
                let level_seed = derive_seed(seed, n as u64);
                let chunks = run_partitioned(paths, args.workers, |range| {
                    range
                        .map(|i| {
                            let mut rng = trial_rng(level_seed, i as u64);
                            let path = SamplePath::sample(n, &mut rng);
                            ZTrajectory::from_path_bec(start, path).final_value()
                        })
                        .collect::<Vec<_>>()
                });
                chunks.into_iter().flatten().collect()
            }
        };
        for &t in &t_grid {
            let e = ScalingThreshold::new(n, t, &f).exponent();
            let fraction = fraction_at_exponent(&values, e);
            let target = q_function(t) * i_w;
            let bound = ErasureParameter::new(z0)
                .ok()
                .and_then(|z| converse_dominance_bound(z, n, e).ok());
            rows.push((n, t, fraction, target, bound));
        }
    }

    let content = match args.out.format {
        Format::Csv => {
            let mut s = format!("# polarlab {config}\n");
            s.push_str("n,t,fraction,target,converse_bound\n");
            for (n, t, fraction, target, bound) in rows {
                let bound = bound.map(fmt).unwrap_or_default();
                s.push_str(&format!("{n},{},{},{},{bound}\n", fmt(t), fmt(fraction), fmt(target)));
            }
            s
        }
        Format::Json => {
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|&(n, t, fraction, target, bound)| {
                    serde_json::json!({
                        "n": n,
                        "t": json_f64(t),
                        "fraction": json_f64(fraction),
                        "target": json_f64(target),
                        "converse_bound": bound.map_or(serde_json::Value::Null, json_f64),
                    })
                })
                .collect();
            let doc = serde_json::json!({ "config": config, "rows": json_rows });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
    };
    write_output(&args.out.out, &content)
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn kernel(args: KernelArgs) -> Result<()> {
    let (kernel, desc) = match (&args.matrix, args.worst_case) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading kernel file {}", path.display()))?;
            (parse_kernel(&text)?, format!("file:{}", path.display()))
        }
        (None, Some(ell)) => (BinaryKernel::worst_case(ell)?, format!("worst-case:{ell}")),
        _ => bail!("kernel needs exactly one of --matrix or --worst-case"),
    };
    let profile: KernelProfile = kernel.profile();
    let config = format!("kernel --matrix {desc}");
    let doc = serde_json::json!({
        "config": config,
        "ell": profile.ell,
        "partial_distances": profile.partial_distances,
        "exponent": json_f64(profile.exponent),
        "variance": json_f64(profile.variance),
    });
    write_output(&args.out, &format!("{}\n", serde_json::to_string_pretty(&doc)?))
}

fn parse_kernel(text: &str) -> Result<BinaryKernel> {
    let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let ell = rows.len();
    let mut masks = Vec::with_capacity(ell);
    for line in &rows {
        let mut mask = 0u64;
        let mut bits = 0usize;
        for ch in line.chars().filter(|c| !c.is_whitespace()) {
            match ch {
                '0' => bits += 1,
                '1' => {
                    mask |= 1u64 << bits;
                    bits += 1;
                }
                other => bail!("kernel rows must be 0/1 text, found {other:?}"),
            }
        }
        if bits != ell {
            bail!("kernel must be square: found a row of {bits} columns among {ell} rows");
        }
        masks.push(mask);
    }
    Ok(BinaryKernel::new(ell, masks)?)
}

fn code(args: CodeArgs) -> Result<()> {
    let eps = ErasureParameter::new(args.bec)?;
    let seed = resolve_seed(args.seed);
    let spectrum = enumerate_bec_spectrum(eps, args.n)?;
    let code = PolarCode::construct(&spectrum, args.rate)?;
    let bound = union_bound_pe(&spectrum, args.rate)?;
    let est = simulate_bler(&code, args.bec, args.trials, seed, args.workers)?;
    let (d_max, t_hat) = md_rate_condition(args.n, args.rate)?;
    let config = format!(
        "code --bec {} --n {} --rate {} --trials {} --seed {seed}",
        args.bec, args.n, args.rate, args.trials
    );
    let doc = serde_json::json!({
        "config": config,
        "n": args.n,
        "rate": json_f64(args.rate),
        "info_set": code.info_set(),
        "min_distance": code.min_distance(),
        "union_bound_log2": json_f64(bound.sum.log2_value()),
        "bler": json_f64(est.bler),
        "stderr": json_f64(est.stderr),
        "d_max": d_max,
        "t_hat": json_f64(t_hat),
    });
    write_output(&args.out, &format!("{}\n", serde_json::to_string_pretty(&doc)?))
}

fn mindist(args: MindistArgs) -> Result<()> {
    let eps = ErasureParameter::new(args.bec)?;
    let spectrum = enumerate_bec_spectrum(eps, args.n)?;
    let code = PolarCode::construct(&spectrum, args.rate)?;
    let (d_max, t_hat) = md_rate_condition(args.n, args.rate)?;
    let d_exponent = code.min_distance().trailing_zeros();
    let config = format!("mindist --bec {} --n {} --rate {}", args.bec, args.n, args.rate);
    let doc = serde_json::json!({
        "config": config,
        "n": args.n,
        "rate": json_f64(args.rate),
        "info_set": code.info_set(),
        "min_distance": code.min_distance(),
        "min_distance_exponent": d_exponent,
        "d_max": d_max,
        "t_hat": json_f64(t_hat),
        "counting_identity_holds": (d_exponent as usize) <= d_max,
    });
    write_output(&args.out, &format!("{}\n", serde_json::to_string_pretty(&doc)?))
}

fn converse(args: ConverseArgs) -> Result<()> {
    let spec_str = channel_choice(args.bec, &args.channel, "converse")?;
    let (channel, channel_desc) = parse_channel(&spec_str)?;
    let z0 = channel.bhattacharyya();
    let spectrum = spectrum_for(&channel, args.n)?;
    let e_grid: Vec<f64> = args
        .e_grid
        .clone()
        .unwrap_or_else(|| (0..=args.n).map(|e| e as f64).collect());
    let eps0 = ErasureParameter::new(z0)?;
    let config = format!(
        "converse --channel {channel_desc} --n {} --e-grid {}",
        args.n,
        join(&e_grid)
    );

    let mut rows = Vec::with_capacity(e_grid.len());
    for &e in &e_grid {
        let fraction = fraction_at_exponent(spectrum.values(), e);
        let bound = converse_dominance_bound(eps0, args.n, e)?;
        rows.push((e, fraction, bound));
    }

    let content = match args.out.format {
        Format::Csv => {
            let mut s = format!("# polarlab {config}\n");
            s.push_str("e,fraction,converse_bound\n");
            for (e, fraction, bound) in rows {
                s.push_str(&format!("{},{},{}\n", fmt(e), fmt(fraction), fmt(bound)));
            }
            s
        }
        Format::Json => {
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|&(e, fraction, bound)| {
                    serde_json::json!({
                        "e": json_f64(e),
                        "fraction": json_f64(fraction),
                        "converse_bound": json_f64(bound),
                    })
                })
                .collect();
            let doc = serde_json::json!({ "config": config, "rows": json_rows });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
    };
    write_output(&args.out.out, &content)
}
