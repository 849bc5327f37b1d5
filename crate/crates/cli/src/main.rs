//! `iqp`: generate, verify, attack and simulate IQP challenges.
//!
//! Exit codes: 0 success or ACCEPT, 1 REJECT or no secret found, 2 usage,
//! parse or I/O error, 3 instance too large for the simulator, 4 any other
//! failure (infeasible parameters, construction failure).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use iqp_core::attacks::{
    default_razor_fractions, double_meyer, extract_secret_linearity, gram_d, good_d_probability_check,
    hammings_razor_sweep, km_extract, lazy_linearity, property_check, radical_attack, recovers_secret,
    sample_by_rows,
};
use iqp_core::f2linalg::kernel_vectors;
use iqp_core::protocol::{bias_of, default_tolerance, verify};
use iqp_core::scheme::io::{parse_public, parse_samples, parse_secret, write_public, write_samples, write_secret};
use iqp_core::scheme::{
    check_params, hardened_construct, qrc_construct, sample_params, stabilizer_construct_with, BuildOptions,
    HardenedParams, Instance, SchemeKind, SchemeMeta,
};
use iqp_core::simulator::{compile, sample_outcomes, DEFAULT_QUBIT_CAP, THETA};
use iqp_core::stabilizer::correlation;
use iqp_core::{AttackConfig, AttackReport, BitMatrix, BitVector, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "iqp", version, about = "IQP challenge generator, verifier and attack workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write PREFIX.pub, PREFIX.sec and PREFIX.manifest.
    Generate(GenerateArgs),
    /// Check a sample file against the secret; exit 0 on ACCEPT, 1 on REJECT.
    Verify(VerifyArgs),
    /// Run a classical attack on a public matrix.
    Attack(AttackArgs),
    /// Sample the ideal output distribution by statevector simulation.
    Simulate(SimulateArgs),
    /// Print data tables for the kernel-size and attack experiments.
    Bench(BenchArgs),
    /// Dump the CNOT/rotation circuit for a public matrix.
    Compile(CompileArgs),
    /// Print the symbolic correlation of a public/secret pair.
    Correlation(CorrelationArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Stabilizer,
    Qrc,
    Hardened,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "stabilizer")]
    scheme: Scheme,
    #[arg(short = 'n', long)]
    n: usize,
    #[arg(short = 'm', long)]
    m: usize,
    /// Gram rank of H_s; drawn from 1..=10 (feasible values only) if omitted.
    #[arg(short = 'g', long)]
    g: Option<usize>,
    /// QRC length (prime, q ≡ 7 mod 8).
    #[arg(short = 'q', long)]
    q: Option<usize>,
    #[arg(long, default_value_t = 50)]
    lambda: usize,
    /// Rows of H_s (hardened scheme).
    #[arg(long)]
    m1: Option<usize>,
    /// Dimension of D (hardened scheme).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 8)]
    m0: usize,
    #[arg(long, default_value_t = 3)]
    d0: usize,
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Skip the m2 >= n - g postselection against the Radical Attack.
    #[arg(long)]
    no_radical_guard: bool,
    /// Seed for every random choice; drawn from OS entropy and recorded if omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long, default_value = "challenge")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    public: PathBuf,
    #[arg(long)]
    secret: PathBuf,
    #[arg(long)]
    samples: PathBuf,
    /// Use only the first T samples.
    #[arg(short = 'T', long)]
    t: Option<usize>,
    /// Acceptance window; defaults to 3/sqrt(T).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Linearity,
    Km,
    Radical,
    Hamming,
    Lazy,
    DoubleMeyer,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long)]
    public: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    /// Maximum candidate vectors examined.
    #[arg(long, default_value_t = 1 << 15)]
    budget: u64,
    /// Largest gram rank the property check accepts.
    #[arg(long, default_value_t = 1)]
    g_threshold: usize,
    /// Maximum number of probe vectors d.
    #[arg(long, default_value_t = 1 << 12)]
    d_budget: usize,
    /// Kernels intersected per round (double-meyer).
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Kernel-dimension threshold (lazy); defaults to max(n - m/2, 0).
    #[arg(long)]
    a: Option<usize>,
    /// Number of e_j vectors (km).
    #[arg(long, default_value_t = 8)]
    l: usize,
    /// Removal fraction (hamming); sweeps 0.05..0.50 if omitted.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 32)]
    rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report file; stdout if omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Where to write spoofing samples when the candidate passes its self-check.
    #[arg(long)]
    samples_out: Option<PathBuf>,
    #[arg(short = 'T', long, default_value_t = 4000)]
    t: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    public: PathBuf,
    /// Accepted for symmetry with verify; the distribution does not depend on it.
    #[arg(long)]
    secret: Option<PathBuf>,
    #[arg(short = 'T', long, default_value_t = 4000)]
    t: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Kernel,
    GoodD,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(value_enum)]
    figure: Figure,
    #[arg(short = 'm', long, default_value_t = 60)]
    m: usize,
    #[arg(short = 'g', long, value_delimiter = ',', default_value = "1,3")]
    g: Vec<usize>,
    #[arg(long, default_value_t = 35)]
    n_min: usize,
    #[arg(long, default_value_t = 55)]
    n_max: usize,
    #[arg(long, default_value_t = 1)]
    n_step: usize,
    #[arg(short = 'q', long, value_delimiter = ',', default_value = "7,23,31")]
    q: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    lambda: usize,
    /// Check budget for the attack figures.
    #[arg(long, default_value_t = 1 << 12)]
    budget: u64,
    /// Trials per instance for good-d.
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long, env = "IQP_THREADS")]
    threads: Option<usize>,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    public: PathBuf,
    #[arg(long, default_value_t = THETA)]
    theta: f64,
}

#[derive(Args)]
struct CorrelationArgs {
    #[arg(long)]
    public: PathBuf,
    #[arg(long)]
    secret: PathBuf,
}

/// Error carrying a fixed exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(Exit(code, _)) = cause.downcast_ref::<Exit>() {
            return *code;
        }
        if cause.is::<std::io::Error>() {
            return 2;
        }
        match cause.downcast_ref::<Error>() {
            Some(Error::Parse { .. }) => return 2,
            Some(Error::TooManyQubits { .. }) => return 3,
            _ => {}
        }
    }
    4
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_public(path: &Path) -> anyhow::Result<BitMatrix> {
    parse_public(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_secret(path: &Path, n: usize) -> anyhow::Result<(BitVector, iqp_core::Correlation)> {
    let (s, c) = parse_secret(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    if s.len() != n {
        return Err(Exit(2, format!("{}: secret has {} bits, matrix has {n} columns", path.display(), s.len())).into());
    }
    Ok((s, c))
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn build(args: &GenerateArgs, rng: &mut ChaCha8Rng) -> anyhow::Result<Instance> {
    let (n, m, lambda) = (args.n, args.m, args.lambda);
    let opts = BuildOptions {
        radical_guard: !args.no_radical_guard,
    };
    let inst = match args.scheme {
        Scheme::Stabilizer => {
            let meta = match args.g {
                Some(g) => sample_params(n, m, g, lambda, rng)?,
                None => {
                    let options: Vec<SchemeMeta> =
                        (1..=10).filter_map(|g| sample_params(n, m, g, lambda, rng).ok()).collect();
                    if options.is_empty() {
                        sample_params(n, m, 1, lambda, rng)?;
                    }
                    options[rng.random_range(0..options.len())].clone()
                }
            };
            let guard_ok = check_params(&meta).radical_guard_ok();
            if opts.radical_guard && !guard_ok {
                eprintln!("warning: m2 >= n - g fails; building without the radical guard");
            }
            let opts = BuildOptions {
                radical_guard: opts.radical_guard && guard_ok,
            };
            stabilizer_construct_with(&meta, opts, rng)?
        }
        Scheme::Qrc => {
            let q = args.q.ok_or_else(|| anyhow!("--scheme qrc needs -q"))?;
            let inst = qrc_construct(q, n, m, lambda, rng)?;
            let report = check_params(&inst.meta);
            if !report.security_ok() {
                eprintln!(
                    "warning: security inequalities fail ({}); instance is easy",
                    report.failures().join(", ")
                );
            }
            inst
        }
        Scheme::Hardened => {
            let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("--scheme hardened needs {flag}"));
            let p = HardenedParams {
                n,
                m,
                g: need(args.g, "-g")?,
                m1: need(args.m1, "--m1")?,
                d: need(args.d, "--d")?,
                m0: args.m0,
                d0: args.d0,
                t: args.t,
                lambda,
            };
            hardened_construct(&p, rng)?
        }
    };
    Ok(inst)
}

fn manifest(meta: &SchemeMeta, seed: u64) -> String {
    let mut out = String::from("format=IQP1\n");
    let scheme = match meta.scheme {
        SchemeKind::Stabilizer => "stabilizer".to_string(),
        SchemeKind::Qrc { q } => format!("qrc\nq={q}"),
        SchemeKind::Hardened { m0, d0, t } => format!("hardened\nm0={m0}\nd0={d0}\nt={t}"),
    };
    let _ = writeln!(out, "scheme={scheme}");
    let _ = writeln!(
        out,
        "n={}\nm={}\ng={}\nm1={}\nd={}\nlambda={}\nseed={seed}",
        meta.n, meta.m, meta.g, meta.m1, meta.d, meta.lambda
    );
    out
}

fn cmd_generate(args: GenerateArgs) -> anyhow::Result<u8> {
    let seed = args.seed.unwrap_or_else(rand::random);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = build(&args, &mut rng)?;
    let public = with_suffix(&args.out, "pub");
    write(&public, &write_public(&inst.h))?;
    write(&with_suffix(&args.out, "sec"), &write_secret(&inst.s, inst.correlation))?;
    write(&with_suffix(&args.out, "manifest"), &manifest(&inst.meta, seed))?;
    eprintln!("wrote {} (n={} m={} seed={seed})", public.display(), inst.n(), inst.m());
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<u8> {
    let h = load_public(&args.public)?;
    let (s, corr) = load_secret(&args.secret, h.cols())?;
    let mut batch = parse_samples(&read(&args.samples)?, h.cols())
        .with_context(|| format!("parsing {}", args.samples.display()))?;
    if let Some(t) = args.t {
        if batch.len() < t {
            return Err(Exit(2, format!("{}: only {} samples, T = {t}", args.samples.display(), batch.len())).into());
        }
        batch = batch.truncate(t);
    }
    if batch.is_empty() {
        return Err(Exit(2, format!("{}: no samples", args.samples.display())).into());
    }
    let tol = args.tol.unwrap_or_else(|| default_tolerance(batch.len()));
    let v = verify(&batch, &s, corr, tol)?;
    println!(
        "estimate={:.6} ideal={:.6} tolerance={:.6} samples={}",
        v.estimate, v.ideal, v.tolerance, v.samples_used
    );
    println!("{}", if v.accept { "ACCEPT" } else { "REJECT" });
    Ok(if v.accept { 0 } else { 1 })
}

fn run_attack(h: &BitMatrix, args: &AttackArgs, cfg: &AttackConfig) -> AttackReport {
    match args.method {
        Method::Linearity => extract_secret_linearity(h, cfg),
        Method::DoubleMeyer => double_meyer(h, args.k, cfg),
        Method::Lazy => {
            let a = args.a.unwrap_or(h.cols().saturating_sub(h.rows() / 2));
            lazy_linearity(h, a, cfg)
        }
        Method::Km => km_extract(h, args.l, cfg),
        Method::Radical => radical_attack(h),
        Method::Hamming => {
            let fractions = args.p.map_or_else(default_razor_fractions, |p| vec![p]);
            let thr = cfg.g_threshold;
            hammings_razor_sweep(h, &fractions, args.rounds, cfg, |c| property_check(h, &h.mul_vec(c), thr)).0
        }
    }
}

fn cmd_attack(args: AttackArgs) -> anyhow::Result<u8> {
    if let Some(p) = args.p {
        if !(p > 0.0 && p < 1.0) {
            return Err(Exit(2, format!("--p must lie in (0, 1), got {p}")).into());
        }
    }
    if args.k == 0 {
        return Err(Exit(2, "--k must be at least 1".into()).into());
    }
    let h = load_public(&args.public)?;
    let cfg = AttackConfig {
        check_budget: args.budget,
        g_threshold: args.g_threshold,
        d_resample_budget: args.d_budget,
        seed: args.seed,
        ..AttackConfig::default()
    };
    let report = run_attack(&h, &args, &cfg);
    let mut text = format!(
        "method={} checks={} time_ms={}\n",
        report.method,
        report.checks_used,
        report.wall_time.as_millis()
    );
    text.push_str(&report.to_text());
    emit(args.out.as_deref(), &text)?;
    let Some(cand) = report.candidates.first() else {
        eprintln!("no candidate found after {} checks", report.checks_used);
        return Ok(1);
    };
    let corr = correlation(&h, cand)?;
    if corr.is_zero() {
        eprintln!("candidate has zero correlation; no samples written");
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    rng.set_stream(u64::MAX);
    let batch = sample_by_rows(&h, cand, corr.value(), args.t, &mut rng)?;
    let check = verify(&batch, cand, corr, default_tolerance(args.t))?;
    if !check.accept {
        eprintln!("candidate failed its self-check (estimate {:.4})", check.estimate);
        return Ok(0);
    }
    if let Some(path) = &args.samples_out {
        write(path, &write_samples(&batch))?;
        eprintln!("self-check passed; wrote {} samples to {}", batch.len(), path.display());
    }
    Ok(0)
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<u8> {
    let h = load_public(&args.public)?;
    if let Some(path) = &args.secret {
        load_secret(path, h.cols())?;
    }
    if h.cols() > DEFAULT_QUBIT_CAP {
        return Err(Exit(
            3,
            format!("{} qubits exceeds the simulator cap of {DEFAULT_QUBIT_CAP}", h.cols()),
        )
        .into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let batch = sample_outcomes(&h, THETA, args.t, &mut rng)?;
    emit(args.out.as_deref(), &write_samples(&batch))?;
    Ok(0)
}

fn n_range(args: &BenchArgs) -> Vec<usize> {
    (args.n_min..=args.n_max).step_by(args.n_step.max(1)).collect()
}

fn seed_rng(parts: &[u64]) -> ChaCha8Rng {
    let seed = parts.iter().fold(0xcbf2_9ce4_8422_2325u64, |acc, &p| {
        (acc ^ p).wrapping_mul(0x0000_0100_0000_01b3)
    });
    ChaCha8Rng::seed_from_u64(seed)
}

fn stabilizer_instance(n: usize, m: usize, g: usize, lambda: usize, rng: &mut ChaCha8Rng) -> Option<Instance> {
    let meta = sample_params(n, m, g, lambda, rng).ok()?;
    stabilizer_construct_with(&meta, BuildOptions::default(), rng).ok()
}

fn first_kernel_dim(inst: &Instance, rng: &mut ChaCha8Rng) -> usize {
    let d = BitVector::random(inst.n(), rng);
    kernel_vectors(&gram_d(&inst.h, &d)).len()
}

fn linearity_success(inst: &Instance, g: usize, budget: u64, seed: u64) -> bool {
    let cfg = AttackConfig {
        seed,
        g_threshold: g,
        check_budget: budget,
        ..AttackConfig::default()
    };
    let r = extract_secret_linearity(&inst.h, &cfg);
    r.candidates.first().is_some_and(|c| recovers_secret(inst, c))
}

fn mean(xs: &[usize]) -> f64 {
    xs.iter().sum::<usize>() as f64 / xs.len().max(1) as f64
}

fn cmd_bench(args: BenchArgs) -> anyhow::Result<u8> {
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let seeds: Vec<u64> = (0..args.seeds).collect();
    let m = args.m;
    let mut out = String::new();
    match args.figure {
        Figure::Fig2a | Figure::Kernel => {
            let kernel = matches!(args.figure, Figure::Kernel);
            out.push_str(if kernel {
                "g\tn\tinstances\tmin\tmedian\tmax\n"
            } else {
                "g\tn\tinstances\tmean_dim\tbound\n"
            });
            for &g in &args.g {
                for n in n_range(&args) {
                    let mut dims: Vec<usize> = seeds
                        .par_iter()
                        .filter_map(|&s| {
                            let mut rng = seed_rng(&[1, g as u64, n as u64, s]);
                            let inst = stabilizer_instance(n, m, g, args.lambda, &mut rng)?;
                            Some(first_kernel_dim(&inst, &mut rng))
                        })
                        .collect();
                    if dims.is_empty() {
                        let _ = writeln!(out, "{g}\t{n}\t0\tNA\tNA{}", if kernel { "\tNA" } else { "" });
                        continue;
                    }
                    if kernel {
                        dims.sort_unstable();
                        let _ = writeln!(
                            out,
                            "{g}\t{n}\t{}\t{}\t{}\t{}",
                            dims.len(),
                            dims[0],
                            dims[dims.len() / 2],
                            dims[dims.len() - 1]
                        );
                    } else {
                        let bound = n as f64 - m as f64 / 2.0;
                        let _ = writeln!(out, "{g}\t{n}\t{}\t{:.3}\t{bound}", dims.len(), mean(&dims));
                    }
                }
            }
        }
        Figure::Fig2b => {
            out.push_str("g\tn\tinstances\tsuccess_rate\n");
            for &g in &args.g {
                for n in n_range(&args) {
                    let hits: Vec<bool> = seeds
                        .par_iter()
                        .filter_map(|&s| {
                            let mut rng = seed_rng(&[2, g as u64, n as u64, s]);
                            let inst = stabilizer_instance(n, m, g, args.lambda, &mut rng)?;
                            Some(linearity_success(&inst, g, args.budget, s))
                        })
                        .collect();
                    let rate = hits.iter().filter(|&&h| h).count() as f64 / hits.len().max(1) as f64;
                    let _ = writeln!(out, "{g}\t{n}\t{}\t{rate:.3}", hits.len());
                }
            }
        }
        Figure::Fig3a => {
            out.push_str("q\tn\tm\tinstances\tmean_dim\tbound\n");
            for &q in &args.q {
                let r = q.div_ceil(2);
                let (n, m) = (r + q, 2 * q);
                let dims: Vec<usize> = seeds
                    .par_iter()
                    .filter_map(|&s| {
                        let mut rng = seed_rng(&[3, q as u64, s]);
                        let inst = qrc_construct(q, n, m, args.lambda, &mut rng).ok()?;
                        Some(first_kernel_dim(&inst, &mut rng))
                    })
                    .collect();
                let bound = n as f64 - m as f64 / 2.0;
                let _ = writeln!(out, "{q}\t{n}\t{m}\t{}\t{:.3}\t{bound}", dims.len(), mean(&dims));
            }
        }
        Figure::Fig3b => {
            out.push_str("q\tn\tm\tinstances\tsuccess_rate\n");
            for &q in &args.q {
                let r = q.div_ceil(2);
                let m = 2 * q;
                let step = (q / 8).max(1);
                for n in (r..=r + q).step_by(step) {
                    let hits: Vec<bool> = seeds
                        .par_iter()
                        .filter_map(|&s| {
                            let mut rng = seed_rng(&[4, q as u64, n as u64, s]);
                            let inst = qrc_construct(q, n, m, args.lambda, &mut rng).ok()?;
                            Some(linearity_success(&inst, 1, args.budget, s))
                        })
                        .collect();
                    let rate = hits.iter().filter(|&&h| h).count() as f64 / hits.len().max(1) as f64;
                    let _ = writeln!(out, "{q}\t{n}\t{m}\t{}\t{rate:.3}", hits.len());
                }
            }
        }
        Figure::GoodD => {
            out.push_str("g\tn\tm\ttrials\tfrequency\texpected\n");
            let n = args.n_min;
            for &g in &args.g {
                let stats: Vec<(usize, usize)> = seeds
                    .par_iter()
                    .filter_map(|&s| {
                        let mut rng = seed_rng(&[5, g as u64, n as u64, s]);
                        let inst = stabilizer_instance(n, m, g, args.lambda, &mut rng)?;
                        let st = good_d_probability_check(&inst, args.trials, &mut rng);
                        Some((st.hits, st.trials))
                    })
                    .collect();
                let (hits, trials) = stats.iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
                let freq = hits as f64 / trials.max(1) as f64;
                let _ = writeln!(out, "{g}\t{n}\t{m}\t{trials}\t{freq:.4}\t{:.4}", 0.5f64.powi(g as i32));
            }
        }
    }
    print!("{out}");
    Ok(0)
}

fn cmd_compile(args: CompileArgs) -> anyhow::Result<u8> {
    let h = load_public(&args.public)?;
    let c = compile(&h, args.theta)?;
    print!("{}", c.to_text());
    Ok(0)
}

fn cmd_correlation(args: CorrelationArgs) -> anyhow::Result<u8> {
    let h = load_public(&args.public)?;
    let (s, stated) = load_secret(&args.secret, h.cols())?;
    let c = correlation(&h, &s)?;
    println!("correlation={c} value={:.12} bias={:.3}", c.value(), bias_of(c.value()));
    if c != stated {
        bail!("secret file states {stated} but the matrix gives {c}");
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Compile(a) => cmd_compile(a),
        Command::Correlation(a) => cmd_correlation(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
