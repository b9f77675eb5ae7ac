//! `synamp` — privacy accounting and figure reproduction for synthetic data
//! released by a linear generator.

mod csvio;
mod error;
mod figures;
mod svg;
mod sweep;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use error::{CliError, CliResult};
use std::path::PathBuf;
use synamp::accountant::{
    account, counterexample_demo, fisher_bounds_ncx2, global_bound_multik, local_band_k1,
    no_amplification_threshold, rdp_conversion, rdp_gaussian, BoundReport, Method, PriorWorkParams,
    Regime,
};
use synamp::distributions::{NSyn, NoncentralChiSq, PrivacyParams};
use synamp::estimators::{
    fisher_mc_rician, fisher_mc_score_sq, fisher_quadrature_ncx2, renyi_finite_n_k1,
    renyi_ncx2_quadrature, variational_renyi, TrainConfig,
};
use synamp::mathkit::rng::ChaCha8Rng;
use synamp::mathkit::RngStream;

#[derive(Parser)]
#[command(
    name = "synamp",
    version,
    about = "Privacy accountant for linear synthetic data release"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Root seed for stochastic commands.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Worker pool size for sweep cells (1 keeps log ordering deterministic;
    /// results are order-independent regardless).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Output directory or file, depending on the subcommand.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit machine-readable JSON instead of a table.
    #[arg(long, global = true, default_value_t = false)]
    json: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BoundMethod {
    Post,
    Local,
    Global,
    Prior,
    Min,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RenyiMethod {
    Quadrature,
    #[value(name = "finite-n")]
    FiniteN,
    Variational,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    Ncx2,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Ci,
    Full,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long = "C")]
    c: f64,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = BoundMethod::Min)]
    method: BoundMethod,
    /// |w| for the local band (defaults to max(0, C - delta)).
    #[arg(long)]
    norm_w: Option<f64>,
    /// Absolute constant of the prior-work bound.
    #[arg(long, default_value_t = 1.0)]
    c_prime: f64,
    /// Release size for the prior-work bound.
    #[arg(long)]
    n_syn: Option<u64>,
}

#[derive(Args)]
struct FisherArgs {
    /// Comma-separated list of widths.
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<u32>,
    /// Comma-separated list of amplitudes.
    #[arg(long, value_delimiter = ',', required = true)]
    theta: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
}

#[derive(Args)]
struct RenyiArgs {
    #[arg(long, value_enum, default_value_t = Family::Ncx2)]
    family: Family,
    #[arg(long, value_enum)]
    method: RenyiMethod,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    theta_v: f64,
    #[arg(long)]
    theta_w: f64,
    #[arg(long)]
    n_syn: Option<u64>,
    #[arg(long, value_enum, default_value_t = ProfileArg::Ci)]
    profile: ProfileArg,
}

#[derive(Args)]
struct PriorArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    c_prime: f64,
    #[arg(long)]
    n_syn: u64,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    delta: f64,
}

#[derive(Args)]
struct FiguresArgs {
    /// fig2 | fig3 | gauss-criterion | prior-tradeoff
    #[arg(long)]
    which: String,
    #[arg(long, value_enum, default_value_t = ProfileArg::Ci)]
    profile: ProfileArg,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form privacy bounds for one parameter point.
    Bound(BoundArgs),
    /// Fisher-information table: bounds, quadrature and Monte Carlo.
    Fisher(FisherArgs),
    /// One-shot Rényi divergence of the release mechanism.
    Renyi(RenyiArgs),
    /// Prior-work trade-off conversion and amplification threshold.
    Prior(PriorArgs),
    /// Cauchy-vs-Gaussian Fisher/Rényi comparison.
    Counterexample(CounterexampleArgs),
    /// Reproduce a figure: CSV table plus SVG chart.
    Figures(FiguresArgs),
    /// Run experiments from a JSON config into a CSV table.
    Sweep { config: PathBuf },
    /// Re-execute the deterministic rows of a sweep CSV.
    Verify { csv: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Bound(args) => cmd_bound(cli, args),
        Command::Fisher(args) => cmd_fisher(cli, args),
        Command::Renyi(args) => cmd_renyi(cli, args),
        Command::Prior(args) => cmd_prior(cli, args),
        Command::Counterexample(args) => cmd_counterexample(cli, args),
        Command::Figures(args) => cmd_figures(cli, args),
        Command::Sweep { config } => cmd_sweep(cli, config),
        Command::Verify { csv } => cmd_verify(cli, csv),
    }
}

fn print_report(cli: &Cli, report: &BoundReport) -> CliResult<()> {
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?
        );
        return Ok(());
    }
    let post = rdp_gaussian(report.inputs.alpha, report.inputs.delta_sens);
    println!("method          value           regime          amplification");
    let factor = if post > 0.0 {
        format!("{:.6}", report.value / post)
    } else {
        "-".to_string()
    };
    println!(
        "{:<15} {:<15.9} {:<15} {}",
        report.method, report.value, report.regime, factor
    );
    if !report.notes.is_empty() {
        println!("notes: {}", report.notes);
    }
    Ok(())
}

fn cmd_bound(cli: &Cli, args: &BoundArgs) -> CliResult<()> {
    let params = PrivacyParams::new(
        args.alpha,
        args.delta,
        args.c,
        args.d,
        args.k,
        NSyn::Infinite,
    )?;
    let report = match args.method {
        BoundMethod::Min => account(&params)?,
        BoundMethod::Post => {
            let value = rdp_gaussian(args.alpha, args.delta);
            BoundReport {
                value,
                method: Method::PostProcessing,
                regime: if args.delta == 0.0 {
                    Regime::Boundary
                } else {
                    Regime::NotAmplified
                },
                inputs: params,
                notes: String::new(),
            }
        }
        BoundMethod::Global => {
            let value = global_bound_multik(args.alpha, args.c, args.d, args.k, args.delta)?;
            let post = rdp_gaussian(args.alpha, args.delta);
            BoundReport {
                value,
                method: if args.k == 1 {
                    Method::GlobalK1
                } else {
                    Method::GlobalMultik
                },
                regime: if args.delta == 0.0 {
                    Regime::Boundary
                } else if value < post {
                    Regime::Amplified
                } else {
                    Regime::NotAmplified
                },
                inputs: params,
                notes: String::new(),
            }
        }
        BoundMethod::Local => {
            let norm_w = args.norm_w.unwrap_or((args.c - args.delta).max(0.0));
            let (lo, hi) = local_band_k1(args.d, norm_w, args.c)?;
            let post = rdp_gaussian(args.alpha, args.delta);
            BoundReport {
                value: hi * post,
                method: Method::LocalBand,
                regime: if args.delta == 0.0 {
                    Regime::Boundary
                } else if hi < 1.0 {
                    Regime::Amplified
                } else {
                    Regime::NotAmplified
                },
                inputs: params,
                notes: format!("eta_lo={lo} eta_hi={hi} band=[{};{}]", lo * post, hi * post),
            }
        }
        BoundMethod::Prior => {
            let n = args
                .n_syn
                .ok_or_else(|| CliError::Usage("--method prior needs --n-syn".to_string()))?;
            let p = PriorWorkParams::new(args.c_prime, n, args.d, args.k, args.delta, args.alpha)?;
            let (threshold, amplified) = no_amplification_threshold(&p);
            let conv = rdp_conversion(&p, cli.tol)?;
            let post = rdp_gaussian(args.alpha, args.delta);
            BoundReport {
                value: conv.l_alpha,
                method: Method::PriorWork,
                regime: if args.delta == 0.0 {
                    Regime::Boundary
                } else if amplified && conv.l_alpha < post {
                    Regime::Amplified
                } else {
                    Regime::NotAmplified
                },
                inputs: params,
                notes: format!(
                    "threshold={threshold} z_plus={:?} z_minus={:?}",
                    conv.z_plus, conv.z_minus
                ),
            }
        }
    };
    print_report(cli, &report)
}

fn cmd_fisher(cli: &Cli, args: &FisherArgs) -> CliResult<()> {
    let mut lines = Vec::new();
    for &d in &args.d {
        for &theta in &args.theta {
            let bounds = fisher_bounds_ncx2(d, theta)?;
            let quad = fisher_quadrature_ncx2(d, theta, cli.tol)?;
            let mut rng = RngStream::new(cli.seed, d as u64).rng();
            let (mc, stderr) = fisher_mc_score_sq(d, theta, args.samples, &mut rng)?;
            let (mc_ric, stderr_ric) = fisher_mc_rician(d, theta, args.samples, &mut rng)?;
            let tight_upper = bounds.upper.min(bounds.upper_sharp).min(bounds.upper_alt);
            let ok = quad >= bounds.lower - 1e-6
                && quad <= tight_upper + 1e-6
                && (mc - quad).abs() <= 3.0 * stderr.max(1e-12)
                && (mc_ric - quad).abs() <= 3.0 * stderr_ric.max(1e-12);
            lines.push(serde_json::json!({
                "d": d,
                "theta": theta,
                "lower": bounds.lower,
                "quadrature": quad,
                "mc": mc,
                "mc_stderr": stderr,
                "mc_rician": mc_ric,
                "mc_rician_stderr": stderr_ric,
                "upper": bounds.upper,
                "upper_sharp": bounds.upper_sharp,
                "upper_alt": bounds.upper_alt,
                "status": if ok { "ok" } else { "sandwich-violation" },
            }));
        }
    }
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&lines).map_err(|e| CliError::Io(e.to_string()))?
        );
    } else {
        println!(
            "{:>4} {:>7} {:>10} {:>10} {:>10} {:>9} {:>10} {:>11} {:>10} status",
            "d", "theta", "lower", "quad", "mc", "stderr", "upper", "upper_sharp", "upper_alt"
        );
        for l in &lines {
            println!(
                "{:>4} {:>7} {:>10.6} {:>10.6} {:>10.6} {:>9.6} {:>10.6} {:>11.6} {:>10.6} {}",
                l["d"].as_u64().unwrap(),
                l["theta"].as_f64().unwrap(),
                l["lower"].as_f64().unwrap(),
                l["quadrature"].as_f64().unwrap(),
                l["mc"].as_f64().unwrap(),
                l["mc_stderr"].as_f64().unwrap(),
                l["upper"].as_f64().unwrap(),
                l["upper_sharp"].as_f64().unwrap(),
                l["upper_alt"].as_f64().unwrap(),
                l["status"].as_str().unwrap()
            );
        }
    }
    Ok(())
}

fn cmd_renyi(cli: &Cli, args: &RenyiArgs) -> CliResult<()> {
    let Family::Ncx2 = args.family;
    match args.method {
        RenyiMethod::Quadrature => {
            let v = renyi_ncx2_quadrature(args.alpha, args.d, args.theta_v, args.theta_w, cli.tol)?;
            output_value(cli, v, None, "quadrature")
        }
        RenyiMethod::FiniteN => {
            let n = args
                .n_syn
                .ok_or_else(|| CliError::Usage("--method finite-n needs --n-syn".to_string()))?;
            let v = renyi_finite_n_k1(args.alpha, args.d, n, args.theta_v, args.theta_w, cli.tol)?;
            output_value(cli, v, None, "finite_n_quadrature")
        }
        RenyiMethod::Variational => {
            let pv = NoncentralChiSq::new(args.d, args.theta_v)?;
            let pw = NoncentralChiSq::new(args.d, args.theta_w)?;
            let sp = move |rng: &mut ChaCha8Rng, out: &mut [f64]| out[0] = pv.sample(rng);
            let sq = move |rng: &mut ChaCha8Rng, out: &mut [f64]| out[0] = pw.sample(rng);
            let cfg = match args.profile {
                ProfileArg::Ci => TrainConfig::ci(args.alpha, RngStream::new(cli.seed, 0)),
                ProfileArg::Full => TrainConfig::paper(args.alpha, RngStream::new(cli.seed, 0)),
            };
            let est = variational_renyi(&sp, &sq, 1, &cfg)?;
            output_value(cli, est.mean, Some(est.std), "variational")
        }
    }
}

fn output_value(cli: &Cli, value: f64, stderr: Option<f64>, method: &str) -> CliResult<()> {
    if cli.json {
        println!(
            "{}",
            serde_json::json!({"method": method, "value": value, "stderr": stderr})
        );
    } else {
        match stderr {
            Some(s) => println!("{method}: {value} ± {s}"),
            None => println!("{method}: {value}"),
        }
    }
    Ok(())
}

fn cmd_prior(cli: &Cli, args: &PriorArgs) -> CliResult<()> {
    let p = PriorWorkParams::new(
        args.c_prime,
        args.n_syn,
        args.d,
        args.k,
        args.delta,
        args.alpha,
    )?;
    let (threshold, amplified) = no_amplification_threshold(&p);
    let conv = rdp_conversion(&p, cli.tol)?;
    let post = rdp_gaussian(args.alpha, args.delta);
    if cli.json {
        println!(
            "{}",
            serde_json::json!({
                "trade_off_shift": p.trade_off_shift(),
                "threshold": threshold,
                "amplified": amplified,
                "l_alpha": conv.l_alpha,
                "z_plus": conv.z_plus,
                "z_minus": conv.z_minus,
                "post_processing": post,
                "rate_floor": 2.0 * p.trade_off_shift() * post,
            })
        );
    } else {
        println!("trade-off shift C_(n,k,d): {}", p.trade_off_shift());
        println!("no-amplification threshold: {threshold} (amplified: {amplified})");
        println!("l_alpha: {} (post-processing {post})", conv.l_alpha);
        if let (Some(zp), Some(zm)) = (conv.z_plus, conv.z_minus) {
            println!("z_plus: {zp}, z_minus: {zm}");
        }
    }
    Ok(())
}

fn cmd_counterexample(cli: &Cli, args: &CounterexampleArgs) -> CliResult<()> {
    let r = counterexample_demo(args.a, args.sigma, args.delta)?;
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&r).map_err(|e| CliError::Io(e.to_string()))?
        );
    } else {
        println!("I_cauchy:  {}", r.i_cauchy);
        println!("I_gauss:   {}", r.i_gauss);
        println!("D2_cauchy: {}", r.d2_cauchy);
        println!("D2_gauss:  {}", r.d2_gauss);
        println!(
            "fisher ordering: {}; divergence ordering: {}",
            if r.i_cauchy > r.i_gauss {
                "cauchy > gauss"
            } else {
                "cauchy <= gauss"
            },
            if r.d2_cauchy < r.d2_gauss {
                "cauchy < gauss"
            } else {
                "cauchy >= gauss"
            }
        );
    }
    Ok(())
}

fn cmd_figures(cli: &Cli, args: &FiguresArgs) -> CliResult<()> {
    let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let profile = match args.profile {
        ProfileArg::Ci => figures::Profile::Ci,
        ProfileArg::Full => figures::Profile::Full,
    };
    let (csv_path, svg_path) = figures::run_figure(
        &args.which,
        profile,
        &out_dir,
        cli.seed,
        cli.threads,
        cli.tol,
    )?;
    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(())
}

fn cmd_sweep(cli: &Cli, config: &std::path::Path) -> CliResult<()> {
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("sweep.csv"));
    let n = sweep::run_to_file(config, &out, cli.tol, cli.threads)?;
    println!("wrote {n} rows to {}", out.display());
    Ok(())
}

fn cmd_verify(cli: &Cli, csv: &std::path::Path) -> CliResult<()> {
    let outcome = verify::verify_file(csv, cli.tol)?;
    println!(
        "verified {} deterministic rows, skipped {} stochastic rows",
        outcome.verified, outcome.skipped
    );
    Ok(())
}
