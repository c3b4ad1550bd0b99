//! Command-line driver: instance generation, path computation, certification,
//! and figure-data export.
//!
//! Exit codes: `0` success, `1` verification failure, `2` input or I/O
//! error, `3` truncated result (partial output files are still written).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lasso_path::io::{
    load_instance, load_path, read_csv_instance, save_instance, save_path, write_plot_data,
    InstanceMeta,
};
use lasso_path::{
    compute_approx_path, compute_exact_path, compute_exact_path_extended, count_segments,
    gen_pathological_with, segment_bound, verify_path, AdversarialConfig, ApproxOptions, GenError,
    HomotopyOptions, PathError, ProblemInstance, RegularizationPath, VerifyOptions,
};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_TRUNCATED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "lasso-path",
    version,
    about = "Exact and approximate Lasso regularization paths",
    after_help = "Set LASSO_PATH_LOG=debug (or info, warn) for diagnostics on stderr."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a problem instance and write it as JSON.
    Gen(GenArgs),
    /// Compute a regularization path for a stored instance.
    Path(PathArgs),
    /// Certify a stored path against its instance.
    Verify(VerifyArgs),
    /// Summarize a stored path.
    Stats(StatsArgs),
    /// Export per-kink coefficients for plotting, as CSV.
    PlotData(PlotDataArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of design columns.
    #[arg(long)]
    p: usize,
    /// Scale factor for each added worst-case column, in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    alpha_factor: f64,
    /// Draw a random Gaussian instance instead of the worst-case family.
    #[arg(long)]
    random: bool,
    /// Number of observations for --random.
    #[arg(long, requires = "random")]
    n: Option<usize>,
    /// RNG seed for --random.
    #[arg(long, default_value_t = 0, requires = "random")]
    seed: u64,
    /// Output instance file (JSON).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PathArgs {
    /// Input instance file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Center X columns and y, and scale both to unit norm (CSV ingestion).
    #[arg(long)]
    normalize: bool,
    /// Trace the exact homotopy path.
    #[arg(long, conflicts_with = "approx")]
    exact: bool,
    /// Run the approximate-path algorithm at --eps.
    #[arg(long, requires = "eps")]
    approx: bool,
    /// Target relative duality gap for --approx.
    #[arg(long)]
    eps: Option<f64>,
    /// Use extended-precision segment arithmetic for the exact path.
    #[arg(long, conflicts_with = "approx")]
    extended: bool,
    /// Stop the exact path at this lambda (default: run out of events).
    #[arg(long)]
    lambda_min: Option<f64>,
    /// Smallest lambda of the approximate path (default: lambda_max / 1e3).
    #[arg(long)]
    lambda1: Option<f64>,
    /// Output path file (JSON).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Input instance file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Center X columns and y, and scale both to unit norm (CSV ingestion).
    #[arg(long)]
    normalize: bool,
    /// Stored path file to certify.
    #[arg(long)]
    path: PathBuf,
    /// Gap target; defaults to the path's own epsilon (zero when exact).
    #[arg(long)]
    eps: Option<f64>,
    /// Number of lambda samples on the certification grid.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Optional JSON report output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Stored path file.
    #[arg(long)]
    path: PathBuf,
}

#[derive(Args)]
struct PlotDataArgs {
    /// Stored path file.
    #[arg(long)]
    path: PathBuf,
    /// Output CSV file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LASSO_PATH_LOG")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Path(args) => cmd_path(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Stats(args) => cmd_stats(&args),
        Command::PlotData(args) => cmd_plot_data(&args),
    };
    match code {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn cmd_gen(args: &GenArgs) -> Result<ExitCode, String> {
    if args.random {
        let n = args.n.ok_or("--random requires --n")?;
        let inst = ProblemInstance::gaussian(n, args.p, args.seed).map_err(|e| e.to_string())?;
        let meta = InstanceMeta {
            name: Some(format!("gaussian-n{}-p{}-seed{}", n, args.p, args.seed)),
            generated_by: Some("gen --random".to_string()),
            alpha_factor: None,
        };
        save_instance(&args.out, &inst, meta).map_err(|e| e.to_string())?;
        println!("wrote {} ({} x {})", args.out.display(), n, args.p);
        return Ok(ExitCode::SUCCESS);
    }
    let mut config = AdversarialConfig::new(args.p);
    config.alpha_factor = args.alpha_factor;
    let meta = |p: usize| InstanceMeta {
        name: Some(format!("pathological-p{p}")),
        generated_by: Some("gen".to_string()),
        alpha_factor: Some(args.alpha_factor),
    };
    match gen_pathological_with(&config) {
        Ok(inst) => {
            save_instance(&args.out, &inst, meta(inst.p())).map_err(|e| e.to_string())?;
            println!(
                "wrote {} ({} x {}, expected exact segments: {})",
                args.out.display(),
                inst.n(),
                inst.p(),
                expected_segments(inst.p())
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(GenError::PrecisionExhausted {
            achieved_p,
            instance,
        }) => {
            save_instance(&args.out, &instance, meta(achieved_p)).map_err(|e| e.to_string())?;
            eprintln!(
                "error: precision exhausted at p = {}; wrote the p = {achieved_p} instance to {}",
                args.p,
                args.out.display()
            );
            Ok(ExitCode::from(EXIT_TRUNCATED))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_path(args: &PathArgs) -> Result<ExitCode, String> {
    let inst = ingest(&args.input, args.format, args.normalize)?;
    if args.approx {
        let eps = args.eps.ok_or("--approx requires --eps")?;
        let lambda1 = args.lambda1.unwrap_or(inst.lambda_max() * 1e-3);
        let options = ApproxOptions::new(eps, lambda1);
        match compute_approx_path(&inst, &options) {
            Ok(approx) => {
                save_path(&args.out, &approx.path).map_err(|e| e.to_string())?;
                println!(
                    "wrote {} ({} records, {} first-order steps, bound {})",
                    args.out.display(),
                    count_segments(&approx.path),
                    approx.first_order_steps,
                    segment_bound(inst.lambda_max(), lambda1, eps).map_err(|e| e.to_string())?
                );
                Ok(ExitCode::SUCCESS)
            }
            Err(e) => finish_truncated_path(&args.out, e),
        }
    } else {
        let options = HomotopyOptions {
            lambda_min: args.lambda_min,
            ..HomotopyOptions::default()
        };
        let result = if args.extended {
            compute_exact_path_extended(&inst, &options)
        } else {
            compute_exact_path(&inst, &options)
        };
        match result {
            Ok(path) => {
                save_path(&args.out, &path).map_err(|e| e.to_string())?;
                println!(
                    "wrote {} ({} segments, lambda {:e} down to {:e})",
                    args.out.display(),
                    count_segments(&path),
                    path.lambda_max(),
                    path.lambda_last()
                );
                Ok(ExitCode::SUCCESS)
            }
            Err(e) => finish_truncated_path(&args.out, e),
        }
    }
}

/// Writes whatever partial path a truncation carries, then reports it.
fn finish_truncated_path(out: &Path, err: PathError) -> Result<ExitCode, String> {
    match err {
        PathError::Truncated { path, reason } => {
            save_path(out, &path).map_err(|e| e.to_string())?;
            eprintln!(
                "error: path truncated: {reason}; wrote {} segments to {}",
                count_segments(&path),
                out.display()
            );
            Ok(ExitCode::from(EXIT_TRUNCATED))
        }
        other => Err(other.to_string()),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, String> {
    let inst = ingest(&args.input, args.format, args.normalize)?;
    let path = load_path(&args.path).map_err(|e| e.to_string())?;
    let options = VerifyOptions {
        samples: args.samples,
        epsilon: args.eps,
    };
    let report = verify_path(&inst, &path, &options).map_err(|e| e.to_string())?;
    println!(
        "gap: max relative gap {:.3e} at lambda {:.6e} over {} samples (target {:.3e}): {}",
        report.max_relative_gap,
        report.worst_lambda,
        report.samples,
        report.epsilon,
        pass_str(report.gap_pass)
    );
    println!(
        "structure: {} segments, {} distinct sign patterns, segment bound {}, antipodal-free {}",
        report.segment_count,
        report.pattern_count,
        pass_str(report.upper_bound_ok),
        pass_str(report.antipodal_free)
    );
    println!("verdict: {}", pass_str(report.pass));
    if let Some(out) = &args.out {
        let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
        std::fs::write(out, json + "\n").map_err(|e| e.to_string())?;
    }
    if report.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_VERIFY_FAIL))
    }
}

fn cmd_stats(args: &StatsArgs) -> Result<ExitCode, String> {
    let path = load_path(&args.path).map_err(|e| e.to_string())?;
    print_stats(&path);
    Ok(ExitCode::SUCCESS)
}

fn print_stats(path: &RegularizationPath) {
    let kind = match path.epsilon() {
        Some(eps) => format!("approx (eps = {eps:e})"),
        None => "exact".to_string(),
    };
    println!("kind: {kind}");
    println!("segments: {}", count_segments(path));
    println!("lambda_max: {:e}", path.lambda_max());
    println!("lambda_last: {:e}", path.lambda_last());
    println!("complete: {}", path.complete);
    let p = path.p();
    if p > 0 {
        println!("variables: {p}");
        if path.epsilon().is_none() {
            println!("worst-case segments at this p: {}", expected_segments(p));
        }
    }
}

fn cmd_plot_data(args: &PlotDataArgs) -> Result<ExitCode, String> {
    let path = load_path(&args.path).map_err(|e| e.to_string())?;
    let file = std::fs::File::create(&args.out).map_err(|e| e.to_string())?;
    write_plot_data(std::io::BufWriter::new(file), &path).map_err(|e| e.to_string())?;
    println!(
        "wrote {} ({} rows)",
        args.out.display(),
        count_segments(&path)
    );
    Ok(ExitCode::SUCCESS)
}

fn ingest(
    input: &Path,
    format: Option<Format>,
    normalize: bool,
) -> Result<ProblemInstance, String> {
    let format = format.unwrap_or_else(|| {
        match input.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    });
    match format {
        Format::Json => {
            if normalize {
                return Err("--normalize applies to CSV ingestion only".to_string());
            }
            let (inst, _) = load_instance(input).map_err(|e| e.to_string())?;
            Ok(inst)
        }
        Format::Csv => {
            let (inst, _) = read_csv_instance(input, normalize).map_err(|e| e.to_string())?;
            Ok(inst)
        }
    }
}

/// `(3^p + 1) / 2`, saturating at `usize::MAX` for display purposes.
fn expected_segments(p: usize) -> usize {
    3usize
        .checked_pow(p.min(u32::MAX as usize) as u32)
        .map_or(usize::MAX, |t| t / 2 + 1)
}

fn pass_str(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
