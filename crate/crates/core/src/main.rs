use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pocs::experiment::{
    fit_rate, run_m_sweep, run_rip_bound, run_rip_estimate, run_tau_sweep, Aggregate,
    MeasurementGrid, RipReport, SweepConfig, SweepResult,
};
use pocs::output::{format_sig10, read_csv, read_json, write_result, Format};
use pocs::{Error, Result, Scheme};

/// Phase-only compressive sensing experiments.
#[derive(Parser, Debug)]
#[command(name = "pocs", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reconstruction error against measurement count (noiseless).
    SweepM(SweepMArgs),
    /// Reconstruction error against phase-noise bound at fixed m.
    SweepTau(SweepTauArgs),
    /// Empirical (l1,l2)-RIP distortion of one drawn matrix.
    RipEstimate(RipEstimateArgs),
    /// Minimum m from the Gaussian sample-complexity bound.
    RipBound(RipBoundArgs),
    /// Empirical decay exponent of the error in m from a sweep result.
    FitRate(FitRateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Po,
    Cs,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Po => Scheme::PhaseOnly,
            SchemeArg::Cs => Scheme::ClassicalCs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Monte Carlo trials per cell
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct SweepMArgs {
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Sparsity level (repeatable)
    #[arg(long = "s", default_values_t = [2, 4, 10, 20, 50])]
    s: Vec<usize>,
    /// log2(m/n) grid point (repeatable)
    #[arg(long = "log2-ratio", allow_negative_numbers = true,
          default_values_t = [-6.0, -4.0, -2.0, 0.0, 2.0, 4.0])]
    log2_ratio: Vec<f64>,
    #[arg(long = "scheme", value_enum, default_values_t = [SchemeArg::Po, SchemeArg::Cs])]
    scheme: Vec<SchemeArg>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct SweepTauArgs {
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long = "s", default_values_t = [10])]
    s: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    m: usize,
    /// Phase-noise bound in radians; a trailing `pi` multiplies by π, e.g.
    /// `0.2pi` (repeatable)
    #[arg(long = "tau", value_parser = parse_angle, default_values_t = default_tau_grid())]
    tau: Vec<f64>,
    #[arg(long = "scheme", value_enum, default_values_t = [SchemeArg::Po])]
    scheme: Vec<SchemeArg>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct RipEstimateArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Sparsity level of the probes
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 1000)]
    probes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Phase-noise bound used in the reported error bound
    #[arg(long, value_parser = parse_angle, default_value = "0")]
    tau: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct RipBoundArgs {
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eta: f64,
}

#[derive(Args, Debug)]
struct FitRateArgs {
    /// Sweep result written by `sweep-m` (`.json` is read as JSON, anything
    /// else as CSV)
    #[arg(long)]
    input: PathBuf,
    /// Signal length of the sweep; required for CSV input
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Po)]
    scheme: SchemeArg,
    #[arg(long)]
    s: usize,
    #[arg(long = "min-log2-ratio", allow_negative_numbers = true, default_value_t = 0.0)]
    min_log2_ratio: f64,
}

fn default_tau_grid() -> Vec<f64> {
    [0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 3.0, 4.0]
        .iter()
        .map(|k| k * PI)
        .collect()
}

fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let text = text.trim();
    let (number, factor) = match text.strip_suffix("pi") {
        Some("") => ("1", PI),
        Some(rest) => (rest, PI),
        None => (text, 1.0),
    };
    number
        .parse::<f64>()
        .map(|x| x * factor)
        .map_err(|_| format!("`{text}` is not an angle (e.g. 0.5, 2pi)"))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(result: &SweepResult, run: &RunArgs) -> Result<()> {
    let mut out = open_output(run.out.as_deref())?;
    write_result(result, run.format.into(), &mut out)?;
    out.flush()?;
    Ok(())
}

fn sweep_config(
    n: usize,
    s: &[usize],
    grid: MeasurementGrid,
    tau_grid: Vec<f64>,
    schemes: &[SchemeArg],
    run: &RunArgs,
    aggregate: Aggregate,
) -> SweepConfig {
    let mut schemes: Vec<Scheme> = schemes.iter().map(|&s| s.into()).collect();
    schemes.dedup();
    SweepConfig {
        n,
        sparsity_levels: s.to_vec(),
        grid,
        tau_grid,
        schemes,
        trials: run.trials,
        master_seed: run.seed,
        output_path: run.out.clone(),
        aggregate,
        workers: run.workers,
    }
}

fn write_rip_report(report: &RipReport, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "m,n,s,probes,seed,tau,delta_lower,lemma1_bound,thm1_bound")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                report.m,
                report.n,
                report.estimate.s,
                report.estimate.num_probes,
                report.seed,
                format_sig10(report.tau),
                format_sig10(report.estimate.delta_lower),
                format_sig10(report.lemma1_bound),
                format_sig10(report.thm1_bound),
            )?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SweepM(args) => {
            let config = sweep_config(
                args.n,
                &args.s,
                MeasurementGrid::Log2Ratios(args.log2_ratio.clone()),
                vec![0.0],
                &args.scheme,
                &args.run,
                Aggregate::MeanErrorDb,
            );
            let result = run_m_sweep(&config)?;
            emit(&result, &args.run)
        }
        Command::SweepTau(args) => {
            let config = sweep_config(
                args.n,
                &args.s,
                MeasurementGrid::Fixed(args.m),
                args.tau.clone(),
                &args.scheme,
                &args.run,
                Aggregate::MeanError,
            );
            let result = run_tau_sweep(&config)?;
            emit(&result, &args.run)
        }
        Command::RipEstimate(args) => {
            let report = run_rip_estimate(args.m, args.n, args.s, args.probes, args.seed, args.tau)?;
            let mut out = open_output(args.out.as_deref())?;
            write_rip_report(&report, args.format.into(), &mut out)?;
            out.flush()?;
            Ok(())
        }
        Command::RipBound(args) => {
            let m = run_rip_bound(args.delta, args.s, args.n, args.eta)?;
            println!("{m}");
            Ok(())
        }
        Command::FitRate(args) => {
            let file = BufReader::new(File::open(&args.input)?);
            let is_json = args.input.extension().is_some_and(|e| e == "json");
            let result = if is_json {
                read_json(file)?
            } else {
                let n = args
                    .n
                    .ok_or_else(|| Error::Config { field: "n", message: "required for CSV input".into() })?;
                read_csv(file, n)?
            };
            let slope = fit_rate(&result, args.scheme.into(), args.s, args.min_log2_ratio)?;
            println!("{}", format_sig10(slope));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
