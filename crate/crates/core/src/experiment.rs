//! Seeded Monte Carlo sweeps over measurement count and phase noise.
//!
//! Every trial owns a random stream derived from the master seed and the
//! trial's coordinates:
//!
//! ```text
//! stream_id = derive_stream_id([scheme_code, s, m, tau.to_bits(), trial_index])
//! ```
//!
//! (see [`crate::rng::derive_stream_id`]). The signal, the matrix and the
//! phase noise come from substreams 0, 1 and 2 of that stream, so any single
//! trial can be replayed in isolation and results do not depend on grid order
//! or on the number of worker threads.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recon::{direction_error, pbp};
use crate::rip::{
    lemma1_error_bound, mean_and_standard_error, rip_distortion_probe, thm1_error_bound,
    thm2_sample_bound, RipBoundInputs, RipEstimate,
};
use crate::rng::{derive_stream_id, RngStream};
use crate::sensing::{
    measure_linear, measure_phase_only, sample_sensing_matrix, sample_sparse_signal, Scheme,
};

const SIGNAL_STREAM: u64 = 0;
const MATRIX_STREAM: u64 = 1;
const NOISE_STREAM: u64 = 2;
const PROBE_STREAM: u64 = 3;

/// How the measurement counts of a sweep are specified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementGrid {
    /// `m = round(2^r · n)` for each ratio `r`.
    Log2Ratios(Vec<f64>),
    Fixed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregate {
    /// `10·log₁₀` of the mean linear error.
    MeanErrorDb,
    MeanError,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub sparsity_levels: Vec<usize>,
    pub grid: MeasurementGrid,
    pub tau_grid: Vec<f64>,
    pub schemes: Vec<Scheme>,
    pub trials: usize,
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    pub aggregate: Aggregate,
    /// Worker threads; `None` uses the rayon default.
    pub workers: Option<usize>,
}

impl SweepConfig {
    /// Noiseless sweep over `m` for both schemes.
    pub fn m_sweep(n: usize, sparsity_levels: Vec<usize>, log2_ratios: Vec<f64>) -> Self {
        SweepConfig {
            n,
            sparsity_levels,
            grid: MeasurementGrid::Log2Ratios(log2_ratios),
            tau_grid: vec![0.0],
            schemes: vec![Scheme::PhaseOnly, Scheme::ClassicalCs],
            trials: 10_000,
            master_seed: 0,
            output_path: None,
            aggregate: Aggregate::MeanErrorDb,
            workers: None,
        }
    }

    /// Phase-noise sweep at a fixed measurement count, phase-only scheme.
    pub fn tau_sweep(n: usize, s: usize, m: usize, tau_grid: Vec<f64>) -> Self {
        SweepConfig {
            n,
            sparsity_levels: vec![s],
            grid: MeasurementGrid::Fixed(m),
            tau_grid,
            schemes: vec![Scheme::PhaseOnly],
            trials: 10_000,
            master_seed: 0,
            output_path: None,
            aggregate: Aggregate::MeanError,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::config("n", "must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.sparsity_levels.is_empty() {
            return Err(Error::config("sparsity_levels", "at least one level is required"));
        }
        if let Some(&s) = self.sparsity_levels.iter().find(|&&s| s == 0 || s > self.n) {
            return Err(Error::config(
                "sparsity_levels",
                format!("level {s} outside [1, n = {}]", self.n),
            ));
        }
        if self.schemes.is_empty() {
            return Err(Error::config("schemes", "at least one scheme is required"));
        }
        if self.tau_grid.is_empty() {
            return Err(Error::config("tau_grid", "at least one value is required"));
        }
        if let Some(tau) = self.tau_grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(Error::config(
                "tau_grid",
                format!("{tau} is not a finite nonnegative phase bound"),
            ));
        }
        if self.schemes.contains(&Scheme::ClassicalCs) && self.tau_grid.iter().any(|&t| t > 0.0)
        {
            return Err(Error::config(
                "tau_grid",
                "phase noise only applies to the phase-only scheme",
            ));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "must be at least 1"));
        }
        match &self.grid {
            MeasurementGrid::Fixed(0) => {
                return Err(Error::config("m", "must be at least 1"));
            }
            MeasurementGrid::Fixed(_) => {}
            MeasurementGrid::Log2Ratios(ratios) => {
                if ratios.is_empty() {
                    return Err(Error::config("log2_m_over_n", "at least one ratio is required"));
                }
                for &r in ratios {
                    let m = (r.exp2() * self.n as f64).round();
                    if !(m.is_finite() && m >= 1.0 && m <= u32::MAX as f64) {
                        return Err(Error::config(
                            "log2_m_over_n",
                            format!("ratio {r} gives no valid measurement count for n = {}", self.n),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn measurement_counts(&self) -> Vec<usize> {
        match &self.grid {
            MeasurementGrid::Fixed(m) => vec![*m],
            MeasurementGrid::Log2Ratios(ratios) => ratios
                .iter()
                .map(|r| (r.exp2() * self.n as f64).round() as usize)
                .collect(),
        }
    }

    /// Cells in output order: scheme, then sparsity, then `m`, then `tau`.
    pub fn cells(&self) -> Vec<Cell> {
        let ms = self.measurement_counts();
        let mut out = Vec::new();
        for &scheme in &self.schemes {
            for &s in &self.sparsity_levels {
                for &m in &ms {
                    for &tau in &self.tau_grid {
                        out.push(Cell { scheme, s, m, tau });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub scheme: Scheme,
    pub s: usize,
    pub m: usize,
    pub tau: f64,
}

impl Cell {
    pub fn trial_stream_id(&self, trial_index: u64) -> u64 {
        derive_stream_id(&[
            self.scheme.code(),
            self.s as u64,
            self.m as u64,
            self.tau.to_bits(),
            trial_index,
        ])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub scheme: Scheme,
    pub s: usize,
    pub m: usize,
    pub tau: f64,
    pub trial_index: u64,
    /// Stream id of the trial; `RngStream::new(master_seed, seed_used)`
    /// replays it.
    pub seed_used: u64,
    /// Direction error, `NaN` for failed trials.
    pub error: f64,
    pub failed: bool,
}

/// Runs one trial: draw `x₀` and `Φ`, measure, reconstruct with PBP and
/// score the direction error.
pub fn run_trial(cell: &Cell, n: usize, trial_index: u64, master_seed: u64) -> Result<TrialRecord> {
    let seed_used = cell.trial_stream_id(trial_index);
    let base = RngStream::new(master_seed, seed_used);
    let x0 = sample_sparse_signal(&mut base.substream(SIGNAL_STREAM), n, cell.s)?;
    let phi = sample_sensing_matrix(&mut base.substream(MATRIX_STREAM), cell.m, n, cell.scheme)?;
    let z = match cell.scheme {
        Scheme::PhaseOnly => {
            measure_phase_only(&phi, &x0, cell.tau, &mut base.substream(NOISE_STREAM))?.z
        }
        Scheme::ClassicalCs => measure_linear(&phi, &x0)?,
    };
    let estimate = pbp(&phi, &z, cell.s)?;
    let (error, failed) = match direction_error(x0.vec(), &estimate.xhat) {
        Ok(e) => (e, false),
        Err(Error::DegenerateEstimate) => (f64::NAN, true),
        Err(other) => return Err(other),
    };
    Ok(TrialRecord {
        scheme: cell.scheme,
        s: cell.s,
        m: cell.m,
        tau: cell.tau,
        trial_index,
        seed_used,
        error,
        failed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub scheme: Scheme,
    pub s: usize,
    pub m: usize,
    pub tau: f64,
    pub trials: usize,
    pub failures: usize,
    pub mean_error: f64,
    pub mean_error_db: f64,
    pub stderr_error: f64,
}

impl CellSummary {
    /// Folds trial records in the order given.
    pub fn from_records(cell: &Cell, records: &[TrialRecord]) -> Result<Self> {
        let errors: Vec<f64> = records.iter().filter(|r| !r.failed).map(|r| r.error).collect();
        if errors.is_empty() {
            return Err(Error::Numerical(format!(
                "every trial failed in cell scheme={} s={} m={} tau={}",
                cell.scheme, cell.s, cell.m, cell.tau
            )));
        }
        let (mean_error, stderr_error) = mean_and_standard_error(&errors);
        Ok(CellSummary {
            scheme: cell.scheme,
            s: cell.s,
            m: cell.m,
            tau: cell.tau,
            trials: records.len(),
            failures: records.len() - errors.len(),
            mean_error,
            mean_error_db: 10.0 * mean_error.log10(),
            stderr_error,
        })
    }

    pub fn value(&self, aggregate: Aggregate) -> f64 {
        match aggregate {
            Aggregate::MeanErrorDb => self.mean_error_db,
            Aggregate::MeanError => self.mean_error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub n: usize,
    /// Echo of the configuration; absent when loaded from CSV.
    pub config: Option<SweepConfig>,
    pub cells: Vec<CellSummary>,
}

impl SweepResult {
    pub fn cell(&self, scheme: Scheme, s: usize, m: usize) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.scheme == scheme && c.s == s && c.m == m)
    }
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::config("workers", e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

/// Runs every cell of a validated configuration.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let cells = config.cells();
    let summaries = with_workers(config.workers, || {
        cells
            .iter()
            .map(|cell| {
                let records = (0..config.trials as u64)
                    .into_par_iter()
                    .map(|t| run_trial(cell, config.n, t, config.master_seed))
                    .collect::<Result<Vec<_>>>()?;
                CellSummary::from_records(cell, &records)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(SweepResult {
        n: config.n,
        config: Some(config.clone()),
        cells: summaries,
    })
}

/// Error against measurement count, noiseless.
pub fn run_m_sweep(config: &SweepConfig) -> Result<SweepResult> {
    if !matches!(config.grid, MeasurementGrid::Log2Ratios(_)) {
        return Err(Error::config("log2_m_over_n", "measurement sweep needs a log2(m/n) grid"));
    }
    if config.tau_grid.iter().any(|&t| t != 0.0) {
        return Err(Error::config("tau_grid", "measurement sweep is noiseless (tau = 0)"));
    }
    run_sweep(config)
}

/// Error against phase-noise bound at a fixed measurement count.
pub fn run_tau_sweep(config: &SweepConfig) -> Result<SweepResult> {
    if !matches!(config.grid, MeasurementGrid::Fixed(_)) {
        return Err(Error::config("m", "noise sweep needs a fixed measurement count"));
    }
    run_sweep(config)
}

/// Least-squares slope of `log₁₀(mean error)` against `log₁₀(m)` over the
/// cells of one scheme and sparsity level with `log₂(m/n) ≥ min_log2_ratio`.
pub fn fit_rate(
    result: &SweepResult,
    scheme: Scheme,
    s: usize,
    min_log2_ratio: f64,
) -> Result<f64> {
    let n = result.n as f64;
    let points: Vec<(f64, f64)> = result
        .cells
        .iter()
        .filter(|c| c.scheme == scheme && c.s == s)
        .filter(|c| (c.m as f64 / n).log2() >= min_log2_ratio - 1e-9)
        .map(|c| ((c.m as f64).log10(), c.mean_error.log10()))
        .collect();
    if points.len() < 3 {
        return Err(Error::invalid(format!(
            "rate fit needs at least 3 grid points, found {} for scheme {scheme}, s = {s}",
            points.len()
        )));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("rate fit needs at least two distinct measurement counts"));
    }
    let slope = sxy / sxx;
    if !slope.is_finite() {
        return Err(Error::Numerical("rate fit produced a non-finite slope".into()));
    }
    Ok(slope)
}

/// Setup for checking observed PBP errors against `2√(5δ̂) + 4τ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckConfig {
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub taus: Vec<f64>,
    pub trials: usize,
    /// Probes used for δ̂ at level `2s` on each drawn matrix.
    pub probes: usize,
    pub master_seed: u64,
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckRow {
    pub tau: f64,
    pub trials: usize,
    pub failures: usize,
    pub violations: usize,
    pub max_error: f64,
    /// Smallest `bound − error` observed.
    pub min_margin: f64,
    pub mean_delta: f64,
}

struct BoundTrial {
    delta: f64,
    errors: Vec<Option<f64>>,
}

/// For each trial, draws one phase-only `Φ` and `x₀`, estimates δ̂ at level
/// `min(2s, n)` on that `Φ`, then measures and reconstructs at every `τ`.
pub fn run_bound_check(config: &BoundCheckConfig) -> Result<Vec<BoundCheckRow>> {
    let BoundCheckConfig { n, s, m, trials, probes, master_seed, .. } = *config;
    if s == 0 || s > n || m == 0 || trials == 0 || probes == 0 {
        return Err(Error::invalid("bound check needs 1 ≤ s ≤ n, m ≥ 1, trials ≥ 1, probes ≥ 1"));
    }
    if config.taus.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::invalid("tau values must be finite and nonnegative"));
    }
    let level = (2 * s).min(n);
    let anchor = Cell { scheme: Scheme::PhaseOnly, s, m, tau: 0.0 };
    let per_trial = with_workers(config.workers, || {
        (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let base = RngStream::new(master_seed, derive_stream_id(&[anchor.trial_stream_id(t), PROBE_STREAM]));
                let x0 = sample_sparse_signal(&mut base.substream(SIGNAL_STREAM), n, s)?;
                let phi = sample_sensing_matrix(&mut base.substream(MATRIX_STREAM), m, n, Scheme::PhaseOnly)?;
                let delta =
                    rip_distortion_probe(&phi, level, probes, &mut base.substream(PROBE_STREAM))?
                        .delta_lower;
                let noise = base.substream(NOISE_STREAM);
                let errors = config
                    .taus
                    .iter()
                    .enumerate()
                    .map(|(k, &tau)| {
                        let z = measure_phase_only(&phi, &x0, tau, &mut noise.substream(k as u64))?.z;
                        let est = pbp(&phi, &z, s)?;
                        match direction_error(x0.vec(), &est.xhat) {
                            Ok(e) => Ok(Some(e)),
                            Err(Error::DegenerateEstimate) => Ok(None),
                            Err(other) => Err(other),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(BoundTrial { delta, errors })
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mean_delta = per_trial.iter().map(|t| t.delta).sum::<f64>() / trials as f64;
    Ok(config
        .taus
        .iter()
        .enumerate()
        .map(|(k, &tau)| {
            let mut row = BoundCheckRow {
                tau,
                trials,
                failures: 0,
                violations: 0,
                max_error: 0.0,
                min_margin: f64::INFINITY,
                mean_delta,
            };
            for trial in &per_trial {
                match trial.errors[k] {
                    None => row.failures += 1,
                    Some(err) => {
                        let margin = thm1_error_bound(trial.delta, tau) - err;
                        if margin < 0.0 {
                            row.violations += 1;
                        }
                        row.max_error = row.max_error.max(err);
                        row.min_margin = row.min_margin.min(margin);
                    }
                }
            }
            row
        })
        .collect())
}

/// Distortion estimate for one drawn phase-only matrix, with the error
/// bounds it implies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RipReport {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub tau: f64,
    pub estimate: RipEstimate,
    /// `√(5δ̂)`.
    pub lemma1_bound: f64,
    /// `2√(5δ̂) + 4τ`; meaningful for PBP at sparsity `s/2` when δ̂ was
    /// probed at level `s`.
    pub thm1_bound: f64,
}

const RIP_ESTIMATE_TAG: u64 = 0x5249_5045_5354; // "RIPEST"

/// Draws `Φ ∈ ℂ^{m×n}` (phase-only normalization) and searches its
/// distortion at level `s` with `probes` probes. The matrix depends only on
/// `(seed, m, n)`, and the probes for a smaller count are a prefix of those
/// for a larger one.
pub fn run_rip_estimate(
    m: usize,
    n: usize,
    s: usize,
    probes: usize,
    seed: u64,
    tau: f64,
) -> Result<RipReport> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::config("tau", format!("{tau} is not a finite nonnegative phase bound")));
    }
    let base = RngStream::new(seed, derive_stream_id(&[RIP_ESTIMATE_TAG, m as u64, n as u64]));
    let phi = sample_sensing_matrix(&mut base.substream(MATRIX_STREAM), m, n, Scheme::PhaseOnly)?;
    let estimate = rip_distortion_probe(&phi, s, probes, &mut base.substream(PROBE_STREAM))?;
    Ok(RipReport {
        m,
        n,
        seed,
        tau,
        lemma1_bound: lemma1_error_bound(estimate.delta_lower),
        thm1_bound: thm1_error_bound(estimate.delta_lower, tau),
        estimate,
    })
}

/// Minimum `m` from the Gaussian sample-complexity bound.
pub fn run_rip_bound(delta: f64, s: usize, n: usize, eta: f64) -> Result<u64> {
    Ok(thm2_sample_bound(&RipBoundInputs::new(delta, s, n, eta)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(n: usize, exponent: f64, log2s: &[f64]) -> SweepResult {
        let cells = log2s
            .iter()
            .map(|r| {
                let m = (r.exp2() * n as f64).round() as usize;
                let mean_error = 3.0 * (m as f64).powf(exponent);
                CellSummary {
                    scheme: Scheme::PhaseOnly,
                    s: 2,
                    m,
                    tau: 0.0,
                    trials: 1,
                    failures: 0,
                    mean_error,
                    mean_error_db: 10.0 * mean_error.log10(),
                    stderr_error: 0.0,
                }
            })
            .collect();
        SweepResult { n, config: None, cells }
    }

    #[test]
    fn exact_power_laws_recover_exponent() {
        let r = synthetic(256, -0.5, &[-2.0, 0.0, 2.0, 4.0]);
        assert!((fit_rate(&r, Scheme::PhaseOnly, 2, 0.0).unwrap() + 0.5).abs() < 1e-9);
        let r = synthetic(256, -0.25, &[0.0, 2.0, 4.0]);
        assert!((fit_rate(&r, Scheme::PhaseOnly, 2, 0.0).unwrap() + 0.25).abs() < 1e-9);
    }

    #[test]
    fn published_points_give_expected_slope() {
        // dB values of the s = 2 phase-only curve at log2(m/n) = 0, 2, 4.
        let db = [-10.6256988444573, -14.28000096159, -17.6637072106488];
        let mut r = synthetic(256, -0.5, &[0.0, 2.0, 4.0]);
        for (cell, d) in r.cells.iter_mut().zip(db) {
            cell.mean_error = 10f64.powf(d / 10.0);
        }
        let slope = fit_rate(&r, Scheme::PhaseOnly, 2, 0.0).unwrap();
        assert!((slope + 0.58).abs() < 0.01, "{slope}");
    }

    #[test]
    fn rate_fit_needs_three_points() {
        let r = synthetic(256, -0.5, &[-2.0, 0.0, 2.0]);
        assert!(matches!(
            fit_rate(&r, Scheme::PhaseOnly, 2, 0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(fit_rate(&r, Scheme::ClassicalCs, 2, -10.0).is_err());
    }

    #[test]
    fn config_validation_names_fields() {
        let field = |c: SweepConfig| match c.validate() {
            Err(Error::Config { field, .. }) => field,
            other => panic!("expected config error, got {other:?}"),
        };
        let base = SweepConfig::m_sweep(256, vec![10], vec![-2.0]);
        assert!(base.validate().is_ok());
        assert_eq!(field(SweepConfig { trials: 0, ..base.clone() }), "trials");
        assert_eq!(field(SweepConfig { sparsity_levels: vec![300], ..base.clone() }), "sparsity_levels");
        assert_eq!(
            field(SweepConfig { grid: MeasurementGrid::Log2Ratios(vec![-20.0]), ..base.clone() }),
            "log2_m_over_n"
        );
        assert_eq!(field(SweepConfig { tau_grid: vec![0.5], ..base.clone() }), "tau_grid");
        assert_eq!(field(SweepConfig { schemes: vec![], ..base.clone() }), "schemes");
        assert_eq!(field(SweepConfig { workers: Some(0), ..base.clone() }), "workers");
        let tau = SweepConfig::tau_sweep(256, 10, 0, vec![0.0]);
        assert_eq!(field(tau), "m");
        assert!(run_m_sweep(&SweepConfig::tau_sweep(256, 10, 64, vec![0.0])).is_err());
        assert!(run_tau_sweep(&base).is_err());
    }

    #[test]
    fn grid_rounds_to_measurement_counts() {
        let c = SweepConfig::m_sweep(256, vec![2], vec![-6.0, -2.0, 0.0, 4.0]);
        assert_eq!(c.measurement_counts(), vec![4, 64, 256, 4096]);
        assert_eq!(c.cells().len(), 8);
        assert_eq!(c.cells()[0].scheme, Scheme::PhaseOnly);
        assert_eq!(c.cells()[4].scheme, Scheme::ClassicalCs);
    }

    #[test]
    fn trial_is_replayable_and_bounded() {
        let cell = Cell { scheme: Scheme::PhaseOnly, s: 3, m: 32, tau: 0.3 };
        let a = run_trial(&cell, 64, 17, 5).unwrap();
        let b = run_trial(&cell, 64, 17, 5).unwrap();
        assert_eq!(a, b);
        assert!(!a.failed && (0.0..=2.0).contains(&a.error));
        assert_eq!(a.seed_used, cell.trial_stream_id(17));
        assert_ne!(run_trial(&cell, 64, 18, 5).unwrap().error, a.error);
    }

    #[test]
    fn small_sweep_is_deterministic_across_worker_counts() {
        let mut config = SweepConfig::m_sweep(32, vec![2, 4], vec![-1.0, 0.0, 1.0]);
        config.trials = 50;
        config.master_seed = 11;
        config.workers = Some(1);
        let one = run_m_sweep(&config).unwrap();
        config.workers = Some(3);
        let three = run_m_sweep(&config).unwrap();
        assert_eq!(one.cells, three.cells);
        assert!(one.cells.iter().all(|c| c.failures == 0 && c.trials == 50));
    }

    #[test]
    fn noise_sweep_error_grows_with_tau() {
        let mut config = SweepConfig::tau_sweep(64, 4, 64, vec![0.0, 1.0, 3.0]);
        config.trials = 300;
        let r = run_tau_sweep(&config).unwrap();
        let means: Vec<f64> = r.cells.iter().map(|c| c.mean_error).collect();
        assert!(means[0] < means[1] && means[1] < means[2], "{means:?}");
    }

    #[test]
    fn rip_estimate_is_monotone_in_probes() {
        let one = run_rip_estimate(64, 32, 4, 1, 3, 0.0).unwrap();
        let many = run_rip_estimate(64, 32, 4, 400, 3, 0.0).unwrap();
        assert!(many.estimate.delta_lower >= one.estimate.delta_lower);
        assert!((many.lemma1_bound - (5.0 * many.estimate.delta_lower).sqrt()).abs() < 1e-15);
        assert!(run_rip_estimate(64, 32, 0, 10, 3, 0.0).is_err());
        assert_eq!(run_rip_bound(0.5, 10, 256, 0.01).unwrap(), 4539);
        assert!(run_rip_bound(1.5, 10, 256, 0.01).is_err());
    }

    #[test]
    fn bound_check_small_instance() {
        let config = BoundCheckConfig {
            n: 32,
            s: 2,
            m: 64,
            taus: vec![0.0, 0.2],
            trials: 30,
            probes: 100,
            master_seed: 1,
            workers: None,
        };
        let rows = run_bound_check(&config).unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            assert_eq!(row.violations, 0);
            assert!(row.mean_delta > 0.0);
        }
    }
}
