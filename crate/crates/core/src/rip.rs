//! Empirical (ℓ1,ℓ2)-RIP tooling: randomized distortion search, statistical
//! self-checks of the Rayleigh expectation identity and of Gaussian
//! concentration, and the closed-form error and sample-complexity bounds.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{l1_of_sparse_product, ComplexVec};
use crate::rng::RngStream;
use crate::sensing::{sample_sensing_matrix, sample_sparse_signal, Scheme, SensingMatrix};

/// Standard errors allowed between a Monte Carlo estimate and its target.
pub const PASS_STANDARD_ERRORS: f64 = 4.0;

/// Largest observed `|‖Φx‖₁ − 1|` over a finite set of unit-norm `s`-sparse
/// probes. This is a lower bound on the true distortion constant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RipEstimate {
    pub delta_lower: f64,
    pub s: usize,
    pub num_probes: usize,
    pub worst_probe: ComplexVec,
}

struct Probe {
    entries: Vec<(usize, Complex64)>,
}

impl Probe {
    fn distortion(&self, phi: &SensingMatrix) -> f64 {
        (l1_of_sparse_product(phi.matrix(), &self.entries) - 1.0).abs()
    }

    fn to_vec(&self, n: usize) -> ComplexVec {
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for &(j, x) in &self.entries {
            out[j] = x;
        }
        ComplexVec::from_vec_unchecked(out)
    }
}

/// Randomized search for the worst distortion of `Φ` over unit `s`-sparse
/// vectors.
///
/// Probes cycle through four kinds, in order: two draws from the sparse
/// signal sampler, one canonical basis vector at a uniformly random index,
/// and one perturbation of the current worst probe in which a random
/// nonzero entry is rotated by `−1`, `i` or `−i`. Each probe consumes a fixed
/// amount of randomness given the probes before it, so the probe sequence for
/// `k` probes is a prefix of the sequence for any larger count and the
/// estimate never decreases as probes are added.
pub fn rip_distortion_probe(
    phi: &SensingMatrix,
    s: usize,
    num_probes: usize,
    rng: &mut RngStream,
) -> Result<RipEstimate> {
    if phi.scheme() != Scheme::PhaseOnly {
        return Err(Error::invalid(
            "distortion probing needs the phase-only normalization σ = √(2/π)/m",
        ));
    }
    let n = phi.cols();
    if s == 0 || s > n {
        return Err(Error::invalid(format!(
            "sparsity level {s} out of range [1, {n}]"
        )));
    }
    if num_probes == 0 {
        return Err(Error::invalid("at least one probe is required"));
    }

    let mut worst: Option<(f64, Probe)> = None;
    for k in 0..num_probes {
        let probe = match (k % 4, &worst) {
            (2, _) => Probe {
                entries: vec![(rng.random_range(0..n), Complex64::new(1.0, 0.0))],
            },
            (3, Some((_, current))) => {
                let mut entries = current.entries.clone();
                let pick = rng.random_range(0..entries.len());
                let rotation = match rng.random_range(0..3) {
                    0 => Complex64::new(-1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    _ => Complex64::new(0.0, -1.0),
                };
                entries[pick].1 *= rotation;
                Probe { entries }
            }
            _ => {
                let x = sample_sparse_signal(rng, n, s)?;
                Probe {
                    entries: x.support().indices().iter().map(|&j| (j, x.vec()[j])).collect(),
                }
            }
        };
        let d = probe.distortion(phi);
        if worst.as_ref().is_none_or(|(best, _)| d > *best) {
            worst = Some((d, probe));
        }
    }
    let (delta_lower, probe) = worst.expect("num_probes >= 1");
    Ok(RipEstimate {
        delta_lower,
        s,
        num_probes,
        worst_probe: probe.to_vec(n),
    })
}

/// Outcome of a Monte Carlo check of `E‖Φx‖₁ = ‖x‖₂`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectationReport {
    pub target: f64,
    pub mean: f64,
    pub std_error: f64,
    pub num_draws: usize,
    pub pass: bool,
}

/// Draws one random unit vector `x`, then `num_draws` independent phase-only
/// matrices, and checks the sample mean of `‖Φx‖₁` against 1.
pub fn expectation_identity_test(
    m: usize,
    n: usize,
    num_draws: usize,
    rng: &mut RngStream,
) -> Result<ExpectationReport> {
    expectation_identity_test_scaled(m, n, num_draws, 1.0, rng)
}

/// Same as [`expectation_identity_test`] with `x` of norm `scale`.
pub fn expectation_identity_test_scaled(
    m: usize,
    n: usize,
    num_draws: usize,
    scale: f64,
    rng: &mut RngStream,
) -> Result<ExpectationReport> {
    if num_draws < 100 {
        return Err(Error::invalid(format!(
            "expectation test needs at least 100 draws, got {num_draws}"
        )));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::invalid(format!("scale must be positive, got {scale}")));
    }
    if m == 0 || n == 0 {
        return Err(Error::invalid("dimensions must be positive"));
    }
    let raw: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let x: Vec<(usize, Complex64)> = raw
        .into_iter()
        .map(|z| z * (scale / norm))
        .enumerate()
        .collect();

    let samples = (0..num_draws)
        .map(|_| {
            let phi = sample_sensing_matrix(rng, m, n, Scheme::PhaseOnly)?;
            Ok(l1_of_sparse_product(phi.matrix(), &x))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, std_error) = mean_and_standard_error(&samples);
    Ok(ExpectationReport {
        target: scale,
        mean,
        std_error,
        num_draws,
        pass: (mean - scale).abs() <= PASS_STANDARD_ERRORS * std_error,
    })
}

/// Outcome of a Monte Carlo check of the Gaussian concentration tail bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub frequency: f64,
    pub bound: f64,
    /// Binomial standard error of the frequency at the bound's success rate.
    pub std_error: f64,
    pub num_draws: usize,
    pub pass: bool,
}

/// Tail bound `2·exp(−(π/4)·t²·m)` on the relative deviation of `‖Φx‖₁`.
pub fn concentration_tail_bound(m: usize, t: f64) -> f64 {
    2.0 * (-(PI / 4.0) * t * t * m as f64).exp()
}

/// Estimates `P(|‖(γᴿ, γᴵ)‖₂,₁ − m√(π/2)| > t·m√(π/2))` for standard Gaussian
/// `γᴿ, γᴵ ∈ ℝᵐ` and checks it against [`concentration_tail_bound`].
pub fn concentration_test(
    m: usize,
    num_draws: usize,
    t: f64,
    rng: &mut RngStream,
) -> Result<ConcentrationReport> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::invalid(format!("deviation t must be positive, got {t}")));
    }
    if m == 0 || num_draws == 0 {
        return Err(Error::invalid("m and num_draws must be positive"));
    }
    let center = m as f64 * (PI / 2.0).sqrt();
    let mut exceed = 0usize;
    for _ in 0..num_draws {
        let mixed_norm: f64 = (0..m)
            .map(|_| {
                let re = rng.standard_normal();
                let im = rng.standard_normal();
                re.hypot(im)
            })
            .sum();
        if (mixed_norm - center).abs() > t * center {
            exceed += 1;
        }
    }
    let frequency = exceed as f64 / num_draws as f64;
    let bound = concentration_tail_bound(m, t);
    let p = bound.min(1.0);
    let std_error = (p * (1.0 - p) / num_draws as f64).sqrt();
    Ok(ConcentrationReport {
        frequency,
        bound,
        std_error,
        num_draws,
        pass: frequency <= bound + PASS_STANDARD_ERRORS * std_error,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RipBoundInputs {
    delta: f64,
    s: usize,
    n: usize,
    eta: f64,
}

impl RipBoundInputs {
    pub fn new(delta: f64, s: usize, n: usize, eta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::invalid(format!("eta must lie in (0, 1), got {eta}")));
        }
        if s == 0 || s > n {
            return Err(Error::invalid(format!(
                "sparsity level {s} out of range [1, {n}]"
            )));
        }
        Ok(RipBoundInputs { delta, s, n, eta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Unrounded sample-complexity expression
/// `(36/π)·δ⁻²·[s·ln((e·n/s)·(1 + 6/δ)²) + ln(2/η)]`.
pub fn thm2_sample_bound_real(inputs: &RipBoundInputs) -> f64 {
    let RipBoundInputs { delta, s, n, eta } = *inputs;
    let s_f = s as f64;
    let covering = (E * n as f64 / s_f) * (1.0 + 6.0 / delta).powi(2);
    (36.0 / PI) / (delta * delta) * (s_f * covering.ln() + (2.0 / eta).ln())
}

/// Smallest integer `m` satisfying the Gaussian sample-complexity condition.
pub fn thm2_sample_bound(inputs: &RipBoundInputs) -> u64 {
    thm2_sample_bound_real(inputs).ceil() as u64
}

/// PBP error bound `2·√(5δ) + 4τ` under an (ℓ1,ℓ2)-RIP at level `2s`.
pub fn thm1_error_bound(delta: f64, tau: f64) -> f64 {
    2.0 * (5.0 * delta).sqrt() + 4.0 * tau
}

/// Oracle-support back-projection error bound `√(5δ)`.
pub fn lemma1_error_bound(delta: f64) -> f64 {
    (5.0 * delta).sqrt()
}

pub(crate) fn mean_and_standard_error(samples: &[f64]) -> (f64, f64) {
    let count = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / count;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0);
    (mean, (var / count).sqrt())
}
