//! Complex Gaussian sensing matrices, random sparse signals and the two
//! measurement channels (linear and phase-only).

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{csign_counted, matvec, ComplexMat, ComplexVec, NormOrder, SupportSet};
use crate::rng::RngStream;

/// Acquisition scheme, which also fixes the variance of the sensing ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    /// Phase-only measurements; per-part variance `2 / (π m²)` so that
    /// `E‖Φx‖₁ = ‖x‖₂`.
    #[serde(rename = "po")]
    PhaseOnly,
    /// Linear measurements; entry variance `1/m` so that `E‖Φx‖₂² = ‖x‖₂²`.
    #[serde(rename = "cs")]
    ClassicalCs,
}

impl Scheme {
    /// Per-component (real or imaginary) standard deviation for `m` rows.
    pub fn sigma(self, m: usize) -> f64 {
        let m = m as f64;
        match self {
            Scheme::PhaseOnly => (2.0 / PI).sqrt() / m,
            Scheme::ClassicalCs => (1.0 / (2.0 * m)).sqrt(),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Scheme::PhaseOnly => "po",
            Scheme::ClassicalCs => "cs",
        }
    }

    pub(crate) fn code(self) -> u64 {
        match self {
            Scheme::PhaseOnly => 1,
            Scheme::ClassicalCs => 2,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "po" => Ok(Scheme::PhaseOnly),
            "cs" => Ok(Scheme::ClassicalCs),
            other => Err(Error::invalid(format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SensingMatrix {
    mat: ComplexMat,
    scheme: Scheme,
    sigma: f64,
}

impl SensingMatrix {
    /// Wraps an explicit matrix, recording the convention it is meant to follow.
    pub fn from_matrix(mat: ComplexMat, scheme: Scheme) -> Self {
        let sigma = scheme.sigma(mat.rows());
        SensingMatrix { mat, scheme, sigma }
    }

    pub fn matrix(&self) -> &ComplexMat {
        &self.mat
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rows(&self) -> usize {
        self.mat.rows()
    }

    pub fn cols(&self) -> usize {
        self.mat.cols()
    }
}

/// Draws an `m × n` matrix with i.i.d. entries whose real and imaginary parts
/// are independent 𝒩(0, σ²), σ fixed by `scheme`. Entries are generated in
/// row-major order, real part first.
pub fn sample_sensing_matrix(
    rng: &mut RngStream,
    m: usize,
    n: usize,
    scheme: Scheme,
) -> Result<SensingMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::invalid(format!(
            "sensing matrix dimensions must be positive, got {m}x{n}"
        )));
    }
    let sigma = scheme.sigma(m);
    let data: Vec<Complex64> = (0..m * n)
        .map(|_| {
            let re = sigma * rng.standard_normal();
            let im = sigma * rng.standard_normal();
            Complex64::new(re, im)
        })
        .collect();
    Ok(SensingMatrix {
        mat: ComplexMat::new(m, n, data)?,
        scheme,
        sigma,
    })
}

/// Unit-norm sparse signal and its support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseSignal {
    vec: ComplexVec,
    support: SupportSet,
}

impl SparseSignal {
    /// Normalizes `vec` and records its nonzero pattern.
    pub fn from_vec(vec: ComplexVec) -> Result<Self> {
        let norm = vec.norm(NormOrder::L2);
        if norm == 0.0 {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        let vec = vec.scale(Complex64::new(1.0 / norm, 0.0));
        let nz = vec
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != Complex64::new(0.0, 0.0))
            .map(|(i, _)| i)
            .collect();
        let support = SupportSet::new(nz, vec.len())?;
        Ok(SparseSignal { vec, support })
    }

    pub fn vec(&self) -> &ComplexVec {
        &self.vec
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn len(&self) -> usize {
        self.vec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vec.is_empty()
    }
}

/// Draws a support uniformly among all `(n choose s)` supports, fills it with
/// i.i.d. values `r·e^{iθ}` with modulus `r ~ Uniform[0, 1)` and phase
/// `θ ~ Uniform[0, 2π)`, and normalizes to unit ℓ2 norm.
///
/// Each support entry consumes two uniform draws, modulus first.
pub fn sample_sparse_signal(rng: &mut RngStream, n: usize, s: usize) -> Result<SparseSignal> {
    if s == 0 || s > n {
        return Err(Error::invalid(format!(
            "sparsity level {s} out of range [1, {n}]"
        )));
    }
    let mut support = index::sample(rng, n, s).into_vec();
    support.sort_unstable();
    let mut entries = vec![Complex64::new(0.0, 0.0); n];
    loop {
        for &i in &support {
            let modulus: f64 = rng.random();
            let phase = rng.random_range(0.0..TAU);
            entries[i] = Complex64::from_polar(modulus, phase);
        }
        // Any exact zero would shrink the support; redraw (probability zero).
        if support.iter().all(|&i| entries[i] != Complex64::new(0.0, 0.0)) {
            break;
        }
    }
    let norm = entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut entries {
        *z /= norm;
    }
    Ok(SparseSignal {
        vec: ComplexVec::new(entries)?,
        support: SupportSet::new(support, n)?,
    })
}

/// `y = Φ x₀`.
pub fn measure_linear(phi: &SensingMatrix, x0: &SparseSignal) -> Result<ComplexVec> {
    matvec(phi.matrix(), x0.vec())
}

#[derive(Clone, Debug)]
pub struct PhaseMeasurements {
    pub z: ComplexVec,
    /// Phase perturbation applied to each measurement, in radians.
    pub xi: Vec<f64>,
    pub tau: f64,
    /// Number of exactly-zero entries of `Φx` mapped by the signum convention.
    pub zero_count: usize,
}

/// `z = csign(Φ x₀) ⊙ e^{iξ}` with `ξᵢ ~ Uniform[-τ, τ]`.
pub fn measure_phase_only(
    phi: &SensingMatrix,
    x0: &SparseSignal,
    tau: f64,
    rng: &mut RngStream,
) -> Result<PhaseMeasurements> {
    measure_phase_only_vec(phi, x0.vec(), tau, rng)
}

/// Phase-only measurement of an arbitrary vector.
///
/// For `tau == 0` no randomness is consumed and `z` is exactly `csign(Φx)`.
pub fn measure_phase_only_vec(
    phi: &SensingMatrix,
    x: &ComplexVec,
    tau: f64,
    rng: &mut RngStream,
) -> Result<PhaseMeasurements> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!(
            "phase noise bound must be finite and nonnegative, got {tau}"
        )));
    }
    let y = matvec(phi.matrix(), x)?;
    let (signum, zero_count) = csign_counted(&y);
    if tau == 0.0 {
        return Ok(PhaseMeasurements {
            xi: vec![0.0; signum.len()],
            z: signum,
            tau,
            zero_count,
        });
    }
    let xi: Vec<f64> = (0..signum.len())
        .map(|_| rng.random_range(-tau..=tau))
        .collect();
    let z = signum
        .iter()
        .zip(&xi)
        .map(|(w, &phase)| w * Complex64::from_polar(1.0, phase))
        .collect();
    Ok(PhaseMeasurements {
        z: ComplexVec::new(z)?,
        xi,
        tau,
        zero_count,
    })
}
