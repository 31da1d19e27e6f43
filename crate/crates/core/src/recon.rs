//! Projected back-projection and the direction-error metric.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{adjoint_matvec, hard_threshold, restrict, ComplexVec, NormOrder, SupportSet};
use crate::sensing::SensingMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct PbpEstimate {
    pub xhat: ComplexVec,
    pub support: SupportSet,
    pub s: usize,
}

/// `x̂ = H_s(Φᴴ z)`: back-project the measurements and keep the `s`
/// strongest entries.
pub fn pbp(phi: &SensingMatrix, z: &ComplexVec, s: usize) -> Result<PbpEstimate> {
    let n = phi.cols();
    if s == 0 || s > n {
        return Err(Error::invalid(format!(
            "sparsity level {s} out of range [1, {n}]"
        )));
    }
    let back = adjoint_matvec(phi.matrix(), z)?;
    let (xhat, support) = hard_threshold(&back, s)?;
    Ok(PbpEstimate { xhat, support, s })
}

/// Back-projection restricted to a known support, `H_S(Φᴴ z)`.
pub fn pbp_oracle_support(
    phi: &SensingMatrix,
    z: &ComplexVec,
    support: &SupportSet,
) -> Result<ComplexVec> {
    let back = adjoint_matvec(phi.matrix(), z)?;
    restrict(&back, support)
}

/// `‖x₀ − x̂/‖x̂‖₂‖₂`. No global phase is optimized out.
pub fn direction_error(x0: &ComplexVec, xhat: &ComplexVec) -> Result<f64> {
    if x0.len() != xhat.len() {
        return Err(Error::invalid(format!(
            "signal length {} does not match estimate length {}",
            x0.len(),
            xhat.len()
        )));
    }
    let norm = xhat.norm(NormOrder::L2);
    if norm == 0.0 {
        return Err(Error::DegenerateEstimate);
    }
    let direction = xhat.scale(Complex64::new(1.0 / norm, 0.0));
    Ok(x0.sub(&direction)?.norm(NormOrder::L2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMat;
    use crate::rip::{lemma1_error_bound, rip_distortion_probe, thm1_error_bound};
    use crate::rng::RngStream;
    use crate::sensing::{
        measure_phase_only, measure_phase_only_vec, sample_sensing_matrix, sample_sparse_signal,
        Scheme,
    };

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_back_projection_thresholds() {
        let phi = SensingMatrix::from_matrix(ComplexMat::identity(3).unwrap(), Scheme::PhaseOnly);
        let z = ComplexVec::new(vec![c(3.0, 0.0), c(0.0, 1.0), c(-2.0, 0.0)]).unwrap();
        let est = pbp(&phi, &z, 1).unwrap();
        assert_eq!(est.xhat, ComplexVec::from_real(&[3.0, 0.0, 0.0]).unwrap());
        assert_eq!(est.support.indices(), &[0]);
        assert!(pbp(&phi, &z, 0).is_err());
        assert!(pbp(&phi, &z, 4).is_err());
        let short = ComplexVec::from_real(&[1.0]).unwrap();
        assert!(pbp(&phi, &short, 1).is_err());
    }

    #[test]
    fn full_sparsity_returns_back_projection() {
        let mut rng = RngStream::new(1, 0);
        let phi = sample_sensing_matrix(&mut rng, 12, 6, Scheme::PhaseOnly).unwrap();
        let x0 = sample_sparse_signal(&mut rng, 6, 2).unwrap();
        let z = measure_phase_only(&phi, &x0, 0.0, &mut rng).unwrap().z;
        let est = pbp(&phi, &z, 6).unwrap();
        assert_eq!(est.xhat, adjoint_matvec(phi.matrix(), &z).unwrap());
        assert_eq!(
            pbp_oracle_support(&phi, &z, &SupportSet::full(6)).unwrap(),
            est.xhat
        );
        assert_eq!(
            pbp_oracle_support(&phi, &z, &SupportSet::empty()).unwrap(),
            ComplexVec::zeros(6).unwrap()
        );
        let bad = SupportSet::new(vec![6], 7).unwrap();
        assert!(pbp_oracle_support(&phi, &z, &bad).is_err());
    }

    #[test]
    fn direction_error_examples() {
        let x0 = ComplexVec::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert!(direction_error(&x0, &x0.scale(c(3.5, 0.0))).unwrap() < 1e-15);
        assert!((direction_error(&x0, &x0.scale(c(-1.0, 0.0))).unwrap() - 2.0).abs() < 1e-15);
        let orth = ComplexVec::new(vec![c(0.0, 0.8), c(0.6, 0.0)]).unwrap();
        assert!(x0.inner(&orth).unwrap().norm() < 1e-15);
        assert!((direction_error(&x0, &orth).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            direction_error(&x0, &ComplexVec::zeros(2).unwrap()),
            Err(Error::DegenerateEstimate)
        ));
    }

    #[test]
    fn small_instance_respects_noiseless_bound() {
        // n = 8, m = 64, s = 2; δ̂ probed at level 2s on the same matrix.
        for seed in 0..20 {
            let mut rng = RngStream::new(seed, 42);
            let phi = sample_sensing_matrix(&mut rng, 64, 8, Scheme::PhaseOnly).unwrap();
            let x0 = sample_sparse_signal(&mut rng, 8, 2).unwrap();
            let z = measure_phase_only(&phi, &x0, 0.0, &mut rng).unwrap().z;
            let est = pbp(&phi, &z, 2).unwrap();
            let err = direction_error(x0.vec(), &est.xhat).unwrap();
            let delta = rip_distortion_probe(&phi, 4, 500, &mut rng.substream(1))
                .unwrap()
                .delta_lower;
            assert!(err <= thm1_error_bound(delta, 0.0), "seed {seed}: {err} vs δ̂ {delta}");
        }
    }

    #[test]
    fn oracle_support_respects_lemma_bound() {
        for seed in 0..20 {
            let mut rng = RngStream::new(seed, 7);
            let phi = sample_sensing_matrix(&mut rng, 64, 16, Scheme::PhaseOnly).unwrap();
            let x = sample_sparse_signal(&mut rng, 16, 2).unwrap();
            let mut extra = x.support().indices().to_vec();
            extra.push((0..16).find(|i| !x.support().contains(*i)).unwrap());
            let support = SupportSet::new(extra, 16).unwrap();
            let z = measure_phase_only_vec(&phi, x.vec(), 0.0, &mut rng).unwrap().z;
            let oracle = pbp_oracle_support(&phi, &z, &support).unwrap();
            let err = oracle.sub(x.vec()).unwrap().norm(NormOrder::L2);
            let delta = rip_distortion_probe(&phi, support.len(), 500, &mut rng.substream(1))
                .unwrap()
                .delta_lower;
            assert!(err <= lemma1_error_bound(delta), "seed {seed}: {err} vs δ̂ {delta}");
        }
    }

    #[test]
    fn pbp_is_threshold_of_back_projection() {
        let mut rng = RngStream::new(3, 3);
        let phi = sample_sensing_matrix(&mut rng, 40, 20, Scheme::PhaseOnly).unwrap();
        let x0 = sample_sparse_signal(&mut rng, 20, 3).unwrap();
        let z = measure_phase_only(&phi, &x0, 0.2, &mut rng).unwrap().z;
        let est = pbp(&phi, &z, 3).unwrap();
        let (expected, support) =
            hard_threshold(&adjoint_matvec(phi.matrix(), &z).unwrap(), 3).unwrap();
        assert_eq!(est.support, support);
        for (a, b) in est.xhat.iter().zip(expected.iter()) {
            assert!((a - b).norm() <= 1e-12);
        }
    }
}
