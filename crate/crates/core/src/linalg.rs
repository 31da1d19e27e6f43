//! Dense complex vectors and matrices, norms, the complex signum and the
//! thresholding operators everything else is built on.

use std::cmp::Ordering;
use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex vector with finite entries and at least one component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexVec(Vec<Complex64>);

impl ComplexVec {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("vector must have at least one entry"));
        }
        if let Some(i) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::invalid(format!("entry {i} is not finite")));
        }
        Ok(ComplexVec(entries))
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Canonical basis vector `e_index` of length `len`.
    pub fn basis(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for length {len}"
            )));
        }
        let mut v = Self::zeros(len)?;
        v.0[index] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    // Internal constructor for results of arithmetic on already-validated data.
    pub(crate) fn from_vec_unchecked(entries: Vec<Complex64>) -> Self {
        debug_assert!(!entries.is_empty());
        ComplexVec(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn norm(&self, order: NormOrder) -> f64 {
        norm(self, order)
    }

    /// `⟨self, other⟩ = Σ selfᵢ · conj(otherᵢ)`.
    pub fn inner(&self, other: &ComplexVec) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::invalid(format!(
                "inner product of vectors with lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn scale(&self, factor: Complex64) -> ComplexVec {
        ComplexVec(self.0.iter().map(|z| z * factor).collect())
    }

    pub fn sub(&self, other: &ComplexVec) -> Result<ComplexVec> {
        if self.len() != other.len() {
            return Err(Error::invalid(format!(
                "difference of vectors with lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(ComplexVec(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Number of nonzero entries.
    pub fn count_nonzero(&self) -> usize {
        self.0.iter().filter(|z| **z != Complex64::new(0.0, 0.0)).count()
    }
}

impl Index<usize> for ComplexVec {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<Complex64>> for ComplexVec {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        ComplexVec::new(v)
    }
}

impl From<ComplexVec> for Vec<Complex64> {
    fn from(v: ComplexVec) -> Self {
        v.0
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        Ok(ComplexMat { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("ragged rows"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self::new(n, n, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matvec(&self, v: &ComplexVec) -> Result<ComplexVec> {
        matvec(self, v)
    }

    pub fn adjoint_matvec(&self, v: &ComplexVec) -> Result<ComplexVec> {
        adjoint_matvec(self, v)
    }
}

/// Strictly increasing set of indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    /// Builds a support from arbitrary indices, sorting them. Duplicates and
    /// indices outside `[0, n)` are rejected.
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("support has duplicate indices"));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::invalid(format!(
                    "support index {last} out of range for dimension {n}"
                )));
            }
        }
        Ok(SupportSet(indices))
    }

    pub fn empty() -> Self {
        SupportSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        SupportSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        let mut out: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        out.sort_unstable();
        out.dedup();
        SupportSet(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormOrder {
    L1,
    L2,
    Inf,
}

pub fn norm(v: &ComplexVec, order: NormOrder) -> f64 {
    match order {
        NormOrder::L1 => v.iter().map(|z| z.norm()).sum(),
        NormOrder::L2 => v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        NormOrder::Inf => v.iter().map(|z| z.norm()).fold(0.0, f64::max),
    }
}

/// Moduli this close to 1 are treated as already unit; `z / |z|` lands
/// within a few ulps of 1, so this makes the signum exactly idempotent.
const UNIT_SLACK: f64 = 8.0 * f64::EPSILON;

/// Complex signum of one value. Zero maps to `1 + 0i`.
#[inline]
pub fn csign_scalar(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if (r - 1.0).abs() <= UNIT_SLACK {
        z
    } else {
        z / r
    }
}

/// Component-wise complex signum, together with the number of exact zeros
/// that were mapped to `1 + 0i`.
pub fn csign_counted(v: &ComplexVec) -> (ComplexVec, usize) {
    let mut zeros = 0;
    let out = v
        .iter()
        .map(|&z| {
            if z.norm() == 0.0 {
                zeros += 1;
            }
            csign_scalar(z)
        })
        .collect();
    (ComplexVec(out), zeros)
}

pub fn csign(v: &ComplexVec) -> ComplexVec {
    csign_counted(v).0
}

/// Keeps the `s` largest-modulus entries of `v` and zeroes the rest.
///
/// Equal moduli are ordered by index, lowest first, so the selected support
/// is a deterministic function of `v`. The result is a best `s`-term
/// approximation of `v` in the ℓ2 norm.
pub fn hard_threshold(v: &ComplexVec, s: usize) -> Result<(ComplexVec, SupportSet)> {
    let n = v.len();
    if s == 0 || s > n {
        return Err(Error::invalid(format!(
            "sparsity level {s} out of range [1, {n}]"
        )));
    }
    let moduli: Vec<f64> = v.iter().map(|z| z.norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let by_strength = |&a: &usize, &b: &usize| -> Ordering {
        moduli[b].total_cmp(&moduli[a]).then(a.cmp(&b))
    };
    if s < n {
        order.select_nth_unstable_by(s - 1, by_strength);
    }
    let mut kept: Vec<usize> = order[..s].to_vec();
    kept.sort_unstable();

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for &i in &kept {
        out[i] = v[i];
    }
    Ok((ComplexVec(out), SupportSet(kept)))
}

/// Zeroes every entry of `v` outside `support`.
pub fn restrict(v: &ComplexVec, support: &SupportSet) -> Result<ComplexVec> {
    if let Some(&last) = support.indices().last() {
        if last >= v.len() {
            return Err(Error::invalid(format!(
                "support index {last} out of range for length {}",
                v.len()
            )));
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for &i in support.indices() {
        out[i] = v[i];
    }
    Ok(ComplexVec(out))
}

pub fn matvec(a: &ComplexMat, v: &ComplexVec) -> Result<ComplexVec> {
    if a.cols() != v.len() {
        return Err(Error::invalid(format!(
            "cannot multiply {}x{} matrix by vector of length {}",
            a.rows(),
            a.cols(),
            v.len()
        )));
    }
    // Sparse inputs only touch their nonzero columns.
    let nonzero: Vec<(usize, Complex64)> = v
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, z)| *z != Complex64::new(0.0, 0.0))
        .collect();
    let out = (0..a.rows())
        .map(|i| {
            let row = a.row(i);
            nonzero.iter().map(|&(j, x)| row[j] * x).sum()
        })
        .collect();
    Ok(ComplexVec(out))
}

/// `Aᴴ v`, the conjugate-transpose product.
pub fn adjoint_matvec(a: &ComplexMat, v: &ComplexVec) -> Result<ComplexVec> {
    if a.rows() != v.len() {
        return Err(Error::invalid(format!(
            "cannot multiply adjoint of {}x{} matrix by vector of length {}",
            a.rows(),
            a.cols(),
            v.len()
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.cols()];
    for (i, &vi) in v.iter().enumerate() {
        for (acc, aij) in out.iter_mut().zip(a.row(i)) {
            *acc += aij.conj() * vi;
        }
    }
    Ok(ComplexVec(out))
}

/// ‖A x‖₁ for a vector given by its nonzero entries.
pub(crate) fn l1_of_sparse_product(a: &ComplexMat, nonzero: &[(usize, Complex64)]) -> f64 {
    (0..a.rows())
        .map(|i| {
            let row = a.row(i);
            nonzero
                .iter()
                .map(|&(j, x)| row[j] * x)
                .sum::<Complex64>()
                .norm()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn vec_of(entries: &[Complex64]) -> ComplexVec {
        ComplexVec::new(entries.to_vec()).unwrap()
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> ComplexVec {
        vec_of(
            &(0..n)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect::<Vec<_>>(),
        )
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, k, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(ComplexVec::new(vec![]).is_err());
        assert!(ComplexVec::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexVec::new(vec![c(0.0, f64::INFINITY)]).is_err());
        assert!(ComplexMat::new(2, 2, vec![c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(vec_of(&[c(3.0, 4.0)]).norm(NormOrder::L2), 5.0);
        let unit = vec_of(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]);
        assert_eq!(unit.norm(NormOrder::L1), 4.0);
        let v = vec_of(&[c(1.0, 1.0), c(1.0, -1.0)]);
        assert!((v.norm(NormOrder::Inf) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn csign_examples() {
        assert_eq!(csign(&vec_of(&[c(3.0, 4.0)]))[0], c(0.6, 0.8));
        assert_eq!(csign(&vec_of(&[c(-2.0, 0.0)]))[0], c(-1.0, 0.0));
        let (w, zeros) = csign_counted(&vec_of(&[c(0.0, 0.0), c(0.0, 2.0)]));
        assert_eq!(w.as_slice(), &[c(1.0, 0.0), c(0.0, 1.0)]);
        assert_eq!(zeros, 1);
    }

    #[test]
    fn hard_threshold_examples() {
        let v = vec_of(&[c(3.0, 0.0), c(0.0, 1.0), c(-2.0, 0.0), c(0.5, 0.0)]);
        let (h, s) = hard_threshold(&v, 2).unwrap();
        assert_eq!(
            h.as_slice(),
            &[c(3.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)]
        );
        assert_eq!(s.indices(), &[0, 2]);

        let ones = ComplexVec::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let (h, s) = hard_threshold(&ones, 2).unwrap();
        assert_eq!(h, ComplexVec::from_real(&[1.0, 1.0, 0.0]).unwrap());
        assert_eq!(s.indices(), &[0, 1]);
    }

    #[test]
    fn hard_threshold_rejects_bad_sparsity() {
        let v = ComplexVec::from_real(&[1.0, 2.0]).unwrap();
        assert!(matches!(hard_threshold(&v, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(hard_threshold(&v, 3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn hard_threshold_matches_exhaustive_best_three_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let v = random_vec(&mut rng, 8);
            let (h, _) = hard_threshold(&v, 3).unwrap();
            let best = combinations(8, 3)
                .into_iter()
                .map(|idx| {
                    let r = restrict(&v, &SupportSet::new(idx, 8).unwrap()).unwrap();
                    v.sub(&r).unwrap().norm(NormOrder::L2)
                })
                .fold(f64::INFINITY, f64::min);
            let err = v.sub(&h).unwrap().norm(NormOrder::L2);
            assert!((err - best).abs() < 1e-14, "{err} vs {best}");
        }
    }

    #[test]
    fn restrict_examples() {
        let v = ComplexVec::from_real(&[1.0, 2.0, 3.0]).unwrap();
        let one = SupportSet::new(vec![1], 3).unwrap();
        assert_eq!(
            restrict(&v, &one).unwrap(),
            ComplexVec::from_real(&[0.0, 2.0, 0.0]).unwrap()
        );
        assert_eq!(restrict(&v, &SupportSet::full(3)).unwrap(), v);
        assert_eq!(
            restrict(&v, &SupportSet::empty()).unwrap(),
            ComplexVec::zeros(3).unwrap()
        );
        let bad = SupportSet::new(vec![5], 6).unwrap();
        assert!(restrict(&v, &bad).is_err());
    }

    #[test]
    fn support_set_validation() {
        assert!(SupportSet::new(vec![1, 1], 3).is_err());
        assert!(SupportSet::new(vec![3], 3).is_err());
        assert_eq!(SupportSet::new(vec![2, 0], 3).unwrap().indices(), &[0, 2]);
    }

    #[test]
    fn matvec_examples() {
        let id = ComplexMat::identity(2).unwrap();
        let v = vec_of(&[c(1.0, 1.0), c(2.0, 0.0)]);
        assert_eq!(matvec(&id, &v).unwrap(), v);

        let a = ComplexMat::new(1, 1, vec![c(0.0, 1.0)]).unwrap();
        let one = vec_of(&[c(1.0, 0.0)]);
        assert_eq!(matvec(&a, &one).unwrap()[0], c(0.0, 1.0));
        assert_eq!(adjoint_matvec(&a, &one).unwrap()[0], c(0.0, -1.0));

        assert!(matvec(&id, &one).is_err());
        assert!(adjoint_matvec(&id, &one).is_err());
    }

    #[test]
    fn adjoint_identity_on_random_instance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let data: Vec<Complex64> = (0..12)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let a = ComplexMat::new(4, 3, data).unwrap();
        let v = random_vec(&mut rng, 3);
        let w = random_vec(&mut rng, 4);
        let lhs = matvec(&a, &v).unwrap().inner(&w).unwrap();
        let rhs = v.inner(&adjoint_matvec(&a, &w).unwrap()).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn sparse_l1_product_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let data: Vec<Complex64> = (0..30)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let a = ComplexMat::new(5, 6, data).unwrap();
        let mut x = vec![c(0.0, 0.0); 6];
        x[1] = c(0.3, -0.2);
        x[4] = c(-1.0, 0.5);
        let nz = vec![(1, x[1]), (4, x[4])];
        let dense = matvec(&a, &vec_of(&x)).unwrap().norm(NormOrder::L1);
        assert!((l1_of_sparse_product(&a, &nz) - dense).abs() < 1e-13);
    }
}
