use std::ops::{Add, Index, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::component_abs;
use crate::error::{Error, Result};

/// Dense complex column vector with finite entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CVector {
    data: Vec<Complex64>,
}

impl CVector {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Dimension("empty vector".into()));
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        Ok(CVector { data })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        assert!(dim > 0, "empty vector");
        CVector { data: (0..dim).map(f).collect() }
    }

    /// Canonical basis vector `e_k` of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        CVector::from_fn(dim, |i| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn zeros(dim: usize) -> Self {
        CVector::from_fn(dim, |_| Complex64::new(0.0, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &CVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// Bilinear dot product without conjugation.
    pub fn dot(&self, other: &CVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dot product dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn conj(&self) -> CVector {
        CVector { data: self.data.iter().map(Complex64::conj).collect() }
    }

    pub fn scale(&self, k: Complex64) -> CVector {
        CVector { data: self.data.iter().map(|&z| z * k).collect() }
    }

    pub fn scale_real(&self, k: f64) -> CVector {
        CVector { data: self.data.iter().map(|&z| z * k).collect() }
    }

    /// `None` for the zero vector.
    pub fn normalized(&self) -> Option<CVector> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale_real(1.0 / n))
    }

    pub fn kron(&self, other: &CVector) -> CVector {
        let m = other.dim();
        CVector::from_fn(self.dim() * m, |i| self[i / m] * other[i % m])
    }

    /// Stacks `self` on top of `other`.
    pub fn concat(&self, other: &CVector) -> CVector {
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        CVector { data }
    }

    /// Entries `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> CVector {
        CVector { data: self.data[start..start + len].to_vec() }
    }

    pub fn max_abs_diff(&self, other: &CVector) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| component_abs(a - b))
            .fold(0.0, f64::max)
    }

    /// `v v†`.
    pub fn outer(&self) -> super::CMatrix {
        let n = self.dim();
        super::CMatrix::from_fn(n, n, |i, j| self[i] * self[j].conj())
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl Add for &CVector {
    type Output = CVector;

    fn add(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim(), "add dimension mismatch");
        CVector::from_fn(self.dim(), |i| self[i] + rhs[i])
    }
}

impl Sub for &CVector {
    type Output = CVector;

    fn sub(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim(), "sub dimension mismatch");
        CVector::from_fn(self.dim(), |i| self[i] - rhs[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::c;

    #[test]
    fn norm_zero_iff_zero_vector() {
        assert_eq!(CVector::zeros(3).norm(), 0.0);
        assert!(CVector::zeros(3).normalized().is_none());
        let v = CVector::new(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_eq!(v.norm(), 5.0);
    }

    #[test]
    fn inner_is_antilinear_in_first_slot() {
        let u = CVector::new(vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let v = CVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(u.inner(&v), c(0.0, -1.0));
        assert_eq!(u.dot(&v), c(0.0, 1.0));
    }

    #[test]
    fn kron_matches_block_layout() {
        let e1 = CVector::basis(2, 1);
        let psi = CVector::new(vec![c(1.0, 2.0), c(3.0, 4.0)]).unwrap();
        assert_eq!(e1.kron(&psi), CVector::zeros(2).concat(&psi));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(CVector::new(vec![c(f64::INFINITY, 0.0)]), Err(Error::NonFinite(0))));
        assert!(CVector::new(vec![]).is_err());
    }
}
