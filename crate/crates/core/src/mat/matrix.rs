use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{component_abs, CVector};
use crate::error::{Error, Result};

/// Dense row-major complex matrix.
///
/// Entries are always finite. Binary operators panic on shape mismatch,
/// the same way slice indexing panics on an out-of-range index.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixDoc", into = "MatrixDoc")]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Wire form: `{"rows": n, "cols": m, "data": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixDoc> for CMatrix {
    type Error = Error;

    fn try_from(doc: MatrixDoc) -> Result<Self> {
        let data = doc.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        CMatrix::new(doc.rows, doc.cols, data)
    }
}

impl From<CMatrix> for MatrixDoc {
    fn from(m: CMatrix) -> Self {
        MatrixDoc {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

fn check_finite(data: &[Complex64]) -> Result<()> {
    match data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(k) => Err(Error::NonFinite(k)),
        None => Ok(()),
    }
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        check_finite(&data)?;
        Ok(CMatrix { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != m) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        CMatrix::new(n, m, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[CVector]) -> Result<Self> {
        let n = cols.first().map_or(0, CVector::dim);
        if cols.iter().any(|v| v.dim() != n) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        Ok(CMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]))
    }

    /// Entry-generating constructor. `f` must return finite values.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "empty shape {rows}x{cols}");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        debug_assert!(check_finite(&data).is_ok(), "non-finite entry in from_fn");
        CMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix::from_fn(rows, cols, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix::from_fn(n, n, |i, j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        CMatrix::from_fn(n, n, |i, j| if i == j { entries[i] } else { Complex64::new(0.0, 0.0) })
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let d: Vec<_> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        CMatrix::diag(&d)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        (i < self.rows && j < self.cols).then(|| self.data[i * self.cols + j])
    }

    pub fn dagger(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> CMatrix {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, k: Complex64) -> CMatrix {
        self.map(|z| z * k)
    }

    pub fn scale_real(&self, k: f64) -> CMatrix {
        self.map(|z| z * k)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (p, q) = other.shape();
        CMatrix::from_fn(self.rows * p, self.cols * q, |i, j| {
            self[(i / p, j / q)] * other[(i % p, j % q)]
        })
    }

    /// Panics on a non-square matrix.
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a {}x{} matrix", self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Determinant, only defined here for 2x2 matrices.
    pub fn det2(&self) -> Option<Complex64> {
        (self.shape() == (2, 2))
            .then(|| self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)])
    }

    /// Inverse of a 2x2 matrix, `None` when singular or not 2x2.
    pub fn inverse2(&self) -> Option<CMatrix> {
        let det = self.det2()?;
        if det.norm() == 0.0 {
            return None;
        }
        let inv = det.inv();
        Some(CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => self[(1, 1)] * inv,
            (1, 1) => self[(0, 0)] * inv,
            _ => -self[(i, j)] * inv,
        }))
    }

    /// Copy of the `rows x cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        CMatrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Assembles `[[a, b], [c, d]]` from equally sized square blocks.
    pub fn from_blocks(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
        let n = a.rows;
        for m in [b, c, d] {
            assert_eq!(m.shape(), a.shape(), "block shape mismatch");
        }
        CMatrix::from_fn(2 * n, 2 * a.cols, |i, j| {
            let (bi, bj) = (i / n, j / a.cols);
            let blk = match (bi, bj) {
                (0, 0) => a,
                (0, 1) => b,
                (1, 0) => c,
                _ => d,
            };
            blk[(i % n, j % a.cols)]
        })
    }

    pub fn vstack(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
        assert_eq!(top.cols, bottom.cols, "vstack column mismatch");
        let mut data = top.data.clone();
        data.extend_from_slice(&bottom.data);
        CMatrix { rows: top.rows + bottom.rows, cols: top.cols, data }
    }

    pub fn hstack(left: &CMatrix, right: &CMatrix) -> CMatrix {
        assert_eq!(left.rows, right.rows, "hstack row mismatch");
        CMatrix::from_fn(left.rows, left.cols + right.cols, |i, j| {
            if j < left.cols {
                left[(i, j)]
            } else {
                right[(i, j - left.cols)]
            }
        })
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector::from_fn(self.rows, |i| self[(i, j)])
    }

    pub fn row(&self, i: usize) -> CVector {
        CVector::from_fn(self.cols, |j| self[(i, j)])
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector shape mismatch");
        CVector::from_fn(self.rows, |i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
    }

    /// Largest `max(|re|, |im|)` over all entries.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|&z| component_abs(z)).fold(0.0, f64::max)
    }

    /// Largest component-wise absolute difference; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| component_abs(a - b))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.dagger()) <= tol
    }

    /// Both `A A†` and `A† A` within `tol` of the identity.
    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let id = CMatrix::identity(self.rows);
        (self * &self.dagger()).max_abs_diff(&id) <= tol
            && (&self.dagger() * self).max_abs_diff(&id) <= tol
    }

    /// Hermitian with smallest eigenvalue `>= -tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        match super::hermitian_eigen(&self.hermitian_part(), tol) {
            Ok(eig) => eig.values.last().is_none_or(|&min| min >= -tol),
            Err(_) => false,
        }
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> CMatrix {
        (self + &self.dagger()).scale_real(0.5)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch {:?} * {:?}", self.shape(), rhs.shape());
        CMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        })
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: CMatrix) -> CMatrix {
        &self * &rhs
    }
}

impl Mul<&CVector> for &CMatrix {
    type Output = CVector;

    fn mul(self, rhs: &CVector) -> CVector {
        self.mul_vec(rhs)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Add for CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: CMatrix) -> CMatrix {
        &self + &rhs
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: CMatrix) -> CMatrix {
        &self - &rhs
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.map(|z| -z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{c, pauli, I};

    #[test]
    fn kron_identities() {
        let i2 = CMatrix::identity(2);
        assert_eq!(i2.kron(&i2), CMatrix::identity(4));
        assert_eq!(pauli::sigma_z().kron(&i2), CMatrix::diag_real(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn kron_sigma_y_sigma_z_by_hand() {
        // σ_y = [[0, -i], [i, 0]], σ_z = diag(1, -1): the only nonzero
        // products are (-i)(1), (-i)(-1), (i)(1), (i)(-1).
        let k = pauli::sigma_y().kron(&pauli::sigma_z());
        let mut expected = CMatrix::zeros(4, 4).as_slice().to_vec();
        expected[2] = -I;
        expected[4 + 3] = I;
        expected[2 * 4] = I;
        expected[3 * 4 + 1] = -I;
        assert_eq!(k, CMatrix::new(4, 4, expected).unwrap());
    }

    #[test]
    fn rejects_bad_shapes_and_non_finite() {
        assert!(matches!(CMatrix::new(2, 2, vec![c(0.0, 0.0); 3]), Err(Error::Dimension(_))));
        assert!(matches!(
            CMatrix::new(1, 2, vec![c(0.0, 0.0), c(f64::NAN, 0.0)]),
            Err(Error::NonFinite(1))
        ));
        assert!(CMatrix::from_rows(&[vec![c(1.0, 0.0)], vec![]]).is_err());
    }

    #[test]
    fn det_and_inverse_2x2() {
        let a = CMatrix::from_rows(&[[c(1.0, 1.0), c(2.0, 0.0)], [c(0.0, -1.0), c(3.0, 0.0)]]).unwrap();
        let inv = a.inverse2().unwrap();
        assert!((&a * &inv).approx_eq(&CMatrix::identity(2), 1e-15));
        assert_eq!(CMatrix::zeros(2, 2).inverse2(), None);
        assert_eq!(CMatrix::identity(3).det2(), None);
    }

    #[test]
    fn blocks_round_trip() {
        let x = pauli::sigma_x();
        let y = pauli::sigma_y();
        let z = pauli::sigma_z();
        let i2 = CMatrix::identity(2);
        let big = CMatrix::from_blocks(&x, &y, &z, &i2);
        assert_eq!(big.block(0, 2, 2, 2), y);
        assert_eq!(big.block(2, 0, 2, 2), z);
        assert_eq!(CMatrix::vstack(&CMatrix::hstack(&x, &y), &CMatrix::hstack(&z, &i2)), big);
    }

    #[test]
    fn json_schema_round_trips_bit_exact() {
        let a = CMatrix::from_rows(&[[c(0.1, -1e-300), c(std::f64::consts::PI, 2.5e17)]]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.starts_with(r#"{"rows":1,"cols":2,"data":[["#));
        let b: CMatrix = serde_json::from_str(&s).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        assert!(serde_json::from_str::<CMatrix>(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).is_err());
    }
}
