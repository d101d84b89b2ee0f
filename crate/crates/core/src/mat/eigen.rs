use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

/// Sweeps stop once the largest off-diagonal modulus drops below this
/// (relative to `max(1, max|a_ij|)`).
pub const JACOBI_OFF_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = CMatrix::diag_real(&self.values);
        &(&self.vectors * &d) * &self.vectors.dagger()
    }
}

fn off_diagonal_max(a: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(move |&(j, _)| j != i))
        .fold(0.0, |m, (_, z)| m.max(z.norm()))
}

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq`, then applies
/// the real Givens rotation that zeroes it.
#[allow(clippy::needless_range_loop)]
pub fn hermitian_eigen(a: &CMatrix, tol: f64) -> Result<HermitianEigen> {
    let n = a.require_square()?;
    let dev = a.max_abs_diff(&a.dagger());
    if dev > tol {
        return Err(Error::NotHermitian(dev));
    }
    let h = a.hermitian_part();
    let mut m: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| h[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let threshold = JACOBI_OFF_TOL * h.max_abs().max(1.0);

    let mut converged = off_diagonal_max(&m) < threshold;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let (app, aqq) = (m[p][p].re, m[q][q].re);
                let theta = 0.5 * (2.0 * r).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                // J = diag(1, conj(phase)) · [[c, -s], [s, c]] on the (p, q) plane.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(-s, 0.0);
                let jqp = phase.conj() * s;
                let jqq = phase.conj() * c;

                // M <- M J (columns p, q)
                for row in m.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * jpp + xq * jqp;
                    row[q] = xp * jpq + xq * jqq;
                }
                // M <- J† M (rows p, q)
                for k in 0..n {
                    let (xp, xq) = (m[p][k], m[q][k]);
                    m[p][k] = jpp.conj() * xp + jqp.conj() * xq;
                    m[q][k] = jpq.conj() * xp + jqq.conj() * xq;
                }
                m[p][q] = Complex64::new(0.0, 0.0);
                m[q][p] = Complex64::new(0.0, 0.0);
                m[p][p].im = 0.0;
                m[q][q].im = 0.0;

                for row in v.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * jpp + xq * jqp;
                    row[q] = xp * jpq + xq * jqq;
                }
            }
        }
        sweeps += 1;
        converged = off_diagonal_max(&m) < threshold;
    }
    if !converged {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps first-occurrence order among exact ties.
    order.sort_by(|&i, &j| m[j][j].re.partial_cmp(&m[i][i].re).unwrap());
    let values = order.iter().map(|&k| m[k][k].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[i][order[j]]);
    Ok(HermitianEigen { values, vectors })
}
