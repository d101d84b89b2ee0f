use num_complex::Complex64;

use super::CMatrix;
use crate::error::Result;

/// Default truncation tolerance for the Taylor series.
pub const EXPM_TOL: f64 = 1e-13;

const MAX_TERMS: usize = 200;

fn inf_norm(a: &CMatrix) -> f64 {
    (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The input is scaled by `2^-j` so that its infinity norm is below 0.5,
/// the series is summed until the last added term has max-entry size below
/// `tol`, and the result is squared `j` times.
pub fn expm(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    let n = a.require_square()?;
    assert!(tol > 0.0, "expm tolerance must be positive");

    let norm = inf_norm(a);
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) >= 0.5 {
        squarings += 1;
    }
    let scaled = a.scale_real(1.0 / 2f64.powi(squarings as i32));

    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
        // Tail after this term is bounded by the term times sum_{m>=1} 0.5^m.
        if term.max_abs() < tol {
            break;
        }
    }

    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}
