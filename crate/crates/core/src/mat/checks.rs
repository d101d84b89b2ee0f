use num_complex::Complex64;
use serde::Serialize;

use super::CMatrix;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixReport {
    pub hermitian: bool,
    pub unitary: bool,
    pub psd: bool,
    pub trace: Complex64,
    /// Only reported for 2x2 input.
    pub determinant: Option<Complex64>,
}

pub fn matrix_checks(a: &CMatrix, tol: f64) -> Result<MatrixReport> {
    a.require_square()?;
    Ok(MatrixReport {
        hermitian: a.is_hermitian(tol),
        unitary: a.is_unitary(tol),
        psd: a.is_psd(tol),
        trace: a.trace(),
        determinant: a.det2(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{c, pauli, DEFAULT_TOL};

    #[test]
    fn identity_report() {
        let r = matrix_checks(&CMatrix::identity(2), DEFAULT_TOL).unwrap();
        assert!(r.hermitian && r.unitary && r.psd);
        assert_eq!(r.trace, c(2.0, 0.0));
        assert_eq!(r.determinant, Some(c(1.0, 0.0)));
    }

    #[test]
    fn sigma_y_is_not_psd() {
        let r = matrix_checks(&pauli::sigma_y(), DEFAULT_TOL).unwrap();
        assert!(r.hermitian && r.unitary && !r.psd);
    }

    #[test]
    fn four_by_four_has_no_determinant() {
        let r = matrix_checks(&CMatrix::identity(4), DEFAULT_TOL).unwrap();
        assert_eq!(r.determinant, None);
        assert!(matrix_checks(&CMatrix::zeros(2, 4), DEFAULT_TOL).is_err());
    }
}
