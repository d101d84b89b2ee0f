//! Dense complex linear algebra for the small (2, 4 and a few n <= 6)
//! dimensions this crate works in.
//!
//! All matrices are immutable values; every operation returns a new value.
//! Comparisons use the max over entries of the component-wise absolute
//! differences of real and imaginary parts.

mod checks;
mod eigen;
mod expm;
mod matrix;
mod vector;

pub use checks::{matrix_checks, MatrixReport};
pub use eigen::{hermitian_eigen, HermitianEigen, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL};
pub use expm::{expm, EXPM_TOL};
pub use matrix::CMatrix;
pub use vector::CVector;

pub use num_complex::Complex64;

/// Scalar type used throughout.
pub type ComplexScalar = Complex64;

/// Tolerance used by every check unless the caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Max of `|re|` and `|im|`, the scalar distance used by all comparisons.
#[inline]
pub fn component_abs(z: Complex64) -> f64 {
    z.re.abs().max(z.im.abs())
}

#[inline]
pub const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub const fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli matrices and identities.
pub mod pauli {
    use super::{c, CMatrix};

    pub fn identity2() -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn sigma_x() -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    pub fn sigma_y() -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => c(0.0, 0.0),
        })
    }

    pub fn sigma_z() -> CMatrix {
        CMatrix::diag_real(&[1.0, -1.0])
    }
}
