//! Naimark dilation of the PT-symmetric quantum brachistochrone.
//!
//! The two-level PT-symmetric Hamiltonian ([`pt`]) evolves `(1, 0)` into
//! `(0, 1)` faster than any Hermitian Hamiltonian with the same level
//! spacing. [`naimark`] embeds it into a Hermitian 4x4 Hamiltonian acting
//! on a brachistochrone ⊕ ancilla space, and [`protocol`] reads that space
//! as two qubits, recovering the fast spin flip by post-selection.
//!
//! [`mat`] holds the small dense complex linear algebra everything is
//! built on, and [`verify`] runs the full identity suite over a fixed grid.

pub mod error;
pub mod mat;
pub mod naimark;
pub mod protocol;
pub mod pt;
pub mod verify;

pub use error::{Error, Result};
pub use mat::{CMatrix, CVector, Complex64, DEFAULT_TOL};
pub use naimark::{ancilla_state, build_povm, dilate, general_naimark, DilatedSystem, Povm, SyncRoute};
pub use protocol::{
    analyze, geodesic_distance, prepare_initial, regime_report, run_protocol, MeasurementRecord, RegimeReport,
    TwoQubitState,
};
pub use pt::{build_system, passage_times, pt_inner, trajectory, PTParams, PTSystem, PassageTimes, Trajectory};

/// `‖a - b‖_max <= tol · max(1, ‖a‖_max, ‖b‖_max)`.
pub(crate) fn ensure_close(name: &'static str, a: &CMatrix, b: &CMatrix, tol: f64) -> Result<()> {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    let err = a.max_abs_diff(b);
    if err <= tol * scale {
        Ok(())
    } else {
        Err(Error::Invariant { name, error: err })
    }
}
