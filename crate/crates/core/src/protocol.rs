//! Two-qubit reading of the dilated system and the two-step measurement.
//!
//! Basis order is `e₊⊗e₊, e₊⊗e₋, e₋⊗e₊, e₋⊗e₋`: the first factor selects
//! brachistochrone (`e₊`) versus ancilla (`e₋`) and is read by
//! `Σ₁ = σ_z⊗I`; the second is the internal spin read by `Σ₂ = I⊗σ_z`.

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat::{pauli, CMatrix, CVector};
use crate::naimark::{dilate, DilatedSystem};
use crate::pt::{build_system, passage_times, PTParams, PTSystem};

const NORM_TOL: f64 = 1e-12;
const GEODESIC_NORM_TOL: f64 = 1e-10;
const MIN_FILTER_PROBABILITY: f64 = 1e-300;

/// Normalized 4-vector with its `(ψ, χ)` split.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitState {
    vec: CVector,
}

impl TwoQubitState {
    pub fn new(vec: CVector) -> Result<Self> {
        if vec.dim() != 4 {
            return Err(Error::Dimension(format!("two-qubit state needs 4 entries, got {}", vec.dim())));
        }
        let norm = vec.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(TwoQubitState { vec })
    }

    /// `e₊⊗ψ + e₋⊗χ`.
    pub fn from_split(psi: &CVector, chi: &CVector) -> Result<Self> {
        if psi.dim() != 2 || chi.dim() != 2 {
            return Err(Error::Dimension("split parts must be 2-vectors".into()));
        }
        let e_plus = CVector::basis(2, 0);
        let e_minus = CVector::basis(2, 1);
        TwoQubitState::new(&e_plus.kron(psi) + &e_minus.kron(chi))
    }

    pub fn vec(&self) -> &CVector {
        &self.vec
    }

    pub fn psi_part(&self) -> CVector {
        self.vec.slice(0, 2)
    }

    pub fn chi_part(&self) -> CVector {
        self.vec.slice(2, 2)
    }

    /// `(|ψ part|², |χ part|²)`.
    pub fn weights(&self) -> (f64, f64) {
        (self.psi_part().norm_sqr(), self.chi_part().norm_sqr())
    }

    pub fn evolve(&self, u: &CMatrix) -> Result<Self> {
        TwoQubitState::new(u.mul_vec(&self.vec))
    }
}

pub fn sigma1() -> CMatrix {
    pauli::sigma_z().kron(&CMatrix::identity(2))
}

pub fn sigma2() -> CMatrix {
    CMatrix::identity(2).kron(&pauli::sigma_z())
}

/// `𝐏₊ = e₊e₊† ⊗ I₂`, the brachistochrone subspace.
pub fn projector_plus() -> CMatrix {
    CMatrix::diag_real(&[1.0, 0.0]).kron(&CMatrix::identity(2))
}

/// `𝐏₋ = e₋e₋† ⊗ I₂`, the ancilla subspace.
pub fn projector_minus() -> CMatrix {
    CMatrix::diag_real(&[0.0, 1.0]).kron(&CMatrix::identity(2))
}

/// `φ̂_I = g·(ψ_I, η ψ_I)` with `ψ_I = (1, 0)` and `g = cos α / sqrt 2`.
pub fn prepare_initial(sys: &PTSystem) -> TwoQubitState {
    let g = sys.params.g();
    let psi_i = CVector::basis(2, 0);
    let chi_i = sys.eta.mul_vec(&psi_i);
    TwoQubitState::from_split(&psi_i.scale_real(g), &chi_i.scale_real(g))
        .expect("g normalizes (ψ_I, ηψ_I) for every admitted α")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementRecord {
    /// `‖𝐏₊ φ̂_F‖²`, success probability of the Σ₁ filter.
    pub p_sigma1_up: f64,
    /// Normalized brachistochrone component after filtering.
    pub post_filter_state: CVector,
    pub p_sigma2_up: f64,
    pub p_sigma2_down: f64,
    /// `|⟨e₋|post_filter_state⟩|`.
    pub flip_fidelity: f64,
}

/// Evolves `φ̂_I` for the passage time and runs the Σ₁ then Σ₂ readout.
pub fn run_protocol(sys: &PTSystem, ds: &DilatedSystem) -> Result<MeasurementRecord> {
    let tau = passage_times(&sys.params).tau;
    let initial = prepare_initial(sys);
    let fin = initial.evolve(&ds.evolution(tau))?;
    measure(&fin)
}

/// Two-step measurement of an arbitrary two-qubit state.
pub fn measure(state: &TwoQubitState) -> Result<MeasurementRecord> {
    let filtered = projector_plus().mul_vec(state.vec());
    let p_sigma1_up = filtered.norm_sqr();
    if p_sigma1_up < MIN_FILTER_PROBABILITY {
        return Err(Error::FilterImpossible(p_sigma1_up));
    }
    let post = filtered.slice(0, 2).scale_real(1.0 / p_sigma1_up.sqrt());
    let p_sigma2_up = post[0].norm_sqr();
    let p_sigma2_down = post[1].norm_sqr();
    let flip_fidelity = CVector::basis(2, 1).inner(&post).norm().min(1.0);
    Ok(MeasurementRecord { p_sigma1_up, post_filter_state: post, p_sigma2_up, p_sigma2_down, flip_fidelity })
}

/// Fubini–Study angle `2 arccos |⟨u|v⟩|` between normalized states.
pub fn geodesic_distance(u: &CVector, v: &CVector) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::Dimension(format!("{} vs {}", u.dim(), v.dim())));
    }
    for w in [u, v] {
        let n = w.norm();
        if (n - 1.0).abs() > GEODESIC_NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
    }
    let overlap = u.inner(v).norm().clamp(0.0, 1.0);
    Ok(2.0 * overlap.acos())
}

/// `sqrt(⟨φ|A²|φ⟩ - ⟨φ|A|φ⟩²)` from matrix moments.
pub fn energy_spread(h: &CMatrix, state: &CVector) -> f64 {
    let h_phi = h.mul_vec(state);
    let mean = state.inner(&h_phi).re;
    let second = h_phi.norm_sqr();
    (second - mean * mean).max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub epsilon: f64,
    pub alpha: f64,
    pub s: f64,
    pub tau: f64,
    pub tau_h: f64,
    pub delta2: f64,
    pub delta4: f64,
    pub p_success: f64,
    pub energy_spread: f64,
    /// `2 τ ΔE`, compared against δ₄ by the Anandan–Aharonov bound.
    pub aa_product: f64,
}

pub const REGIME_CSV_HEADER: &str =
    "epsilon,alpha,s,tau,tau_h,delta2,delta4,p_success,energy_spread,aa_product";

/// Full analysis of one parameter point by explicit simulation.
pub fn analyze(params: PTParams) -> Result<RegimeReport> {
    let sys = build_system(params)?;
    let ds = dilate(&sys)?;
    analyze_system(&sys, &ds)
}

pub fn analyze_system(sys: &PTSystem, ds: &DilatedSystem) -> Result<RegimeReport> {
    let p = sys.params;
    let times = passage_times(&p);
    let initial = prepare_initial(sys);
    let fin = initial.evolve(&ds.evolution(times.tau))?;
    let record = measure(&fin)?;

    let psi_i = CVector::basis(2, 0);
    let psi_f = sys
        .psi_at(times.tau)
        .normalized()
        .ok_or(Error::Invariant { name: "nonzero final state", error: 0.0 })?;
    let delta2 = geodesic_distance(&psi_i, &psi_f)?;
    let delta4 = geodesic_distance(initial.vec(), fin.vec())?;
    let spread = energy_spread(&ds.h4, initial.vec());

    Ok(RegimeReport {
        epsilon: p.epsilon(),
        alpha: p.alpha(),
        s: p.s(),
        tau: times.tau,
        tau_h: times.tau_h,
        delta2,
        delta4,
        p_success: record.p_sigma1_up,
        energy_spread: spread,
        aa_product: 2.0 * times.tau * spread,
    })
}

/// One report per ε at fixed ω0, sorted by ascending ε.
pub fn regime_report(e0: f64, omega0: f64, epsilons: &[f64]) -> Result<Vec<RegimeReport>> {
    let mut eps = epsilons.to_vec();
    if let Some(bad) = eps.iter().find(|&&e| !(e > 0.0 && e <= PI / 2.0)) {
        return Err(Error::Domain(format!("epsilon = {bad} outside (0, π/2]")));
    }
    eps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eps.iter().map(|&e| analyze(PTParams::from_epsilon(e0, omega0, e)?)).collect()
}

pub fn write_regime_csv<W: Write>(rows: &[RegimeReport], mut w: W) -> io::Result<()> {
    writeln!(w, "{REGIME_CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", regime_csv_row(r))?;
    }
    Ok(())
}

pub fn regime_csv_row(r: &RegimeReport) -> String {
    format!(
        "{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
        r.epsilon, r.alpha, r.s, r.tau, r.tau_h, r.delta2, r.delta4, r.p_success, r.energy_spread, r.aa_product
    )
}
