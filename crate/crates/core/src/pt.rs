//! The PT-symmetric two-level Hamiltonian family
//! `H = E0·I + s·[[i sin α, 1], [1, -i sin α]]`, its biorthogonal
//! eigensystem, the metric `η = exp(β σ_y)`, the Hermitian equivalent `h`,
//! the non-unitary evolution `U(t) = exp(-itH)` and the brachistochrone
//! passage time.
//!
//! Units have ħ = 1. Angles are in radians.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::ensure_close as check;
use crate::error::{Error, Result};
use crate::mat::{c, pauli, re, CMatrix, CVector, DEFAULT_TOL, I};

/// Smallest admitted `|cos α|`; the exceptional point itself is rejected.
pub const EXCEPTIONAL_POINT_GUARD: f64 = 1e-8;

/// Scalar parameters `(E0, s, α)` of the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PTParams {
    e0: f64,
    s: f64,
    alpha: f64,
    /// `α + π/2`, kept exactly when it is the input parameter.
    epsilon: f64,
}

impl PTParams {
    pub fn new(e0: f64, s: f64, alpha: f64) -> Result<Self> {
        if !e0.is_finite() || !s.is_finite() || !alpha.is_finite() {
            return Err(Error::Domain("parameters must be finite".into()));
        }
        if s <= 0.0 {
            return Err(Error::Domain(format!("s = {s} must be positive")));
        }
        if alpha <= -FRAC_PI_2 || alpha >= FRAC_PI_2 {
            return Err(Error::Domain(format!("alpha = {alpha} outside (-π/2, π/2)")));
        }
        if alpha.cos().abs() < EXCEPTIONAL_POINT_GUARD {
            return Err(Error::Domain(format!(
                "|cos(alpha)| = {:e} below the exceptional-point guard",
                alpha.cos().abs()
            )));
        }
        Ok(PTParams { e0, s, alpha, epsilon: alpha + FRAC_PI_2 })
    }

    /// Vanishing-passage parametrization: `α = ε - π/2` at fixed level
    /// spacing `ω0`, so `s = ω0 / (2 cos α)`.
    pub fn from_epsilon(e0: f64, omega0: f64, epsilon: f64) -> Result<Self> {
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(Error::Domain(format!("omega0 = {omega0} must be positive")));
        }
        if !(epsilon > 0.0 && epsilon <= FRAC_PI_2) {
            return Err(Error::Domain(format!("epsilon = {epsilon} outside (0, π/2]")));
        }
        let alpha = epsilon - FRAC_PI_2;
        // cos(ε - π/2) = sin ε, evaluated without cancellation.
        let p = PTParams::new(e0, omega0 / (2.0 * epsilon.sin()), alpha)?;
        Ok(PTParams { epsilon, ..p })
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn cos_alpha(&self) -> f64 {
        self.alpha.cos()
    }

    pub fn sin_alpha(&self) -> f64 {
        self.alpha.sin()
    }

    /// Boost parameter with `tanh β = sin α`, `cosh β = 1 / cos α`.
    pub fn beta(&self) -> f64 {
        self.alpha.tan().asinh()
    }

    /// Level spacing `E+ - E- = 2 s cos α`.
    pub fn omega0(&self) -> f64 {
        2.0 * self.s * self.cos_alpha()
    }

    /// POVM normalization `f = sqrt(cos α / 2)`.
    pub fn f(&self) -> f64 {
        (self.cos_alpha() / 2.0).sqrt()
    }

    /// Normalization of the dilated state, `g = cos α / sqrt 2`.
    pub fn g(&self) -> f64 {
        self.cos_alpha() / std::f64::consts::SQRT_2
    }

    /// Distance to the exceptional point, `ε = α + π/2`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn energies(&self) -> (f64, f64) {
        let half = self.s * self.cos_alpha();
        (self.e0 + half, self.e0 - half)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PassageTimes {
    /// Time for `(1, 0)` to reach the ray of `(0, 1)`.
    pub tau: f64,
    /// Hermitian lower bound `π / ω0` at the same level spacing.
    pub tau_h: f64,
}

pub fn passage_times(params: &PTParams) -> PassageTimes {
    PassageTimes {
        tau: params.epsilon() / (params.s * params.cos_alpha()),
        tau_h: PI / params.omega0(),
    }
}

/// Eigenvector `|E+(α)⟩ = e^{iα/2} / sqrt(2 cos α) · (1, e^{-iα})`.
pub fn e_plus(alpha: f64) -> CVector {
    let norm = 1.0 / (2.0 * alpha.cos()).sqrt();
    let pre = Complex64::from_polar(norm, alpha / 2.0);
    CVector::from_fn(2, |k| if k == 0 { pre } else { pre * Complex64::from_polar(1.0, -alpha) })
}

/// Eigenvector `|E-(α)⟩ = i e^{-iα/2} / sqrt(2 cos α) · (1, -e^{iα})`.
pub fn e_minus(alpha: f64) -> CVector {
    let norm = 1.0 / (2.0 * alpha.cos()).sqrt();
    let pre = I * Complex64::from_polar(norm, -alpha / 2.0);
    CVector::from_fn(2, |k| if k == 0 { pre } else { -pre * Complex64::from_polar(1.0, alpha) })
}

/// `E0·I + s·[[i sin α, 1], [1, -i sin α]]`.
pub fn hamiltonian(params: &PTParams) -> CMatrix {
    let (e0, s, sa) = (params.e0, params.s, params.sin_alpha());
    CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => c(e0, s * sa),
        (1, 1) => c(e0, -s * sa),
        _ => re(s),
    })
}

/// `cosh(b)·I + sinh(b)·σ_y`.
fn boost(cosh: f64, sinh: f64) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => c(0.0, -sinh),
        (1, 0) => c(0.0, sinh),
        _ => re(cosh),
    })
}

/// The assembled 2x2 objects of the PT-symmetric system.
#[derive(Clone, Debug)]
pub struct PTSystem {
    pub params: PTParams,
    pub h_pt: CMatrix,
    pub h_pt_dagger: CMatrix,
    pub energies: (f64, f64),
    /// Columns `|E+(α)⟩, |E-(α)⟩`.
    pub psi: CMatrix,
    /// Columns `|E+(-α)⟩, |E-(-α)⟩`.
    pub xi: CMatrix,
    pub eta: CMatrix,
    pub eta_inv: CMatrix,
    pub rho: CMatrix,
    pub rho_inv: CMatrix,
    /// Hermitian equivalent `ρ H ρ⁻¹`.
    pub h_herm: CMatrix,
    /// Unitary eigenvector matrix of `h`, `ρ Ψ`.
    pub phi: CMatrix,
}

pub fn build_system(params: PTParams) -> Result<PTSystem> {
    let h_pt = hamiltonian(&params);
    let h_pt_dagger = h_pt.dagger();
    let alpha = params.alpha;
    let psi = CMatrix::from_columns(&[e_plus(alpha), e_minus(alpha)])?;
    let xi = CMatrix::from_columns(&[e_plus(-alpha), e_minus(-alpha)])?;

    let beta = params.beta();
    let (cosh_b, sinh_b) = (1.0 / params.cos_alpha(), params.alpha.tan());
    let eta = boost(cosh_b, sinh_b);
    let eta_inv = boost(cosh_b, -sinh_b);
    let (ch, sh) = ((beta / 2.0).cosh(), (beta / 2.0).sinh());
    let rho = boost(ch, sh);
    let rho_inv = boost(ch, -sh);

    let h_herm = &(&rho * &h_pt) * &rho_inv;
    let phi = &rho * &psi;
    let energies = params.energies();

    let sys = PTSystem { params, h_pt, h_pt_dagger, energies, psi, xi, eta, eta_inv, rho, rho_inv, h_herm, phi };
    sys.verify(DEFAULT_TOL)?;
    Ok(sys)
}

impl PTSystem {
    pub fn e_tilde(&self) -> CMatrix {
        CMatrix::diag_real(&[self.energies.0, self.energies.1])
    }

    /// Checks every structural identity of the system (relative to entry
    /// magnitude) and reports the first failure.
    pub fn verify(&self, tol: f64) -> Result<()> {
        let sx = pauli::sigma_x();
        let id = CMatrix::identity(2);
        let h = &self.h_pt;
        check("pt-symmetry", &(&(&sx * &h.conj()) * &sx), h, tol)?;
        check("pseudo-hermiticity", &(&self.eta * h), &(&self.h_pt_dagger * &self.eta), tol)?;
        check("rho^2 = eta", &(&self.rho * &self.rho), &self.eta, tol)?;
        check("rho * rho_inv = I", &(&self.rho * &self.rho_inv), &id, tol)?;
        check("biorthonormality", &(&self.xi.dagger() * &self.psi), &id, tol)?;
        check("eta = Xi Xi^dagger", &(&self.xi * &self.xi.dagger()), &self.eta, tol)?;
        check("eta^-1 = Psi Psi^dagger", &(&self.psi * &self.psi.dagger()), &self.eta_inv, tol)?;
        check("H Psi = Psi E", &(h * &self.psi), &(&self.psi * &self.e_tilde()), tol)?;
        check("Hdag Xi = Xi E", &(&self.h_pt_dagger * &self.xi), &(&self.xi * &self.e_tilde()), tol)?;
        check("h hermitian", &self.h_herm, &self.h_herm.dagger(), tol)?;
        check("Phi unitary", &(&self.phi * &self.phi.dagger()), &id, tol)?;
        check("h Phi = Phi E", &(&self.h_herm * &self.phi), &(&self.phi * &self.e_tilde()), tol)?;
        Ok(())
    }

    /// Non-unitary evolution
    /// `U(t) = e^{-iE0 t}/cos α · [[cos(y-α), -i sin y], [-i sin y, cos(y+α)]]`
    /// with `y = ω0 t / 2`.
    pub fn evolution(&self, t: f64) -> CMatrix {
        evolution(self, t)
    }

    pub fn passage_times(&self) -> PassageTimes {
        passage_times(&self.params)
    }

    /// Closed-form `ψ(t) = U(t)·(1, 0)`.
    pub fn psi_at(&self, t: f64) -> CVector {
        let p = &self.params;
        let y = p.omega0() * t / 2.0;
        let pre = Complex64::from_polar(1.0 / p.cos_alpha(), -p.e0 * t);
        CVector::from_fn(2, |k| if k == 0 { pre * (y - p.alpha).cos() } else { pre * c(0.0, -y.sin()) })
    }

    /// Ancilla partner `χ(t) = η ψ(t)`.
    pub fn chi_at(&self, t: f64) -> CVector {
        self.eta.mul_vec(&self.psi_at(t))
    }
}

/// PT inner product `(u, v) = (σ_x conj(u)) · v`, bilinear dot product.
pub fn pt_inner(u: &CVector, v: &CVector) -> Result<Complex64> {
    if u.dim() != 2 || v.dim() != 2 {
        return Err(Error::Dimension(format!("pt_inner needs two 2-vectors, got {} and {}", u.dim(), v.dim())));
    }
    let pt_u = pauli::sigma_x().mul_vec(&u.conj());
    Ok(pt_u.dot(v))
}

pub fn evolution(sys: &PTSystem, t: f64) -> CMatrix {
    let p = &sys.params;
    let y = p.omega0() * t / 2.0;
    let pre = Complex64::from_polar(1.0 / p.cos_alpha(), -p.e0 * t);
    let off = pre * c(0.0, -y.sin());
    CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => pre * (y - p.alpha).cos(),
        (1, 1) => pre * (y + p.alpha).cos(),
        _ => off,
    })
}

/// Uniformly sampled `ψ(t)` and `χ(t) = η ψ(t)`, raw and unnormalized.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub psi: Vec<CVector>,
    pub chi: Vec<CVector>,
}

pub const TRAJECTORY_CSV_HEADER: &str = "t,re_psi0,im_psi0,re_psi1,im_psi1,re_chi0,im_chi0,re_chi1,im_chi1";

/// `n` samples on `t_k = k·t_max/(n-1)`.
pub fn trajectory(sys: &PTSystem, t_max: f64, n: usize) -> Result<Trajectory> {
    if n < 2 {
        return Err(Error::Domain(format!("trajectory needs n >= 2 samples, got {n}")));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Domain(format!("t_max = {t_max} must be positive")));
    }
    let step = t_max / (n - 1) as f64;
    let times: Vec<f64> = (0..n).map(|k| if k == n - 1 { t_max } else { k as f64 * step }).collect();
    let psi: Vec<CVector> = times.iter().map(|&t| sys.psi_at(t)).collect();
    let chi = psi.iter().map(|p| sys.eta.mul_vec(p)).collect();
    Ok(Trajectory { times, psi, chi })
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{TRAJECTORY_CSV_HEADER}")?;
        for ((t, p), x) in self.times.iter().zip(&self.psi).zip(&self.chi) {
            writeln!(
                w,
                "{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
                t, p[0].re, p[0].im, p[1].re, p[1].im, x[0].re, x[0].im, x[1].re, x[1].im
            )?;
        }
        Ok(())
    }
}
