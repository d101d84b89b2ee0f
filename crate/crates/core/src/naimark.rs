//! Naimark dilation of the biorthogonal eigenbasis.
//!
//! The four rank-one operators `f²|E±(±α)⟩⟨E±(±α)|` form a POVM on C².
//! Their vectors are the columns of the partial isometry `M = f[Ψ, Ξ]`,
//! which is completed to the 4x4 unitary `V = f[σ_z⊗Ψ + σ_x⊗Ξ]`. The
//! dilated Hamiltonian `𝐇 = V (I₂⊗Ẽ) V†` is Hermitian, has the spectrum of
//! `H` twice over and decomposes as `I₂⊗Λ + iσ_y⊗Ω`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat::{c, pauli, CMatrix, CVector, DEFAULT_TOL};
use crate::pt::{PTParams, PTSystem};
use crate::ensure_close;

/// Below this `|sin α|` the `Ω⁻¹` synchronization route is refused.
pub const OMEGA_SINGULAR_GUARD: f64 = 1e-10;

/// Residual norm below which a completion candidate is skipped.
const COMPLETION_SKIP: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Povm {
    pub elements: Vec<CMatrix>,
}

impl Povm {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sum(&self) -> CMatrix {
        let n = self.elements[0].rows();
        self.elements.iter().fold(CMatrix::zeros(n, n), |acc, a| &acc + a)
    }

    /// Max deviation of `Σ A_k` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let n = self.elements[0].rows();
        self.sum().max_abs_diff(&CMatrix::identity(n))
    }

    /// Each element Hermitian, PSD and rank one; the set sums to identity.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for a in &self.elements {
            let dev = a.max_abs_diff(&a.dagger());
            if dev > tol {
                return Err(Error::NotHermitian(dev));
            }
            let eig = crate::mat::hermitian_eigen(a, tol)?;
            let min = *eig.values.last().unwrap();
            if min < -tol {
                return Err(Error::Invariant { name: "povm element psd", error: -min });
            }
            if eig.values.len() > 1 && eig.values[1].abs() > tol {
                return Err(Error::Invariant { name: "povm element rank one", error: eig.values[1] });
            }
        }
        let err = self.completeness_error();
        if err > tol {
            return Err(Error::Incomplete(err));
        }
        Ok(())
    }
}

/// Columns of `M = f[Ψ, Ξ]` in the order `E+(α), E-(α), E+(-α), E-(-α)`.
fn povm_vectors(sys: &PTSystem) -> Vec<CVector> {
    let f = sys.params.f();
    [sys.psi.column(0), sys.psi.column(1), sys.xi.column(0), sys.xi.column(1)]
        .iter()
        .map(|v| v.scale_real(f))
        .collect()
}

pub fn build_povm(sys: &PTSystem) -> Result<Povm> {
    let povm = Povm { elements: povm_vectors(sys).iter().map(CVector::outer).collect() };
    let err = povm.completeness_error();
    if err > 1e-12 {
        return Err(Error::Incomplete(err));
    }
    Ok(povm)
}

/// `Λ = E0·I + (ω0/2) cos α σ_x`.
pub fn lambda_closed(p: &PTParams) -> CMatrix {
    let id = CMatrix::identity(2).scale_real(p.e0());
    &id + &pauli::sigma_x().scale_real(p.omega0() / 2.0 * p.cos_alpha())
}

/// `Ω = i (ω0/2) sin α σ_z`.
pub fn omega_closed(p: &PTParams) -> CMatrix {
    pauli::sigma_z().scale(c(0.0, p.omega0() / 2.0 * p.sin_alpha()))
}

#[derive(Clone, Debug)]
pub struct DilatedSystem {
    pub params: PTParams,
    /// Partial isometry `f[Ψ, Ξ]`, 2x4.
    pub m: CMatrix,
    pub v: CMatrix,
    /// `P_k = v_k v_k†` for the columns of `V`.
    pub projectors: Vec<CMatrix>,
    pub e4: CMatrix,
    pub h4: CMatrix,
    pub lambda: CMatrix,
    pub omega: CMatrix,
}

pub fn dilate(sys: &PTSystem) -> Result<DilatedSystem> {
    let p = sys.params;
    let f = p.f();
    let sz = pauli::sigma_z();
    let sx = pauli::sigma_x();

    let m = CMatrix::hstack(&sys.psi, &sys.xi).scale_real(f);
    let v = (&sz.kron(&sys.psi) + &sx.kron(&sys.xi)).scale_real(f);
    let projectors: Vec<CMatrix> = (0..4).map(|k| v.column(k).outer()).collect();
    let e4 = CMatrix::identity(2).kron(&sys.e_tilde());
    let h4 = &(&v * &e4) * &v.dagger();

    let f2 = f * f;
    let lambda_route = (&(&sys.h_pt * &sys.eta_inv) + &(&sys.eta * &sys.h_pt)).scale_real(f2);
    let omega_route = (&sys.h_pt - &sys.h_pt_dagger).scale_real(f2);
    let lambda = lambda_closed(&p);
    let omega = omega_closed(&p);

    let ds = DilatedSystem { params: p, m, v, projectors, e4, h4, lambda, omega };

    ensure_close("lambda closed form", &lambda_route, &ds.lambda, 1e-12)?;
    ensure_close("omega closed form", &omega_route, &ds.omega, 1e-12)?;
    ds.verify(DEFAULT_TOL)?;
    Ok(ds)
}

impl DilatedSystem {
    pub fn verify(&self, tol: f64) -> Result<()> {
        let i2 = CMatrix::identity(2);
        let i4 = CMatrix::identity(4);
        ensure_close("M M^dagger = I", &(&self.m * &self.m.dagger()), &i2, tol)?;
        ensure_close("V V^dagger = I", &(&self.v * &self.v.dagger()), &i4, tol)?;
        ensure_close("V^dagger V = I", &(&self.v.dagger() * &self.v), &i4, tol)?;
        ensure_close("top block of V is M", &self.v.block(0, 0, 2, 4), &self.m, 0.0)?;
        let sum = self.projectors.iter().fold(CMatrix::zeros(4, 4), |acc, p| &acc + p);
        ensure_close("sum P_k = I", &sum, &i4, tol)?;
        for (j, pj) in self.projectors.iter().enumerate() {
            for (k, pk) in self.projectors.iter().enumerate() {
                let expected = if j == k { pk.clone() } else { CMatrix::zeros(4, 4) };
                ensure_close("P_j P_k = delta_jk P_k", &(pj * pk), &expected, tol)?;
            }
        }
        ensure_close("H4 hermitian", &self.h4, &self.h4.dagger(), tol)?;
        let blocks = &i2.kron(&self.lambda) + &pauli::sigma_y().scale(c(0.0, 1.0)).kron(&self.omega);
        ensure_close("H4 block form", &self.h4, &blocks, tol)?;
        Ok(())
    }

    /// Closed-form `𝐔(t) = [[F, G], [-G, F]]` with
    /// `F = e^{-iE0 t}(cos y I - i sin y cos α σ_x)` and
    /// `G = e^{-iE0 t} sin y sin α σ_z`.
    pub fn evolution(&self, t: f64) -> CMatrix {
        let (f, g) = self.evolution_blocks(t);
        CMatrix::from_blocks(&f, &g, &(-&g), &f)
    }

    pub fn evolution_blocks(&self, t: f64) -> (CMatrix, CMatrix) {
        let p = &self.params;
        let y = p.omega0() * t / 2.0;
        let phase = Complex64::from_polar(1.0, -p.e0() * t);
        let (sy, cy) = y.sin_cos();
        let f = (&CMatrix::identity(2).scale_real(cy)
            + &pauli::sigma_x().scale(c(0.0, -sy * p.cos_alpha())))
            .scale(phase);
        let g = pauli::sigma_z().scale(phase * (sy * p.sin_alpha()));
        (f, g)
    }

    /// Document for the `dilate` command, keyed by matrix name.
    pub fn document(&self) -> DilationDocument<'_> {
        DilationDocument {
            m: &self.m,
            v: &self.v,
            h4: &self.h4,
            lambda: &self.lambda,
            omega: &self.omega,
            e4: &self.e4,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DilationDocument<'a> {
    #[serde(rename = "M")]
    pub m: &'a CMatrix,
    #[serde(rename = "V")]
    pub v: &'a CMatrix,
    #[serde(rename = "H4")]
    pub h4: &'a CMatrix,
    #[serde(rename = "Lambda")]
    pub lambda: &'a CMatrix,
    #[serde(rename = "Omega")]
    pub omega: &'a CMatrix,
    #[serde(rename = "E4")]
    pub e4: &'a CMatrix,
}

/// Unitary completion of a rank-one POVM `Σ x_k x_k† = I_N`.
///
/// The first `N` rows of the result are `M = [x_1 … x_n]` verbatim; the
/// remaining rows come from Gram–Schmidt on the canonical basis of Cⁿ
/// against the rows already present.
pub fn general_naimark(xs: &[CVector]) -> Result<CMatrix> {
    let n = xs.len();
    let dim = xs.first().map(CVector::dim).ok_or_else(|| Error::Dimension("no POVM vectors".into()))?;
    if xs.iter().any(|x| x.dim() != dim) {
        return Err(Error::Dimension("POVM vectors of unequal dimension".into()));
    }
    if n < dim {
        return Err(Error::Dimension(format!("{n} vectors cannot span C^{dim}")));
    }
    let m = CMatrix::from_columns(xs)?;
    let err = (&m * &m.dagger()).max_abs_diff(&CMatrix::identity(dim));
    if err > DEFAULT_TOL {
        return Err(Error::Incomplete(err));
    }

    let mut rows: Vec<CVector> = (0..dim).map(|i| m.row(i)).collect();
    for k in 0..n {
        if rows.len() == n {
            break;
        }
        let mut r = CVector::basis(n, k);
        // Two passes of classical Gram–Schmidt.
        for _ in 0..2 {
            for u in &rows {
                r = &r - &u.scale(u.inner(&r));
            }
        }
        let norm = r.norm();
        if norm >= COMPLETION_SKIP {
            rows.push(r.scale_real(1.0 / norm));
        }
    }
    if rows.len() < n {
        return Err(Error::Invariant { name: "naimark completion rank", error: (n - rows.len()) as f64 });
    }

    if n == dim {
        return Ok(m);
    }
    let completion = CMatrix::from_fn(n - dim, n, |i, j| rows[dim + i][j]);
    Ok(CMatrix::vstack(&m, &completion))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyncRoute {
    /// `χ = η ψ`, valid for every admitted α.
    Metric,
    /// `χ = Ω⁻¹ (H - Λ) ψ`, undefined in the Hermitian limit.
    OmegaInverse,
    /// `χ(t) = e^{-iE0 t}/cos α · (cos y, -i sin(y - α))`.
    ClosedForm,
}

pub fn ancilla_state(sys: &PTSystem, t: f64, route: SyncRoute) -> Result<CVector> {
    let p = &sys.params;
    match route {
        SyncRoute::Metric => Ok(sys.eta.mul_vec(&sys.psi_at(t))),
        SyncRoute::OmegaInverse => {
            let sa = p.sin_alpha();
            if sa.abs() < OMEGA_SINGULAR_GUARD {
                return Err(Error::SingularOmega(sa.abs()));
            }
            let omega_inv = omega_closed(p).inverse2().ok_or(Error::SingularOmega(sa.abs()))?;
            let k = &omega_inv * &(&sys.h_pt - &lambda_closed(p));
            Ok(k.mul_vec(&sys.psi_at(t)))
        }
        SyncRoute::ClosedForm => {
            let y = p.omega0() * t / 2.0;
            let pre = Complex64::from_polar(1.0 / p.cos_alpha(), -p.e0() * t);
            Ok(CVector::from_fn(2, |k| {
                if k == 0 {
                    pre * y.cos()
                } else {
                    pre * c(0.0, -(y - p.alpha()).sin())
                }
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{hermitian_eigen, re};
    use crate::pt::{build_system, passage_times};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

    fn sys(e0: f64, s: f64, alpha: f64) -> PTSystem {
        build_system(PTParams::new(e0, s, alpha).unwrap()).unwrap()
    }

    #[test]
    fn povm_hermitian_limit() {
        let s = sys(0.0, 1.0, 0.0);
        let povm = build_povm(&s).unwrap();
        assert_eq!(povm.len(), 4);
        assert!((s.params.f().powi(2) - 0.5).abs() < 1e-15);
        assert!(povm.completeness_error() < 1e-15);
        assert!(povm.elements[0].approx_eq(&s.phi.column(0).outer().scale_real(0.5), 1e-15));
        povm.validate(1e-12).unwrap();
    }

    #[test]
    fn povm_completeness_equals_metric_identity() {
        let s = sys(0.0, 1.0, FRAC_PI_6);
        let povm = build_povm(&s).unwrap();
        assert!(povm.completeness_error() < 1e-12);
        let f2 = s.params.f().powi(2);
        let via_metric = (&s.eta + &s.eta_inv).scale_real(f2);
        assert!(via_metric.approx_eq(&CMatrix::identity(2), 1e-12));
    }

    #[test]
    fn povm_elements_are_rank_one() {
        for alpha in [-1.3, -0.4, 0.2, 1.1] {
            let s = sys(0.0, 1.0, alpha);
            let povm = build_povm(&s).unwrap();
            for a in &povm.elements {
                let eig = hermitian_eigen(a, 1e-12).unwrap();
                assert!(eig.values[1].abs() < 1e-12, "{:?}", eig.values);
                // trace(A) = f²⟨E|E⟩ = f²/cos α · 1, since ⟨E±|E±⟩ = 1/cos α.
                let expected = s.params.f().powi(2) / alpha.cos();
                assert!((a.trace().re - expected).abs() < 1e-13);
            }
            povm.validate(1e-12).unwrap();
        }
    }

    #[test]
    fn dilation_hermitian_limit() {
        let s = sys(0.0, 1.0, 0.0);
        let ds = dilate(&s).unwrap();
        let expected_v = (&pauli::sigma_z() + &pauli::sigma_x()).scale_real(FRAC_1_SQRT_2).kron(&s.phi);
        assert!(ds.v.approx_eq(&expected_v, 1e-15));
        assert!(ds.h4.approx_eq(&CMatrix::identity(2).kron(&s.h_herm), 1e-15));
    }

    #[test]
    fn dilated_spectrum_is_doubly_degenerate() {
        let s = sys(0.0, 1.0, FRAC_PI_6);
        let ds = dilate(&s).unwrap();
        let eig = hermitian_eigen(&ds.h4, 1e-12).unwrap();
        let half = 3f64.sqrt() / 2.0;
        for (got, want) in eig.values.iter().zip([half, half, -half, -half]) {
            assert!((got - want).abs() < 1e-12, "{:?}", eig.values);
        }
        let sq = &ds.h4 * &ds.h4;
        assert!(sq.approx_eq(&CMatrix::identity(4).scale_real(0.75), 1e-12));
    }

    #[test]
    fn dilation_regularizes_the_pt_hamiltonian() {
        let p = PTParams::from_epsilon(0.0, 1.0, 0.1).unwrap();
        let s = build_system(p).unwrap();
        let ds = dilate(&s).unwrap();
        // Diagonal |i s sin α| ≈ 4.98, off-diagonal s ≈ 5.01.
        assert!((s.h_pt[(0, 0)].norm() - p.s() * p.sin_alpha().abs()).abs() < 1e-12);
        let max_h = s.h_pt.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max_h > 4.9);
        let max_h4 = ds.h4.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max_h4 <= 0.5 + 1e-12, "{max_h4}");
    }

    #[test]
    fn general_naimark_identity_is_unchanged() {
        let v = general_naimark(&[CVector::basis(2, 0), CVector::basis(2, 1)]).unwrap();
        assert_eq!(v, CMatrix::identity(2));
    }

    #[test]
    fn general_naimark_trine() {
        let k = (2.0f64 / 3.0).sqrt();
        let xs: Vec<CVector> = (0..3)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / 3.0;
                CVector::new(vec![re(k * th.cos()), re(k * th.sin())]).unwrap()
            })
            .collect();
        let v = general_naimark(&xs).unwrap();
        assert_eq!(v.shape(), (3, 3));
        assert!(v.is_unitary(1e-12));
        assert_eq!(v.block(0, 0, 2, 3), CMatrix::from_columns(&xs).unwrap());
    }

    #[test]
    fn general_naimark_rejects_incomplete_sets() {
        let xs = [CVector::basis(2, 0).scale_real(0.9), CVector::basis(2, 1)];
        assert!(matches!(general_naimark(&xs), Err(Error::Incomplete(_))));
        assert!(general_naimark(&[CVector::basis(2, 0)]).is_err());
        assert!(general_naimark(&[]).is_err());
    }

    #[test]
    fn general_naimark_matches_explicit_row_space() {
        let s = sys(0.0, 1.0, FRAC_PI_6);
        let ds = dilate(&s).unwrap();
        let v2 = general_naimark(&povm_vectors(&s)).unwrap();
        assert!(v2.is_unitary(1e-12));
        let row_projector = |v: &CMatrix| {
            let b = v.block(2, 0, 2, 4);
            &b.dagger() * &b
        };
        assert!(row_projector(&v2).approx_eq(&row_projector(&ds.v), 1e-10));
    }

    #[test]
    fn evolution_closed_form_cases() {
        let s = sys(0.0, 1.0, 0.3);
        let ds = dilate(&s).unwrap();
        assert!(ds.evolution(0.0).approx_eq(&CMatrix::identity(4), 1e-15));

        let s = sys(0.0, 1.0, 0.0);
        let ds = dilate(&s).unwrap();
        let (_, g) = ds.evolution_blocks(0.8);
        assert_eq!(g.max_abs(), 0.0);

        let s = sys(0.0, 1.0, -FRAC_PI_3);
        let ds = dilate(&s).unwrap();
        let tau = passage_times(&s.params).tau;
        let u = ds.evolution(tau);
        assert!(u.is_unitary(1e-12));
        let psi_hat = CVector::basis(2, 0).concat(&s.eta.mul_vec(&CVector::basis(2, 0)));
        let out = u.mul_vec(&psi_hat);
        assert!(out[0].norm() < 1e-12);
        assert!((out[1] - c(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn ancilla_routes_agree() {
        let s = sys(0.4, 1.5, -0.9);
        let tau = passage_times(&s.params).tau;
        for t in [0.0, 0.3, tau, 2.0 * tau] {
            let a = ancilla_state(&s, t, SyncRoute::Metric).unwrap();
            let b = ancilla_state(&s, t, SyncRoute::OmegaInverse).unwrap();
            let cf = ancilla_state(&s, t, SyncRoute::ClosedForm).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-10);
            assert!(a.max_abs_diff(&cf) < 1e-10);
        }
    }

    #[test]
    fn ancilla_initial_and_final() {
        let (e0, alpha) = (0.7, 0.6);
        let s = sys(e0, 1.2, alpha);
        let ca = alpha.cos();
        let chi_i = ancilla_state(&s, 0.0, SyncRoute::ClosedForm).unwrap();
        let want_i = CVector::new(vec![re(1.0 / ca), c(0.0, alpha.sin() / ca)]).unwrap();
        assert!(chi_i.max_abs_diff(&want_i) < 1e-14);

        let tau = passage_times(&s.params).tau;
        let mu = Complex64::from_polar(1.0, -e0 * tau);
        let chi_f = ancilla_state(&s, tau, SyncRoute::Metric).unwrap();
        let want_f = CVector::new(vec![re(alpha.sin()), c(0.0, 1.0)]).unwrap().scale(-mu / ca);
        assert!(chi_f.max_abs_diff(&want_f) < 1e-12, "{chi_f:?} vs {want_f:?}");
    }

    #[test]
    fn omega_route_refused_in_hermitian_limit() {
        let s = sys(0.0, 1.0, 0.0);
        assert!(matches!(ancilla_state(&s, 1.0, SyncRoute::OmegaInverse), Err(Error::SingularOmega(_))));
        let chi = ancilla_state(&s, 1.0, SyncRoute::Metric).unwrap();
        assert_eq!(chi, s.psi_at(1.0));
    }

    #[test]
    fn document_keys() {
        let s = sys(0.0, 1.0, FRAC_PI_2 / 3.0);
        let ds = dilate(&s).unwrap();
        let json = serde_json::to_value(ds.document()).unwrap();
        for key in ["M", "V", "H4", "Lambda", "Omega", "E4"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["M"]["rows"], 2);
        assert_eq!(json["M"]["cols"], 4);
    }
}
