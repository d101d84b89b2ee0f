//! Built-in invariant suite over a fixed parameter grid.
//!
//! Grid: `E0 ∈ {0, 0.25}`, `α ∈ {±0.1, ±0.5, ±1.0, ±1.4, 0}` with
//! `s ∈ {0.5, 1, 2}`, plus the vanishing-passage points
//! `ε ∈ {0.3, 0.1, 0.03, 0.01}` at `ω0 = 1`. Every check records the worst
//! error it saw over the grid and compares it with an absolute tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::mat::{c, expm, hermitian_eigen, pauli, CMatrix, CVector, EXPM_TOL};
use crate::naimark::{ancilla_state, build_povm, dilate, general_naimark, DilatedSystem, SyncRoute};
use crate::protocol::{
    energy_spread, geodesic_distance, prepare_initial, projector_plus, run_protocol,
};
use crate::pt::{build_system, passage_times, trajectory, PTParams, PTSystem};

pub const GRID_ALPHAS: [f64; 9] = [-1.4, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 1.4];
pub const GRID_SCALES: [f64; 3] = [0.5, 1.0, 2.0];
pub const GRID_OFFSETS: [f64; 2] = [0.0, 0.25];
pub const GRID_EPSILONS: [f64; 4] = [0.3, 0.1, 0.03, 0.01];
pub const FLIP_ORACLE_ALPHAS: [f64; 4] = [-1.2, -0.5, 0.0, 0.5];
pub const RANDOM_NAIMARK_INSTANCES: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:<44} max_err={:.3e} tol={:.0e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.max_error,
            self.tolerance
        )
    }
}

/// Collects the worst error per named check.
struct Tally {
    checks: Vec<Check>,
}

impl Tally {
    fn record(&mut self, name: &'static str, tolerance: f64, err: f64) {
        let err = if err.is_nan() { f64::INFINITY } else { err };
        match self.checks.iter_mut().find(|c| c.name == name) {
            Some(c) => c.max_error = c.max_error.max(err),
            None => self.checks.push(Check { name, max_error: err, tolerance }),
        }
    }

    fn flag(&mut self, name: &'static str, ok: bool) {
        self.record(name, 0.0, if ok { 0.0 } else { 1.0 });
    }
}

/// Parameter points of the built-in grid.
pub fn grid() -> Vec<PTParams> {
    let mut out = Vec::new();
    for &e0 in &GRID_OFFSETS {
        for &s in &GRID_SCALES {
            for &a in &GRID_ALPHAS {
                out.push(PTParams::new(e0, s, a).expect("grid point is admitted"));
            }
        }
        for &eps in &GRID_EPSILONS {
            out.push(PTParams::from_epsilon(e0, 1.0, eps).expect("grid point is admitted"));
        }
    }
    out
}

/// `exp(-i t A)`.
fn expm_evolution(a: &CMatrix, t: f64) -> CMatrix {
    expm(&a.scale(c(0.0, -t)), EXPM_TOL).expect("square")
}

/// First `t > 0` where `(1, 0)` evolved by `exp(-itH)` lands on the ray of
/// `(0, 1)`, found by a dense scan for a sign change of the relative
/// amplitude `ψ0 conj(ψ1)/|ψ1|` followed by bisection.
pub fn first_flip_time(h: &CMatrix, t_max: f64) -> Option<f64> {
    let e0 = CVector::basis(2, 0);
    let amplitude = |t: f64| {
        let v = expm_evolution(h, t).mul_vec(&e0);
        v[0] * v[1].conj() / v[1].norm()
    };
    let t0 = t_max * 1e-4;
    let a0 = amplitude(t0);
    let direction = a0 / a0.norm();
    let signed = |t: f64| (amplitude(t) * direction.conj()).re;

    let steps = 2000;
    let mut lo = t0;
    let mut f_lo = signed(lo);
    for k in 1..=steps {
        let hi = t0 + (t_max - t0) * k as f64 / steps as f64;
        let f_hi = signed(hi);
        if f_lo.signum() != f_hi.signum() {
            let (mut a, mut b) = (lo, hi);
            let mut fa = f_lo;
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = signed(mid);
                if fm == 0.0 {
                    return Some(mid);
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            return Some(0.5 * (a + b));
        }
        lo = hi;
        f_lo = f_hi;
    }
    None
}

/// Random `n x n` unitary from Gram–Schmidt on a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let mut cols: Vec<CVector> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut v = CVector::from_fn(n, |_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            for _ in 0..2 {
                for u in &cols {
                    v = &v - &u.scale(u.inner(&v));
                }
            }
            match v.normalized() {
                Some(v) if v.norm() > 0.5 => cols.push(v),
                _ => break,
            }
        }
        if cols.len() == n {
            return CMatrix::from_columns(&cols).expect("equal length");
        }
    }
}

fn check_point(t: &mut Tally, sys: &PTSystem, ds: &DilatedSystem) -> Result<()> {
    let p = sys.params;
    let id2 = CMatrix::identity(2);
    let id4 = CMatrix::identity(4);
    let sx = pauli::sigma_x();
    let h = &sys.h_pt;

    t.record("pt symmetry sx conj(H) sx = H", 1e-12, (&(&sx * &h.conj()) * &sx).max_abs_diff(h));
    t.record("pseudo-hermiticity eta H = H^dag eta", 1e-12, (&sys.eta * h).max_abs_diff(&(&sys.h_pt_dagger * &sys.eta)));
    t.record("rho^2 = eta", 1e-12, (&sys.rho * &sys.rho).max_abs_diff(&sys.eta));
    t.record("biorthonormality Xi^dag Psi = I", 1e-12, (&sys.xi.dagger() * &sys.psi).max_abs_diff(&id2));
    t.record("metric eta = Xi Xi^dag", 1e-12, (&sys.xi * &sys.xi.dagger()).max_abs_diff(&sys.eta));
    t.record("h hermitian", 1e-12, sys.h_herm.max_abs_diff(&sys.h_herm.dagger()));
    t.record("Phi unitary", 1e-12, (&sys.phi * &sys.phi.dagger()).max_abs_diff(&id2));

    let povm = build_povm(sys)?;
    t.record("POVM completeness sum A_k = I2", 1e-12, povm.completeness_error());
    t.record("V V^dag = I4", 1e-12, (&ds.v * &ds.v.dagger()).max_abs_diff(&id4));
    t.record("V^dag V = I4", 1e-12, (&ds.v.dagger() * &ds.v).max_abs_diff(&id4));
    let psum = ds.projectors.iter().fold(CMatrix::zeros(4, 4), |acc, q| &acc + q);
    t.record("sum P_k = I4", 1e-12, psum.max_abs_diff(&id4));
    let mut orth = 0.0f64;
    for (j, pj) in ds.projectors.iter().enumerate() {
        for (k, pk) in ds.projectors.iter().enumerate() {
            let want = if j == k { pk.clone() } else { CMatrix::zeros(4, 4) };
            orth = orth.max((pj * pk).max_abs_diff(&want));
        }
    }
    t.record("P_j P_k = delta_jk P_k", 1e-12, orth);

    let blocks = &id2.kron(&ds.lambda) + &pauli::sigma_y().scale(c(0.0, 1.0)).kron(&ds.omega);
    t.record("H4 = I2 x Lambda + i sy x Omega", 1e-12, blocks.max_abs_diff(&ds.h4));
    let shifted = &ds.h4 - &id4.scale_real(p.e0());
    let half = p.omega0() / 2.0;
    t.record("(H4 - E0)^2 = (w0/2)^2 I4", 1e-10, (&shifted * &shifted).max_abs_diff(&id4.scale_real(half * half)));
    let eig = hermitian_eigen(&ds.h4, 1e-10)?;
    let (ep, em) = sys.energies;
    let spec_err = [ep, ep, em, em].iter().zip(&eig.values).map(|(w, g)| (w - g).abs()).fold(0.0, f64::max);
    t.record("H4 spectrum {E+, E+, E-, E-}", 1e-10, spec_err);

    let times = passage_times(&p);
    let tau = times.tau;
    for time in [0.1, tau / 2.0, tau, 3.0 * tau] {
        let u = sys.evolution(time);
        t.record("U(t) closed form = expm(-itH)", 1e-10, u.max_abs_diff(&expm_evolution(h, time)));
        t.record("|det U(t)| = 1", 1e-10, (u.det2().unwrap().norm() - 1.0).abs());
        let intertwined = &(&sys.rho_inv * &expm_evolution(&sys.h_herm, time)) * &sys.rho;
        t.record("U(t) = rho^-1 expm(-ith) rho", 1e-10, u.max_abs_diff(&intertwined));

        let u4 = ds.evolution(time);
        t.record("U4(t) F/G form = expm(-itH4)", 1e-10, u4.max_abs_diff(&expm_evolution(&ds.h4, time)));
        let phases: Vec<Complex64> =
            (0..4).map(|k| Complex64::from_polar(1.0, -ds.e4[(k, k)].re * time)).collect();
        let spectral = &(&ds.v * &CMatrix::diag(&phases)) * &ds.v.dagger();
        t.record("U4(t) F/G form = V exp(-iEt) V^dag", 1e-10, u4.max_abs_diff(&spectral));
        t.record("U4(t) unitary", 1e-12, (&u4 * &u4.dagger()).max_abs_diff(&id4));
    }

    let initial = prepare_initial(sys);
    let psi_hat = CVector::basis(2, 0).concat(&sys.eta.mul_vec(&CVector::basis(2, 0)));
    let traj = trajectory(sys, tau, 200)?;
    let omega_route = p.sin_alpha().abs() >= crate::naimark::OMEGA_SINGULAR_GUARD;
    for ((&time, psi), chi) in traj.times.iter().zip(&traj.psi).zip(&traj.chi) {
        let u4 = ds.evolution(time);
        let top = projector_plus().mul_vec(&u4.mul_vec(&psi_hat));
        let want = CVector::basis(2, 0).kron(&sys.evolution(time).mul_vec(&CVector::basis(2, 0)));
        t.record("embedding P+ U4 psi_hat = e+ x U psi_I", 1e-10, top.max_abs_diff(&want));
        let closed = ancilla_state(sys, time, SyncRoute::ClosedForm)?;
        t.record("synchronization chi = eta psi", 1e-10, chi.max_abs_diff(&closed).max(psi.max_abs_diff(&want.slice(0, 2))));
        if omega_route {
            let via_omega = ancilla_state(sys, time, SyncRoute::OmegaInverse)?;
            t.record("synchronization Omega^-1 (H - Lambda) route", 1e-10, chi.max_abs_diff(&via_omega));
        }
        let norm = initial.evolve(&u4).map(|s| s.vec().norm()).unwrap_or(f64::INFINITY);
        t.record("norm conservation |U4 phi_I| = 1", 1e-12, (norm - 1.0).abs());
    }

    let rec = run_protocol(sys, ds)?;
    t.record("protocol flip fidelity = 1", 1e-10, (rec.flip_fidelity - 1.0).abs());
    t.record("protocol p(sigma2 down) = 1", 1e-10, (rec.p_sigma2_down - 1.0).abs());
    t.record("protocol p(sigma1 up) = cos^2(a)/2", 1e-10, (rec.p_sigma1_up - p.cos_alpha().powi(2) / 2.0).abs());

    let fin = initial.evolve(&ds.evolution(tau))?;
    let delta4 = geodesic_distance(initial.vec(), fin.vec())?;
    t.record("delta4 = 2 arccos|sin a|", 1e-10, (delta4 - 2.0 * p.sin_alpha().abs().acos()).abs());
    let spread = energy_spread(&ds.h4, initial.vec());
    t.record("energy spread = w0/2", 1e-10, (spread - half).abs());
    t.flag("AA inequality tau >= delta4 / (2 dE)", tau >= delta4 / (2.0 * spread) - 1e-12);
    if p.alpha() <= 0.0 {
        t.record("AA equality for alpha <= 0", 1e-10, (2.0 * tau * spread - delta4).abs());
    }
    Ok(())
}

fn check_hermitian_limit(t: &mut Tally) -> Result<()> {
    for &e0 in &GRID_OFFSETS {
        for &s in &GRID_SCALES {
            let sys = build_system(PTParams::new(e0, s, 0.0)?)?;
            let ds = dilate(&sys)?;
            let id2 = CMatrix::identity(2);
            t.record("hermitian limit eta = I2", 1e-12, sys.eta.max_abs_diff(&id2));
            t.record("hermitian limit H4 = I2 x h", 1e-12, ds.h4.max_abs_diff(&id2.kron(&sys.h_herm)));
            let rec = run_protocol(&sys, &ds)?;
            t.record("hermitian limit p(sigma1 up) = 1/2", 1e-12, (rec.p_sigma1_up - 0.5).abs());
            let pt = passage_times(&sys.params);
            t.record("hermitian limit tau = tau_h", 1e-12, (pt.tau - pt.tau_h).abs());
        }
    }
    Ok(())
}

fn check_passage_oracle(t: &mut Tally) -> Result<()> {
    for &a in &FLIP_ORACLE_ALPHAS {
        let sys = build_system(PTParams::new(0.0, 1.0, a)?)?;
        let t_max = 2.0 * (PI - 1e-3) / sys.params.omega0();
        let err = match first_flip_time(&sys.h_pt, t_max) {
            Some(found) => (found - passage_times(&sys.params).tau).abs(),
            None => f64::INFINITY,
        };
        t.record("passage time = first-flip bisection", 1e-8, err);
    }
    let mut prev: Option<(f64, f64, f64)> = None;
    for &eps in &GRID_EPSILONS {
        let p = PTParams::from_epsilon(0.0, 1.0, eps)?;
        let pt = passage_times(&p);
        t.record("vanishing regime tau = 2 eps / w0", 1e-10, (pt.tau - 2.0 * eps).abs());
        let sys = build_system(p)?;
        let ds = dilate(&sys)?;
        let initial = prepare_initial(&sys);
        let fin = initial.evolve(&ds.evolution(pt.tau))?;
        let d4 = geodesic_distance(initial.vec(), fin.vec())?;
        let ps = run_protocol(&sys, &ds)?.p_sigma1_up;
        t.record("vanishing regime delta4 = 2 eps", 1e-10, (d4 - 2.0 * eps).abs());
        t.record("vanishing regime p_success = sin^2(eps)/2", 1e-10, (ps - eps.sin().powi(2) / 2.0).abs());
        let row = (pt.tau / pt.tau_h, d4, ps);
        if let Some(last) = prev {
            t.flag("vanishing regime strictly monotone", row.0 < last.0 && row.1 < last.1 && row.2 < last.2);
        }
        prev = Some(row);
    }
    Ok(())
}

fn check_general_naimark(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f4a);
    for k in 0..RANDOM_NAIMARK_INSTANCES {
        let dim = 2 + k % 2;
        let n = dim + (k / 2) % (7 - dim);
        let u = random_unitary(&mut rng, n);
        let xs: Vec<CVector> = (0..n).map(|j| CVector::from_fn(dim, |i| u[(i, j)])).collect();
        let v = general_naimark(&xs)?;
        let id = CMatrix::identity(n);
        t.record("general Naimark random POVMs unitary", 1e-10, (&v.dagger() * &v).max_abs_diff(&id));
        let m = CMatrix::from_columns(&xs)?;
        t.flag("general Naimark top rows reproduced exactly", v.block(0, 0, dim, n) == m);
    }
    let sys = build_system(PTParams::new(0.0, 1.0, PI / 6.0)?)?;
    let ds = dilate(&sys)?;
    let xs: Vec<CVector> = (0..4).map(|j| ds.m.column(j)).collect();
    let v = general_naimark(&xs)?;
    let proj = |v: &CMatrix| {
        let b = v.block(2, 0, 2, 4);
        &b.dagger() * &b
    };
    t.record("general Naimark row space = explicit V", 1e-10, proj(&v).max_abs_diff(&proj(&ds.v)));
    Ok(())
}

/// Runs the whole suite. Construction errors become failed checks.
pub fn run_all() -> Vec<Check> {
    let mut t = Tally { checks: Vec::new() };
    for p in grid() {
        let outcome = build_system(p).and_then(|sys| {
            let ds = dilate(&sys)?;
            check_point(&mut t, &sys, &ds)
        });
        t.flag("grid point construction", outcome.is_ok());
    }
    let r = check_hermitian_limit(&mut t);
    t.flag("hermitian limit construction", r.is_ok());
    let r = check_passage_oracle(&mut t);
    t.flag("passage time suite construction", r.is_ok());
    let r = check_general_naimark(&mut t);
    t.flag("general Naimark construction", r.is_ok());
    t.checks
}
