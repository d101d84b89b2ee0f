use proptest::prelude::*;

use ptbrach::mat::{expm, hermitian_eigen, CMatrix, EXPM_TOL};
use ptbrach::{build_system, dilate, pt_inner, Complex64, PTParams};

fn matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| CMatrix::new(n, n, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = CMatrix> {
    matrix(n).prop_map(|a| a.hermitian_part())
}

proptest! {
    #[test]
    fn kron_mixed_product(a in matrix(2), b in matrix(2), c in matrix(2), d in matrix(2)) {
        let lhs = &a.kron(&b) * &c.kron(&d);
        let rhs = (&a * &c).kron(&(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn kron_bilinear(a in matrix(2), b in matrix(2), c in matrix(2), k in -2.0f64..2.0) {
        let lhs = (&a + &b.scale_real(k)).kron(&c);
        let rhs = &a.kron(&c) + &b.kron(&c).scale_real(k);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        prop_assert!(a.kron(&c).dagger().max_abs_diff(&a.dagger().kron(&c.dagger())) < 1e-15);
    }

    #[test]
    fn expm_commutes_with_dagger(a in matrix(4)) {
        let a = a.scale_real(3.0);
        let lhs = expm(&a, EXPM_TOL).unwrap().dagger();
        let rhs = expm(&a.dagger(), EXPM_TOL).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn expm_anti_hermitian_is_unitary(h in hermitian(4), t in -20.0f64..20.0) {
        let u = expm(&h.scale(Complex64::new(0.0, -t)), EXPM_TOL).unwrap();
        prop_assert!(u.is_unitary(1e-10));
    }

    #[test]
    fn jacobi_reconstructs_hermitian(h in hermitian(4)) {
        let e = hermitian_eigen(&h, 1e-10).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
        prop_assert!(e.vectors.is_unitary(1e-10));
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let tr: f64 = e.values.iter().sum();
        prop_assert!((tr - h.trace().re).abs() < 1e-10);
    }

    #[test]
    fn json_round_trip_is_exact(a in matrix(3)) {
        let text = serde_json::to_string(&a).unwrap();
        let back: CMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn pt_system_invariants(e0 in -2.0f64..2.0, s in 0.1f64..5.0, alpha in -1.5f64..1.5) {
        let sys = build_system(PTParams::new(e0, s, alpha).unwrap()).unwrap();
        let i2 = CMatrix::identity(2);
        prop_assert!((&sys.eta * &sys.eta_inv).max_abs_diff(&i2) < 1e-10);
        prop_assert!(sys.h_herm.is_hermitian(1e-10 * s.max(1.0)));
        for k in 0..2 {
            let v = sys.psi.column(k);
            let want = if k == 0 { 1.0 } else { -1.0 };
            prop_assert!((pt_inner(&v, &v).unwrap() - want).norm() < 1e-10);
        }
        // The metric norm is conserved; for psi = (1, 0) it is 1/cos(alpha).
        let t = 0.7 * sys.passage_times().tau;
        let psi = sys.psi_at(t);
        let norm = psi.inner(&sys.eta.mul_vec(&psi)).re;
        prop_assert!((norm * sys.params.cos_alpha() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dilation_is_unitary_and_block_structured(s in 0.1f64..5.0, alpha in -1.4f64..1.4, t in 0.0f64..10.0) {
        let sys = build_system(PTParams::new(0.0, s, alpha).unwrap()).unwrap();
        let ds = dilate(&sys).unwrap();
        let u = ds.evolution(t);
        prop_assert!(u.is_unitary(1e-10));
        let (f, g) = ds.evolution_blocks(t);
        prop_assert!(u.block(0, 0, 2, 2).max_abs_diff(&f) < 1e-12);
        prop_assert!(u.block(2, 2, 2, 2).max_abs_diff(&f) < 1e-12);
        prop_assert!(u.block(0, 2, 2, 2).max_abs_diff(&g) < 1e-12);
        prop_assert!(u.block(2, 0, 2, 2).max_abs_diff(&g.scale_real(-1.0)) < 1e-12);
    }
}
