use proptest::prelude::*;
use qxcorr_core::correlations::{m_eigenvalues, m_eigenvalues_raw, w_eigenvalues, w_eigenvalues_raw, w_eigenvalues_simplified};
use qxcorr_core::linalg::{sym3_lambda_max_cubic, sym3_lambda_max_jacobi};
use qxcorr_core::oracle::{conjugate, local_phase_unitary, minimize_over_observables, GenericDensityMatrix};
use qxcorr_core::xalgebra::spectrum;
use qxcorr_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn xstate(seed: u64) -> XMatrix {
    random_xstate(&mut ChaCha8Rng::seed_from_u64(seed))
}

prop_compose! {
    fn thermal_params(mag: f64)(
        jz in -mag..mag, r1 in 0.0..mag, r2 in 0.0..mag, b1 in -mag..mag, b2 in -mag..mag,
    ) -> XStateParams {
        XStateParams::new(jz, r1, r2, b1, b2, 1.0).unwrap()
    }
}

fn log_temperature() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #[test]
    fn x_diagonal_ordering(seed in any::<u64>()) {
        let x = dephase(&xstate(seed));
        let s = spectrum(&x);
        let m = m_eigenvalues(&x, &s);
        let w = w_eigenvalues(&x, &s);
        prop_assert!(m.mxx >= m.myy - 1e-14);
        prop_assert!(w.wxx >= w.wyy - 1e-14);
    }

    #[test]
    fn oracle_diagonals_match_closed_forms(seed in any::<u64>()) {
        let x = dephase(&xstate(seed));
        let s = spectrum(&x);
        let (m, w) = (m_eigenvalues(&x, &s), w_eigenvalues(&x, &s));
        let rho = GenericDensityMatrix::from_xmatrix(&x).unwrap();
        let (om, ow) = (oracle_m_matrix(&rho), oracle_w_matrix(&rho));
        for (i, (a, b)) in [(m.mxx, m.myy), (m.myy, m.mzz)].iter().enumerate() {
            prop_assert!((om[i][i] - a).abs() < 1e-10);
            prop_assert!((om[i + 1][i + 1] - b).abs() < 1e-10);
        }
        for (k, v) in [w.wxx, w.wyy, w.wzz].iter().enumerate() {
            prop_assert!((ow[k][k] - v).abs() < 1e-9);
        }
    }

    #[test]
    fn measures_are_bounded_and_ordered(seed in any::<u64>()) {
        let x = dephase(&xstate(seed));
        let (f, u) = (lqfi_x(&x).value, lqu_x(&x).value);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&u));
        prop_assert!(u <= f + 1e-12, "U = {u} > F = {f}");
    }

    #[test]
    fn simplified_forms_match_raw(seed in any::<u64>()) {
        let x = dephase(&xstate(seed));
        let s = spectrum(&x);
        if s.eigenvalues().iter().any(|&p| p < 1e-6) {
            return Ok(());
        }
        let (m, mr) = (m_eigenvalues(&x, &s), m_eigenvalues_raw(&x, &s));
        prop_assert!((m.mxx - mr.mxx).abs() < 1e-10 && (m.myy - mr.myy).abs() < 1e-10 && (m.mzz - mr.mzz).abs() < 1e-10);
        let w = w_eigenvalues_simplified(&x, &s).unwrap();
        let wr = w_eigenvalues_raw(&x, &s);
        prop_assert!((w.wxx - wr.wxx).abs() < 1e-10 && (w.wyy - wr.wyy).abs() < 1e-10 && (w.wzz - wr.wzz).abs() < 1e-10);
    }

    #[test]
    fn thermal_forms_match_pipeline(p in thermal_params(5.0), t in log_temperature()) {
        let p = p.with_t(t);
        let x = dephase(&p.gibbs_xstate().unwrap());
        let (ft, ut) = thermal_correlations(&p).unwrap();
        let (fx, ux) = (lqfi_x(&x), lqu_x(&x));
        prop_assert!((ft.branch0 - fx.branch0).abs() < 1e-10);
        prop_assert!((ft.branch1 - fx.branch1).abs() < 1e-10);
        // Square roots of near-zero eigenvalues amplify the rounding of the
        // stored matrix entries, so the matrix route can only resolve LQU to
        // ~sqrt(eps) once the state is numerically pure.
        let lowest = spectrum(&x).eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        let tol = if lowest >= 1e-12 { 1e-10 } else { 1e-7 };
        prop_assert!((ut.branch0 - ux.branch0).abs() < tol, "U0 {} vs {}", ut.branch0, ux.branch0);
        prop_assert!((ut.branch1 - ux.branch1).abs() < tol, "U1 {} vs {}", ut.branch1, ux.branch1);
    }

    #[test]
    fn gibbs_state_matches_full_diagonalization(
        jx in -3.0f64..3.0, jy in -3.0f64..3.0, jz in -3.0f64..3.0, dz in -3.0f64..3.0,
        gz in -3.0f64..3.0, b1 in -3.0f64..3.0, b2 in -3.0f64..3.0, t in 0.05f64..20.0,
    ) {
        let h = HamiltonianParams { jx, jy, jz, dz, gz, b1, b2 };
        let closed = h.radii();
        let x = xmodel::gibbs_xstate(&h, t).unwrap().to_dense();
        let brute = oracle::gibbs_by_diagonalization(&h, t).unwrap();
        prop_assert!(linalg::max_abs_diff(&x, &brute) < 1e-12);
        // And the measures agree with the brute-force oracle on the full state.
        let rho = GenericDensityMatrix::new(brute).unwrap();
        let reduced = h.reduce(t).unwrap();
        let (f, u) = thermal_correlations(&reduced).unwrap();
        prop_assert!((f.value - oracle_measure(&rho, Measure::Lqfi)).abs() < 1e-9);
        // Same sqrt(eps) floor as above for numerically pure states.
        let lowest = linalg::hermitian_eigen(rho.matrix()).values[0];
        let tol = if lowest >= 1e-12 { 1e-9 } else { 1e-7 };
        prop_assert!((u.value - oracle_measure(&rho, Measure::Lqu)).abs() < tol);
        prop_assert!(closed.big_r1 >= 0.0 && closed.big_r2 >= 0.0);
    }

    #[test]
    fn field_swap_symmetry(p in thermal_params(4.0), t in log_temperature()) {
        let p = p.with_t(t);
        let q = XStateParams { b1: p.b2, b2: p.b1, ..p };
        let (f, u) = thermal_correlations(&p).unwrap();
        let (fs, us) = thermal_correlations(&q).unwrap();
        prop_assert!((f.branch0 - fs.branch0).abs() < 1e-12);
        prop_assert!((u.branch0 - us.branch0).abs() < 1e-12);
        // With B2 = -B1 the swap only flips signs inside the squares.
        let sym = XStateParams { b2: -p.b1, ..p };
        let sym_swapped = XStateParams { b1: sym.b2, b2: sym.b1, ..sym };
        let (f, u) = thermal_correlations(&sym).unwrap();
        let (fs, us) = thermal_correlations(&sym_swapped).unwrap();
        prop_assert!((f.branch1 - fs.branch1).abs() < 1e-12);
        prop_assert!((u.branch1 - us.branch1).abs() < 1e-12);
    }

    #[test]
    fn cubic_and_jacobi_agree(a in proptest::array::uniform6(-2.0f64..2.0)) {
        let k = [[a[0], a[1], a[2]], [a[1], a[3], a[4]], [a[2], a[4], a[5]]];
        let c = sym3_lambda_max_cubic(&k);
        let j = sym3_lambda_max_jacobi(&k);
        prop_assert!((c - j).abs() < 1e-12, "{c} vs {j}");
    }

    #[test]
    fn phase_rotations_leave_measures_invariant(seed in any::<u64>(), alpha in -3.2f64..3.2, beta in -3.2f64..3.2) {
        let x = xstate(seed);
        let rho = GenericDensityMatrix::from_xmatrix(&x).unwrap();
        let rotated = GenericDensityMatrix::new(conjugate(&local_phase_unitary(alpha, beta), rho.matrix())).unwrap();
        for m in [Measure::Lqfi, Measure::Lqu] {
            prop_assert!((oracle_measure(&rho, m) - oracle_measure(&rotated, m)).abs() < 1e-10);
        }
    }

    #[test]
    fn high_temperature_series_error_bound(p in thermal_params(5.0), t in 50.0f64..1000.0) {
        let p = p.with_t(t);
        let r = p.radii();
        let scale = 1f64.max(p.jz.abs()).max(r.big_r1).max(r.big_r2);
        let (f, u) = thermal_correlations(&p).unwrap();
        for (b, exact) in Branch::ALL.into_iter().zip([f.branch0, f.branch1, u.branch0, u.branch1]) {
            let s = high_t_series(&p, b).unwrap();
            let bound = 10.0 * (scale / t).powi(s.order as i32 + 1);
            prop_assert!((s.value - exact).abs() <= bound, "{b}: residual {} > {bound}", (s.value - exact).abs());
        }
    }

    #[test]
    fn correlations_decay_as_inverse_square(p in thermal_params(2.0)) {
        // Coefficients of 1/T² in the two LQFI branches.
        let lead0 = (p.r1 * p.r1 + p.r2 * p.r2) / 2.0;
        let lead1 = (4.0 * p.b1 * p.b1 + 4.0 * p.jz * p.jz + (p.r1 - p.r2).powi(2)) / 4.0;
        prop_assume!(lead0.min(lead1) > 0.1);
        for measure in [Measure::Lqfi, Measure::Lqu] {
            let scaled = |t: f64| {
                let (f, u) = thermal_correlations(&p.with_t(t)).unwrap();
                t * t * if measure == Measure::Lqfi { f.value } else { u.value }
            };
            let (a, b) = (scaled(100.0), scaled(1000.0));
            prop_assert!(((a - b) / b).abs() < 0.05, "{measure}: {a} vs {b}");
        }
    }

    #[test]
    fn zero_temperature_limits_are_reached(p in thermal_params(5.0)) {
        let r = p.radii();
        prop_assume!((r.big_r1 - r.big_r2 - 2.0 * p.jz).abs() > 0.05);
        let cold = p.with_t(1e-3);
        let (f, u) = thermal_correlations(&cold).unwrap();
        for (b, exact) in [(Branch::F0, f.branch0), (Branch::U0, u.branch0), (Branch::U1, u.branch1)] {
            let lim = zero_t_limit(&cold, b).unwrap().value().unwrap();
            prop_assert!((lim - exact).abs() < 1e-3, "{b}: {lim} vs {exact}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grid_minimum_never_undershoots(seed in any::<u64>()) {
        let rho = GenericDensityMatrix::from_xmatrix(&xstate(seed)).unwrap();
        for m in [Measure::Lqfi, Measure::Lqu] {
            let exact = oracle_measure(&rho, m);
            let found = minimize_over_observables(&rho, m);
            prop_assert!(found.grid_value >= exact - 1e-6);
            prop_assert!((found.value - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn transitions_are_sharp_and_flip_labels(p in thermal_params(4.0)) {
        let spec = SweepSpec::new(p, SweepVariable::T, 0.05, 5.0, 400).unwrap();
        for tp in find_transitions(&spec).unwrap() {
            prop_assert!(tp.residual < 1e-10);
            prop_assert!(tp.bracket.1 - tp.bracket.0 < 1e-8);
            let label = |t: f64| {
                let (f, u) = thermal_correlations(&p.with_t(t)).unwrap();
                if tp.measure == Measure::Lqfi { f.active } else { u.active }
            };
            let h = 1e-6 * tp.location;
            let (left, right) = (label(tp.location - h), label(tp.location + h));
            if left != ActiveBranch::Boundary && right != ActiveBranch::Boundary {
                prop_assert_ne!(left, right);
            }
        }
    }

    #[test]
    fn grid_doubling_keeps_transitions(p in thermal_params(4.0)) {
        let spec = SweepSpec::new(p, SweepVariable::T, 0.05, 5.0, 500).unwrap();
        let a = find_transitions(&spec).unwrap();
        let b = find_transitions(&spec.with_points(1000)).unwrap();
        // Pairs of crossings closer than the coarse spacing may be missed by
        // the coarse grid; compare only when both grids see the same set.
        if a.len() == b.len() {
            for (x, y) in a.iter().zip(&b) {
                prop_assert_eq!(x.measure, y.measure);
                prop_assert!((x.location - y.location).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn zero_field_has_no_temperature_transitions(jz in -2.0f64..2.0, r1 in 0.0f64..4.0, r2 in 0.0f64..4.0) {
        prop_assume!((r1 + r2 - 2.0 * jz.abs()).abs() > 0.05);
        let p = XStateParams::new(jz, r1, r2, 0.0, 0.0, 1.0).unwrap();
        let spec = SweepSpec::new(p, SweepVariable::T, 0.05, 50.0, 400).unwrap();
        prop_assert!(find_transitions(&spec).unwrap().is_empty());
    }

    #[test]
    fn sweep_rows_take_exact_minimum(p in thermal_params(4.0)) {
        let spec = SweepSpec::new(p, SweepVariable::B1, -3.0, 3.0, 50).unwrap();
        for r in sweep(&spec).unwrap() {
            prop_assert_eq!(r.lqfi.value, r.lqfi.branch0.min(r.lqfi.branch1));
            prop_assert_eq!(r.lqu.value, r.lqu.branch0.min(r.lqu.branch1));
        }
    }
}

#[test]
fn single_precision_instantiation() {
    let p = xmodel::XStateParams::<f32>::new(-1.0, 0.5, 1.0, -0.4, 0.7, 0.05).unwrap();
    let (f, u) = thermal_correlations(&p).unwrap();
    assert!((f.value - 0.735294).abs() < 1e-3);
    assert!(u.value <= f.value + 1e-5);
    let x = xmodel::dephase(&p.gibbs_xstate().unwrap());
    assert!((lqfi_x(&x).value - f.value).abs() < 1e-4);
}
