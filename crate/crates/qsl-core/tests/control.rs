use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use proptest::prelude::*;
use qsl_core::control::{
    bhattacharyya_qsl, empirical_threshold, hegerfeldt_tmin, lz_excited_tmin, lz_transfer_problem, nonlinear_tmin,
    optimize_control, threshold_scan, ControlProblem,
};
use qsl_core::linalg::pauli;
use qsl_core::models::lz_ground_state;
use qsl_core::{ControlledHamiltonian, Error, HermitianOperator, Ket, UnitSystem};

const U: UnitSystem = UnitSystem::NATURAL;

fn qubit_problem(samples: usize, duration: f64) -> ControlProblem {
    let h = ControlledHamiltonian::new(
        HermitianOperator::new(pauli::x()).unwrap(),
        vec![HermitianOperator::new(pauli::z()).unwrap()],
        vec![vec![0.0; samples]],
    )
    .unwrap();
    let target = Ket::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
    ControlProblem::new(h, Ket::basis(2, 0).unwrap(), target, duration).unwrap()
}

#[test]
fn target_equal_to_initial_converges_immediately() {
    let h = ControlledHamiltonian::new(
        HermitianOperator::zeros(2),
        vec![HermitianOperator::new(pauli::z()).unwrap()],
        vec![vec![0.0; 20]],
    )
    .unwrap();
    let e0 = Ket::basis(2, 0).unwrap();
    let p = ControlProblem::new(h, e0.clone(), e0, 1.0).unwrap();
    let r = optimize_control(&p).unwrap();
    assert_eq!(r.iterations_used, 0);
    assert!(r.converged);
    assert!((r.final_fidelity - 1.0).abs() < 1e-12);
}

#[test]
fn lz_above_the_limit_converges() {
    let p = lz_transfer_problem(1.0, 500.0, 4000, 2.0).unwrap();
    let r = optimize_control(&p).unwrap();
    assert!(r.converged, "F = {}", r.final_fidelity);
    assert!(r.final_fidelity >= 0.99);
    assert!(r.fidelity_trace.windows(2).all(|w| w[1] >= w[0] - 1e-10));
}

#[test]
fn optimization_is_deterministic() {
    let p = qubit_problem(50, 0.8).with_seed(7).with_budget(200, 2).unwrap().with_goal(0.999999).unwrap();
    let a = optimize_control(&p).unwrap();
    let b = optimize_control(&p).unwrap();
    assert_eq!(a, b);
}

#[test]
fn bounds_are_respected() {
    let p = qubit_problem(40, 0.5).with_bounds(vec![(-0.3, 0.2)]).unwrap().with_budget(300, 2).unwrap();
    let r = optimize_control(&p).unwrap();
    assert!(r.optimized_signals[0].iter().all(|u| (-0.3..=0.2).contains(u)));
    assert!(qubit_problem(40, 0.5).with_bounds(vec![(1.0, 0.0)]).is_err());
    assert!(qubit_problem(40, 0.5).with_bounds(vec![(0.0, 1.0), (0.0, 1.0)]).is_err());
}

#[test]
fn qutrit_transfer_uses_general_propagation() {
    let drift = HermitianOperator::from_real_diag(&[0.0, 1.0, 2.5]);
    let mut x = qsl_core::ComplexMatrix::zeros(3, 3);
    for (i, j) in [(0, 1), (1, 2)] {
        x[(i, j)] = Complex64::new(1.0, 0.0);
        x[(j, i)] = Complex64::new(1.0, 0.0);
    }
    let h = ControlledHamiltonian::new(drift, vec![HermitianOperator::new(x).unwrap()], vec![vec![0.0; 30]]).unwrap();
    let p = ControlProblem::new(h, Ket::basis(3, 0).unwrap(), Ket::basis(3, 2).unwrap(), 4.0)
        .unwrap()
        .with_budget(400, 3)
        .unwrap();
    let r = optimize_control(&p).unwrap();
    assert!(r.converged, "F = {}", r.final_fidelity);
}

#[test]
fn invalid_problems_are_rejected() {
    let p = qubit_problem(10, 1.0);
    assert!(p.clone().with_duration(0.0).is_err());
    assert!(p.clone().with_goal(1.5).is_err());
    assert!(p.clone().with_budget(10, 0).is_err());
    let bare = ControlledHamiltonian::constant(HermitianOperator::new(pauli::x()).unwrap());
    assert!(ControlProblem::new(bare, Ket::basis(2, 0).unwrap(), Ket::basis(2, 1).unwrap(), 1.0).is_err());
    assert!(threshold_scan(&p, &[1.0]).is_err());
    assert!(threshold_scan(&p, &[1.0, 0.5]).is_err());
}

#[test]
fn nonlinear_problem_rejects_sigma_y() {
    let h = ControlledHamiltonian::new(
        HermitianOperator::new(pauli::x()).unwrap(),
        vec![HermitianOperator::new(pauli::y()).unwrap()],
        vec![vec![0.0; 10]],
    )
    .unwrap();
    let p = ControlProblem::new(h, Ket::basis(2, 0).unwrap(), Ket::basis(2, 1).unwrap(), 1.0)
        .unwrap()
        .with_nonlinear(1.0, 10)
        .unwrap();
    assert!(matches!(optimize_control(&p), Err(Error::InvalidInput(_))));
}

#[test]
fn long_durations_all_converge() {
    let p = qubit_problem(40, 1.0).with_budget(300, 2).unwrap();
    let scan = threshold_scan(&p, &[3.0, 4.0, 5.0]).unwrap();
    assert!(scan.iter().all(|s| s.converged));
    assert_eq!(empirical_threshold(&scan), Some(3.0));
}

#[test]
fn hegerfeldt_examples() {
    let e0 = Ket::basis(2, 0).unwrap();
    let e1 = Ket::basis(2, 1).unwrap();
    assert!((hegerfeldt_tmin(&e0, &e1, 2.0).unwrap() - PI / 4.0).abs() < 1e-15);
    let psi = Ket::from_real(&[0.6, 0.8]).unwrap();
    assert!(hegerfeldt_tmin(&psi, &psi, 1.0).unwrap().abs() < 1e-7);
    assert!(hegerfeldt_tmin(&e0, &e1, 0.0).is_err());
    let a = lz_ground_state(1.0, -500.0).unwrap();
    let b = lz_ground_state(1.0, 500.0).unwrap();
    let i = a.amplitudes();
    let f = b.amplitudes();
    let s = f[0].norm() * i[0].norm() + f[1].norm() * i[1].norm();
    assert!((hegerfeldt_tmin(&a, &b, 1.0).unwrap() - s.acos()).abs() < 1e-15);
}

proptest! {
    #[test]
    fn hegerfeldt_symmetry_and_phase_invariance(
        a in prop::collection::vec(-1.0f64..1.0, 4),
        b in prop::collection::vec(-1.0f64..1.0, 4),
        phase in 0.0..(2.0 * PI),
    ) {
        prop_assume!(a.iter().any(|x| x.abs() > 0.1) && b.iter().any(|x| x.abs() > 0.1));
        let ka = Ket::new(vec![Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3])]).unwrap();
        let kb = Ket::new(vec![Complex64::new(b[0], b[1]), Complex64::new(b[2], b[3])]).unwrap();
        let rot = Ket::new(kb.amplitudes().iter().map(|z| z * Complex64::from_polar(1.0, phase)).collect()).unwrap();
        let t = hegerfeldt_tmin(&ka, &kb, 1.3).unwrap();
        prop_assert!((t - hegerfeldt_tmin(&kb, &ka, 1.3).unwrap()).abs() < 1e-12);
        prop_assert!((t - hegerfeldt_tmin(&ka, &rot, 1.3).unwrap()).abs() < 1e-12);
        prop_assert!(t >= 0.0 && t <= FRAC_PI_2 / 1.3 + 1e-12);
    }

    #[test]
    fn monotone_fidelity_trace(seed in 0u64..1000, duration in 0.3f64..2.0) {
        let p = qubit_problem(30, duration).with_seed(seed).with_budget(60, 1).unwrap().with_goal(1.0).unwrap();
        let r = optimize_control(&p).unwrap();
        prop_assert!(r.fidelity_trace.windows(2).all(|w| w[1] >= w[0] - 1e-10));
        prop_assert!((0.0..=1.0).contains(&r.final_fidelity));
    }
}

#[test]
fn excited_state_minimal_time() {
    let (t, naive) = lz_excited_tmin(0.0, 1.0).unwrap();
    assert!((t - 1.0).abs() < 1e-15 && t < naive);
    let (t, naive) = lz_excited_tmin(2.0, 1.0).unwrap();
    assert!((t - 1.0 / 5f64.sqrt()).abs() < 1e-15);
    assert!((t - 0.4472).abs() < 1e-4 && t < naive);
    assert!(lz_excited_tmin(1e9, 1.0).unwrap().0 < 1e-8);
}

#[test]
fn nonlinear_minimal_time() {
    assert_eq!(nonlinear_tmin(0.4, 0.4, 1.0).unwrap(), 0.0);
    assert!((nonlinear_tmin(0.0, PI, 2.0).unwrap() - PI / 4.0).abs() < 1e-15);
    assert!((nonlinear_tmin(0.0, FRAC_PI_2, 1.0).unwrap() - FRAC_PI_4).abs() < 1e-15);
    assert!(nonlinear_tmin(0.0, 1.0, 0.0).is_err());
}

#[test]
fn caneva_bound_for_lz_endpoints() {
    let a = lz_ground_state(1.0, -500.0).unwrap();
    let b = lz_ground_state(1.0, 500.0).unwrap();
    let transverse = HermitianOperator::new(pauli::x()).unwrap();
    let r = bhattacharyya_qsl(&a, &b, &transverse, &U).unwrap();
    assert!((r.overlap - 0.002).abs() < 1e-3);
    assert!((r.tau_qsl - 1.56881).abs() < 1e-3, "{}", r.tau_qsl);
    // The endpoint state is an eigenstate of the full H(0): ΔH = 0 there.
    let full = HermitianOperator::new(&pauli::x() + &pauli::z().scale_real(-500.0)).unwrap();
    assert!(bhattacharyya_qsl(&a, &b, &full, &U).unwrap().tau_qsl > 1e6);
}
