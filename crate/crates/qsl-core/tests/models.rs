mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::c;
use num_complex::Complex64;
use qsl_core::dynamics::{evolve_lindblad, evolve_nonhermitian, evolve_unitary, StepHamiltonian};
use qsl_core::linalg::{eigh, eigvalsh, expm, pauli, ComplexMatrix};
use qsl_core::models::*;
use qsl_core::operator::fidelity;
use qsl_core::{ControlledHamiltonian, DensityMatrix, HermitianOperator, Ket, TimeGrid, UnitSystem};

const NAT: UnitSystem = UnitSystem::NATURAL;

#[test]
fn lz_endpoint_ground_states_are_nearly_orthogonal() {
    let w = 1.0;
    let g = 500.0;
    let a = lz_ground_state(w, -g).unwrap();
    let b = lz_ground_state(w, g).unwrap();
    let f = a.overlap(&b).unwrap();
    assert!((f - 0.002).abs() < 0.001);
    assert!((f - w / (g * g + w * w).sqrt()).abs() < 1e-12);
    // eigenvector oracle
    for gamma in [-3.0, -0.2, 0.0, 0.7, 12.0] {
        let h = &pauli::x().scale_real(w) + &pauli::z().scale_real(gamma);
        let eig = eigh(&h).unwrap();
        let v = Ket::new(eig.vector(0)).unwrap();
        assert!((v.overlap(&lz_ground_state(w, gamma).unwrap()).unwrap() - 1.0).abs() < 1e-12);
    }
    let ga = 2.5;
    let ov = lz_ground_state(w, -ga).unwrap().overlap(&lz_ground_state(w, ga).unwrap()).unwrap();
    let oracle = {
        let e1 = eigh(&(&pauli::x() + &pauli::z().scale_real(-ga))).unwrap();
        let e2 = eigh(&(&pauli::x() + &pauli::z().scale_real(ga))).unwrap();
        qsl_core::linalg::ComplexMatrix::outer(&e1.vector(0), &e2.vector(0))[(0, 0)].norm()
            + qsl_core::linalg::ComplexMatrix::outer(&e1.vector(0), &e2.vector(0))[(1, 1)].norm()
    };
    assert!((ov - w / (ga * ga + w * w).sqrt()).abs() < 1e-12);
    assert!((ov - oracle).abs() < 1e-12);
}

/// RK4 on ċ = −I, İ = (γ0λ/2)c − λI (the memory integral with an exponential kernel).
fn amplitude_oracle(gamma0: f64, lambda: f64, t_end: f64, steps: usize) -> Vec<f64> {
    let h = t_end / steps as f64;
    let f = |y: [f64; 2]| [-y[1], 0.5 * gamma0 * lambda * y[0] - lambda * y[1]];
    let mut y = [1.0, 0.0];
    let mut out = vec![1.0];
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out.push(y[0]);
    }
    out
}

#[test]
fn jc_amplitude_matches_memory_kernel_integration() {
    let p = JcParams::new(1.0, 1.0, 50.0).unwrap();
    let c_oracle = amplitude_oracle(1.0, 50.0, 0.5, 50_000);
    let c = jc_amplitude(&p, 0.5).re;
    assert!((c * c - c_oracle[50_000].powi(2)).abs() < 1e-10);
    let pops: Vec<f64> = (0..=100).map(|k| jc_excited_population(&p, k as f64 * 0.005)).collect();
    assert!(pops.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn jc_strong_coupling_zeros_match_oracle() {
    let p = JcParams::new(1.0, 200.0, 50.0).unwrap();
    let steps = 200_000;
    let t_end = 0.5;
    let h = t_end / steps as f64;
    let c_oracle = amplitude_oracle(200.0, 50.0, t_end, steps);
    let mut zeros = Vec::new();
    for k in 0..steps {
        if c_oracle[k] * c_oracle[k + 1] < 0.0 {
            let frac = c_oracle[k] / (c_oracle[k] - c_oracle[k + 1]);
            zeros.push((k as f64 + frac) * h);
        }
    }
    let poles = p.pole_times(t_end);
    assert!(zeros.len() >= 2);
    assert_eq!(zeros.len(), poles.len());
    for (z, tp) in zeros.iter().zip(&poles) {
        assert!((z - tp).abs() < 1e-6, "{z} vs {tp}");
        assert!(jc_amplitude(&p, *tp).re.abs() < 1e-10);
    }
    let pops: Vec<f64> = (0..=500).map(|k| jc_excited_population(&p, k as f64 * 1e-3)).collect();
    assert!(pops.windows(2).any(|w| w[1] > w[0]));
}

#[test]
fn jc_decay_rate_matches_finite_differences() {
    for gamma0 in [1.0, 200.0] {
        let p = JcParams::new(1.0, gamma0, 50.0).unwrap();
        let poles = p.pole_times(1.0);
        let mut checked = 0;
        for k in 1..=200 {
            let t = k as f64 * 0.5 / 200.0;
            if poles.iter().any(|tp| (tp - t).abs() < 2e-3) {
                continue;
            }
            let h = 1e-6;
            let dc = (jc_amplitude(&p, t + h) - jc_amplitude(&p, t - h)) / (2.0 * h);
            let fd = -2.0 * (dc / jc_amplitude(&p, t)).re;
            let exact = jc_decay_rate(&p, t).unwrap();
            assert!((fd - exact).abs() < 1e-6 * exact.abs().max(1.0), "t={t}: {fd} vs {exact}");
            assert_eq!(jc_lamb_shift(&p, t).unwrap(), 0.0);
            checked += 1;
        }
        assert!(checked > 150);
    }
}

#[test]
fn jc_generator_population_matches_amplitude() {
    for gamma0 in [1.0, 5.0, 20.0] {
        let p = JcParams::new(1.0, gamma0, 50.0).unwrap();
        let grid = TimeGrid::span(0.5, 2000).unwrap();
        let gen = jc_generator(&p, &grid, true, &NAT).unwrap();
        let rho0 = DensityMatrix::from_real_diag(&[1.0, 0.0]).unwrap();
        let traj = evolve_lindblad(&gen, &rho0, &grid, &NAT).unwrap();
        for (k, s) in traj.states().iter().enumerate() {
            let pt = jc_excited_population(&p, grid.time(k));
            assert!((s.matrix()[(0, 0)].re - pt).abs() < 1e-6);
        }
    }
}

#[test]
fn jc_vanishing_coupling_is_unitary() {
    let p = JcParams::new(2.0, 1e-12, 50.0).unwrap();
    let grid = TimeGrid::span(1.0, 400).unwrap();
    let gen = jc_generator(&p, &grid, false, &NAT).unwrap();
    let psi = Ket::from_real(&[0.6, 0.8]).unwrap();
    let l = evolve_lindblad(&gen, &psi.to_density(), &grid, &NAT).unwrap();
    let h = ControlledHamiltonian::constant(HermitianOperator::from_real_diag(&[2.0, 0.0]));
    let u = evolve_unitary(&h, &psi, &grid, &NAT).unwrap();
    assert!(l.last().matrix().distance(u.last().matrix()) < 1e-9);
}

#[test]
fn jc_analytic_trajectory_agrees_with_integration() {
    let p = JcParams::new(3.0, 2.0, 50.0).unwrap();
    let grid = TimeGrid::span(0.5, 2000).unwrap();
    let rho0 = Ket::from_real(&[0.8, 0.6]).unwrap().to_density();
    let exact = jc_trajectory(&p, &rho0, &grid).unwrap();
    let num = evolve_lindblad(&jc_generator(&p, &grid, false, &NAT).unwrap(), &rho0, &grid, &NAT).unwrap();
    for (a, b) in exact.states().iter().zip(num.states()) {
        assert!(a.matrix().distance(b.matrix()) < 1e-7);
    }
    let ga = exact.generators().unwrap();
    let gb = num.generators().unwrap();
    for k in [10, 500, 1999] {
        assert!(ga[k].distance(&gb[k]) < 1e-6);
    }
}

fn symmetric_isometry() -> ComplexMatrix {
    // columns: probe ⊗ Dicke(m = 1, 0, −1) inside the 2 ⊗ 2 ⊗ 2 product basis (probe is the first factor)
    let s = 1.0 / 2f64.sqrt();
    let mut v = ComplexMatrix::zeros(8, 6);
    for probe in 0..2 {
        let base = probe * 4;
        v[(base, probe * 3)] = c(1.0, 0.0);
        v[(base + 1, probe * 3 + 1)] = c(s, 0.0);
        v[(base + 2, probe * 3 + 1)] = c(s, 0.0);
        v[(base + 3, probe * 3 + 2)] = c(1.0, 0.0);
    }
    v
}

#[test]
fn lmg_two_spins_match_brute_force() {
    let (lambda, gamma) = (0.7, 0.3);
    let p = LmgParams::new(2, lambda, gamma).unwrap();
    let h = lmg_probe_hamiltonian(&p).unwrap();
    let id = ComplexMatrix::identity(2);
    let on = |a: &ComplexMatrix, slot: usize| {
        let mut ops = [id.clone(), id.clone(), id.clone()];
        ops[slot] = a.clone();
        ops[0].kron(&ops[1]).kron(&ops[2])
    };
    let (x, y, z) = (pauli::x(), pauli::y(), pauli::z());
    let mut full = on(&z, 0).scale_real(-1.0);
    let bath = &(&on(&x, 1).matmul(&on(&x, 2)) + &on(&y, 1).matmul(&on(&y, 2)));
    full.axpy(c(-lambda / 2.0, 0.0), bath);
    full.axpy(c(-1.0, 0.0), &(&on(&z, 1) + &on(&z, 2)));
    for i in 1..3 {
        let coup = &on(&x, i).matmul(&on(&x, 0)) + &on(&y, i).matmul(&on(&y, 0));
        full.axpy(c(-gamma, 0.0), &coup);
    }
    let v = symmetric_isometry();
    let restricted = v.adjoint().matmul(&full).matmul(&v);
    let brute = eigvalsh(&restricted).unwrap();
    let ours = eigvalsh(h.matrix()).unwrap();
    for (a, b) in brute.iter().zip(&ours) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
    // matrix elements agree, not only spectra
    let mut ordered = ComplexMatrix::zeros(6, 6);
    for i in 0..6 {
        for j in 0..6 {
            ordered[(i, j)] = restricted[(i, j)];
        }
    }
    assert!(ordered.distance(h.matrix()) < 1e-12);
}

#[test]
fn lmg_hamiltonian_is_hermitian_and_conserves_parity() {
    let p = LmgParams::new(100, 0.8, 0.05).unwrap();
    let h = lmg_probe_hamiltonian(&p).unwrap();
    assert!(h.matrix().hermiticity_defect() < 1e-12);
    let parity: Vec<f64> = (0..p.dim())
        .map(|i| {
            let (probe, level) = (i / 101, i % 101);
            if (probe + level) % 2 == 0 { 1.0 } else { -1.0 }
        })
        .collect();
    let par = ComplexMatrix::from_real_diag(&parity);
    assert!(h.matrix().commutator(&par).frobenius_norm() < 1e-10);
}

#[test]
fn pt_solution_matches_matrix_exponential() {
    let p = PtQubitParams::new(1.0, PI / 6.0, 2.0).unwrap();
    let h = pt_qubit_hamiltonian(&p);
    let period = p.period(&NAT);
    let grid = TimeGrid::span(period, 400).unwrap();
    let num = evolve_nonhermitian(&h, &Ket::basis(2, 0).unwrap(), &grid, &NAT).unwrap();
    for (k, ket) in num.kets.iter().enumerate() {
        let t = grid.time(k);
        let exact = pt_qubit_solution(&p, t, &NAT).unwrap();
        assert!((ket.overlap(&exact).unwrap() - 1.0).abs() < 1e-8);
        let direct = expm(&h.scale(Complex64::new(0.0, -t))).unwrap().mul_vec(&[c(1.0, 0.0), c(0.0, 0.0)]);
        for (a, b) in direct.iter().zip(exact.raw()) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}

#[test]
fn pt_solution_solves_schrodinger_equation() {
    let p = PtQubitParams::new(1.0, PI / 6.0, 2.0).unwrap();
    let h = pt_qubit_hamiltonian(&p);
    let dt = 1e-5;
    for k in 0..50 {
        let t = 0.05 + k as f64 * 0.07;
        let a = pt_qubit_solution(&p, t + dt, &NAT).unwrap().raw();
        let b = pt_qubit_solution(&p, t - dt, &NAT).unwrap().raw();
        let psi = pt_qubit_solution(&p, t, &NAT).unwrap().raw();
        let hpsi = h.mul_vec(&psi);
        let res: f64 = (0..2)
            .map(|i| (c(0.0, 1.0) * (a[i] - b[i]) / (2.0 * dt) - hpsi[i]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(res < 1e-8, "{res}");
    }
}

fn lz_sweep(tau: f64, steps: usize) -> (ControlledHamiltonian, TimeGrid) {
    let grid = TimeGrid::span(tau, steps).unwrap();
    let h = landau_zener(1.0, linear_sweep(-4.0, 4.0, steps), &grid).unwrap();
    (h, grid)
}

#[test]
fn lz_counterdiabatic_term_closed_form() {
    let (h0, grid) = lz_sweep(2.0, 400);
    let gdot = 8.0 / 2.0;
    for node in [1, 100, 200, 333, 399] {
        let h1 = counterdiabatic_term(&h0, &grid, node, &NAT).unwrap();
        let g = h0.node(node).matrix()[(0, 0)].re;
        let expected = pauli::y().scale_real(-0.5 * gdot / (1.0 + g * g));
        assert!(h1.matrix().distance(&expected) < 1e-10, "node {node}");
        // finite differences of the instantaneous ground state (phase fixed by real amplitudes)
        let eps = 1e-6;
        let gs = |gamma: f64| lz_ground_state(1.0, gamma).unwrap().amplitudes().to_vec();
        let (mut p, m) = (gs(g + eps * gdot), gs(g - eps * gdot));
        if (p[0] * m[0].conj() + p[1] * m[1].conj()).re < 0.0 {
            p.iter_mut().for_each(|z| *z = -*z);
        }
        let dn: Vec<Complex64> = p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * eps)).collect();
        let dn_norm = dn.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tr = qsl_core::operator::schatten_norm(h1.matrix(), 1.0).unwrap();
        assert!((tr - 2.0 * dn_norm).abs() < 1e-8, "{tr} vs {}", 2.0 * dn_norm);
    }
}

#[test]
fn counterdiabatic_driving_tracks_instantaneous_eigenstate() {
    let (h0, grid) = lz_sweep(0.3, 4000);
    let protocol = counterdiabatic_protocol(&h0, &grid, &NAT).unwrap();
    let start = lz_ground_state(1.0, h0.node(0).matrix()[(0, 0)].re).unwrap();
    let traj = evolve_unitary(&protocol, &start, &grid, &NAT).unwrap();
    let mut worst: f64 = 1.0;
    for (k, s) in traj.states().iter().enumerate() {
        let g = h0.node(k).matrix()[(0, 0)].re;
        let target = lz_ground_state(1.0, g).unwrap().to_density();
        worst = worst.min(fidelity(s, &target).unwrap());
    }
    assert!(worst > 1.0 - 1e-6, "{worst}");
    // a bare sweep this fast is strongly diabatic
    let bare = evolve_unitary(&h0, &start, &grid, &NAT).unwrap();
    let target = lz_ground_state(1.0, h0.node(4000).matrix()[(0, 0)].re).unwrap().to_density();
    assert!(fidelity(bare.last(), &target).unwrap() < 0.9);
    assert_eq!(protocol.sample_count(), Some(4000));
}

#[test]
fn dirac_speeds() {
    let units = NAT;
    let (m, e, c_light) = (1.0, 1.0, 1.0);
    let probe = DiracLandauParams::new(1.0, m, e, c_light).unwrap();
    let b_star = probe.critical_field(&units);
    assert!((b_star - 2.0 * PI).abs() < 1e-12);
    for (factor, exceeds) in [(0.9, false), (1.1, true)] {
        let p = DiracLandauParams::new(b_star * factor, m, e, c_light).unwrap();
        assert_eq!(dirac_landau_report(&p, &units).v_s_exceeds_c, exceeds);
    }
    let limit = (1.0 + 2f64.sqrt()) / (4.0 * (2.0 * PI).sqrt());
    assert!((limit - 0.24082).abs() < 1e-4);
    for b in [1e6, 1e7, 1e8, 1e9] {
        let p = DiracLandauParams::new(b, m, e, c_light).unwrap();
        assert!(p.field_strength(&units) >= 1e6);
        let r = dirac_landau_report(&p, &units);
        assert!((r.v_d / c_light - 0.24082).abs() < 1e-4);
        assert!(r.v_d < c_light);
    }
    // non-relativistic limit
    let p = DiracLandauParams::new(1.0, 1.0, 1.0, 1e3).unwrap();
    assert!(p.field_strength(&units) < 1e-4);
    let r = dirac_landau_report(&p, &units);
    assert!(((r.tau_d - r.tau_s) / r.tau_s).abs() < 0.01);
    let _ = FRAC_PI_2;
}
