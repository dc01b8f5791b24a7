mod common;

use common::c;
use qsl_core::operator::{energy_moments, fidelity};
use qsl_core::{ComplexMatrix, DensityMatrix, HermitianOperator, Ket};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn energy_moments_match_spectral_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let energies = [-1.3, 0.2, 0.9, 2.4];
    let h = HermitianOperator::from_real_diag(&energies);
    for _ in 0..20 {
        let amps: Vec<_> = (0..4).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let k = Ket::new(amps).unwrap();
        let p: Vec<f64> = k.amplitudes().iter().map(|a| a.norm_sqr()).collect();
        let m1: f64 = p.iter().zip(energies).map(|(p, e)| p * e).sum();
        let m2: f64 = p.iter().zip(energies).map(|(p, e)| p * e * e).sum();
        let m = energy_moments(&h, &k).unwrap();
        assert!((m.mean - m1).abs() < 1e-12);
        assert!((m.std_dev - (m2 - m1 * m1).sqrt()).abs() < 1e-12);
        assert_eq!(m.ground_energy, -1.3);
        let rho = k.to_density();
        let mr = energy_moments(&h, &rho).unwrap();
        assert!((mr.std_dev - m.std_dev).abs() < 1e-12);
    }
}

#[test]
fn fidelity_of_qubits_matches_bloch_formula() {
    // F = ½(1 + r·s + √(1−|r|²)√(1−|s|²)) for qubits
    let bloch = |r: [f64; 3]| {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.5 * (1.0 + r[2]), 0.0), c(0.5 * r[0], -0.5 * r[1])],
            vec![c(0.5 * r[0], 0.5 * r[1]), c(0.5 * (1.0 - r[2]), 0.0)],
        ])
        .unwrap();
        DensityMatrix::new(m).unwrap()
    };
    let cases = [([0.1, 0.2, 0.3], [-0.4, 0.1, 0.5]), ([0.0, 0.0, 0.0], [0.0, 0.0, 1.0]), ([0.6, 0.0, 0.0], [0.0, 0.7, 0.0])];
    for (r, s) in cases {
        let nr = r.iter().map(|x| x * x).sum::<f64>();
        let ns = s.iter().map(|x| x * x).sum::<f64>();
        let dot: f64 = r.iter().zip(s).map(|(a, b)| a * b).sum();
        let oracle = 0.5 * (1.0 + dot + ((1.0 - nr).max(0.0) * (1.0 - ns).max(0.0)).sqrt());
        let f = fidelity(&bloch(r), &bloch(s)).unwrap();
        assert!((f - oracle).abs() < 1e-12, "{f} vs {oracle}");
    }
}
