mod common;

use common::*;
use proptest::prelude::*;
use qsl_core::operator::{bures_angle, fidelity, relative_entropy, schatten_norm};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn norm_hierarchy(a in any_matrix(8)) {
        let op = schatten_norm(&a, f64::INFINITY).unwrap();
        let hs = schatten_norm(&a, 2.0).unwrap();
        let tr = schatten_norm(&a, 1.0).unwrap();
        prop_assert!(op <= hs * (1.0 + 1e-12));
        prop_assert!(hs <= tr * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn schatten_non_increasing_in_p(a in any_matrix(6)) {
        let ps = [1.0, 2.0, 4.0, f64::INFINITY];
        let vals: Vec<f64> = ps.iter().map(|&p| schatten_norm(&a, p).unwrap()).collect();
        for w in vals.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn fidelity_is_symmetric((r1, r2) in (1usize..=4).prop_flat_map(|d| (state(d), state(d)))) {
        let f12 = fidelity(&r1, &r2).unwrap();
        let f21 = fidelity(&r2, &r1).unwrap();
        prop_assert!((f12 - f21).abs() < 1e-10);
        prop_assert!((0.0..=1.0).contains(&f12));
    }

    #[test]
    fn fidelity_one_only_for_equal_states((r1, r2) in (2usize..=4).prop_flat_map(|d| (state(d), state(d)))) {
        prop_assert!((fidelity(&r1, &r1).unwrap() - 1.0).abs() < 1e-10);
        let f = fidelity(&r1, &r2).unwrap();
        if r1.matrix().distance(r2.matrix()) >= 1e-8 {
            prop_assert!(f < 1.0);
        }
    }

    #[test]
    fn bures_triangle_inequality((a, b, c) in (1usize..=4).prop_flat_map(|d| (state(d), state(d), state(d)))) {
        let ab = bures_angle(&a, &b).unwrap();
        let bc = bures_angle(&b, &c).unwrap();
        let ac = bures_angle(&a, &c).unwrap();
        prop_assert!(ab + bc - ac >= -1e-9);
    }

    #[test]
    fn klein_inequality((r, s) in (1usize..=5).prop_flat_map(|d| (density(d), density(d)))) {
        prop_assert!(relative_entropy(&r, &s).unwrap() >= 0.0);
    }
}
