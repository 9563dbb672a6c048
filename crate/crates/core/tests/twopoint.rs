#![allow(clippy::needless_range_loop)]

use moyal_phi4::model::{i_func_limit, Coupling};
use moyal_phi4::twopoint::*;
use proptest::prelude::*;
use std::f64::consts::PI;

const AXIS: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0];

#[test]
fn grid_symmetry_and_normalisation() {
    let cfg = TwoPointConfig::default();
    for lambda in [-0.3, 0.1, 0.25] {
        let c = Coupling::ribbon(lambda).unwrap();
        let g = g_grid(&c, &AXIS, &AXIS, &cfg).unwrap();
        assert!((g[0][0] - 1.0).abs() < 1e-8);
        for i in 0..AXIS.len() {
            for k in 0..AXIS.len() {
                assert!((g[i][k] - g[k][i]).abs() < 1e-6);
                assert!(g[i][k] > 0.0);
            }
        }
    }
}

#[test]
fn free_theory_limit() {
    let c = Coupling::ribbon(0.0).unwrap();
    let g = g_grid(&c, &AXIS, &AXIS, &TwoPointConfig::default()).unwrap();
    for (i, x) in AXIS.iter().enumerate() {
        for (k, y) in AXIS.iter().enumerate() {
            assert!((g[i][k] - 1.0 / (1.0 + x + y)).abs() < 1e-8);
        }
    }
}

#[test]
fn reference_values_weak_coupling() {
    // high-precision quadrature of the same integral
    let c = Coupling::ribbon(0.1).unwrap();
    let cfg = TwoPointConfig::default();
    assert!((n_value(&c, 1.0, 2.0, &cfg).unwrap() + 0.0373968374).abs() < 1e-9);
    assert!((g_value(&c, 0.0, 3.0, &cfg).unwrap() - 0.2195350130).abs() < 1e-9);
    assert!((g_value(&c, 1.0, 1.0, &cfg).unwrap() - 0.3068020121).abs() < 1e-9);
    let g12 = g_value(&c, 1.0, 2.0, &cfg).unwrap();
    assert!((g12 - g_value(&c, 2.0, 1.0, &cfg).unwrap()).abs() < 1e-7);
    assert!(0.0 < g12 && g12 < 1.0);
}

#[test]
fn vanishing_cases() {
    let cfg = TwoPointConfig::default();
    assert_eq!(n_value(&Coupling::ribbon(0.2).unwrap(), 0.0, 0.0, &cfg).unwrap(), 0.0);
    assert_eq!(n_value(&Coupling::ribbon(0.0).unwrap(), 2.0, 3.0, &cfg).unwrap(), 0.0);
}

#[test]
fn first_order_expansion() {
    let lambda = 1e-4;
    let c = Coupling::ribbon(lambda).unwrap();
    let cfg = TwoPointConfig::default();
    for (x, y) in [(1.0, 2.0), (0.5, 5.0), (10.0, 0.0)] {
        let g = g_value(&c, x, y, &cfg).unwrap();
        let coeff = (g * (1.0 + x + y) - 1.0) / lambda;
        let expected = g_first_order(x, y);
        assert!((coeff / expected - 1.0).abs() < 0.05, "({x},{y}): {coeff} vs {expected}");
    }
}

#[test]
fn angle_at_weak_coupling() {
    let lambda = 1e-4;
    let c = Coupling::ribbon(lambda).unwrap();
    let cfg = TwoPointConfig::default();
    let t = tau(&c, 0.0, 1.0, &cfg).unwrap();
    assert!((t / (lambda * PI / 2.0) - 1.0).abs() < 1e-2);
}

#[test]
fn imaginary_part_of_boundary_value() {
    let c = Coupling::ribbon(0.1).unwrap();
    let (v, _) = i_func_limit(&c, 2.0, &TwoPointConfig::default().eps_seq).unwrap();
    assert!((v.im / (0.1 * PI * 2.0) - 1.0).abs() < 1e-6);
}

#[test]
fn angle_vanishes_at_small_momentum() {
    let c = Coupling::ribbon(0.1).unwrap();
    let cfg = TwoPointConfig::default();
    let taus: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&p| tau(&c, 0.0, p, &cfg).unwrap()).collect();
    assert!(taus.windows(2).all(|w| 0.0 < w[1] && w[1] < w[0]));
    assert!(taus[2] < 1e-4);
}

#[test]
fn rejects_bad_input() {
    let cfg = TwoPointConfig::default();
    assert!(n_value(&Coupling::ribbon(0.1).unwrap(), -1.0, 0.0, &cfg).is_err());
    assert!(n_value(&Coupling::ribbon(0.5).unwrap(), 1.0, 1.0, &cfg).is_err());
    assert!(tau(&Coupling::ribbon(0.0).unwrap(), 0.0, 1.0, &cfg).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]
    #[test]
    fn integrand_is_even(t in 0.01f64..50.0, x in 0.0f64..10.0, y in 0.0f64..10.0) {
        let c = Coupling::ribbon(0.2).unwrap();
        let a = n_integrand(&c, t, x, y).unwrap();
        let b = n_integrand(&c, -t, x, y).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }
}
