use moyal_phi4::model::LAMBDA_CRITICAL;
use moyal_phi4::operator::*;
use std::f64::consts::PI;

fn top(mu: f64, n: usize) -> f64 {
    top_eigenvalue(&build_kernel(mu, &operator_grid(n)).unwrap()).unwrap()
}

#[test]
fn massless_entries() {
    let g = operator_grid(50);
    let k = build_kernel(0.0, &g).unwrap();
    for i in 0..50 {
        for j in 0..50 {
            let raw = k.entries[(i, j)] / (g.weights[i] * g.weights[j]).sqrt();
            assert!((raw * (g.nodes[i] + g.nodes[j]) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn positivity_symmetry_and_monotonicity_in_mu() {
    let g = operator_grid(100);
    let k0 = build_kernel(0.0, &g).unwrap();
    let k1 = build_kernel(1.0, &g).unwrap();
    assert!(k1.asymmetry() <= 1e-14);
    for i in 0..100 {
        assert!(k1.entries[(i, i)] > 0.0);
        for j in 0..100 {
            assert!(k1.entries[(i, j)] >= 0.0);
            assert!(k1.entries[(i, j)] <= k0.entries[(i, j)]);
        }
    }
}

#[test]
fn top_eigenvalue_approaches_pi_from_below() {
    let t: Vec<f64> = [100, 200, 400].iter().map(|&n| top(0.0, n)).collect();
    println!("{t:?}");
    assert!(t[0] <= t[1] && t[1] <= t[2]);
    assert!(t[2] >= PI - 0.05 && t[2] <= PI);
    assert!(top(1.0, 400) <= t[2] + 1e-12);
}

#[test]
fn spectrum_inside_the_interval() {
    for mu in [0.0, 0.5, 1.0] {
        let ev = all_eigenvalues(&build_kernel(mu, &operator_grid(400)).unwrap());
        assert!(ev[0] >= -1e-8, "mu={mu}: {}", ev[0]);
        assert!(*ev.last().unwrap() <= PI + 0.01);
    }
}

#[test]
fn top_eigenvalue_independent_of_mu() {
    let t: Vec<f64> = [0.5, 1.0, 2.0].iter().map(|&mu| top(mu, 800)).collect();
    println!("{t:?}");
    let spread = t.iter().cloned().fold(f64::MIN, f64::max) - t.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 1e-3);
}

#[test]
fn threshold_matches_the_norm() {
    let t = top(1.0, 400);
    assert!(1.0 + (LAMBDA_CRITICAL + 0.01) * t > 0.0);
    assert!(1.0 + (LAMBDA_CRITICAL - 0.01) * t < 0.0);
}

#[test]
fn cosh_integral() {
    assert!((cosh_norm_check(50.0).unwrap() - PI).abs() < 1e-10);
    assert!((cosh_norm_check(100.0).unwrap() - PI).abs() < 1e-12);
    let half = cosh_half_integral(100.0).unwrap();
    assert!((2.0 * half - cosh_norm_check(100.0).unwrap()).abs() < 1e-12);
}
