use moyal_phi4::model::Coupling;
use moyal_phi4::perturb::*;
use moyal_phi4::specfun::{polylog, ZETA2};
use proptest::prelude::*;

#[test]
fn mu2_remainder_is_the_next_order() {
    // the truncation error of the order-10 sum is dominated by the λ¹¹ term
    for lambda in [0.03f64, 0.05] {
        let d = mu2_closed(lambda) - mu2_series(lambda, 10).unwrap();
        let lead = mu2_coefficient(11) * lambda.powi(11);
        assert!((d / lead - 1.0).abs() < 0.15, "lambda={lambda}: {d} vs {lead}");
    }
}

#[test]
fn mu2_closed_is_the_ribbon_normalisation() {
    for lambda in [-0.3, -0.05, 0.05, 0.2, 0.31] {
        let c = Coupling::ribbon(lambda).unwrap();
        assert!((mu2_closed(lambda) - c.mu2).abs() < 1e-14);
    }
}

#[test]
fn partial_sums_match_closed_forms() {
    let alpha: f64 = 0.2;
    let (f, g) = f_g_partial(1.0, alpha, 5).unwrap();
    assert!((f - f_closed(1.0, alpha).unwrap()).abs() < alpha.powi(10) * 10.0);
    assert!((g - g_closed(1.0, alpha).unwrap()).abs() < alpha.powi(10) * 10.0);
}

#[test]
fn suffix_sweep_matches_termwise_series() {
    let (f, g) = f_g_partial(2.5, 0.3, 4).unwrap();
    assert!((f - AlphaSeries::f(4).evaluate(2.5, 0.3).unwrap()).abs() < 1e-13);
    assert!((g - AlphaSeries::g(4).evaluate(2.5, 0.3).unwrap()).abs() < 1e-13);
    assert!(AlphaSeries::g(6).alternates());
}

#[test]
fn too_many_terms_is_rejected() {
    assert!(f_g_partial(1.0, 0.2, FG_MAX_TERMS + 1).is_err());
}

#[test]
fn ode_residuals() {
    assert!(fg_ode_residual(2.0, 0.3).unwrap().0.abs() < 1e-8);
    assert!(fg_ode_residual(0.1, 0.45).unwrap().1.abs() < 1e-8);
}

#[test]
fn second_order_integral_values() {
    let ln2 = 2f64.ln();
    let pi2 = std::f64::consts::PI.powi(2);
    let exact = 2.0 * ln2 * ln2 - pi2 / 4.0 + pi2 / 3.0;
    assert!((second_order_integral(1.0).unwrap() - exact).abs() < 1e-7);
    assert!((second_order_integral(5.0).unwrap() - second_order_closed(5.0).unwrap()).abs() < 1e-7);
    assert!(second_order_integral(1e-6).unwrap().abs() < 1e-4);
    // closed form ingredients
    assert!((polylog(2, -1.0).unwrap() + ZETA2 / 2.0).abs() < 1e-15);
}

#[test]
fn resummed_phi() {
    assert_eq!(phi_alpha_resummation_check(&Coupling::ribbon(0.0).unwrap(), 1.0, 4).unwrap(), 0.0);
    let c = Coupling::ribbon(0.05).unwrap();
    assert!(phi_alpha_resummation_check(&c, 1.0, 4).unwrap() < 1e-8);
    assert!(phi_alpha_resummation_check(&c, 0.0, 1).unwrap() < 1e-14);
}

#[test]
fn origin_identity() {
    for lambda in [0.01, 0.1, 0.3] {
        assert!((phi_origin_identity(lambda).unwrap() - 1.0).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn ode_holds_everywhere(x in 0.01f64..100.0, alpha in -0.49f64..0.49) {
        let (rf, rg) = fg_ode_residual(x, alpha).unwrap();
        let scale = f_closed(x, alpha).unwrap().abs().max(1.0);
        prop_assert!(rf.abs() < 1e-8 * scale);
        prop_assert!(rg.abs() < 1e-8 * g_closed(x, alpha).unwrap().abs().max(1.0));
    }
}
