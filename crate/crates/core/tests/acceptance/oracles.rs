//! Worked examples with answers known in closed form.

use oh_core::funcspace::{GridFunction, Weight};
use oh_core::nfunctions::{check_delta2, check_order, NFunction, DEFAULT_RANGE, DEFAULT_SAMPLES};
use oh_core::operators::{check_phi_condition, dunkl_hausdorff_point, Classical, MultiplierFunction};
use oh_core::orlicz::luxemburg_norm;

fn chi01() -> GridFunction {
    GridFunction::indicator(0.0, 1.0, 1.0).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

const PROBES: [f64; 7] = [0.01, 0.2, 0.5, 0.9, 1.5, 4.0, 100.0];

#[test]
fn averaging_operators_on_the_unit_indicator() {
    let f = chi01();
    let a = Classical::HardyAvg.prepare(&f);
    let s = Classical::S.prepare(&f);
    let a_star = Classical::HardyAvgAdjoint.prepare(&f);
    let k = Classical::K.prepare(&f);
    assert!(close(a.at(2.0), 0.5, 1e-13));
    for x in PROBES {
        assert!(close(a.at(x), 1f64.min(1.0 / x), 1e-12), "A at {x}");
        let s_exact = if x <= 1.0 { x / 2.0 } else { 1.0 / (2.0 * x) };
        assert!(close(s.at(x), s_exact, 1e-12), "S at {x}");
        let a_star_exact = if x < 1.0 { (1.0 / x).ln() } else { 0.0 };
        assert!(close(a_star.at(x), a_star_exact, 1e-12), "A* at {x}");
        let k_exact = if x <= 1.0 { x } else { x.ln() + 1.0 };
        assert!(close(k.at(x), k_exact, 1e-12), "K at {x}");
    }
}

#[test]
fn hardy_multiplier_matches_the_average() {
    let f = chi01();
    let mf = MultiplierFunction::hardy();
    for x in PROBES {
        assert!(close(dunkl_hausdorff_point(&mf, &f, x), 1f64.min(1.0 / x), 1e-12), "{x}");
    }
}

#[test]
fn k_of_a_narrow_block_is_nearly_logarithmic() {
    // (1/δ)χ_(1,1+δ) tends to a point mass at 1, so K of it tends to ln x for x > 1
    let delta = 1e-4;
    let f = GridFunction::indicator(1.0, 1.0 + delta, 1.0 / delta).unwrap();
    let k = Classical::K.prepare(&f);
    for x in [2.0, 10.0, 1e3] {
        assert!((k.at(x) - f64::ln(x)).abs() < 1e-4, "{x}: {}", k.at(x));
    }
}

#[test]
fn delta2_constant_of_powers() {
    for p in [1.5, 2.0, 3.0, 4.0] {
        let rep = check_delta2(&NFunction::power(p).unwrap(), DEFAULT_RANGE, DEFAULT_SAMPLES).unwrap();
        assert!(rep.passes);
        assert!(close(rep.beta_estimate, 2f64.powf(p), 1e-9), "p = {p}: {}", rep.beta_estimate);
    }
}

#[test]
fn exponential_growth_fails_delta2() {
    let s: Vec<f64> = (1..=1400).map(|i| i as f64 * 0.5).collect();
    let phi: Vec<f64> = s.iter().map(|&t| t.exp_m1()).collect();
    let nf = NFunction::tabulated(&s, &phi, 50.0).unwrap();
    assert!(!check_delta2(&nf, DEFAULT_RANGE, DEFAULT_SAMPLES).unwrap().passes);
}

#[test]
fn quartic_does_not_precede_quadratic() {
    let p4 = NFunction::power(4.0).unwrap();
    let p2 = NFunction::power(2.0).unwrap();
    assert!(!check_order(&p4, &p2, DEFAULT_RANGE, DEFAULT_SAMPLES).unwrap().precedes);
    assert!(check_order(&p2, &p4, DEFAULT_RANGE, DEFAULT_SAMPLES).unwrap().precedes);
}

#[test]
fn quadratic_is_self_conjugate() {
    let pair = NFunction::power(2.0).unwrap().complementary().unwrap();
    for t in [1e-3, 0.5, 1.0, 7.0, 1e3] {
        assert!(close(pair.conjugate.eval(t), t * t / 2.0, 1e-8), "{t}");
    }
}

#[test]
fn phi_condition_band_of_a_constant_over_t() {
    // φ = 2χ_[1,∞)/t with α = -1/2: x φ(x) = 2 on [1, ∞)
    let phi = GridFunction::with_tails(
        vec![1.0, 1.0, 10.0],
        vec![0.0, 2.0, 0.2],
        oh_core::funcspace::Tail::Zero,
        oh_core::funcspace::Tail::Power(-1.0),
    )
    .unwrap();
    let cond = check_phi_condition(&MultiplierFunction::new(phi, -0.5).unwrap());
    assert!(close(cond.upper_region.lower, 2.0, 1e-9) && close(cond.upper_region.upper, 2.0, 1e-9), "{cond:?}");
}

#[test]
fn hardy_average_doubles_the_quadratic_norm_of_the_indicator() {
    // ‖χ‖ = 1/√2 and ‖Aχ‖ = 1 for Φ = t²/2
    let phi = NFunction::power(2.0).unwrap();
    let f = chi01();
    let af = Classical::HardyAvg.apply(&f, Some(&oh_core::funcspace::log_grid(1e-3, 1e3, 121))).unwrap();
    let nf = luxemburg_norm(&f, &phi, &Weight::unit());
    let naf = luxemburg_norm(&af, &phi, &Weight::unit());
    assert!(close(nf, f64::sqrt(0.5), 1e-9), "{nf}");
    assert!(close(naf / nf, f64::sqrt(2.0), 1e-6), "{}", naf / nf);
}
