//! Structural invariants under random inputs.

use oh_core::conditions::{eval_condition_point, ConditionContext, ConditionId};
use oh_core::funcspace::{sample_cone, ConeConfig, GridFunction, Weight};
use oh_core::nfunctions::NFunction;
use oh_core::operators::{dunkl_hausdorff_point, Classical, MultiplierFunction};
use oh_core::orlicz::{luxemburg_norm, modular, orlicz_norm};
use proptest::prelude::*;

use super::support::{power_piecewise_integral, quotient, random_function, random_weight_density, rel_err, rng};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn norm_is_homogeneous(seed in any::<u64>(), p in 1.2f64..4.0, c in 0.01f64..100.0) {
        let f = random_function(&mut rng(seed), 0.01, 50.0, 6);
        let phi = NFunction::power(p).unwrap();
        let v = Weight::unit();
        let (n, nc) = (luxemburg_norm(&f, &phi, &v), luxemburg_norm(&f.scaled(c), &phi, &v));
        prop_assert!(rel_err(nc, c * n) < 1e-8, "{nc} vs {}", c * n);
    }

    #[test]
    fn norm_is_monotone_in_the_support(a in 0.01f64..1.0, b in 1.0f64..10.0, grow in 1.0f64..5.0, p in 1.2f64..4.0) {
        let phi = NFunction::power(p).unwrap();
        let v = Weight::unit();
        let small = luxemburg_norm(&GridFunction::indicator(a, b, 1.0).unwrap(), &phi, &v);
        let large = luxemburg_norm(&GridFunction::indicator(a / grow, b * grow, 1.0).unwrap(), &phi, &v);
        prop_assert!(small <= large * (1.0 + 1e-12));
    }

    #[test]
    fn normalized_function_has_unit_modular(seed in any::<u64>(), p in 1.2f64..4.0) {
        let f = random_function(&mut rng(seed), 0.01, 50.0, 6);
        let phi = NFunction::power(p).unwrap();
        let v = Weight::unit();
        let n = luxemburg_norm(&f, &phi, &v);
        prop_assert!((modular(&f.scaled(1.0 / n), &phi, &v) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn young_inequality(p in 1.1f64..5.0, s in 1e-3f64..1e3, t in 1e-3f64..1e3) {
        let pair = NFunction::power(p).unwrap().complementary().unwrap();
        let bound = pair.primal.eval(s) + pair.conjugate.eval(t);
        prop_assert!(s * t <= bound * (1.0 + 1e-9), "{} > {bound}", s * t);
    }

    #[test]
    fn young_functions_are_convex(p in 1.1f64..5.0, lift in 0.0f64..2.5, s in 1e-3f64..1e3, t in 1e-3f64..1e3, l in 0.0f64..1.0) {
        for nf in [NFunction::power(p).unwrap(), NFunction::power_log(p, 1.0 - p + lift).unwrap()] {
            let mid = nf.eval(l * s + (1.0 - l) * t);
            let chord = l * nf.eval(s) + (1.0 - l) * nf.eval(t);
            prop_assert!(mid <= chord * (1.0 + 1e-9), "{nf}: {mid} > {chord}");
        }
    }

    #[test]
    fn inverse_undoes_evaluation(p in 1.1f64..5.0, lift in 0.0f64..2.5, x in 1e-4f64..1e4) {
        for nf in [NFunction::power(p).unwrap(), NFunction::power_log(p, 1.0 - p + lift).unwrap()] {
            prop_assert!(rel_err(nf.inv(nf.eval(x)), x) < 1e-8, "{nf} at {x}");
        }
    }

    #[test]
    fn dunkl_operator_is_linear(a in 0.01f64..1.0, b in 1.0f64..5.0, c in 5.0f64..50.0, k in 0.1f64..10.0, x in 0.01f64..100.0, alpha in -0.5f64..2.0) {
        let mf = MultiplierFunction::exact(alpha);
        let whole = GridFunction::indicator(a, c, k).unwrap();
        let left = GridFunction::indicator(a, b, 1.0).unwrap();
        let right = GridFunction::indicator(b, c, 1.0).unwrap();
        let sum = k * (dunkl_hausdorff_point(&mf, &left, x) + dunkl_hausdorff_point(&mf, &right, x));
        prop_assert!(rel_err(dunkl_hausdorff_point(&mf, &whole, x), sum) < 1e-10);
    }

    #[test]
    fn calderon_is_the_sum_of_both_averages(seed in any::<u64>(), x in 1e-3f64..1e3) {
        let f = random_function(&mut rng(seed), 0.01, 50.0, 6);
        let c = Classical::Calderon.prepare(&f).at(x);
        let sum = Classical::HardyAvg.prepare(&f).at(x) + Classical::HardyAvgAdjoint.prepare(&f).at(x);
        prop_assert!(rel_err(c, sum) < 1e-12);
    }

    #[test]
    fn cone_samples_stay_monotone_under_averaging(seed in any::<u64>(), radius in 0.1f64..10.0) {
        let cfg = ConeConfig { seed, size: 4, radius, ..ConeConfig::default() };
        for sample in sample_cone(&cfg) {
            prop_assert!(sample.f.is_non_increasing(), "sample {} not monotone", sample.index);
            let af = Classical::HardyAvg.apply(&sample.f, None).unwrap();
            prop_assert!(af.is_non_increasing(), "A of sample {} not monotone", sample.index);
        }
    }

    #[test]
    fn condition_lhs_falls_as_the_constant_grows(p in 1.3f64..4.0, r in 0.05f64..20.0, eps in 0.1f64..10.0, c in 0.1f64..10.0) {
        let ctx = ConditionContext::power(p, Weight::unit(), Weight::unit(), GridFunction::constant(1.0)).unwrap();
        for id in [ConditionId::T21C1, ConditionId::T21C2] {
            let lo = eval_condition_point(&ctx, id, c, r, eps).unwrap();
            let hi = eval_condition_point(&ctx, id, 2.0 * c, r, eps).unwrap();
            prop_assert!(hi.lhs <= lo.lhs * (1.0 + 1e-10), "{id:?}: {} > {}", hi.lhs, lo.lhs);
        }
    }

    #[test]
    fn pairing_is_bounded_by_the_orlicz_norm(seed in any::<u64>(), p in 1.3f64..4.0) {
        // Hölder with the Luxemburg norm of f needs the Orlicz norm of g/v on the other side
        let mut r = rng(seed);
        let pair = NFunction::power(p).unwrap().complementary().unwrap();
        let density = random_weight_density(&mut r);
        let v = Weight::new(density.clone()).unwrap();
        let f = random_function(&mut r, 0.05, 20.0, 5);
        let g = random_function(&mut r, 0.05, 20.0, 5);
        let (lo, hi) = (f.xs()[0].max(g.xs()[0]), f.xs().last().unwrap().min(*g.xs().last().unwrap()));
        prop_assume!(lo < hi);
        let mut breaks: Vec<f64> = f.nodes().into_iter().chain(g.nodes()).chain(density.nodes()).filter(|&x| x >= lo && x <= hi).collect();
        breaks.extend([lo, hi]);
        let lhs = power_piecewise_integral(&breaks, |x| f.eval(x) * g.eval(x)) / luxemburg_norm(&f, &pair.primal, &v);

        let rhs = orlicz_norm(&quotient(&g, &density), &pair.conjugate, &v);
        prop_assert!(lhs <= rhs * (1.0 + 1e-4), "{lhs} > {rhs}");
    }
}
