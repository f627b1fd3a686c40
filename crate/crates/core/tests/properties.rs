use brenier_core::concentration::gaussian_tail_check;
use brenier_core::envelope::EnvelopeFunction;
use brenier_core::measures::moduli::{default_grid, growth_constant, Extreme, Growth};
use brenier_core::measures::{Cdf1D, ConvexityModulus, ModulusKind, Norm, Potential, SearchSpec};
use brenier_core::transport1d::{empirical_holder_1d, gradient_holder_constant, PairSpec, TransportMap1D};
use brenier_core::transport_nd::{solve_entropic, SolverSpec, Target};
use brenier_core::verify::{check_sharper_quadratic, check_theorem_hoelder, monotonicity_check, QuotientSamples};
use brenier_core::measures::ConvexBody;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Potential> {
    prop_oneof![
        (0.3f64..3.0).prop_map(|s| Potential::gaussian_with(vec![0.0], s).unwrap()),
        (1.0f64..6.0).prop_map(|b| Potential::power_law(1, b).unwrap()),
        Just(Potential::huber(1).unwrap()),
        (0.1f64..2.0, -1.0f64..1.0, 0.0f64..1.0).prop_map(|(a, l, q)| Potential::polynomial_1d(a, l, q).unwrap()),
    ]
}

fn quick() -> SearchSpec {
    SearchSpec { grid_per_axis: 32, ..SearchSpec::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn envelope_is_one_homogeneous(p in -0.9f64..3.0, a in 0.2f64..3.0, lambda in 0.2f64..5.0, s in -0.999f64..0.999) {
        let f = EnvelopeFunction::new(p, a).unwrap();
        let g = EnvelopeFunction::new(p, lambda * a).unwrap();
        let t = s * a;
        let lhs = g.eval(lambda * t).unwrap();
        let rhs = lambda * f.eval(t).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn envelope_is_even_and_peaks_at_zero(p in -0.9f64..3.0, a in 0.2f64..3.0, s in 0.0f64..0.999) {
        let f = EnvelopeFunction::new(p, a).unwrap();
        let t = s * a;
        prop_assert_eq!(f.eval(t).unwrap(), f.eval(-t).unwrap());
        prop_assert!(f.eval(t).unwrap() <= f.f0() * (1.0 + 1e-12));
    }

    #[test]
    fn quantile_inverts_cdf(pot in family(), u in 1e-6f64..(1.0 - 1e-6)) {
        let cdf = Cdf1D::new(&pot).unwrap();
        let x = cdf.quantile(u).unwrap();
        let back = cdf.quantile(cdf.cdf(x)).unwrap();
        prop_assert!((back - x).abs() <= 1e-9 * (1.0 + x.abs()), "{x} -> {back}");
    }

    #[test]
    fn map_pushes_source_to_target(src in family(), tgt in family(), u in 1e-4f64..(1.0 - 1e-4)) {
        let map = TransportMap1D::new(&src, &tgt).unwrap();
        let x = Cdf1D::new(&src).unwrap().quantile(u).unwrap();
        let v = Cdf1D::new(&tgt).unwrap().cdf(map.eval(x));
        prop_assert!((v - u).abs() <= 1e-7, "F_ν(T(x)) = {v}, F_μ(x) = {u}");
    }

    #[test]
    fn maps_compose(a in family(), b in family(), c in family(), u in 1e-3f64..(1.0 - 1e-3)) {
        let ab = TransportMap1D::new(&a, &b).unwrap();
        let bc = TransportMap1D::new(&b, &c).unwrap();
        let ac = TransportMap1D::new(&a, &c).unwrap();
        let x = Cdf1D::new(&a).unwrap().quantile(u).unwrap();
        let (two, one) = (bc.eval(ab.eval(x)), ac.eval(x));
        prop_assert!((two - one).abs() <= 1e-6 * (1.0 + one.abs()), "{two} vs {one}");
    }

    #[test]
    fn second_quotient_is_even_in_y(pot in family(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
        prop_assert_eq!(pot.second_quotient(&[x], &[y]).unwrap(), pot.second_quotient(&[x], &[-y]).unwrap());
    }

    #[test]
    fn conjugation_is_an_involution(coef in 0.1f64..3.0, k in 1.2f64..4.0) {
        let b = ConvexityModulus::power(ModulusKind::Bregman, Norm::L2, coef, k, default_grid(4.0, 64)).unwrap();
        let back = b.conjugate().unwrap().conjugate().unwrap();
        // Both transforms take the supremum over the grid, so the slope b'(t) must stay on it.
        let reach = b.conjugate().unwrap().saturated_from().unwrap_or(f64::INFINITY).min(0.9 * b.t_max());
        for (i, &t) in b.grid().iter().enumerate() {
            let slope = coef * k * t.powf(k - 1.0);
            if slope < reach {
                let (v, w) = (b.values()[i], back.values()[i]);
                // b* is interpolated between nodes, so b** matches b only to grid accuracy.
                prop_assert!((v - w).abs() <= 1e-2 * (1.0 + v), "t = {t}: {v} vs {w}");
            }
        }
    }

    #[test]
    fn gaussian_tail_bound(t_max in 0.1f64..6.0) {
        prop_assert!(gaussian_tail_check(t_max, 200).passed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    // Gaussian source (p = 1) against a uniformly convex polynomial target (q = 1).
    #[test]
    fn gradient_holder_below_theorem_constant(k in 0.3f64..3.0, quartic in 0.0f64..0.5, seed in any::<u64>()) {
        let src = Potential::gaussian(1);
        let tgt = Potential::polynomial_1d(k, 0.0, quartic).unwrap();
        let c_p = growth_constant(&src, Growth::GradientDifference, 1.0, Extreme::Sup, (1e-2, 4.0), &quick()).unwrap().value;
        let c_q = growth_constant(&tgt, Growth::GradientMonotonicity, 2.0, Extreme::Inf, (1e-2, 4.0), &quick()).unwrap().value;
        let (c, alpha) = gradient_holder_constant(1.0, 1.0, c_p, c_q).unwrap();
        let map = TransportMap1D::new(&src, &tgt).unwrap();
        let spec = PairSpec { grid_x: 128, grid_t: 32, random_pairs: 1024, ..PairSpec::default() };
        let est = empirical_holder_1d(&map, alpha, &spec, seed).unwrap();
        prop_assert!(est.value <= c + 1e-3, "{} > {}", est.value, c);
    }

    #[test]
    fn sharper_bound_never_exceeds_general(a_p in 0.1f64..4.0, a_q in 0.1f64..4.0) {
        let samples = QuotientSamples::grid_1d(-1.0, 1.0, 5, 0.1, 1.0, 5);
        let q = |_: &[f64], _: &[f64], t: f64| Ok(t * t);
        let sharp = check_sharper_quadratic(a_p, a_q, q, &samples).unwrap();
        let general = check_theorem_hoelder(a_p, 1.0, a_q, 1.0, q, &samples).unwrap();
        let c = |r: &brenier_core::verify::VerificationReport| r.witness["constant"].as_f64().unwrap();
        prop_assert!(c(&sharp) <= c(&general));
        prop_assert!(sharp.empirical >= general.empirical);
    }

    #[test]
    fn suprema_grow_with_the_sample_set(extra in prop::collection::vec(-3.0f64..3.0, 1..20)) {
        let map = TransportMap1D::new(&Potential::gaussian(1), &Potential::power_law(1, 4.0).unwrap()).unwrap();
        let quotient = |x: &[f64], _: &[f64], t: f64| Ok(map.second_difference(x[0], t));
        let small = QuotientSamples::grid_1d(-3.0, 3.0, 21, 0.01, 2.0, 10);
        let mut big = small.clone();
        big.points.extend(extra.into_iter().map(|x| vec![x]));
        let a = check_theorem_hoelder(1.0, 1.0, 2.0, 3.0, quotient, &small).unwrap();
        let b = check_theorem_hoelder(1.0, 1.0, 2.0, 3.0, quotient, &big).unwrap();
        prop_assert!(b.empirical >= a.empirical);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn entropic_maps_are_monotone_and_land_near_the_body(seed in any::<u64>()) {
        let body = ConvexBody::unit_box(2);
        let spec = SolverSpec { n: 300, m: 300, epsilon: Some(0.02), ..SolverSpec::default() };
        let tp = solve_entropic(&Potential::gaussian(2), &Target::Body { body: body.clone() }, &spec, seed).unwrap();
        prop_assert!(monotonicity_check(&tp, 2000, seed).unwrap().passed);
        for x in &tp.source_samples {
            let y = tp.map_eval(x).unwrap();
            prop_assert!(body.outside_distance(&y) <= 3.0 * tp.epsilon.sqrt());
        }
    }

    #[test]
    fn reports_are_reproducible(seed in any::<u64>()) {
        let map = TransportMap1D::new(&Potential::gaussian(1), &Potential::uniform_interval(-1.0, 1.0).unwrap()).unwrap();
        let spec = PairSpec { grid_x: 64, grid_t: 16, random_pairs: 512, ..PairSpec::default() };
        let a = empirical_holder_1d(&map, 0.5, &spec, seed).unwrap();
        let b = empirical_holder_1d(&map, 0.5, &spec, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
