use proptest::prelude::*;
use shift2d_core::axy_region::{
    classify, e3_as_printed, is_hyponormal_cf, is_semihypo_cf, is_subnormal_cf, is_weakhypo_cf,
    sh_direct_lambda_min, weakhypo_biquadratic_min, y_hyponormal, y_subnormal, AxyPoint, Method, RegionLabel,
    SUBNORMAL_ORDER,
};
use shift2d_core::hypo_tests::{
    k_hypo_profile, moment_matrix_test, semi_hypo_test, six_point_test, weak_hypo_test, LambdaGrid, Settings,
};
use shift2d_core::shift_model::build_axy;
use shift2d_core::PsdTolerance;

const MARGIN_BAND: f64 = 1e-6;

fn window(a: f64, nx: usize, ny: usize) -> impl Iterator<Item = AxyPoint> {
    (0..nx).flat_map(move |i| {
        (0..ny).filter_map(move |j| {
            let x = 0.45 + 0.21 * (i as f64 + 0.5) / nx as f64;
            let y = 0.95 + 0.05 * (j as f64 + 0.5) / ny as f64;
            AxyPoint::new(a, x, y).ok()
        })
    })
}

#[test]
fn closed_forms_agree_with_block_tests() {
    let tol = PsdTolerance::default();
    let s = Settings::default();
    let grid = LambdaGrid::default();
    let mut checked = 0;
    let mut sub_fail_unseen = 0;
    for a in [0.3, 0.5, 0.7 * 0.5f64.sqrt()] {
        for p in window(a, 62, 62) {
            let d = build_axy(p.a(), p.x(), p.y()).unwrap();
            let hypo = is_hyponormal_cf(&p);
            if hypo.margin.abs() > MARGIN_BAND {
                assert_eq!(hypo.holds, six_point_test(&d, &s).unwrap().passed(), "hyponormal at {p:?}");
            }
            let sh = is_semihypo_cf(&p, tol).unwrap();
            if sh.margin.abs() > MARGIN_BAND {
                assert_eq!(sh.holds, semi_hypo_test(&d, &s).unwrap().passed(), "semi-hyponormal at {p:?}");
            }
            let wh = is_weakhypo_cf(&p);
            if wh.margin.abs() > MARGIN_BAND {
                assert_eq!(wh.holds, weak_hypo_test(&d, &s, &grid).unwrap().passed(), "weakly hyponormal at {p:?}");
            }
            let sub = is_subnormal_cf(&p);
            if sub.margin.abs() > MARGIN_BAND {
                if sub.holds {
                    assert!(moment_matrix_test(&d, SUBNORMAL_ORDER, &s).unwrap().verdict.passed(), "subnormal at {p:?}");
                } else if k_hypo_profile(&d, SUBNORMAL_ORDER, &s).unwrap().iter().all(|r| r.verdict.passed()) {
                    sub_fail_unseen += 1;
                }
            }
            checked += 1;
        }
    }
    assert!(checked >= 10_000, "only {checked} points");
    // not subnormal by the closed form yet 5-hyponormal: reported, not assumed
    eprintln!("{checked} points; {sub_fail_unseen} non-subnormal points pass every order <= {SUBNORMAL_ORDER}");
}

#[test]
fn subnormal_curve_lies_below_hyponormal_curve() {
    // Both curves leave the class `y < x / a` for x < 1/2 and cross at the
    // corner (1/2, 1), so the comparison is made after clipping to the class.
    let a = 0.5;
    for i in 1..1000 {
        let x = 0.45 + 0.21 * i as f64 / 1000.0;
        let top = (x / a).min(1.0);
        let (sub, hypo) = (y_subnormal(a, x).min(top), y_hyponormal(a, x).min(top));
        assert!(sub <= hypo, "x = {x}");
        if x > 0.5 {
            assert!(sub < hypo, "x = {x}");
        }
    }
}

#[test]
fn pinned_fixtures() {
    let tol = PsdTolerance::default();
    let cases = [
        ((0.5, 0.5, 0.6), RegionLabel::Subnormal),
        ((0.5, 0.55, 0.955), RegionLabel::Subnormal),
        ((0.5, 0.6, 0.96), RegionLabel::HypoNotSub),
        ((0.5, 0.6, 0.98), RegionLabel::ShAndWhNotH),
        ((0.5, 0.62, 0.99), RegionLabel::WhNotSh),
        ((0.3, 0.95, 0.8), RegionLabel::Neither),
    ];
    for ((a, x, y), want) in cases {
        let p = AxyPoint::new(a, x, y).unwrap();
        for m in [Method::ClosedForm, Method::Direct] {
            let c = classify(&p, m, tol).unwrap();
            assert_eq!(c.label, want, "{p:?} via {}", m.as_str());
            assert!(!c.boundary);
        }
    }
}

#[test]
fn printed_first_clause_audit() {
    let tol = PsdTolerance::default();
    let mut printed_off = 0;
    let mut total = 0;
    for p in window(0.5, 200, 200) {
        let direct = sh_direct_lambda_min(&p, tol).unwrap();
        if direct.abs() < MARGIN_BAND {
            continue;
        }
        total += 1;
        let cf = is_semihypo_cf(&p, tol).unwrap();
        assert_eq!(cf.holds, direct >= 0.0, "{p:?}");
        if e3_as_printed(&p) != (direct >= 0.0) {
            printed_off += 1;
        }
    }
    eprintln!("printed clause disagrees with the direct route at {printed_off} of {total} window points");
}

fn valid_point() -> impl Strategy<Value = AxyPoint> {
    (0.01..0.99f64, 0.01..0.99f64, 0.01..0.99f64)
        .prop_filter_map("ay < x", |(a, x, y)| AxyPoint::new(a, x, y).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn classification_respects_the_lattice(p in valid_point()) {
        let c = classify(&p, Method::ClosedForm, PsdTolerance::default()).unwrap();
        prop_assert_eq!(c.label, RegionLabel::from_predicates(c.subnormal, c.hyponormal, c.semi_hyponormal, c.weakly_hyponormal));
    }

    #[test]
    fn inside_the_unit_disc_is_subnormal(p in valid_point()) {
        prop_assume!(p.x() * p.x() + p.y() * p.y() < 1.0);
        prop_assert!(is_subnormal_cf(&p).holds);
    }

    #[test]
    fn large_a_is_weakly_hyponormal(a in 0.5f64.sqrt()..0.99, x in 0.01..0.99f64, t in 0.01..0.99f64) {
        let p = AxyPoint::new(a, x, t * (x / a).min(0.99)).unwrap();
        prop_assert!(is_weakhypo_cf(&p).holds);
    }

    #[test]
    fn weak_predicate_matches_biquadratic(p in valid_point()) {
        let wh = is_weakhypo_cf(&p);
        let m = weakhypo_biquadratic_min(&p);
        prop_assume!(wh.margin.abs() > MARGIN_BAND && m.abs() > 1e-9);
        prop_assert_eq!(wh.holds, m >= 0.0);
    }

    #[test]
    fn direct_method_agrees_off_boundary(p in valid_point()) {
        let tol = PsdTolerance::default();
        let cf = classify(&p, Method::ClosedForm, tol).unwrap();
        let m = cf.margins;
        prop_assume!([m.sub, m.hypo, m.sh, m.wh].iter().all(|v| v.abs() > MARGIN_BAND));
        let direct = classify(&p, Method::Direct, tol).unwrap();
        prop_assert_eq!(cf.label, direct.label);
    }
}

#[test]
fn out_of_class_is_rejected() {
    assert!(AxyPoint::new(0.9, 0.5, 0.9).is_err());
    assert!(AxyPoint::new(0.5, 1.0, 0.5).is_err());
}
