use gaugekit::abelianize::{
    abelianize_so3, abelianize_so4, epsilon_limit_check, higgs_abelian_candidate,
    so4_pre_redefinition, solve_parameter_map, weak_zero_check, AbelianizeError, BracketStatus,
    So4Variant, WeakOptions,
};
use gaugekit::expr::RationalFunction;
use gaugekit::lie::{so3_structure, so4_structure};
use gaugekit::models::{build_f_model, build_higgs_model, LMode};
use num_traits::Zero;

fn so3() -> gaugekit::models::ConstraintModel {
    build_f_model(&so3_structure(), LMode::AdjointAuxiliary).unwrap()
}

fn so4() -> gaugekit::models::ConstraintModel {
    build_f_model(&so4_structure(), LMode::AdjointAuxiliary).unwrap()
}

fn failing(set: &[gaugekit::abelianize::IdentityCheck]) -> Vec<&str> {
    set.iter().filter(|c| !c.holds()).map(|c| c.name.as_str()).collect()
}

#[test]
fn so3_all_charts_abelianize() {
    let m = so3();
    let opts = WeakOptions::seeded(7);
    for chart in 1..=3 {
        let set = abelianize_so3(&m, chart, &opts).unwrap();
        assert!(set.identities_hold(), "chart {chart}: {:?}", failing(&set.identities));
        for e in &set.brackets {
            assert!(
                matches!(e.status, BracketStatus::IdenticallyZero),
                "chart {chart} pair ({}, {}) is {}",
                e.a,
                e.b,
                e.status.label()
            );
        }
        assert!(set.equivalence_residuals(&m.constraints).iter().all(|r| r.is_zero()));
        assert!(set.conditions_cover_denominators());
        let dets = set.det_c_samples(&m, &opts).unwrap();
        assert_eq!(dets.len(), 20);
        assert!(dets.iter().all(|(_, d)| !d.is_zero()));
    }
}

#[test]
fn so3_chart3_det_c_is_minus_inverse_qc() {
    let m = so3();
    let set = abelianize_so3(&m, 3, &WeakOptions::seeded(1)).unwrap();
    // Expanding along row 1 leaves (1/q3 - g q2) q3 + g q3 q2 = 1.
    let expected = m.chart.parse("-1/q3").unwrap();
    assert_eq!(set.det_c(), expected);
}

#[test]
fn so3_rejects_zero_l_and_bad_chart() {
    let zero = build_f_model(&so3_structure(), LMode::Zero).unwrap();
    let opts = WeakOptions::seeded(0);
    assert!(matches!(abelianize_so3(&zero, 3, &opts), Err(AbelianizeError::LIsZero)));
    assert!(matches!(
        abelianize_so3(&so3(), 4, &opts),
        Err(AbelianizeError::NotApplicable(_))
    ));
    assert!(matches!(
        abelianize_so3(&so4(), 3, &opts),
        Err(AbelianizeError::NotApplicable(_))
    ));
}

#[test]
fn so4_pre_redefinition_relations_hold() {
    let m = so4();
    let stage = so4_pre_redefinition(&m).unwrap();
    assert!(
        stage.identities.iter().all(|c| c.holds()),
        "{:?}",
        failing(&stage.identities)
    );
}

#[test]
fn so4_printed_and_flipped_shifts() {
    let m = so4();
    let opts = WeakOptions::seeded(11);
    let printed = abelianize_so4(&m, So4Variant::Printed, &opts).unwrap();
    assert!(printed.identities_hold(), "{:?}", failing(&printed.identities));
    assert!(printed.all_brackets_vanish());
    let weak: Vec<(usize, usize)> = printed
        .brackets
        .iter()
        .filter(|e| matches!(e.status, BracketStatus::WeaklyZero { .. }))
        .map(|e| (e.a + 1, e.b + 1))
        .collect();
    assert_eq!(weak, vec![(2, 3), (2, 6), (3, 5), (5, 6)]);
    for e in &printed.brackets {
        if let BracketStatus::WeaklyZero { witnesses, combination } = &e.status {
            assert!(*witnesses >= 20);
            let c = combination.as_ref().expect("combination over psi1, psi4");
            let combined = &(&c[0] * &printed.psis[0]) + &(&c[1] * &printed.psis[3]);
            assert_eq!(combined, e.value);
        }
    }

    let flipped = abelianize_so4(&m, So4Variant::Flipped, &opts).unwrap();
    assert!(flipped.identities_hold(), "{:?}", failing(&flipped.identities));
    assert!(flipped
        .brackets
        .iter()
        .all(|e| matches!(e.status, BracketStatus::IdenticallyZero)));
}

#[test]
fn so4_epsilon_limits() {
    let report = epsilon_limit_check(&so4()).unwrap();
    assert_eq!(report.checks.len(), 8);
    assert!(report.passed(), "{:?}", failing(&report.checks));
}

#[test]
fn so4_parameter_map() {
    let m = so4();
    let opts = WeakOptions::seeded(3);
    let set = abelianize_so4(&m, So4Variant::Printed, &opts).unwrap();
    let map = solve_parameter_map(&m, &set, &[1, 2, 4, 5], &opts).unwrap();
    assert!(map.coordinates_match(), "{:?}", failing(&map.coordinate_checks));
    assert_eq!(map.p3_samples.len(), 20);
    assert!(map.p3_matches_on_surface());
    assert!(matches!(
        solve_parameter_map(&m, &set, &[1, 2, 4], &opts),
        Err(AbelianizeError::NotApplicable(_))
    ));
}

#[test]
fn higgs_candidate() {
    let m = build_higgs_model();
    let set = higgs_abelian_candidate(&m, &WeakOptions::seeded(5)).unwrap();
    assert!(set.identities_hold(), "{:?}", failing(&set.identities));
    for e in &set.brackets {
        assert!(
            matches!(e.status, BracketStatus::WeaklyZero { .. }),
            "({}, {}) is {}",
            e.a,
            e.b,
            e.status.label()
        );
    }
}

#[test]
fn weak_zero_check_accepts_combination_and_rejects_coordinate() {
    let m = so4();
    let stage = so4_pre_redefinition(&m).unwrap();
    let chart = &m.chart;
    let gens = [stage.psis[0].clone(), stage.psis[3].clone()];
    let opts = WeakOptions::seeded(21);
    let r1 = chart.parse("q1").unwrap();
    let r2 = chart.parse("q2").unwrap();
    let b = &(&r1 * &gens[0]) - &(&r2 * &gens[1]);
    let ok = weak_zero_check(chart, &b, &gens, &stage.chart_conditions, &opts).unwrap();
    assert!(!ok.identically_zero);
    assert!(ok.passed);
    assert_eq!(ok.witnesses.len(), 20);

    let bad = weak_zero_check(chart, &r1, &gens, &stage.chart_conditions, &opts).unwrap();
    assert!(!bad.passed);
    let (_, v) = bad.counterexample.unwrap();
    assert!(!v.is_zero());

    let zero = weak_zero_check(chart, &RationalFunction::zero(), &gens, &[], &opts).unwrap();
    assert!(zero.identically_zero && zero.passed);
}
