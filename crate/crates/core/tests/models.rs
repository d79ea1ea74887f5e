use gaugekit::expr::{rat, RationalFunction};
use gaugekit::lie::{so3_structure, so4_structure};
use gaugekit::models::{
    build_f_model, build_higgs_model, sample_surface_point, verify_auxiliary_closure,
    verify_closure, LMode, SurfaceError, SurfaceSampler, SurfaceSpec,
};

#[test]
fn so3_auxiliary_phi1_has_expected_text() {
    let m = build_f_model(&so3_structure(), LMode::AdjointAuxiliary).unwrap();
    let expected = m.chart.parse("q2*p3 - q3*p2 + qp2*pp3 - qp3*pp2").unwrap();
    assert_eq!(m.constraints[0], expected);
}

#[test]
fn so3_zero_mode_is_pure_orbital() {
    let m = build_f_model(&so3_structure(), LMode::Zero).unwrap();
    assert!(m.l_is_zero());
    assert_eq!(m.constraints[1], m.chart.parse("q3*p1 - q1*p3").unwrap());
    assert_eq!(m.chart.pairs().len(), 3);
}

#[test]
fn so4_phi2_matches_solved_form() {
    let m = build_f_model(&so4_structure(), LMode::AdjointAuxiliary).unwrap();
    let l2 = &m.l_terms[1];
    let expected = &m.chart.parse("q1*p3 - q3*p1 + q4*p6 - q6*p4").unwrap() + l2;
    assert_eq!(m.constraints[1], expected);
}

#[test]
fn closure_holds_for_all_builders() {
    for m in [
        build_f_model(&so3_structure(), LMode::AdjointAuxiliary).unwrap(),
        build_f_model(&so3_structure(), LMode::Zero).unwrap(),
        build_f_model(&so4_structure(), LMode::AdjointAuxiliary).unwrap(),
        build_higgs_model(),
    ] {
        let r = verify_closure(&m);
        assert!(r.passed(), "{}: {:?}", m.name, r.failures().collect::<Vec<_>>());
        assert_eq!(r.entries.len(), m.len() * (m.len() - 1) / 2);
    }
}

#[test]
fn auxiliary_block_closes_on_its_own() {
    let m = build_f_model(&so4_structure(), LMode::AdjointAuxiliary).unwrap();
    assert!(verify_auxiliary_closure(&m).passed());
}

#[test]
fn higgs_vector_form_and_contractions() {
    let m = build_higgs_model();
    let c = &m.chart;
    let e = |s: &str| c.parse(s).unwrap();
    // q x p + q0 p - p0 q
    let vector_form = [
        e("q2*p3 - q3*p2 + q0*p1 - p0*q1"),
        e("q3*p1 - q1*p3 + q0*p2 - p0*q2"),
        e("q1*p2 - q2*p1 + q0*p3 - p0*q3"),
    ];
    for (phi, v) in m.constraints.iter().zip(&vector_form) {
        assert_eq!(phi, v);
    }
    let q: Vec<_> = (1..4).map(|i| c.qv(i)).collect();
    let p: Vec<_> = (1..4).map(|i| c.pv(i)).collect();
    let dot = |x: &[RationalFunction], y: &[RationalFunction]| -> RationalFunction {
        x.iter().zip(y).map(|(a, b)| a * b).sum()
    };
    let qp = dot(&q, &p);
    assert_eq!(
        dot(&q, &m.constraints),
        &(&c.qv(0) * &qp) - &(&c.pv(0) * &dot(&q, &q))
    );
    // overall sign is q0 p^2 - p0 (q.p); only its vanishing matters on the surface
    assert_eq!(
        dot(&p, &m.constraints),
        &(&c.qv(0) * &dot(&p, &p)) - &(&c.pv(0) * &qp)
    );
}

#[test]
fn surface_points_satisfy_constraints_exactly() {
    for m in [
        build_f_model(&so3_structure(), LMode::AdjointAuxiliary).unwrap(),
        build_f_model(&so4_structure(), LMode::AdjointAuxiliary).unwrap(),
        build_higgs_model(),
    ] {
        for seed in 0..5 {
            let pt = sample_surface_point(&m, &[], seed).unwrap();
            for phi in &m.constraints {
                assert_eq!(pt.eval(phi).unwrap(), rat(0));
            }
        }
    }
}

#[test]
fn so3_surface_solved_for_orbital_momenta() {
    let m = build_f_model(&so3_structure(), LMode::AdjointAuxiliary).unwrap();
    let ps: Vec<_> = (0..3).map(|i| m.chart.p(i)).collect();
    // phi has rank 2 in p, so one auxiliary momentum absorbs q . L = 0
    let mut with_aux = ps.clone();
    with_aux.push(m.chart.symbol("pp1").unwrap());
    let pt = sample_surface_point(&m, &with_aux, 1).unwrap();
    for phi in &m.constraints {
        assert_eq!(pt.eval(phi).unwrap(), rat(0));
    }
}

#[test]
fn inconsistent_system_reports_singular_solve() {
    let m = build_f_model(&so3_structure(), LMode::Zero).unwrap();
    let p1 = m.chart.pv(0);
    let spec = SurfaceSpec::new(vec![p1.clone(), &p1 - &RationalFunction::one()]);
    let sampler = SurfaceSampler::new(&m.chart, spec).unwrap();
    assert_eq!(
        sampler.sample_seeded(1, 0),
        Err(SurfaceError::SingularSolve { attempts: 100 })
    );
}

#[test]
fn stationary_request_is_rejected() {
    let m = build_f_model(&so3_structure(), LMode::Zero).unwrap();
    let mut spec = SurfaceSpec::new(m.constraints.clone());
    for i in 0..3 {
        spec = spec.pin(m.chart.q(i), rat(0));
    }
    let sampler = SurfaceSampler::new(&m.chart, spec).unwrap();
    assert_eq!(sampler.sample_seeded(0, 0), Err(SurfaceError::StationaryPoint));
}

#[test]
fn partial_surface_for_two_generators() {
    let m = build_f_model(&so4_structure(), LMode::AdjointAuxiliary).unwrap();
    let q: Vec<_> = (0..6).map(|i| m.chart.qv(i)).collect();
    let l = &m.l_terms;
    let psi1: RationalFunction = q.iter().zip(l).map(|(a, b)| a * b).sum();
    let psi4 = &(&(&(&q[0] * &l[3]) + &(&q[3] * &l[0])) - &(&(&q[1] * &l[4]) + &(&q[4] * &l[1])))
        + &(&(&q[5] * &l[2]) + &(&q[2] * &l[5]));
    let spec = SurfaceSpec::new(vec![psi1.clone(), psi4.clone()]);
    let sampler = SurfaceSampler::new(&m.chart, spec).unwrap();
    assert_eq!(sampler.unknowns().len(), 6);
    for stream in 0..10 {
        let pt = sampler.sample_seeded(7, stream).unwrap();
        assert_eq!(pt.eval(&psi1).unwrap(), rat(0));
        assert_eq!(pt.eval(&psi4).unwrap(), rat(0));
    }
}

#[test]
fn invalid_structure_constants_are_rejected() {
    use gaugekit::lie::StructureConstants;
    let bad = StructureConstants::from_entries(3, [((0, 1, 2), rat(1)), ((1, 0, 2), rat(1))]).unwrap();
    assert!(build_f_model(&bad, LMode::Zero).is_err());
}
