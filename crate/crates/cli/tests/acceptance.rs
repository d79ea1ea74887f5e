//! The eleven end-to-end acceptance criteria, one report line each.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;

use gaugekit::abelianize::{
    abelianize_so3, abelianize_so4, epsilon_limit_check, higgs_abelian_candidate,
    so4_pre_redefinition, solve_parameter_map, BracketStatus, IdentityCheck, So4Variant,
    WeakOptions,
};
use gaugekit::expr::{rat, BigRational};
use gaugekit::gauge::{
    conjecture_probe, fp_determinant, orbit_average, point_from_named, residual_action_check,
    residual_null_space, simulate_gg, so3_chain_reduction, FpStatus, GGConfig, GaugeChoice,
    LastCondition,
};
use gaugekit::lie::{check_structure, check_thooft, so3_structure, so4_structure, thooft_eta};
use gaugekit::models::{build_f_model, build_higgs_model, verify_closure, ConstraintModel, LMode};
use gaugekit::par::Execution;
use num_traits::Zero;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_hold(checks: &[IdentityCheck]) -> Result<(), String> {
    let bad: Vec<&str> = checks.iter().filter(|c| !c.holds()).map(|c| c.name.as_str()).collect();
    ensure(bad.is_empty(), || format!("failing identities {bad:?}"))
}

fn model(f: gaugekit::lie::StructureConstants, l: LMode) -> ConstraintModel {
    build_f_model(&f, l).expect("catalog algebra")
}

fn closure() -> Outcome {
    let cases = [
        ("so3", model(so3_structure(), LMode::Zero), 3),
        ("so3+L", model(so3_structure(), LMode::AdjointAuxiliary), 3),
        ("so4", model(so4_structure(), LMode::Zero), 15),
        ("so4+L", model(so4_structure(), LMode::AdjointAuxiliary), 15),
        ("higgs", build_higgs_model(), 3),
    ];
    for (name, m, pairs) in &cases {
        let r = verify_closure(m);
        ensure(r.entries.len() == *pairs, || format!("{name}: {} pairs", r.entries.len()))?;
        ensure(r.passed(), || format!("{name}: nonzero residual"))?;
    }
    ensure(build_higgs_model().bracket_scale == rat(2), || "higgs scale".into())?;
    Ok("21 pairs, zero residuals".into())
}

fn so3_abelian() -> Outcome {
    let m = model(so3_structure(), LMode::AdjointAuxiliary);
    let opts = WeakOptions::seeded(2024);
    let set = abelianize_so3(&m, 3, &opts).map_err(|e| e.to_string())?;
    all_hold(&set.identities)?;
    ensure(
        set.brackets.iter().all(|e| matches!(e.status, BracketStatus::IdenticallyZero)),
        || "a bracket is not identically zero".into(),
    )?;
    ensure(
        set.equivalence_residuals(&m.constraints).iter().all(|r| r.is_zero()),
        || "psi != C phi".into(),
    )?;
    let dets = set.det_c_samples(&m, &opts).map_err(|e| e.to_string())?;
    ensure(dets.len() == 20 && dets.iter().all(|(_, d)| !d.is_zero()), || {
        format!("det C vanished or only {} points", dets.len())
    })?;
    Ok(format!("{} identities, 3 brackets zero, det C != 0 at 20 points", set.identities.len()))
}

fn so4_abelian() -> Outcome {
    let m = model(so4_structure(), LMode::AdjointAuxiliary);
    let stage = so4_pre_redefinition(&m).map_err(|e| e.to_string())?;
    all_hold(&stage.identities)?;
    let opts = WeakOptions::seeded(2024);
    let set = abelianize_so4(&m, So4Variant::Printed, &opts).map_err(|e| e.to_string())?;
    all_hold(&set.identities)?;
    let mut weak = 0;
    for e in &set.brackets {
        if e.a == 0 || e.a == 3 || e.b == 0 || e.b == 3 {
            ensure(matches!(e.status, BracketStatus::IdenticallyZero), || {
                format!("({}, {}) touches psi1/psi4 but is {}", e.a + 1, e.b + 1, e.status.label())
            })?;
        }
        match &e.status {
            BracketStatus::IdenticallyZero => {}
            BracketStatus::WeaklyZero { witnesses, .. } => {
                weak += 1;
                ensure(*witnesses >= 20, || format!("only {witnesses} witnesses"))?;
            }
            BracketStatus::Nonzero { .. } => {
                return Err(format!("({}, {}) nonzero on the locus", e.a + 1, e.b + 1))
            }
        }
    }
    Ok(format!("{} relations; 15 pairs vanish ({weak} weakly, {} identically)", stage.identities.len(), 15 - weak))
}

fn eps_limits() -> Outcome {
    let r = epsilon_limit_check(&model(so4_structure(), LMode::AdjointAuxiliary))
        .map_err(|e| e.to_string())?;
    all_hold(&r.checks)?;
    ensure(r.checks.iter().any(|c| c.name.starts_with("q1 = -q4")), || "mirrored case missing".into())?;
    Ok(format!("{} identities in eps, both signs", r.checks.len()))
}

fn fp() -> Outcome {
    let m = model(so3_structure(), LMode::AdjointAuxiliary);
    let opts = WeakOptions::seeded(2024);
    let red = so3_chain_reduction(&m).map_err(|e| e.to_string())?;
    let momentum = GaugeChoice::coordinate_chain(&m, LastCondition::Momentum).map_err(|e| e.to_string())?;
    let a = fp_determinant(&m, &momentum, &red, &opts).map_err(|e| e.to_string())?;
    ensure(a.reduced == m.parse("-q3*L1").unwrap(), || m.chart.render(&a.reduced))?;
    ensure(a.samples_agree() && a.status() == FpStatus::Nonvanishing, || "momentum reading".into())?;
    let constraint = GaugeChoice::coordinate_chain(&m, LastCondition::Constraint).map_err(|e| e.to_string())?;
    let b = fp_determinant(&m, &constraint, &red, &opts).map_err(|e| e.to_string())?;
    ensure(b.status() == FpStatus::WeaklyZero, || format!("constraint reading {}", b.status().as_str()))?;

    let zero = model(so3_structure(), LMode::Zero);
    for texts in [["q1", "q2", "p1"], ["q1", "q2", "q3 - 2"], ["q1 - 1", "q2", "p3"]] {
        let g = GaugeChoice::parse(&zero, &texts).map_err(|e| e.to_string())?;
        let d = fp_determinant(&zero, &g, &[], &opts).map_err(|e| e.to_string())?;
        ensure(d.samples.len() == 20 && d.vanishes_on_samples(), || format!("{texts:?} nonzero"))?;
    }
    Ok("-q3*L1; phi1 reading weakly zero; 3 L=0 gauges vanish at 20 points".into())
}

fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| rat(x)).collect()
}

fn residual() -> Outcome {
    let m = model(so3_structure(), LMode::Zero);
    let q = ints(&[2, -3, 5]);
    let point = point_from_named(&m.chart, &[("q1", q[0].clone()), ("q2", q[1].clone()), ("q3", q[2].clone())])
        .map_err(|e| e.to_string())?;
    let ns = residual_null_space(&m, &point).map_err(|e| e.to_string())?;
    ensure((ns.rank, ns.nullity) == (2, 1) && ns.contains(&q), || format!("so3 rank {} I {}", ns.rank, ns.nullity))?;
    for v in &ns.null_vectors {
        let a = residual_action_check(&m, &point, v).map_err(|e| e.to_string())?;
        ensure(a.passed(), || "so3 action nonzero".into())?;
    }

    let m4 = model(so4_structure(), LMode::Zero);
    let probe = conjecture_probe(&m4.algebra, 50, 2024, Execution::default()).map_err(|e| e.to_string())?;
    ensure(probe.all_match() && probe.matches_rank() == 50, || format!("{:?}", probe.histogram))?;
    ensure(probe.rank_nullity_holds(), || "rank + I != A".into())?;
    ensure(probe.trials.iter().all(|t| t.known_vectors_verified), || "null vector".into())?;
    let q4 = ints(&[2, -3, 5, 7, 1, -4]);
    let named: Vec<(String, BigRational)> = (0..6).map(|i| (format!("q{}", i + 1), q4[i].clone())).collect();
    let refs: Vec<(&str, BigRational)> = named.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
    let p4 = point_from_named(&m4.chart, &refs).map_err(|e| e.to_string())?;
    let ns4 = residual_null_space(&m4, &p4).map_err(|e| e.to_string())?;
    ensure(ns4.rank + ns4.nullity == 6, || "so4 rank + I".into())?;
    for v in &ns4.null_vectors {
        ensure(residual_action_check(&m4, &p4, v).map_err(|e| e.to_string())?.passed(), || "so4 action nonzero".into())?;
    }
    Ok("so3 rank 2 I 1 along q; so4 I = 2 in 50/50; action exactly zero".into())
}

fn gauge_map() -> Outcome {
    let m = model(so4_structure(), LMode::AdjointAuxiliary);
    let opts = WeakOptions::seeded(2024);
    let set = abelianize_so4(&m, So4Variant::Printed, &opts).map_err(|e| e.to_string())?;
    let map = solve_parameter_map(&m, &set, &[1, 2, 4, 5], &opts).map_err(|e| e.to_string())?;
    all_hold(&map.coordinate_checks)?;
    ensure(map.coordinate_checks.len() == 6, || "coordinate count".into())?;
    ensure(map.p3_samples.len() == 20 && map.p3_matches_on_surface(), || "p3 mismatch".into())?;
    Ok("6 coordinates exact, p3 at 20 surface points".into())
}

fn higgs() -> Outcome {
    let m = build_higgs_model();
    let set = higgs_abelian_candidate(&m, &WeakOptions::seeded(2024)).map_err(|e| e.to_string())?;
    all_hold(&set.identities)?;
    for e in &set.brackets {
        match &e.status {
            BracketStatus::WeaklyZero { witnesses, .. } if *witnesses >= 20 => {}
            BracketStatus::IdenticallyZero => {}
            s => return Err(format!("({}, {}) {}", e.a + 1, e.b + 1, s.label())),
        }
    }
    Ok(format!("{} identities; brackets weakly zero", set.identities.len()))
}

fn structures() -> Outcome {
    let t = check_thooft(&thooft_eta());
    ensure(t.passed(), || "'t Hooft identity".into())?;
    for (name, f) in [("so3", so3_structure()), ("so4", so4_structure())] {
        ensure(check_structure(&f).passed(), || format!("{name} Jacobi"))?;
    }
    Ok(format!("{} 't Hooft tuples; Jacobi for so3 and so4", t.tuples_checked))
}

fn confinement() -> Outcome {
    let m = model(so3_structure(), LMode::Zero);
    let c = &m.chart;
    let mut point = BTreeMap::new();
    for (name, v) in [("q1", 0.8), ("q2", -0.6), ("q3", 0.0), ("p1", 0.1), ("p2", 0.3), ("p3", 0.0)] {
        point.insert(c.symbol(name).unwrap(), v);
    }
    let axis = [0.0, 0.0, 1.0];
    let avg = |t: &str| orbit_average(&c.parse(t).unwrap(), c, &point, axis, 64).map_err(|e| e.to_string());
    let (z1, z2, zz) = (avg("q1")?, avg("q2")?, avg("q1^2 + q2^2")?);
    ensure(z1.abs() <= 1e-12 && z2.abs() <= 1e-12, || format!("<z> = ({z1:e}, {z2:e})"))?;
    ensure((zz - 1.0).abs() <= 1e-12, || format!("<z zbar> = {zz}"))?;
    let t = simulate_gg(&GGConfig {
        vacuum_radius: 1.0,
        timestep: 1e-3,
        steps: 10_000,
        q0: [0.9, 0.3, -0.4],
        p0: [0.2, -0.5, 0.1],
    })
    .map_err(|e| e.to_string())?;
    let (de, dl) = (t.energy_drift(), t.angular_momentum_drift());
    ensure(de <= 1e-6, || format!("energy drift {de:e}"))?;
    ensure(dl <= 1e-10, || format!("angular momentum drift {dl:e}"))?;
    Ok(format!("|<z>| {:.1e}; energy drift {de:.1e}; L drift {dl:.1e}", z1.abs().max(z2.abs())))
}

fn determinism() -> Outcome {
    let models = Path::new(env!("CARGO_MANIFEST_DIR")).join("models");
    let m = |f: &str| models.join(f).to_str().unwrap().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec!["verify".into(), m("higgs.toml")],
        vec!["abelianize".into(), m("so4.toml")],
        vec!["fp-det".into(), m("so3.toml")],
        vec!["residual".into(), m("so4_zero.toml"), "--random".into(), "50".into()],
        vec!["demo-gg".into(), "--steps".into(), "2000".into()],
        vec!["demo-gg".into(), "orbit-average".into()],
    ];
    for args in &runs {
        let go = || {
            Command::new(env!("CARGO_BIN_EXE_gaugekit"))
                .args(args)
                .args(["--seed", "77", "--format", "json"])
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (go()?, go()?);
        ensure(a.status.success(), || format!("{args:?} exited {:?}", a.status.code()))?;
        ensure(a.stdout == b.stdout, || format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} commands byte-identical", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("closure", closure),
        ("so3 abelianization", so3_abelian),
        ("so4 abelianization", so4_abelian),
        ("eps-limit identities", eps_limits),
        ("fp determinant", fp),
        ("residual symmetry", residual),
        ("gauge parameter map", gauge_map),
        ("higgs identities", higgs),
        ("'t Hooft and Jacobi", structures),
        ("confinement demo", confinement),
        ("cli determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("[FAIL] {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("criteria failed: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all {} criteria passed", criteria.len());
}
