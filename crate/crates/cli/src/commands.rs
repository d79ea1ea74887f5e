use std::collections::BTreeMap;
use std::str::FromStr;

use gaugekit::abelianize::{
    abelianize_so3, abelianize_so4, epsilon_limit_check, higgs_abelian_candidate,
    so4_pre_redefinition, solve_parameter_map, AbelianSet, AbelianizeError, BracketStatus,
    IdentityCheck, So4Variant, WeakOptions,
};
use gaugekit::expr::{BigRational, RationalFunction, Valuation};
use gaugekit::gauge::{
    conjecture_probe, fp_determinant, parse_reduction, residual_action_check,
    residual_null_space, simulate_gg, so3_chain_reduction, FpDeterminant, FpStatus, GGConfig,
    GaugeChoice, GaugeError, LastCondition,
};
use gaugekit::lie::{check_structure, check_thooft, so3_structure, so4_structure, thooft_eta};
use gaugekit::models::{verify_auxiliary_closure, verify_closure, ConstraintModel, LMode, PhasePoint};
use gaugekit::par::Execution;
use gaugekit::poisson::CanonicalChart;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model_file::Loaded;
use crate::report::{Check, ReportDocument, Status};

/// Failures that are the caller's fault; mapped to exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

/// Long expressions are summarized so reports stay readable.
const MAX_EXPR_CHARS: usize = 4000;

fn show(chart: &CanonicalChart, f: &RationalFunction) -> String {
    let s = chart.render(f);
    if s.len() > MAX_EXPR_CHARS {
        format!("<{} chars omitted>", s.len())
    } else {
        s
    }
}

fn point_map(chart: &CanonicalChart, p: &PhasePoint) -> BTreeMap<String, String> {
    p.named(chart.symbols())
        .into_iter()
        .map(|(k, v)| (k, v.to_string()))
        .collect()
}

fn identity_check(chart: &CanonicalChart, id: &IdentityCheck) -> Check {
    let c = Check::new(&id.name, Status::from_bool(id.holds()));
    if id.holds() {
        c
    } else {
        c.value("residual", show(chart, &id.residual))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Closure,
    Structure,
}

pub fn verify(loaded: &Loaded, suite: Suite, seed: u64) -> ReportDocument {
    let m = match loaded {
        Loaded::InvalidAlgebra { name, algebra, report } => {
            let mut doc = ReportDocument::new(name, "verify", seed);
            let mut c = Check::new("structure constants: antisymmetry and Jacobi", Status::Fail)
                .value("dim", algebra.dim())
                .value("jacobi tuples checked", report.jacobi_tuples_checked);
            if let Some(t) = report.antisymmetry_violation {
                c = c.value("antisymmetry violation", fmt_tuple(&[t.0, t.1, t.2]));
            }
            if let Some(t) = report.jacobi_violation {
                c = c.value("jacobi violation", fmt_tuple(&[t.0, t.1, t.2, t.3]));
            }
            doc.push(c);
            return doc;
        }
        Loaded::Model(m) => m,
    };
    let mut doc = ReportDocument::new(&m.name, "verify", seed);
    let higgs = m.chart.dim() == 4 && m.len() == 3;
    if matches!(suite, Suite::All | Suite::Structure) {
        let r = check_structure(&m.algebra);
        doc.push(
            Check::new("structure constants: antisymmetry and Jacobi", Status::from_bool(r.passed()))
                .value("dim", m.algebra.dim())
                .value("jacobi tuples checked", r.jacobi_tuples_checked),
        );
        if higgs {
            let t = check_thooft(&thooft_eta());
            doc.push(
                Check::new("'t Hooft symbols: commutation identity", Status::from_bool(t.passed()))
                    .value("tuples checked", t.tuples_checked),
            );
        }
    }
    if matches!(suite, Suite::All | Suite::Closure) {
        let r = verify_closure(m);
        let mut c = Check::new("closure {phi_a, phi_b} = s f_abc phi_c", Status::from_bool(r.passed()))
            .value("pairs", r.entries.len())
            .value("bracket scale", &m.bracket_scale);
        for e in r.failures() {
            c = c.value(
                format!("residual ({}, {})", e.a + 1, e.b + 1),
                show(&m.chart, &e.residual),
            );
        }
        doc.push(c);
        if m.bracket_scale != gaugekit::expr::rat(1) {
            doc.push(
                Check::new("bracket scale", Status::Info)
                    .note(format!("brackets close with scale {}", m.bracket_scale)),
            );
        }
        if m.l_mode == LMode::AdjointAuxiliary && !higgs {
            let r = verify_auxiliary_closure(m);
            doc.push(
                Check::new("auxiliary generators {L_a, L_b} = f_abc L_c", Status::from_bool(r.passed()))
                    .value("pairs", r.entries.len()),
            );
        }
    }
    doc
}

fn fmt_tuple(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|x| (x + 1).to_string()).collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ShiftVariant {
    Printed,
    Flipped,
}

pub struct AbelianizeArgs {
    pub chart: usize,
    pub variant: ShiftVariant,
    pub emit_c_matrix: bool,
    pub weak_samples: usize,
    pub gauge_map: bool,
}

enum Flavor {
    So3,
    So4,
    Higgs,
}

fn flavor(m: &ConstraintModel) -> Option<Flavor> {
    if m.chart.dim() == 4 && m.len() == 3 {
        Some(Flavor::Higgs)
    } else if m.algebra == so3_structure() {
        Some(Flavor::So3)
    } else if m.algebra == so4_structure() {
        Some(Flavor::So4)
    } else {
        None
    }
}

fn require_model(loaded: &Loaded) -> Result<&ConstraintModel, UsageError> {
    match loaded {
        Loaded::Model(m) => Ok(m),
        Loaded::InvalidAlgebra { report, .. } => Err(UsageError(format!(
            "structure constants fail validation ({report:?}); run `verify` for details"
        ))),
    }
}

fn push_set(doc: &mut ReportDocument, m: &ConstraintModel, set: &AbelianSet, args: &AbelianizeArgs, opts: &WeakOptions) {
    let chart = &m.chart;
    let mut psis = Check::new("abelian set", Status::Info);
    for (n, p) in set.names.iter().zip(&set.psis) {
        psis = psis.value(n, show(chart, p));
    }
    for (i, c) in set.chart_conditions.iter().enumerate() {
        psis = psis.value(format!("chart condition {}", i + 1), format!("{} != 0", show(chart, c)));
    }
    doc.push(psis);
    for id in &set.identities {
        doc.push(identity_check(chart, id));
    }
    let eq = set.equivalence_residuals(&m.constraints);
    doc.push(Check::new("psi = C phi", Status::from_bool(eq.iter().all(|r| r.is_zero()))));
    if args.emit_c_matrix {
        let mut c = Check::new("C matrix", Status::Info);
        for i in 0..set.c_matrix.rows() {
            for j in 0..set.c_matrix.cols() {
                c = c.value(format!("C[{}][{}]", i + 1, j + 1), show(chart, &set.c_matrix[(i, j)]));
            }
        }
        doc.push(c);
    }
    match set.det_c_samples(m, opts) {
        Ok(samples) => {
            let ok = !samples.is_empty() && samples.iter().all(|(_, d)| *d != BigRational::from_integer(0.into()));
            let mut c = Check::new("det C nonzero at surface points", Status::from_bool(ok))
                .value("points", samples.len());
            if let Some((p, d)) = samples.first() {
                c = c.value("first value", d).point(point_map(chart, p));
            }
            doc.push(c);
        }
        Err(e) => doc.push(Check::new("det C nonzero at surface points", Status::Fail).note(e.to_string())),
    }
    for e in &set.brackets {
        let name = format!("{{{}, {}}}", set.names[e.a], set.names[e.b]);
        let mut c = Check::new(name, Status::from_bool(e.status.vanishes()))
            .value("status", e.status.label());
        match &e.status {
            BracketStatus::IdenticallyZero => {}
            BracketStatus::WeaklyZero { witnesses, combination } => {
                c = c.value("witness points", witnesses);
                if let Some(coeffs) = combination {
                    for (k, (g, coef)) in set.weak_generators.iter().zip(coeffs).enumerate() {
                        c = c.value(format!("coefficient {} of {}", k + 1, set.names[*g]), show(chart, coef));
                    }
                }
            }
            BracketStatus::Nonzero { point, value } => {
                c = c.value("value at witness", value).point(point_map(chart, point));
            }
        }
        doc.push(c);
    }
}

pub fn abelianize(loaded: &Loaded, args: &AbelianizeArgs, seed: u64) -> Result<ReportDocument, UsageError> {
    let m = require_model(loaded)?;
    let mut doc = ReportDocument::new(&m.name, "abelianize", seed);
    let opts = WeakOptions {
        samples: args.weak_samples,
        ..WeakOptions::seeded(seed)
    };
    let flavor = flavor(m).ok_or_else(|| {
        UsageError("abelianize supports the so(3), so(4) and Higgs models".into())
    })?;
    let result = match flavor {
        Flavor::So3 => abelianize_so3(m, args.chart, &opts),
        Flavor::Higgs => higgs_abelian_candidate(m, &opts),
        Flavor::So4 => {
            let variant = match args.variant {
                ShiftVariant::Printed => So4Variant::Printed,
                ShiftVariant::Flipped => So4Variant::Flipped,
            };
            match so4_pre_redefinition(m) {
                Ok(stage) => {
                    doc.push(
                        Check::new("pre-redefinition coefficients", Status::Info)
                            .value("R1", show(&m.chart, &stage.r1))
                            .value("R2", show(&m.chart, &stage.r2))
                            .value("shift variant", variant.as_str()),
                    );
                    abelianize_so4(m, variant, &opts)
                }
                Err(e) => Err(e),
            }
        }
    };
    let set = match result {
        Ok(set) => set,
        Err(AbelianizeError::LIsZero) => {
            doc.push(Check::new("abelianization", Status::Fail).note(
                "L is identically zero, so no Abelian equivalent exists; \
                 inspect the residual symmetry with the `residual` command",
            ));
            return Ok(doc);
        }
        Err(AbelianizeError::NotApplicable(msg)) => return Err(UsageError(msg)),
        Err(e) => {
            doc.push(Check::new("abelianization", Status::Fail).note(e.to_string()));
            return Ok(doc);
        }
    };
    push_set(&mut doc, m, &set, args, &opts);

    if let Flavor::So4 = flavor {
        match epsilon_limit_check(m) {
            Ok(r) => r.checks.iter().for_each(|id| doc.push(identity_check(&m.chart, id))),
            Err(e) => doc.push(Check::new("eps limits", Status::Fail).note(e.to_string())),
        }
        if args.gauge_map {
            match solve_parameter_map(m, &set, &[1, 2, 4, 5], &opts) {
                Ok(map) => {
                    for id in &map.coordinate_checks {
                        doc.push(identity_check(&map.chart, id));
                    }
                    doc.push(
                        Check::new("delta_A p3 = delta_nA p3 on the surface", Status::from_bool(map.p3_matches_on_surface()))
                            .value("points", map.p3_samples.len()),
                    );
                    let mut other = Check::new("other momenta residuals", Status::Info);
                    for (name, vals) in &map.other_momenta {
                        let zeros = vals.iter().filter(|v| **v == BigRational::from_integer(0.into())).count();
                        other = other.value(name, format!("{zeros}/{} points zero", vals.len()));
                    }
                    doc.push(other);
                }
                Err(e) => doc.push(Check::new("gauge parameter map", Status::Fail).note(e.to_string())),
            }
        }
    }
    Ok(doc)
}

pub struct FpArgs {
    pub gauge: Option<Vec<String>>,
    pub omega_n: LastCondition,
    pub reduce: Option<Vec<String>>,
    pub samples: usize,
}

fn fp_check(m: &ConstraintModel, label: &str, gauge: &GaugeChoice, fp: &FpDeterminant, primary: bool) -> Check {
    let chart = &m.chart;
    let status = fp.status();
    let (st, note) = if !fp.samples_agree() {
        (Status::Fail, "reduced determinant disagrees with direct evaluation".to_string())
    } else {
        match status {
            FpStatus::Nonvanishing => (Status::Pass, "nonvanishing on the combined surface".to_string()),
            _ if m.l_is_zero() => (Status::Info, "non-Abelianizable signature: zero at every surface point".to_string()),
            FpStatus::WeaklyZero => (
                Status::Info,
                "weakly zero: a gauge row is a combination of constraints, so this choice cannot fix the gauge".to_string(),
            ),
            FpStatus::IdenticallyZero => (Status::Info, "identically zero".to_string()),
        }
    };
    let mut c = Check::new(format!("fp determinant [{label}]"), st)
        .note(note)
        .value("gauge", format!("({})", gauge.names.join(", ")))
        .value("raw", show(chart, &fp.raw))
        .value("reduced", show(chart, &fp.reduced))
        .value("status", status.as_str())
        .value("points", fp.samples.len())
        .value("primary", primary);
    let nonzero = fp.samples.iter().filter(|s| s.raw != BigRational::from_integer(0.into())).count();
    c = c.value("nonzero at points", nonzero);
    if let Some(s) = fp.samples.first() {
        c = c.value("first value", &s.raw).point(point_map(chart, &s.point));
    }
    c
}

pub fn fp_det(loaded: &Loaded, args: &FpArgs, seed: u64) -> Result<ReportDocument, UsageError> {
    let m = require_model(loaded)?;
    let mut doc = ReportDocument::new(&m.name, "fp-det", seed);
    let opts = WeakOptions {
        samples: args.samples,
        ..WeakOptions::seeded(seed)
    };
    let usage = |e: GaugeError| UsageError(e.to_string());
    let reduction = match &args.reduce {
        Some(steps) => {
            let refs: Vec<&str> = steps.iter().map(String::as_str).collect();
            parse_reduction(m, &refs).map_err(usage)?
        }
        None if args.gauge.is_none() && m.algebra == so3_structure() && m.chart.dim() == 3 => {
            so3_chain_reduction(m).map_err(usage)?
        }
        None => Vec::new(),
    };
    if !reduction.is_empty() {
        let steps: Vec<String> = reduction
            .iter()
            .map(|(s, f)| format!("{} = {}", m.chart.symbols().name(*s), show(&m.chart, f)))
            .collect();
        doc.push(Check::new("reduction", Status::Info).value("steps", steps.join("; ")));
    }
    let mut runs: Vec<(String, GaugeChoice, bool)> = Vec::new();
    match &args.gauge {
        Some(texts) => {
            let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
            runs.push(("custom".into(), GaugeChoice::parse(m, &refs).map_err(usage)?, true));
        }
        None => {
            for last in [LastCondition::Momentum, LastCondition::Constraint] {
                let g = GaugeChoice::coordinate_chain(m, last).map_err(usage)?;
                runs.push((format!("last = {}", last.as_str()), g, last == args.omega_n));
            }
        }
    }
    for (label, gauge, primary) in &runs {
        match fp_determinant(m, gauge, &reduction, &opts) {
            Ok(fp) => doc.push(fp_check(m, label, gauge, &fp, *primary)),
            Err(e @ (GaugeError::UnsupportedCondition(_) | GaugeError::CountMismatch { .. })) => {
                return Err(usage(e))
            }
            Err(e) => doc.push(Check::new(format!("fp determinant [{label}]"), Status::Fail).note(e.to_string())),
        }
    }
    Ok(doc)
}

pub struct ResidualArgs {
    pub point: Option<Vec<String>>,
    pub random: Option<usize>,
}

fn parse_point(m: &ConstraintModel, bindings: &[String]) -> Result<PhasePoint, UsageError> {
    let mut val = Valuation::new();
    for b in bindings {
        let (k, v) = b
            .split_once('=')
            .ok_or_else(|| UsageError(format!("expected name=value, got {b:?}")))?;
        let s = m
            .chart
            .symbol(k.trim())
            .filter(|&s| m.chart.is_phase_space(s))
            .ok_or_else(|| UsageError(format!("{:?} is not a phase-space symbol", k.trim())))?;
        let x = BigRational::from_str(v.trim())
            .map_err(|_| UsageError(format!("{:?} is not an exact rational", v.trim())))?;
        val.set(s, x);
    }
    let missing: Vec<&str> = m
        .chart
        .phase_space()
        .into_iter()
        .filter(|&s| !val.is_bound(s))
        .map(|s| m.chart.symbols().name(s))
        .collect();
    if !missing.is_empty() {
        return Err(UsageError(format!("underspecified point: missing {}", missing.join(", "))));
    }
    Ok(PhasePoint::new(val))
}

fn fmt_vec(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn residual(loaded: &Loaded, args: &ResidualArgs, seed: u64) -> Result<ReportDocument, UsageError> {
    let m = require_model(loaded)?;
    if args.point.is_none() && args.random.is_none() {
        return Err(UsageError("give --point or --random".into()));
    }
    let mut doc = ReportDocument::new(&m.name, "residual", seed);
    if let Some(bindings) = &args.point {
        let point = parse_point(m, bindings)?;
        let ns = residual_null_space(m, &point).map_err(|e| UsageError(e.to_string()))?;
        let mut c = Check::new("rank + I = A", Status::from_bool(ns.rank + ns.nullity == m.len()))
            .value("rank", ns.rank)
            .value("I", ns.nullity)
            .value("A", m.len())
            .point(point_map(&m.chart, &point));
        for (i, v) in ns.null_vectors.iter().enumerate() {
            c = c.value(format!("null vector {}", i + 1), fmt_vec(v));
        }
        doc.push(c);
        if ns.is_stationary() {
            doc.push(Check::new("stationary point", Status::Info).note("every constraint gradient vanishes"));
        }
        for (i, v) in ns.null_vectors.iter().enumerate() {
            match residual_action_check(m, &point, v) {
                Ok(a) => {
                    let mut c = Check::new(format!("residual action of null vector {}", i + 1), Status::from_bool(a.passed()))
                        .value("test functions", a.functions_checked)
                        .value("max abs", &a.max_abs);
                    if let Some((f, x)) = &a.witness {
                        c = c.value("witness", format!("{f} -> {x}"));
                    }
                    doc.push(c);
                }
                Err(e) => doc.push(Check::new("residual action", Status::Fail).note(e.to_string())),
            }
        }
    }
    if let Some(trials) = args.random {
        match conjecture_probe(&m.algebra, trials, seed, Execution::default()) {
            Ok(r) => {
                let mut h = Check::new("I distribution", Status::Info).value("trials", trials);
                for (k, n) in &r.histogram {
                    h = h.value(format!("I = {k}"), n);
                }
                doc.push(h);
                let status = match r.algebra_rank {
                    Some(_) => Status::from_bool(r.all_match()),
                    None => Status::Info,
                };
                let mut c = Check::new("I equals the algebra rank", status)
                    .value("matching trials", r.matches_rank());
                if let Some(k) = r.algebra_rank {
                    c = c.value("algebra rank", k);
                }
                doc.push(c);
                doc.push(Check::new("rank + I = A in every trial", Status::from_bool(r.rank_nullity_holds())));
                doc.push(Check::new(
                    "closed-form null vectors lie in the null space",
                    Status::from_bool(r.trials.iter().all(|t| t.known_vectors_verified)),
                ));
            }
            Err(e) => doc.push(Check::new("probe", Status::Fail).note(e.to_string())),
        }
    }
    Ok(doc)
}

pub struct GgArgs {
    pub a: f64,
    pub dt: f64,
    pub steps: usize,
    pub q: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
}

pub const ENERGY_DRIFT_BOUND: f64 = 1e-6;
pub const ANGULAR_DRIFT_BOUND: f64 = 1e-10;
pub const ORBIT_TOLERANCE: f64 = 1e-12;

fn triple(v: &[f64], what: &str) -> Result<[f64; 3], UsageError> {
    <[f64; 3]>::try_from(v).map_err(|_| UsageError(format!("{what} needs three components")))
}

pub fn gg_config(args: &GgArgs, seed: u64) -> Result<GGConfig, UsageError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |scale: f64| -> [f64; 3] { [0, 1, 2].map(|_| rng.gen_range(-scale..scale)) };
    let q0 = match &args.q {
        Some(v) => triple(v, "--q")?,
        None => draw(1.0),
    };
    let p0 = match &args.p {
        Some(v) => triple(v, "--p")?,
        None => draw(0.3),
    };
    if q0.iter().chain(&p0).chain([&args.a, &args.dt]).any(|x| !x.is_finite()) {
        return Err(UsageError("numeric arguments must be finite".into()));
    }
    Ok(GGConfig {
        vacuum_radius: args.a,
        timestep: args.dt,
        steps: args.steps,
        q0,
        p0,
    })
}

pub fn demo_gg(cfg: &GGConfig, seed: u64) -> Result<(ReportDocument, gaugekit::gauge::Trajectory), UsageError> {
    let traj = match simulate_gg(cfg) {
        Ok(t) => t,
        Err(e @ GaugeError::InvalidConfig(_)) => return Err(UsageError(e.to_string())),
        Err(e) => {
            let mut doc = ReportDocument::new("georgi-glashow", "demo-gg", seed);
            doc.push(Check::new("integration", Status::Fail).note(e.to_string()));
            return Ok((doc, gaugekit::gauge::Trajectory { states: Vec::new() }));
        }
    };
    let mut doc = ReportDocument::new("georgi-glashow", "demo-gg", seed);
    let f = |x: f64| format!("{x:e}");
    let first = traj.states[0];
    let last = *traj.last();
    doc.push(
        Check::new("leapfrog run", Status::Info)
            .value("a", f(cfg.vacuum_radius))
            .value("dt", f(cfg.timestep))
            .value("steps", cfg.steps)
            .value("q0", format!("({}, {}, {})", f(first.q[0]), f(first.q[1]), f(first.q[2])))
            .value("p0", format!("({}, {}, {})", f(first.p[0]), f(first.p[1]), f(first.p[2])))
            .value("final q", format!("({}, {}, {})", f(last.q[0]), f(last.q[1]), f(last.q[2])))
            .value("initial energy", f(first.energy)),
    );
    let e = traj.energy_drift();
    doc.push(
        Check::new("relative energy drift", Status::from_bool(e <= ENERGY_DRIFT_BOUND))
            .value("drift", f(e))
            .value("bound", f(ENERGY_DRIFT_BOUND)),
    );
    let l = traj.angular_momentum_drift();
    doc.push(
        Check::new("relative angular momentum drift", Status::from_bool(l <= ANGULAR_DRIFT_BOUND))
            .value("drift", f(l))
            .value("bound", f(ANGULAR_DRIFT_BOUND)),
    );
    Ok((doc, traj))
}

pub struct OrbitArgs {
    pub point: Vec<f64>,
    pub axis: Vec<f64>,
    pub samples: usize,
}

pub fn orbit_average(args: &OrbitArgs, seed: u64) -> Result<ReportDocument, UsageError> {
    let chart = CanonicalChart::standard(3);
    if args.point.len() != 6 {
        return Err(UsageError("--point needs q1,q2,q3,p1,p2,p3".into()));
    }
    let axis = triple(&args.axis, "--axis")?;
    let mut values = BTreeMap::new();
    for (s, x) in chart.phase_space().into_iter().zip(&args.point) {
        values.insert(s, *x);
    }
    let parse = |t: &str| chart.parse(t).expect("fixed observable");
    let avg = |t: &str| {
        gaugekit::gauge::orbit_average(&parse(t), &chart, &values, axis, args.samples)
            .map_err(|e| UsageError(e.to_string()))
    };
    let (z1, z2, zz) = (avg("q1")?, avg("q2")?, avg("q1^2 + q2^2")?);
    let pointwise = gaugekit::gauge::eval_f64(&parse("q1^2 + q2^2"), &values).map_err(|e| UsageError(e.to_string()))?;
    let f = |x: f64| format!("{x:e}");
    let mut doc = ReportDocument::new("georgi-glashow", "demo-gg orbit-average", seed);
    doc.push(
        Check::new("<z> vanishes on the orbit", Status::from_bool(z1.abs().max(z2.abs()) <= ORBIT_TOLERANCE))
            .value("<q1>", f(z1))
            .value("<q2>", f(z2))
            .value("samples", args.samples)
            .value("tolerance", f(ORBIT_TOLERANCE)),
    );
    doc.push(
        Check::new("<z zbar> equals its pointwise value", Status::from_bool((zz - pointwise).abs() <= ORBIT_TOLERANCE))
            .value("<q1^2 + q2^2>", f(zz))
            .value("pointwise", f(pointwise)),
    );
    Ok(doc)
}
