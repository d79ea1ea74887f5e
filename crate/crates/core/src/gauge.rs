//! Faddeev-Popov determinants, residual symmetries at degenerate points,
//! the rank probe, and the floating-point Georgi-Glashow demo.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::io::{self, Write};

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::abelianize::{sample_points, WeakOptions};
use crate::expr::{ExprError, Polynomial, RationalFunction, Symbol, Valuation};
use crate::lie::{known_rank, so4_structure, StructureConstants};
use crate::models::{
    build_f_model, rref, ConstraintModel, LMode, ModelError, PhasePoint, SurfaceError,
    SurfaceSampler, SurfaceSpec,
};
use crate::par::{self, Execution};
use crate::poisson::{bracket_matrix, det, jacobian, CanonicalChart, ExprMatrix, PoissonError};

#[derive(Debug, Error)]
pub enum GaugeError {
    #[error("gauge has {got} conditions but the model has {expected} constraints")]
    CountMismatch { expected: usize, got: usize },
    #[error("gauge condition {0} is neither a single coordinate value nor affine in the momenta")]
    UnsupportedCondition(String),
    #[error("point leaves {0} unbound")]
    UnboundPoint(String),
    #[error("non-finite state at step {step}")]
    NonFiniteState { step: usize },
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which function closes the coordinate chain `q1..q_{A-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LastCondition {
    /// `p1`: the reading under which the determinant is nonvanishing.
    Momentum,
    /// `phi1`: literal reading; its matrix row is a combination of constraints.
    Constraint,
}

impl LastCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            LastCondition::Momentum => "p1",
            LastCondition::Constraint => "phi1",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeChoice {
    pub names: Vec<String>,
    pub conditions: Vec<RationalFunction>,
}

impl GaugeChoice {
    pub fn new(
        m: &ConstraintModel,
        names: Vec<String>,
        conditions: Vec<RationalFunction>,
    ) -> Result<Self, GaugeError> {
        if conditions.len() != m.len() || names.len() != conditions.len() {
            return Err(GaugeError::CountMismatch {
                expected: m.len(),
                got: conditions.len(),
            });
        }
        Ok(GaugeChoice { names, conditions })
    }

    /// Parses each text with [`ConstraintModel::parse`].
    pub fn parse(m: &ConstraintModel, texts: &[&str]) -> Result<Self, GaugeError> {
        let conditions = texts.iter().map(|t| m.parse(t)).collect::<Result<Vec<_>, _>>()?;
        Self::new(m, texts.iter().map(|t| t.to_string()).collect(), conditions)
    }

    /// `(q1, .., q_{A-1}, last)`; needs at least `A - 1` coordinates.
    pub fn coordinate_chain(m: &ConstraintModel, last: LastCondition) -> Result<Self, GaugeError> {
        let n = m.len();
        if n == 0 || m.chart.dim() + 1 < n {
            return Err(GaugeError::CountMismatch { expected: n, got: m.chart.dim() + 1 });
        }
        let mut texts: Vec<String> = (1..n).map(|i| format!("q{i}")).collect();
        texts.push(match last {
            LastCondition::Momentum => "p1".into(),
            LastCondition::Constraint => m.constraint_names[0].clone(),
        });
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        Self::parse(m, &refs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpStatus {
    IdenticallyZero,
    /// Nonzero as a function, zero at every sampled point.
    WeaklyZero,
    Nonvanishing,
}

impl FpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FpStatus::IdenticallyZero => "identically-zero",
            FpStatus::WeaklyZero => "weakly-zero",
            FpStatus::Nonvanishing => "nonvanishing",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FpSample {
    pub point: PhasePoint,
    pub raw: BigRational,
    pub reduced: BigRational,
}

#[derive(Debug, Clone)]
pub struct FpDeterminant {
    /// Entries `{omega_a, phi_b}`.
    pub matrix: ExprMatrix,
    pub raw: RationalFunction,
    pub reduced: RationalFunction,
    pub samples: Vec<FpSample>,
}

impl FpDeterminant {
    pub fn samples_agree(&self) -> bool {
        self.samples.iter().all(|s| s.raw == s.reduced)
    }

    pub fn vanishes_on_samples(&self) -> bool {
        self.samples.iter().all(|s| s.raw.is_zero())
    }

    pub fn status(&self) -> FpStatus {
        if self.raw.is_zero() {
            FpStatus::IdenticallyZero
        } else if self.vanishes_on_samples() {
            FpStatus::WeaklyZero
        } else {
            FpStatus::Nonvanishing
        }
    }
}

/// Splits gauge conditions into pinned coordinate values and equations for
/// the surface sampler.
fn split_conditions(
    chart: &CanonicalChart,
    gauge: &GaugeChoice,
) -> Result<(Vec<(Symbol, BigRational)>, Vec<RationalFunction>), GaugeError> {
    let mut pins = Vec::new();
    let mut equations = Vec::new();
    for (name, w) in gauge.names.iter().zip(&gauge.conditions) {
        let syms = w.symbols();
        let momentum_free = syms.iter().all(|&s| !chart.is_momentum(s));
        match (momentum_free, w.as_polynomial(), syms.as_slice()) {
            (true, Some(p), &[s]) if p.total_degree() == 1 => {
                // c x + d = 0
                let c = p.coefficient_of(s, 1).as_constant().expect("degree one");
                let d = p.coefficient_of(s, 0).as_constant().unwrap_or_default();
                pins.push((s, -d / c));
            }
            (true, _, _) => return Err(GaugeError::UnsupportedCondition(name.clone())),
            _ => equations.push(w.clone()),
        }
    }
    Ok((pins, equations))
}

/// `det {omega_a, phi_b}`, reduced by applying `reduction` substitutions in
/// order, and both forms evaluated at points of the combined surface
/// `phi = omega = 0`.
pub fn fp_determinant(
    m: &ConstraintModel,
    gauge: &GaugeChoice,
    reduction: &[(Symbol, RationalFunction)],
    opts: &WeakOptions,
) -> Result<FpDeterminant, GaugeError> {
    if gauge.conditions.len() != m.len() {
        return Err(GaugeError::CountMismatch {
            expected: m.len(),
            got: gauge.conditions.len(),
        });
    }
    let matrix = bracket_matrix(&gauge.conditions, &m.constraints, &m.chart);
    let raw = det(&matrix)?;
    let mut reduced = raw.clone();
    for step in reduction {
        reduced = reduced.substitute(std::slice::from_ref(step))?;
    }

    let (mut pins, extra) = split_conditions(&m.chart, gauge)?;
    // Constant steps name the chart piece; sample inside it.
    for (s, f) in reduction {
        if let Some(v) = f.as_constant() {
            if !pins.iter().any(|(p, _)| p == s) {
                pins.push((*s, v));
            }
        }
    }
    let mut equations = m.constraints.clone();
    equations.extend(extra);
    let mut nonvanishing: Vec<RationalFunction> = Vec::new();
    for f in reduction.iter().map(|(_, f)| f).chain([&reduced]) {
        for (g, _) in f.denominator_factors() {
            nonvanishing.push(RationalFunction::from_poly(g.clone()));
        }
    }
    let mut spec = SurfaceSpec::new(equations).nonvanishing(&nonvanishing);
    for (s, v) in pins {
        spec = spec.pin(s, v);
    }
    let sampler = SurfaceSampler::new(&m.chart, spec)?;
    let points = sample_points(&sampler, opts)?;
    let samples = points
        .into_iter()
        .map(|point| {
            Ok(FpSample {
                raw: point.eval(&raw)?,
                reduced: point.eval(&reduced)?,
                point,
            })
        })
        .collect::<Result<_, ExprError>>()?;
    Ok(FpDeterminant {
        matrix,
        raw,
        reduced,
        samples,
    })
}

/// Parses `name=expr` steps for [`fp_determinant`].
pub fn parse_reduction(
    m: &ConstraintModel,
    steps: &[&str],
) -> Result<Vec<(Symbol, RationalFunction)>, GaugeError> {
    steps
        .iter()
        .map(|step| {
            let (lhs, rhs) = step
                .split_once('=')
                .ok_or_else(|| ExprError::Syntax { position: 0, message: format!("expected name=expr in {step:?}") })?;
            let s = m
                .chart
                .symbol(lhs.trim())
                .ok_or_else(|| ExprError::UnknownSymbol { name: lhs.trim().to_string(), position: 0 })?;
            Ok((s, m.parse(rhs)?))
        })
        .collect()
}

/// The reduction used for the coordinate chain of a three-generator model on
/// the chart `q3 != 0`: `q1 = q2 = 0`, then `p2 = L1/q3`, `p1 = -L2/q3`.
///
/// With the auxiliary realization the surface forces `L2 = L3 = 0`, and
/// `qp . L = 0` then kills `L1` unless `qp1 = 0`, so that value is added.
pub fn so3_chain_reduction(m: &ConstraintModel) -> Result<Vec<(Symbol, RationalFunction)>, GaugeError> {
    let mut steps = vec!["q1=0", "q2=0"];
    if m.l_mode == LMode::AdjointAuxiliary {
        steps.push("qp1=0");
    }
    steps.extend(["p2=L1/q3", "p1=-L2/q3"]);
    parse_reduction(m, &steps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullSpaceResult {
    pub rank: usize,
    /// Basis of `lambda` with `lambda . dphi/dz = 0` at the point.
    pub null_vectors: Vec<Vec<BigRational>>,
    pub nullity: usize,
}

impl NullSpaceResult {
    pub fn is_stationary(&self) -> bool {
        self.rank == 0
    }

    /// Whether `v` lies in the span of the null vectors.
    pub fn contains(&self, v: &[BigRational]) -> bool {
        if v.len() != self.null_vectors.first().map_or(v.len(), Vec::len) {
            return false;
        }
        let mut rows: Vec<Vec<BigRational>> = self.null_vectors.clone();
        rows.push(v.to_vec());
        rank_of(rows, v.len()) == self.nullity
    }
}

fn rank_of(mut rows: Vec<Vec<BigRational>>, cols: usize) -> usize {
    rref(&mut rows, cols).len()
}

/// Exact left null space of the constraint Jacobian at `point`.
pub fn residual_null_space(
    m: &ConstraintModel,
    point: &PhasePoint,
) -> Result<NullSpaceResult, GaugeError> {
    let j = jacobian(&m.constraints, &m.chart).eval(point.valuation())?;
    let a = m.len();
    let d = m.chart.phase_space().len();
    // Rows of J^T; its null space holds the left null vectors of J.
    let mut jt: Vec<Vec<BigRational>> = (0..d).map(|c| (0..a).map(|r| j[r][c].clone()).collect()).collect();
    let pivots = rref(&mut jt, a);
    let rank = pivots.len();
    let free: Vec<usize> = (0..a).filter(|c| !pivots.contains(c)).collect();
    let null_vectors: Vec<Vec<BigRational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); a];
            v[f] = BigRational::from_integer(1.into());
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -jt[row][f].clone();
            }
            v
        })
        .collect();
    Ok(NullSpaceResult {
        rank,
        nullity: free.len(),
        null_vectors,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionCheck {
    pub functions_checked: usize,
    pub max_abs: BigRational,
    /// Rendered test function and `delta_lambda` of it, when nonzero.
    pub witness: Option<(String, BigRational)>,
}

impl ActionCheck {
    pub fn passed(&self) -> bool {
        self.max_abs.is_zero()
    }
}

/// `sum_a lambda_a {eta, phi_a}` at `point` for every phase-space symbol and
/// every quadratic monomial in them.
pub fn residual_action_check(
    m: &ConstraintModel,
    point: &PhasePoint,
    lambda: &[BigRational],
) -> Result<ActionCheck, GaugeError> {
    if lambda.len() != m.len() {
        return Err(GaugeError::CountMismatch { expected: m.len(), got: lambda.len() });
    }
    let z = m.chart.phase_space();
    // {eta, phi_a} is linear in the derivatives of eta, so only the values
    // {z_k, sum_a lambda_a phi_a} at the point are needed.
    let generator: RationalFunction = lambda
        .iter()
        .zip(&m.constraints)
        .map(|(l, phi)| phi.scale(l))
        .sum();
    let mut flow: BTreeMap<Symbol, BigRational> = BTreeMap::new();
    for &(q, p) in m.chart.pairs() {
        flow.insert(q, point.eval(&generator.diff(p))?);
        flow.insert(p, point.eval(&-generator.diff(q))?);
    }
    let mut tests: Vec<RationalFunction> = z.iter().map(|&s| RationalFunction::var(s)).collect();
    for i in 0..z.len() {
        for k in i..z.len() {
            tests.push(&RationalFunction::var(z[i]) * &RationalFunction::var(z[k]));
        }
    }
    let mut max_abs = BigRational::zero();
    let mut witness = None;
    for eta in &tests {
        let mut v = BigRational::zero();
        for &s in eta.symbols().iter() {
            v += point.eval(&eta.diff(s))? * &flow[&s];
        }
        if v.abs() > max_abs {
            max_abs = v.abs();
            witness = Some((m.chart.render(eta), v));
        }
    }
    Ok(ActionCheck {
        functions_checked: tests.len(),
        max_abs,
        witness,
    })
}

/// Null vectors known in closed form at `p = 0`: `q` for every algebra, plus
/// `(q4, -q5, q6, q1, -q2, q3)` for so(4).
pub fn known_null_vectors(f: &StructureConstants, q: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mut out = vec![q.to_vec()];
    if *f == so4_structure() && q.len() == 6 {
        out.push(vec![
            q[3].clone(),
            -q[4].clone(),
            q[5].clone(),
            q[0].clone(),
            -q[1].clone(),
            q[2].clone(),
        ]);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeTrial {
    pub q: Vec<BigRational>,
    pub rank: usize,
    pub nullity: usize,
    pub known_vectors_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub generators: usize,
    pub algebra_rank: Option<usize>,
    pub trials: Vec<ProbeTrial>,
    /// Nullity -> number of trials.
    pub histogram: BTreeMap<usize, usize>,
}

impl ProbeReport {
    pub fn matches_rank(&self) -> usize {
        self.trials
            .iter()
            .filter(|t| Some(t.nullity) == self.algebra_rank)
            .count()
    }

    pub fn all_match(&self) -> bool {
        !self.trials.is_empty() && self.matches_rank() == self.trials.len()
    }

    pub fn rank_nullity_holds(&self) -> bool {
        self.trials.iter().all(|t| t.rank + t.nullity == self.generators)
    }
}

fn nonzero_draw(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let v = rng.gen_range(-9..=9);
        if v != 0 {
            return v;
        }
    }
}

/// Residual-symmetry count at random `q` (all components nonzero), `p = 0`,
/// `L = 0`. Trial `i` uses stream `i` of `seed`.
pub fn conjecture_probe(
    f: &StructureConstants,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<ProbeReport, GaugeError> {
    let m = build_f_model(f, LMode::Zero)?;
    let results = par::map_range(exec, trials, |i| -> Result<ProbeTrial, GaugeError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let q: Vec<BigRational> = (0..m.chart.dim())
            .map(|_| BigRational::from_integer(nonzero_draw(&mut rng).into()))
            .collect();
        let mut val = Valuation::new();
        for (k, &(qs, ps)) in m.chart.pairs().iter().enumerate() {
            val.set(qs, q[k].clone());
            val.set(ps, BigRational::zero());
        }
        let point = PhasePoint::new(val);
        let ns = residual_null_space(&m, &point)?;
        let known = known_null_vectors(f, &q);
        let known_vectors_verified = known.iter().all(|v| ns.contains(v));
        Ok(ProbeTrial {
            q,
            rank: ns.rank,
            nullity: ns.nullity,
            known_vectors_verified,
        })
    });
    let trials: Vec<ProbeTrial> = results.into_iter().collect::<Result<_, _>>()?;
    let mut histogram = BTreeMap::new();
    for t in &trials {
        *histogram.entry(t.nullity).or_insert(0) += 1;
    }
    Ok(ProbeReport {
        generators: m.len(),
        algebra_rank: known_rank(f),
        trials,
        histogram,
    })
}

/// Binds phase-space symbols by name from `values` (e.g. `[("q3", 2)]`),
/// defaulting the rest to zero.
pub fn point_from_named(
    chart: &CanonicalChart,
    values: &[(&str, BigRational)],
) -> Result<PhasePoint, GaugeError> {
    let mut val = Valuation::new();
    for s in chart.phase_space() {
        val.set(s, BigRational::zero());
    }
    for (name, v) in values {
        let s = chart
            .symbol(name)
            .ok_or_else(|| GaugeError::UnboundPoint((*name).to_string()))?;
        val.set(s, v.clone());
    }
    Ok(PhasePoint::new(val))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GGConfig {
    pub vacuum_radius: f64,
    pub timestep: f64,
    pub steps: usize,
    pub q0: [f64; 3],
    pub p0: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GGState {
    pub step: usize,
    pub q: [f64; 3],
    pub p: [f64; 3],
    pub energy: f64,
    pub angular_momentum: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<GGState>,
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn gg_state(step: usize, q: [f64; 3], p: [f64; 3], radius: f64) -> GGState {
    let r2 = dot(q, q) - radius * radius;
    GGState {
        step,
        q,
        p,
        energy: 0.5 * dot(p, p) + r2 * r2,
        angular_momentum: cross(q, p),
    }
}

impl Trajectory {
    pub fn last(&self) -> &GGState {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Max `|E - E0| / |E0|`; absolute when `E0 = 0`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.states[0].energy;
        let scale = if e0 == 0.0 { 1.0 } else { e0.abs() };
        self.states
            .iter()
            .map(|s| (s.energy - e0).abs() / scale)
            .fold(0.0, f64::max)
    }

    /// Max `|L - L0| / |L0|`; absolute when `L0 = 0`.
    pub fn angular_momentum_drift(&self) -> f64 {
        let l0 = self.states[0].angular_momentum;
        let scale = if norm(l0) == 0.0 { 1.0 } else { norm(l0) };
        self.states
            .iter()
            .map(|s| {
                let l = s.angular_momentum;
                norm([l[0] - l0[0], l[1] - l0[1], l[2] - l0[2]]) / scale
            })
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "step,q1,q2,q3,p1,p2,p3,energy,l1,l2,l3")?;
        for s in &self.states {
            writeln!(
                w,
                "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                s.step,
                s.q[0],
                s.q[1],
                s.q[2],
                s.p[0],
                s.p[1],
                s.p[2],
                s.energy,
                s.angular_momentum[0],
                s.angular_momentum[1],
                s.angular_momentum[2]
            )?;
        }
        Ok(())
    }
}

/// Kick-drift-kick leapfrog for `H = p^2/2 + (q^2 - a^2)^2`.
pub fn simulate_gg(cfg: &GGConfig) -> Result<Trajectory, GaugeError> {
    let dt = cfg.timestep;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(GaugeError::InvalidConfig("timestep must be positive".into()));
    }
    if !cfg.vacuum_radius.is_finite() {
        return Err(GaugeError::InvalidConfig("vacuum radius must be finite".into()));
    }
    let a2 = cfg.vacuum_radius * cfg.vacuum_radius;
    let force = |q: [f64; 3]| {
        let k = -4.0 * (dot(q, q) - a2);
        [k * q[0], k * q[1], k * q[2]]
    };
    let (mut q, mut p) = (cfg.q0, cfg.p0);
    let mut states = Vec::with_capacity(cfg.steps + 1);
    states.push(gg_state(0, q, p, cfg.vacuum_radius));
    let mut f = force(q);
    for step in 1..=cfg.steps {
        for i in 0..3 {
            p[i] += 0.5 * dt * f[i];
            q[i] += dt * p[i];
        }
        f = force(q);
        for i in 0..3 {
            p[i] += 0.5 * dt * f[i];
        }
        let s = gg_state(step, q, p, cfg.vacuum_radius);
        if !(s.energy.is_finite() && q.iter().chain(&p).all(|x| x.is_finite())) {
            return Err(GaugeError::NonFiniteState { step });
        }
        states.push(s);
    }
    Ok(Trajectory { states })
}

fn rotate(v: [f64; 3], axis: [f64; 3], angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    let kxv = cross(axis, v);
    let kv = dot(axis, v) * (1.0 - c);
    [
        v[0] * c + kxv[0] * s + axis[0] * kv,
        v[1] * c + kxv[1] * s + axis[1] * kv,
        v[2] * c + kxv[2] * s + axis[2] * kv,
    ]
}

pub fn eval_poly_f64(p: &Polynomial, values: &BTreeMap<Symbol, f64>) -> Result<f64, GaugeError> {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = c.to_f64().unwrap_or(f64::NAN);
        for (s, e) in m.factors() {
            let x = values.get(&s).ok_or_else(|| GaugeError::UnboundPoint(format!("{s:?}")))?;
            t *= x.powi(e as i32);
        }
        acc += t;
    }
    Ok(acc)
}

pub fn eval_f64(f: &RationalFunction, values: &BTreeMap<Symbol, f64>) -> Result<f64, GaugeError> {
    Ok(eval_poly_f64(f.numerator(), values)? / eval_poly_f64(&f.denominator(), values)?)
}

/// Average of `observable` over `samples` equally spaced rotations about
/// `axis`, applied to the first three coordinates and momenta together.
pub fn orbit_average(
    observable: &RationalFunction,
    chart: &CanonicalChart,
    point: &BTreeMap<Symbol, f64>,
    axis: [f64; 3],
    samples: usize,
) -> Result<f64, GaugeError> {
    if chart.dim() < 3 || samples == 0 {
        return Err(GaugeError::InvalidConfig(
            "needs three coordinates and at least one sample".into(),
        ));
    }
    let len = norm(axis);
    if !(len > 0.0 && len.is_finite()) {
        return Err(GaugeError::InvalidConfig("axis must be a nonzero vector".into()));
    }
    let axis = [axis[0] / len, axis[1] / len, axis[2] / len];
    let get = |s: Symbol| {
        point
            .get(&s)
            .copied()
            .ok_or_else(|| GaugeError::UnboundPoint(chart.symbols().name(s).to_string()))
    };
    let qs: Vec<Symbol> = (0..3).map(|i| chart.q(i)).collect();
    let ps: Vec<Symbol> = (0..3).map(|i| chart.p(i)).collect();
    let q = [get(qs[0])?, get(qs[1])?, get(qs[2])?];
    let p = [get(ps[0])?, get(ps[1])?, get(ps[2])?];
    let mut total = 0.0;
    let mut values = point.clone();
    for k in 0..samples {
        let angle = TAU * k as f64 / samples as f64;
        let (rq, rp) = (rotate(q, axis, angle), rotate(p, axis, angle));
        for i in 0..3 {
            values.insert(qs[i], rq[i]);
            values.insert(ps[i], rp[i]);
        }
        total += eval_f64(observable, &values)?;
    }
    Ok(total / samples as f64)
}
