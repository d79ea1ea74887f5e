//! Constraint-system builders, closure checks and constraint-surface sampling.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::{rat, ExprError, RationalFunction, Symbol, SymbolTable, Valuation};
use crate::lie::{check_structure, so3_structure, thooft_eta, StructureConstants, ValidityReport};
use crate::par::{self, Execution};
use crate::poisson::{poisson_bracket, CanonicalChart, PoissonError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("structure constants fail validation: {0:?}")]
    InvalidStructureConstants(ValidityReport),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// How the generators `L_a` acting on the other degrees of freedom are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LMode {
    Zero,
    /// `L_a = f_abc qp_b pp_c` on an auxiliary canonical block.
    AdjointAuxiliary,
}

impl LMode {
    pub fn as_str(self) -> &'static str {
        match self {
            LMode::Zero => "zero",
            LMode::AdjointAuxiliary => "adjoint-auxiliary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintModel {
    pub name: String,
    pub chart: CanonicalChart,
    pub constraint_names: Vec<String>,
    pub constraints: Vec<RationalFunction>,
    pub algebra: StructureConstants,
    pub bracket_scale: BigRational,
    pub l_mode: LMode,
    /// The `L_a` parts; all zero for `LMode::Zero`.
    pub l_terms: Vec<RationalFunction>,
}

impl ConstraintModel {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn l_is_zero(&self) -> bool {
        self.l_terms.iter().all(RationalFunction::is_zero)
    }

    pub fn symbols(&self) -> &SymbolTable {
        self.chart.symbols()
    }

    pub fn render_constraints(&self) -> Vec<(String, String)> {
        self.constraint_names
            .iter()
            .zip(&self.constraints)
            .map(|(n, c)| (n.clone(), self.chart.render(c)))
            .collect()
    }

    /// Parses over the chart, with `L1..Ln` bound to the realized generators
    /// and the constraint names (`phi1..`) bound to the constraints.
    pub fn parse(&self, text: &str) -> Result<RationalFunction, ExprError> {
        let mut scratch = self.chart.clone();
        let mut bind = Vec::new();
        let named = (1..=self.l_terms.len())
            .map(|i| format!("L{i}"))
            .zip(&self.l_terms)
            .chain(self.constraint_names.iter().cloned().zip(&self.constraints));
        for (name, value) in named {
            if scratch.symbol(&name).is_some_and(|s| scratch.is_phase_space(s)) {
                continue;
            }
            let s = scratch
                .ensure_parameter(&name)
                .map_err(|_| ExprError::DuplicateSymbol(name.clone()))?;
            bind.push((s, value.clone()));
        }
        scratch.parse(text)?.substitute(&bind)
    }
}

fn as_refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

/// `sum_bc f_abc x_b y_c` for each `a`.
fn adjoint_generators(
    f: &StructureConstants,
    x: &[RationalFunction],
    y: &[RationalFunction],
) -> Vec<RationalFunction> {
    (0..f.dim())
        .map(|a| {
            f.row(a)
                .map(|(b, c, v)| (&x[b] * &y[c]).scale(v))
                .fold(RationalFunction::zero(), |acc, t| &acc + &t)
        })
        .collect()
}

/// `phi_a = sum_bc f_abc q_b p_c + L_a` on the chart `q1..qn, p1..pn`
/// (plus `qp1..qpn, pp1..ppn` for the auxiliary realization).
pub fn build_f_model(f: &StructureConstants, l_mode: LMode) -> Result<ConstraintModel, ModelError> {
    let report = check_structure(f);
    if !report.passed() {
        return Err(ModelError::InvalidStructureConstants(report));
    }
    let n = f.dim();
    let names = |prefix: &str| (1..=n).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>();
    let (qs, ps) = (names("q"), names("p"));
    let mut chart = CanonicalChart::new(&as_refs(&qs), &as_refs(&ps))?;
    if l_mode == LMode::AdjointAuxiliary {
        let (qa, pa) = (names("qp"), names("pp"));
        chart = chart.with_auxiliary(&as_refs(&qa), &as_refs(&pa))?;
    }
    let q: Vec<_> = (0..n).map(|i| chart.qv(i)).collect();
    let p: Vec<_> = (0..n).map(|i| chart.pv(i)).collect();
    let orbital = adjoint_generators(f, &q, &p);
    let l_terms = match l_mode {
        LMode::Zero => vec![RationalFunction::zero(); n],
        LMode::AdjointAuxiliary => {
            let aux = chart.auxiliary_pairs();
            let qa: Vec<_> = aux.iter().map(|&(s, _)| RationalFunction::var(s)).collect();
            let pa: Vec<_> = aux.iter().map(|&(_, s)| RationalFunction::var(s)).collect();
            adjoint_generators(f, &qa, &pa)
        }
    };
    let constraints = orbital.iter().zip(&l_terms).map(|(o, l)| o + l).collect();
    Ok(ConstraintModel {
        name: format!("f-model-{n}"),
        chart,
        constraint_names: (1..=n).map(|i| format!("phi{i}")).collect(),
        constraints,
        algebra: f.clone(),
        bracket_scale: BigRational::one(),
        l_mode,
        l_terms,
    })
}

/// Three constraints `phi_i = -p_alpha eta^i_{alpha beta} q_beta` on the
/// chart `q0..q3, p0..p3`, closing on `2 eps_ijk phi_k`.
pub fn build_higgs_model() -> ConstraintModel {
    let chart = CanonicalChart::new(&["q0", "q1", "q2", "q3"], &["p0", "p1", "p2", "p3"])
        .expect("fixed names");
    let eta = thooft_eta();
    let constraints = (0..3)
        .map(|i| {
            let mut acc = RationalFunction::zero();
            for alpha in 0..4 {
                for beta in 0..4 {
                    let e = eta.get(i, alpha, beta);
                    if e != 0 {
                        let t = &chart.pv(alpha) * &chart.qv(beta);
                        acc = &acc - &t.scale(&rat(e as i64));
                    }
                }
            }
            acc
        })
        .collect();
    ConstraintModel {
        name: "higgs".into(),
        chart,
        constraint_names: (1..=3).map(|i| format!("phi{i}")).collect(),
        constraints,
        algebra: so3_structure(),
        bracket_scale: rat(2),
        l_mode: LMode::Zero,
        l_terms: vec![RationalFunction::zero(); 3],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureEntry {
    pub a: usize,
    pub b: usize,
    /// `{phi_a, phi_b} - scale * f_abc phi_c`
    pub residual: RationalFunction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub entries: Vec<ClosureEntry>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.residual.is_zero())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClosureEntry> {
        self.entries.iter().filter(|e| !e.residual.is_zero())
    }
}

/// Residual of `{g_a, g_b} = scale * f_abc g_c` for every pair `a < b`.
pub fn closure_residuals(
    gens: &[RationalFunction],
    f: &StructureConstants,
    scale: &BigRational,
    chart: &CanonicalChart,
    exec: Execution,
) -> ClosureReport {
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|a| (a + 1..gens.len()).map(move |b| (a, b)))
        .collect();
    let entries = par::map(exec, &pairs, |&(a, b)| {
        let lhs = poisson_bracket(&gens[a], &gens[b], chart);
        let rhs = (0..gens.len())
            .filter_map(|c| {
                let v = f.get(a, b, c);
                (!v.is_zero()).then(|| gens[c].scale(&(v * scale)))
            })
            .fold(RationalFunction::zero(), |acc, t| &acc + &t);
        ClosureEntry {
            a,
            b,
            residual: &lhs - &rhs,
        }
    });
    ClosureReport { entries }
}

pub fn verify_closure(m: &ConstraintModel) -> ClosureReport {
    verify_closure_with(m, Execution::default())
}

pub fn verify_closure_with(m: &ConstraintModel, exec: Execution) -> ClosureReport {
    closure_residuals(&m.constraints, &m.algebra, &m.bracket_scale, &m.chart, exec)
}

/// Closure of the `L_a` among themselves (scale 1).
pub fn verify_auxiliary_closure(m: &ConstraintModel) -> ClosureReport {
    closure_residuals(&m.l_terms, &m.algebra, &BigRational::one(), &m.chart, Execution::default())
}

/// A total rational assignment to the chart symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasePoint {
    values: Valuation,
}

impl PhasePoint {
    pub fn new(values: Valuation) -> Self {
        PhasePoint { values }
    }

    pub fn valuation(&self) -> &Valuation {
        &self.values
    }

    pub fn get(&self, s: Symbol) -> Option<&BigRational> {
        self.values.get(s)
    }

    pub fn set(&mut self, s: Symbol, v: BigRational) {
        self.values.set(s, v);
    }

    pub fn eval(&self, f: &RationalFunction) -> Result<BigRational, ExprError> {
        f.eval(&self.values)
    }

    /// True iff every condition evaluates to a nonzero value.
    pub fn satisfies(&self, nonvanishing: &[RationalFunction]) -> bool {
        nonvanishing
            .iter()
            .all(|c| matches!(c.eval(&self.values), Ok(v) if !v.is_zero()))
    }

    pub fn named(&self, table: &SymbolTable) -> Vec<(String, BigRational)> {
        self.values.named(table).into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("no admissible solution after {attempts} draws")]
    SingularSolve { attempts: usize },
    #[error("requested point has every primary coordinate zero (stationary)")]
    StationaryPoint,
    #[error("equation {index} is not affine in the solve-for symbols")]
    NotAffine { index: usize },
}

pub const MAX_SURFACE_ATTEMPTS: usize = 100;

/// What to impose when drawing a point.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub equations: Vec<RationalFunction>,
    /// Empty means: every momentum used by the equations.
    pub solve_for: Vec<Symbol>,
    pub nonvanishing: Vec<RationalFunction>,
    pub pinned: Vec<(Symbol, BigRational)>,
    pub exclude_stationary: bool,
}

impl SurfaceSpec {
    pub fn new(equations: Vec<RationalFunction>) -> Self {
        SurfaceSpec {
            equations,
            solve_for: Vec::new(),
            nonvanishing: Vec::new(),
            pinned: Vec::new(),
            exclude_stationary: true,
        }
    }

    pub fn solve_for(mut self, syms: &[Symbol]) -> Self {
        self.solve_for = syms.to_vec();
        self
    }

    pub fn nonvanishing(mut self, conds: &[RationalFunction]) -> Self {
        self.nonvanishing.extend_from_slice(conds);
        self
    }

    pub fn pin(mut self, s: Symbol, v: BigRational) -> Self {
        self.pinned.push((s, v));
        self
    }

    pub fn allow_stationary(mut self) -> Self {
        self.exclude_stationary = false;
        self
    }
}

/// Pre-differentiated affine system `A(x_fixed) * x + b(x_fixed) = 0`.
pub struct SurfaceSampler<'a> {
    chart: &'a CanonicalChart,
    spec: SurfaceSpec,
    unknowns: Vec<Symbol>,
    coeffs: Vec<Vec<RationalFunction>>,
    constants: Vec<RationalFunction>,
}

fn is_affine_in(f: &RationalFunction, syms: &[Symbol]) -> bool {
    let den_free = f
        .denominator_factors()
        .iter()
        .all(|(g, _)| syms.iter().all(|&s| !g.uses(s)));
    den_free
        && f.numerator().terms().iter().all(|(m, _)| {
            syms.iter().map(|&s| m.exponent(s) as u32).sum::<u32>() <= 1
        })
}

impl<'a> SurfaceSampler<'a> {
    pub fn new(chart: &'a CanonicalChart, spec: SurfaceSpec) -> Result<Self, SurfaceError> {
        let unknowns: Vec<Symbol> = if spec.solve_for.is_empty() {
            chart
                .phase_space()
                .into_iter()
                .filter(|&s| chart.is_momentum(s) && spec.equations.iter().any(|e| e.uses(s)))
                .collect()
        } else {
            spec.solve_for.clone()
        };
        let unknowns: Vec<Symbol> = unknowns
            .into_iter()
            .filter(|s| spec.pinned.iter().all(|(p, _)| p != s))
            .collect();
        for (index, e) in spec.equations.iter().enumerate() {
            if !is_affine_in(e, &unknowns) {
                return Err(SurfaceError::NotAffine { index });
            }
        }
        let zero: Vec<(Symbol, RationalFunction)> = unknowns
            .iter()
            .map(|&s| (s, RationalFunction::zero()))
            .collect();
        let coeffs = spec
            .equations
            .iter()
            .map(|e| unknowns.iter().map(|&s| e.diff(s)).collect())
            .collect();
        let constants = spec
            .equations
            .iter()
            .map(|e| e.substitute(&zero).expect("denominators are free of unknowns"))
            .collect();
        Ok(SurfaceSampler {
            chart,
            spec,
            unknowns,
            coeffs,
            constants,
        })
    }

    pub fn unknowns(&self) -> &[Symbol] {
        &self.unknowns
    }

    fn stationary_pinned(&self) -> bool {
        let primary = self.chart.primary_pairs();
        !primary.is_empty()
            && primary.iter().all(|&(q, _)| {
                self.spec
                    .pinned
                    .iter()
                    .any(|(s, v)| *s == q && v.is_zero())
            })
    }

    pub fn sample_seeded(&self, seed: u64, stream: u64) -> Result<PhasePoint, SurfaceError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        self.sample(&mut rng)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<PhasePoint, SurfaceError> {
        if self.spec.exclude_stationary && self.stationary_pinned() {
            return Err(SurfaceError::StationaryPoint);
        }
        for _ in 0..MAX_SURFACE_ATTEMPTS {
            if let Some(p) = self.attempt(rng) {
                return Ok(p);
            }
        }
        Err(SurfaceError::SingularSolve {
            attempts: MAX_SURFACE_ATTEMPTS,
        })
    }

    fn attempt<R: Rng>(&self, rng: &mut R) -> Option<PhasePoint> {
        let mut vals = Valuation::new();
        for s in self.chart.symbols().symbols() {
            vals.set(s, draw_nonzero(rng));
        }
        for (s, v) in &self.spec.pinned {
            vals.set(*s, v.clone());
        }
        if self.spec.exclude_stationary
            && self
                .chart
                .primary_pairs()
                .iter()
                .all(|&(q, _)| vals.get(q).is_some_and(Zero::is_zero))
        {
            return None;
        }
        let rows = self.spec.equations.len();
        let cols = self.unknowns.len();
        let mut aug: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
        for i in 0..rows {
            let mut row = Vec::with_capacity(cols + 1);
            for j in 0..cols {
                row.push(self.coeffs[i][j].eval(&vals).ok()?);
            }
            row.push(-self.constants[i].eval(&vals).ok()?);
            aug.push(row);
        }
        let pivots = rref(&mut aug, cols);
        // Inconsistent rows have no pivot but a nonzero right-hand side.
        if aug[pivots.len()..].iter().any(|r| !r[cols].is_zero()) {
            return None;
        }
        for (r, &pc) in pivots.iter().enumerate() {
            let mut v = aug[r][cols].clone();
            for j in 0..cols {
                if j != pc && !pivots.contains(&j) && !aug[r][j].is_zero() {
                    v -= &aug[r][j] * vals.get(self.unknowns[j]).expect("drawn");
                }
            }
            vals.set(self.unknowns[pc], v);
        }
        let point = PhasePoint::new(vals);
        let on_surface = self
            .spec
            .equations
            .iter()
            .all(|e| matches!(point.eval(e), Ok(v) if v.is_zero()));
        (on_surface && point.satisfies(&self.spec.nonvanishing)).then_some(point)
    }
}

fn draw_nonzero<R: Rng>(rng: &mut R) -> BigRational {
    let k: i64 = rng.gen_range(1..=18);
    rat(if k <= 9 { k - 10 } else { k - 9 })
}

/// Reduced row echelon form over the first `cols` columns, in place.
/// Returns the pivot column of each leading row.
pub fn rref(m: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                let (pivot_row, other) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (o, pv) in other.iter_mut().zip(pivot_row) {
                    *o -= &factor * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Surface point of the model's own constraints, solving for `solve_for`
/// (all momenta when empty). Stationary points are excluded.
pub fn sample_surface_point(
    m: &ConstraintModel,
    solve_for: &[Symbol],
    seed: u64,
) -> Result<PhasePoint, SurfaceError> {
    let spec = SurfaceSpec::new(m.constraints.clone()).solve_for(solve_for);
    SurfaceSampler::new(&m.chart, spec)?.sample_seeded(seed, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::so3_structure;

    #[test]
    fn rref_solves_small_system() {
        // x + y = 3, x - y = 1
        let mut m = vec![
            vec![rat(1), rat(1), rat(3)],
            vec![rat(1), rat(-1), rat(1)],
        ];
        let piv = rref(&mut m, 2);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(m[0][2], rat(2));
        assert_eq!(m[1][2], rat(1));
    }

    #[test]
    fn draws_avoid_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let v = draw_nonzero(&mut rng);
            assert!(!v.is_zero() && v >= rat(-9) && v <= rat(9));
        }
    }

    #[test]
    fn non_affine_equation_is_reported() {
        let m = build_f_model(&so3_structure(), LMode::Zero).unwrap();
        let p1 = m.chart.pv(0);
        let spec = SurfaceSpec::new(vec![&p1 * &p1]);
        assert!(matches!(
            SurfaceSampler::new(&m.chart, spec),
            Err(SurfaceError::NotAffine { index: 0 })
        ));
    }
}
