//! Explicit Abelian replacements for the SO(3), SO(4) and Higgs constraint
//! sets, with their equivalence matrices and bracket audits.

mod higgs;
mod so3;
mod so4;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::{ExprError, Monomial, Polynomial, RationalFunction, Symbol, Valuation};
use crate::models::{ConstraintModel, PhasePoint, SurfaceError, SurfaceSampler, SurfaceSpec};
use crate::par::{self, Execution};
use crate::poisson::{det, poisson_bracket, CanonicalChart, ExprMatrix};

pub use higgs::higgs_abelian_candidate;
pub use so3::abelianize_so3;
pub use so4::{
    abelianize_so4, epsilon_limit_check, so4_pre_redefinition, solve_parameter_map,
    GaugeParamMap, LimitReport, So4Variant,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianizeError {
    #[error("every L_a vanishes: the constraints are not Abelianizable (see residual analysis)")]
    LIsZero,
    #[error("construction does not apply to this model: {0}")]
    NotApplicable(String),
    #[error("parameter system is singular at {point:?}")]
    SingularParameterSystem { point: Vec<(String, BigRational)> },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Seeded sampling controls for weak-equality checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeakOptions {
    pub seed: u64,
    pub samples: usize,
    pub exec: Execution,
}

impl Default for WeakOptions {
    fn default() -> Self {
        WeakOptions {
            seed: 0,
            samples: 20,
            exec: Execution::default(),
        }
    }
}

impl WeakOptions {
    pub fn seeded(seed: u64) -> Self {
        WeakOptions {
            seed,
            ..Self::default()
        }
    }
}

/// A named identity that holds iff `residual` is identically zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: RationalFunction,
}

impl IdentityCheck {
    pub fn new(name: impl Into<String>, lhs: &RationalFunction, rhs: &RationalFunction) -> Self {
        IdentityCheck {
            name: name.into(),
            residual: lhs - rhs,
        }
    }

    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketStatus {
    IdenticallyZero,
    /// Zero at every witness point of the generator locus; `combination`
    /// holds exact coefficients `c_k` with `bracket = sum c_k gen_k` when found.
    WeaklyZero {
        witnesses: usize,
        combination: Option<Vec<RationalFunction>>,
    },
    Nonzero {
        point: PhasePoint,
        value: BigRational,
    },
}

impl BracketStatus {
    pub fn label(&self) -> &'static str {
        match self {
            BracketStatus::IdenticallyZero => "identically-zero",
            BracketStatus::WeaklyZero { .. } => "weakly-zero",
            BracketStatus::Nonzero { .. } => "nonzero",
        }
    }

    pub fn vanishes(&self) -> bool {
        !matches!(self, BracketStatus::Nonzero { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketEntry {
    pub a: usize,
    pub b: usize,
    pub value: RationalFunction,
    pub status: BracketStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianSet {
    pub names: Vec<String>,
    pub psis: Vec<RationalFunction>,
    /// `psi = C phi`
    pub c_matrix: ExprMatrix,
    pub chart_conditions: Vec<RationalFunction>,
    pub brackets: Vec<BracketEntry>,
    /// Indices of the psis whose common zero set hosts the weak checks.
    pub weak_generators: Vec<usize>,
    pub witnesses: Vec<PhasePoint>,
    /// Intermediate identities specific to the construction.
    pub identities: Vec<IdentityCheck>,
}

impl AbelianSet {
    pub fn all_brackets_vanish(&self) -> bool {
        self.brackets.iter().all(|b| b.status.vanishes())
    }

    pub fn identities_hold(&self) -> bool {
        self.identities.iter().all(IdentityCheck::holds)
    }

    pub fn bracket(&self, a: usize, b: usize) -> Option<&BracketEntry> {
        self.brackets
            .iter()
            .find(|e| (e.a, e.b) == (a, b) || (e.a, e.b) == (b, a))
    }

    /// `psi_a - (C phi)_a` for each row.
    pub fn equivalence_residuals(&self, phis: &[RationalFunction]) -> Vec<RationalFunction> {
        self.c_matrix
            .apply(phis)
            .iter()
            .zip(&self.psis)
            .map(|(c, p)| p - c)
            .collect()
    }

    pub fn det_c(&self) -> RationalFunction {
        det(&self.c_matrix).expect("C is square")
    }

    /// `det C` at seeded constraint-surface points inside the chart,
    /// evaluated entrywise and then eliminated exactly.
    pub fn det_c_samples(
        &self,
        m: &ConstraintModel,
        opts: &WeakOptions,
    ) -> Result<Vec<(PhasePoint, BigRational)>, AbelianizeError> {
        let spec = SurfaceSpec::new(m.constraints.clone()).nonvanishing(&self.chart_conditions);
        let sampler = SurfaceSampler::new(&m.chart, spec)?;
        let pts = sample_points(&sampler, opts)?;
        pts.into_iter()
            .map(|p| {
                let v = numeric_det(self.c_matrix.eval(p.valuation())?);
                Ok((p, v))
            })
            .collect()
    }

    /// Every denominator factor of every psi divides some chart condition.
    pub fn conditions_cover_denominators(&self) -> bool {
        self.psis.iter().all(|psi| {
            psi.denominator_factors().iter().all(|(g, _)| {
                self.chart_conditions
                    .iter()
                    .any(|c| c.numerator().exact_div(g).is_some())
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakZeroReport {
    pub identically_zero: bool,
    pub passed: bool,
    pub witnesses: Vec<PhasePoint>,
    pub counterexample: Option<(PhasePoint, BigRational)>,
}

/// Exact determinant of a rational matrix by elimination.
pub fn numeric_det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if r != c {
            a.swap(r, c);
            d = -d;
        }
        let pivot = a[c][c].clone();
        d *= &pivot;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let k = &a[r][c] / &pivot;
            for j in c..n {
                let t = &k * &a[c][j];
                a[r][j] -= t;
            }
        }
    }
    d
}

pub(crate) fn sample_points(
    sampler: &SurfaceSampler<'_>,
    opts: &WeakOptions,
) -> Result<Vec<PhasePoint>, SurfaceError> {
    par::map_range(opts.exec, opts.samples, |i| {
        sampler.sample_seeded(opts.seed, i as u64)
    })
    .into_iter()
    .collect()
}

fn denominator_conditions(fs: &[&RationalFunction]) -> Vec<RationalFunction> {
    let mut out: Vec<RationalFunction> = Vec::new();
    for f in fs {
        for (g, _) in f.denominator_factors() {
            let g = RationalFunction::from_poly(g.clone());
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}

/// Samples `opts.samples` points on `gens = 0` (inside `conditions` and away
/// from the poles of `b`) and tests whether `b` vanishes at all of them.
pub fn weak_zero_check(
    chart: &CanonicalChart,
    b: &RationalFunction,
    gens: &[RationalFunction],
    conditions: &[RationalFunction],
    opts: &WeakOptions,
) -> Result<WeakZeroReport, SurfaceError> {
    let mut conds = conditions.to_vec();
    conds.extend(denominator_conditions(&[b]));
    let spec = SurfaceSpec::new(gens.to_vec()).nonvanishing(&conds);
    let sampler = SurfaceSampler::new(chart, spec)?;
    let witnesses = sample_points(&sampler, opts)?;
    let counterexample = witnesses.iter().find_map(|p| {
        let v = p.eval(b).expect("poles excluded by sampling");
        (!v.is_zero()).then(|| (p.clone(), v))
    });
    Ok(WeakZeroReport {
        identically_zero: b.is_zero(),
        passed: counterexample.is_none(),
        witnesses,
        counterexample,
    })
}

/// Groups `f` by monomials in `vars`; coefficients are free of `vars`.
/// Fails when a denominator depends on `vars`.
pub fn coefficients_in(
    f: &RationalFunction,
    vars: &[Symbol],
) -> Option<BTreeMap<Monomial, RationalFunction>> {
    if f
        .denominator_factors()
        .iter()
        .any(|(g, _)| vars.iter().any(|&v| g.uses(v)))
    {
        return None;
    }
    let mut groups: BTreeMap<Monomial, Vec<(Monomial, BigRational)>> = BTreeMap::new();
    for (m, c) in f.numerator().terms() {
        let mut rest = m.clone();
        let mut key = Monomial::one();
        for &v in vars {
            let (r, e) = rest.split_off(v);
            if e > 0 {
                key = key.mul(&Monomial::var(v, e));
            }
            rest = r;
        }
        groups.entry(key).or_default().push((rest, c.clone()));
    }
    Some(
        groups
            .into_iter()
            .map(|(k, ts)| (k, f.with_numerator(Polynomial::from_terms(ts))))
            .collect(),
    )
}

/// Finds `c` free of `vars` with `b = sum_k c_k gens_k` exactly, by matching
/// coefficients of monomials in `vars`.
pub fn express_in_generators(
    b: &RationalFunction,
    gens: &[RationalFunction],
    vars: &[Symbol],
) -> Option<Vec<RationalFunction>> {
    let bc = coefficients_in(b, vars)?;
    let gc: Vec<_> = gens
        .iter()
        .map(|g| coefficients_in(g, vars))
        .collect::<Option<_>>()?;
    let mut keys: Vec<&Monomial> = bc.keys().chain(gc.iter().flat_map(|m| m.keys())).collect();
    keys.sort();
    keys.dedup();
    let zero = RationalFunction::zero();
    let row = |k: &Monomial| -> Vec<RationalFunction> {
        gc.iter()
            .map(|m| m.get(k).cloned().unwrap_or_else(RationalFunction::zero))
            .collect()
    };

    // Greedy choice of independent rows, tested numerically at one point.
    let probe = probe_point(b, gens);
    let n = gens.len();
    let mut chosen: Vec<&Monomial> = Vec::new();
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    for k in &keys {
        if chosen.len() == n {
            break;
        }
        let Ok(vals) = row(k)
            .iter()
            .map(|e| e.eval(&probe))
            .collect::<Result<Vec<_>, _>>()
        else {
            continue;
        };
        let mut trial = basis.clone();
        trial.push(vals);
        if numeric_rank(&trial) == trial.len() {
            basis = trial;
            chosen.push(k);
        }
    }
    if chosen.len() < n {
        return None;
    }
    let a = ExprMatrix::from_rows(chosen.iter().map(|k| row(k)).collect()).ok()?;
    let rhs: Vec<_> = chosen
        .iter()
        .map(|k| bc.get(*k).unwrap_or(&zero).clone())
        .collect();
    let d = det(&a).ok()?;
    if d.is_zero() {
        return None;
    }
    let coeffs: Vec<RationalFunction> = (0..n)
        .map(|j| {
            let aj = ExprMatrix::from_fn(n, n, |r, c| {
                if c == j {
                    rhs[r].clone()
                } else {
                    a[(r, c)].clone()
                }
            });
            det(&aj).ok()?.checked_div(&d).ok()
        })
        .collect::<Option<_>>()?;
    let recombined: RationalFunction = coeffs.iter().zip(gens).map(|(c, g)| c * g).sum();
    (&recombined - b).is_zero().then_some(coeffs)
}

fn probe_point(b: &RationalFunction, gens: &[RationalFunction]) -> Valuation {
    use rand::Rng;
    let mut syms = b.symbols();
    for g in gens {
        syms.extend(g.symbols());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    syms.into_iter()
        .map(|s| {
            let v: i64 = rng.gen_range(2..=97);
            (s, BigRational::from_integer(v.into()))
        })
        .collect()
}

fn numeric_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    crate::models::rref(&mut m, cols).len()
}

/// Bracket table over all pairs `a < b`; nonzero entries are tested on the
/// common zero set of `weak_generators` and, when `combine_vars` is given,
/// decomposed over those generators.
pub(crate) fn bracket_table(
    chart: &CanonicalChart,
    psis: &[RationalFunction],
    conditions: &[RationalFunction],
    weak_generators: &[usize],
    combine_vars: Option<&[Symbol]>,
    opts: &WeakOptions,
) -> Result<(Vec<BracketEntry>, Vec<PhasePoint>), AbelianizeError> {
    let pairs: Vec<(usize, usize)> = (0..psis.len())
        .flat_map(|a| (a + 1..psis.len()).map(move |b| (a, b)))
        .collect();
    let values = par::map(opts.exec, &pairs, |&(a, b)| {
        poisson_bracket(&psis[a], &psis[b], chart)
    });
    let nonzero: Vec<&RationalFunction> = values.iter().filter(|v| !v.is_zero()).collect();
    let witnesses = if nonzero.is_empty() {
        Vec::new()
    } else {
        let mut conds = conditions.to_vec();
        conds.extend(denominator_conditions(&nonzero));
        let gens: Vec<_> = weak_generators.iter().map(|&i| psis[i].clone()).collect();
        let sampler = SurfaceSampler::new(chart, SurfaceSpec::new(gens).nonvanishing(&conds))?;
        sample_points(&sampler, opts)?
    };
    let gens: Vec<_> = weak_generators.iter().map(|&i| psis[i].clone()).collect();
    let statuses = par::map(opts.exec, &values, |v| -> Result<BracketStatus, ExprError> {
        if v.is_zero() {
            return Ok(BracketStatus::IdenticallyZero);
        }
        for p in &witnesses {
            let x = p.eval(v)?;
            if !x.is_zero() {
                return Ok(BracketStatus::Nonzero {
                    point: p.clone(),
                    value: x,
                });
            }
        }
        let combination = combine_vars.and_then(|vars| express_in_generators(v, &gens, vars));
        Ok(BracketStatus::WeaklyZero {
            witnesses: witnesses.len(),
            combination,
        })
    });
    let entries = pairs
        .into_iter()
        .zip(values)
        .zip(statuses)
        .map(|(((a, b), value), status)| {
            Ok(BracketEntry {
                a,
                b,
                value,
                status: status?,
            })
        })
        .collect::<Result<Vec<_>, AbelianizeError>>()?;
    Ok((entries, witnesses))
}

/// Parses `text` over the chart plus temporary symbols `L1..Ln`, then binds
/// each `Lk` to the model's realized generator.
pub(crate) fn literal(
    chart: &CanonicalChart,
    l_terms: &[RationalFunction],
    text: &str,
) -> RationalFunction {
    let mut scratch = chart.clone();
    let ls: Vec<Symbol> = (1..=l_terms.len())
        .map(|i| scratch.ensure_parameter(&format!("L{i}")).expect("fresh name"))
        .collect();
    let f = scratch.parse(text).expect("construction literal parses");
    let bind: Vec<_> = ls.into_iter().zip(l_terms.iter().cloned()).collect();
    f.substitute(&bind).expect("generators are polynomial")
}
