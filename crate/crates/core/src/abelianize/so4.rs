use num_traits::Zero;

use super::{
    bracket_table, literal, sample_points, AbelianSet, AbelianizeError, IdentityCheck, WeakOptions,
};
use crate::expr::{BigRational, Polynomial, RationalFunction, Symbol};
use crate::lie::so4_structure;
use crate::models::{ConstraintModel, PhasePoint, SurfaceSampler, SurfaceSpec};
use crate::poisson::{poisson_bracket, CanonicalChart, ExprMatrix};

/// Sign convention for the final shift of `psi3`, `psi6` by `S1`, `S2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum So4Variant {
    /// `psi3 + S1 psi1 - S2 psi4`, `psi6 - S2 psi1 + S1 psi4`.
    Printed,
    /// `psi3 - S1 psi1 + S2 psi4`, `psi6 + S2 psi1 - S1 psi4`.
    Flipped,
}

impl So4Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            So4Variant::Printed => "printed",
            So4Variant::Flipped => "flipped",
        }
    }
}

const PSI3_OLD: &str = "p3 - (q3*q1 - q4*q6)/(q1^2 - q4^2)*p1 - (q6*q1 - q4*q3)/(q1^2 - q4^2)*p4 \
     + (q1*L2 + q4*L5)/(q1^2 - q4^2)";
const PSI6_OLD: &str = "p6 - (q6*q1 - q4*q3)/(q1^2 - q4^2)*p1 - (q3*q1 - q4*q6)/(q1^2 - q4^2)*p4 \
     - (q1*L5 + q4*L2)/(q1^2 - q4^2)";
const PSI2: &str = "p2 - (q2*q1 + q4*q5)/(q1^2 - q4^2)*p1 + (q5*q1 + q4*q2)/(q1^2 - q4^2)*p4 \
     - (q1*L3 - q4*L6)/(q1^2 - q4^2)";
const PSI5: &str = "p5 - (q5*q1 + q4*q2)/(q1^2 - q4^2)*p1 + (q2*q1 + q4*q5)/(q1^2 - q4^2)*p4 \
     + (q1*L6 - q4*L3)/(q1^2 - q4^2)";
const PSI4: &str = "q1*L4 + q4*L1 - q2*L5 - q5*L2 + q6*L3 + q3*L6";
const S1: &str = "1/2*(((q2 + q5)/(q1 - q4))/((q1 - q4)^2 + (q2 + q5)^2) \
     + ((q2 - q5)/(q1 + q4))/((q1 + q4)^2 + (q2 - q5)^2))";
const S2: &str = "1/2*(((q2 + q5)/(q1 - q4))/((q1 - q4)^2 + (q2 + q5)^2) \
     - ((q2 - q5)/(q1 + q4))/((q1 + q4)^2 + (q2 - q5)^2))";
const R1: &str = "(q1^3 + 3*q1*q4^2)/(q1^2 - q4^2)^3";
const R2: &str = "(q4^3 + 3*q4*q1^2)/(q1^2 - q4^2)^3";

fn check_model(m: &ConstraintModel) -> Result<(), AbelianizeError> {
    if m.algebra != so4_structure() || m.chart.dim() != 6 || m.len() != 6 {
        return Err(AbelianizeError::NotApplicable(
            "expects the six-generator so(4) model".into(),
        ));
    }
    if m.l_is_zero() {
        return Err(AbelianizeError::LIsZero);
    }
    Ok(())
}

/// The six constraints before the `S1`, `S2` shift, in order
/// `psi1..psi6`, with their equivalence matrix.
pub struct So4Stage {
    pub psis: Vec<RationalFunction>,
    pub c_matrix: ExprMatrix,
    pub chart_conditions: Vec<RationalFunction>,
    pub identities: Vec<IdentityCheck>,
    /// Coefficients in the nonvanishing brackets, `R1 psi1 - R2 psi4` etc.
    pub r1: RationalFunction,
    pub r2: RationalFunction,
}

pub fn so4_pre_redefinition(m: &ConstraintModel) -> Result<So4Stage, AbelianizeError> {
    check_model(m)?;
    let chart = &m.chart;
    let l = &m.l_terms;
    let e = |t: &str| literal(chart, l, t);
    let q: Vec<_> = (0..6).map(|i| chart.qv(i)).collect();
    let d = e("q1^2 - q4^2");
    let over_d = |x: &RationalFunction| x.checked_div(&d).expect("nonzero");
    let z = RationalFunction::zero;

    let mut rows = vec![vec![z(); 6]; 6];
    rows[0] = q.clone();
    rows[3] = vec![
        q[3].clone(),
        -&q[4],
        q[5].clone(),
        q[0].clone(),
        -&q[1],
        q[2].clone(),
    ];
    // psi3, psi6 from phi2, phi5; psi2, psi5 from phi3, phi6
    rows[2][1] = over_d(&q[0]);
    rows[2][4] = over_d(&q[3]);
    rows[5][1] = over_d(&-&q[3]);
    rows[5][4] = over_d(&-&q[0]);
    rows[1][2] = over_d(&-&q[0]);
    rows[1][5] = over_d(&q[3]);
    rows[4][2] = over_d(&-&q[3]);
    rows[4][5] = over_d(&q[0]);
    let c_matrix = ExprMatrix::from_rows(rows).expect("6x6");

    let q_dot_l: RationalFunction = q.iter().zip(l).map(|(x, y)| x * y).sum();
    let psis = vec![
        q_dot_l,
        e(PSI2),
        e(PSI3_OLD),
        e(PSI4),
        e(PSI5),
        e(PSI6_OLD),
    ];
    let mut identities: Vec<IdentityCheck> = c_matrix
        .apply(&m.constraints)
        .iter()
        .zip(&psis)
        .enumerate()
        .map(|(i, (cphi, psi))| IdentityCheck::new(format!("psi{} = (C phi){}", i + 1, i + 1), psi, cphi))
        .collect();

    let pb = |a: usize, b: usize| poisson_bracket(&psis[a], &psis[b], chart);
    let zero = z();
    for a in 1..6 {
        identities.push(IdentityCheck::new(format!("{{psi{}, psi1}} = 0", a + 1), &pb(a, 0), &zero));
    }
    for a in [0, 1, 2, 4, 5] {
        identities.push(IdentityCheck::new(format!("{{psi{}, psi4}} = 0", a + 1), &pb(a, 3), &zero));
    }
    let (r1, r2) = (e(R1), e(R2));
    let comb = |x: &RationalFunction, y: &RationalFunction| &(x * &psis[0]) - &(y * &psis[3]);
    let r1_r2 = comb(&r1, &r2);
    let r2_r1 = comb(&r2, &r1);
    identities.push(IdentityCheck::new("{psi2, psi5} = 0", &pb(1, 4), &zero));
    identities.push(IdentityCheck::new("{psi3, psi6} = 0", &pb(2, 5), &zero));
    identities.push(IdentityCheck::new("{psi3, psi2} = R1 psi1 - R2 psi4", &pb(2, 1), &r1_r2));
    identities.push(IdentityCheck::new("{psi5, psi6} = R1 psi1 - R2 psi4", &pb(4, 5), &r1_r2));
    identities.push(IdentityCheck::new("{psi2, psi6} = R2 psi1 - R1 psi4", &pb(1, 5), &r2_r1));
    identities.push(IdentityCheck::new("{psi3, psi5} = R2 psi1 - R1 psi4", &pb(2, 4), &r2_r1));

    let chart_conditions = vec![
        q[0].clone(),
        d,
        e("(q1 - q4)^2 + (q2 + q5)^2"),
        e("(q1 + q4)^2 + (q2 - q5)^2"),
    ];
    Ok(So4Stage {
        psis,
        c_matrix,
        chart_conditions,
        identities,
        r1,
        r2,
    })
}

/// Full SO(4) construction: pre-redefinition identities plus the shifted
/// set's bracket table, classified on the `psi1 = psi4 = 0` locus.
pub fn abelianize_so4(
    m: &ConstraintModel,
    variant: So4Variant,
    opts: &WeakOptions,
) -> Result<AbelianSet, AbelianizeError> {
    let stage = so4_pre_redefinition(m)?;
    let chart = &m.chart;
    let e = |t: &str| literal(chart, &m.l_terms, t);
    let (s1, s2) = (e(S1), e(S2));
    let sign = match variant {
        So4Variant::Printed => RationalFunction::one(),
        So4Variant::Flipped => RationalFunction::from_int(-1),
    };
    let (a3, b3) = (&sign * &s1, -&(&sign * &s2));
    let (a6, b6) = (-&(&sign * &s2), &sign * &s1);

    let mut psis = stage.psis.clone();
    psis[2] = &(&psis[2] + &(&a3 * &psis[0])) + &(&b3 * &psis[3]);
    psis[5] = &(&psis[5] + &(&a6 * &psis[0])) + &(&b6 * &psis[3]);
    let c = &stage.c_matrix;
    let c_matrix = ExprMatrix::from_fn(6, 6, |i, j| match i {
        2 => &(&c[(2, j)] + &(&a3 * &c[(0, j)])) + &(&b3 * &c[(3, j)]),
        5 => &(&c[(5, j)] + &(&a6 * &c[(0, j)])) + &(&b6 * &c[(3, j)]),
        _ => c[(i, j)].clone(),
    });

    let aux: Vec<Symbol> = chart
        .auxiliary_pairs()
        .iter()
        .flat_map(|&(x, y)| [x, y])
        .collect();
    let (brackets, witnesses) = bracket_table(
        chart,
        &psis,
        &stage.chart_conditions,
        &[0, 3],
        Some(&aux),
        opts,
    )?;
    let mut identities = stage.identities;
    for (i, r) in c_matrix
        .apply(&m.constraints)
        .iter()
        .zip(&psis)
        .enumerate()
        .filter(|(i, _)| *i == 2 || *i == 5)
        .map(|(i, (cphi, psi))| (i, psi - cphi))
    {
        identities.push(IdentityCheck {
            name: format!("psi{}_new = (C phi){}", i + 1, i + 1),
            residual: r,
        });
    }
    Ok(AbelianSet {
        names: (1..=6).map(|i| format!("psi{i}")).collect(),
        psis,
        c_matrix,
        chart_conditions: stage.chart_conditions,
        brackets,
        weak_generators: vec![0, 3],
        witnesses,
        identities,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitReport {
    pub checks: Vec<IdentityCheck>,
}

impl LimitReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::holds)
    }
}

/// Approach to `q1^2 = q4^2` along `q1 = s q4 + eps`, `s = +-1`, on the
/// cleared forms `(q1^2 - q4^2) psi3`, `(q1^2 - q4^2) psi6`. Every check is
/// an exact polynomial identity in `eps`.
pub fn epsilon_limit_check(m: &ConstraintModel) -> Result<LimitReport, AbelianizeError> {
    check_model(m)?;
    let mut chart = m.chart.clone();
    let eps = chart
        .ensure_parameter("eps")
        .map_err(|e| AbelianizeError::NotApplicable(e.to_string()))?;
    let l = &m.l_terms;
    let e = |t: &str| literal(&chart, l, t);
    let d = e("q1^2 - q4^2");
    let cleared_psi3 = &d * &e(PSI3_OLD);
    let cleared_psi6 = &d * &e(PSI6_OLD);
    let coeff = |f: &RationalFunction, k: u16| -> RationalFunction {
        let p: Polynomial = f.as_polynomial().expect("cleared forms are polynomial");
        RationalFunction::from_poly(p.coefficient_of(eps, k))
    };

    let mut checks = Vec::new();
    for s in [1i64, -1] {
        let tag = if s == 1 { "q1 = q4 + eps" } else { "q1 = -q4 + eps" };
        let sv = RationalFunction::from_int(s);
        let q1 = chart.q(0);
        let sub = [(q1, &(&sv * &chart.qv(3)) + &RationalFunction::var(eps))];
        let a = cleared_psi3.substitute(&sub)?;
        let b = cleared_psi6.substitute(&sub)?;
        let sum = &a + &(&sv * &b);
        let sq4 = &sv * &chart.qv(3);
        let s_txt = if s == 1 { "1" } else { "(-1)" };
        let boundary = e(&format!(
            "(q3 - {s_txt}*q6)*p1 + (q6 - {s_txt}*q3)*p4 - (L2 + {s_txt}*L5)"
        ));
        let momentum_first = e(&format!(
            "{s_txt}*q4*(p3 + {s_txt}*p6) - (q3*p1 + q6*p4 - L2)"
        ));
        let momentum_second = e(&format!(
            "{s_txt}*q4*(p3 + {s_txt}*p6) - {s_txt}*(q6*p1 + q3*p4 + L5)"
        ));
        let zero = RationalFunction::zero();
        checks.push(IdentityCheck::new(
            format!("{tag}: eps^0 of cleared psi3 = -s q4 (boundary relation)"),
            &coeff(&a, 0),
            &-&(&sq4 * &boundary),
        ));
        checks.push(IdentityCheck::new(
            format!("{tag}: eps^0 of cleared psi3 + s psi6 = 0"),
            &coeff(&sum, 0),
            &zero,
        ));
        checks.push(IdentityCheck::new(
            format!("{tag}: eps^1 of sum = boundary relation + 2 (p3 + s p6 relation, first form)"),
            &coeff(&sum, 1),
            &(&boundary + &(&RationalFunction::from_int(2) * &momentum_first)),
        ));
        checks.push(IdentityCheck::new(
            format!("{tag}: eps^1 of sum = -boundary relation + 2 (p3 + s p6 relation, second form)"),
            &coeff(&sum, 1),
            &(&-&boundary + &(&RationalFunction::from_int(2) * &momentum_second)),
        ));
    }
    Ok(LimitReport { checks })
}

/// Abelian gauge parameters `eta` as functions of the SO(4) parameters
/// `th1..th6`, fixed by matching coordinate variations on `fixing` and the
/// `p3`, `p6` variations for `eta1`, `eta4`.
#[derive(Debug, Clone)]
pub struct GaugeParamMap {
    /// The model chart extended by the parameter symbols.
    pub chart: CanonicalChart,
    pub theta: Vec<Symbol>,
    pub eta: Vec<RationalFunction>,
    /// `delta_A q_a - delta_nA q_a` for every coordinate.
    pub coordinate_checks: Vec<IdentityCheck>,
    /// `delta_A p3 - delta_nA p3`.
    pub p3_check: IdentityCheck,
    /// Surface points and the `p3` residual at each.
    pub p3_samples: Vec<(PhasePoint, BigRational)>,
    /// Residuals of the remaining momenta at the same points, for the record.
    pub other_momenta: Vec<(String, Vec<BigRational>)>,
}

impl GaugeParamMap {
    pub fn coordinates_match(&self) -> bool {
        self.coordinate_checks.iter().all(IdentityCheck::holds)
    }

    pub fn p3_matches_on_surface(&self) -> bool {
        !self.p3_samples.is_empty() && self.p3_samples.iter().all(|(_, v)| v.is_zero())
    }
}

pub fn solve_parameter_map(
    m: &ConstraintModel,
    abelian: &AbelianSet,
    fixing: &[usize],
    opts: &WeakOptions,
) -> Result<GaugeParamMap, AbelianizeError> {
    check_model(m)?;
    let mut chart = m.chart.clone();
    let theta: Vec<Symbol> = (1..=6)
        .map(|i| chart.ensure_parameter(&format!("th{i}")))
        .collect::<Result<_, _>>()
        .map_err(|e| AbelianizeError::NotApplicable(e.to_string()))?;
    let phis = &m.constraints;
    let psis = &abelian.psis;
    let delta_a = |f: &RationalFunction| -> RationalFunction {
        theta
            .iter()
            .zip(phis)
            .map(|(&t, phi)| &RationalFunction::var(t) * &poisson_bracket(f, phi, &chart))
            .sum()
    };
    let q: Vec<_> = (0..6).map(|i| chart.qv(i)).collect();
    let p: Vec<_> = (0..6).map(|i| chart.pv(i)).collect();
    let mut eta = vec![RationalFunction::zero(); 6];
    for &a in fixing {
        eta[a] = delta_a(&q[a]);
    }
    let free: Vec<usize> = (0..6).filter(|a| !fixing.contains(a)).collect();
    if free.len() != 2 {
        return Err(AbelianizeError::NotApplicable(
            "fixing set must leave exactly two parameters".into(),
        ));
    }
    let partial = |eta: &[RationalFunction], f: &RationalFunction, skip: &[usize]| -> RationalFunction {
        (0..6)
            .filter(|b| !skip.contains(b))
            .map(|b| &eta[b] * &poisson_bracket(f, &psis[b], &chart))
            .sum()
    };
    let rows = [&p[2], &p[5]];
    let coef: Vec<Vec<RationalFunction>> = rows
        .iter()
        .map(|f| free.iter().map(|&b| poisson_bracket(f, &psis[b], &chart)).collect())
        .collect();
    let rhs: Vec<RationalFunction> = rows
        .iter()
        .map(|f| &delta_a(f) - &partial(&eta, f, &free))
        .collect();
    let det = &(&coef[0][0] * &coef[1][1]) - &(&coef[0][1] * &coef[1][0]);
    if det.is_zero() {
        return Err(AbelianizeError::SingularParameterSystem { point: Vec::new() });
    }
    eta[free[0]] = (&(&rhs[0] * &coef[1][1]) - &(&coef[0][1] * &rhs[1])).checked_div(&det)?;
    eta[free[1]] = (&(&coef[0][0] * &rhs[1]) - &(&coef[1][0] * &rhs[0])).checked_div(&det)?;

    let delta_na = |f: &RationalFunction| partial(&eta, f, &[]);
    let coordinate_checks = (0..6)
        .map(|a| {
            IdentityCheck::new(
                format!("delta_A q{} = delta_nA q{}", a + 1, a + 1),
                &delta_a(&q[a]),
                &delta_na(&q[a]),
            )
        })
        .collect();
    let p3_check = IdentityCheck::new("delta_A p3 = delta_nA p3", &delta_a(&p[2]), &delta_na(&p[2]));

    let mut conds = abelian.chart_conditions.clone();
    for (g, _) in det.denominator_factors() {
        conds.push(RationalFunction::from_poly(g.clone()));
    }
    conds.push(RationalFunction::from_poly(det.numerator().clone()));
    let spec = SurfaceSpec::new(phis.clone()).nonvanishing(&conds);
    let sampler = SurfaceSampler::new(&chart, spec)?;
    let points = sample_points(&sampler, opts)?;
    let eval_all = |f: &RationalFunction| -> Result<Vec<BigRational>, AbelianizeError> {
        points.iter().map(|pt| Ok(pt.eval(f)?)).collect()
    };
    let p3_vals = eval_all(&p3_check.residual)?;
    let p3_samples = points.iter().cloned().zip(p3_vals).collect();
    // Numeric per point: forming these residuals symbolically is far slower.
    let eta_vals: Vec<Vec<BigRational>> = points
        .iter()
        .map(|pt| eta.iter().map(|e| pt.eval(e)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let mut other_momenta = Vec::new();
    for (i, &(_, mom)) in chart.pairs().iter().enumerate() {
        if i == 2 {
            continue;
        }
        let f = RationalFunction::var(mom);
        let along_phi: Vec<_> = phis.iter().map(|phi| poisson_bracket(&f, phi, &chart)).collect();
        let along_psi: Vec<_> = psis.iter().map(|psi| poisson_bracket(&f, psi, &chart)).collect();
        let mut vals = Vec::with_capacity(points.len());
        for (pt, etas) in points.iter().zip(&eta_vals) {
            let mut r = BigRational::zero();
            for (t, b) in theta.iter().zip(&along_phi) {
                r += pt.get(*t).cloned().unwrap_or_default() * pt.eval(b)?;
            }
            for (e, b) in etas.iter().zip(&along_psi) {
                r -= e * pt.eval(b)?;
            }
            vals.push(r);
        }
        other_momenta.push((chart.symbols().name(mom).to_string(), vals));
    }
    Ok(GaugeParamMap {
        chart,
        theta,
        eta,
        coordinate_checks,
        p3_check,
        p3_samples,
        other_momenta,
    })
}
