use super::{bracket_table, literal, AbelianSet, AbelianizeError, IdentityCheck, WeakOptions};
use crate::expr::RationalFunction;
use crate::lie::so3_structure;
use crate::models::ConstraintModel;
use crate::poisson::{poisson_bracket, ExprMatrix};

/// Abelian set on the chart `q_c != 0`, where `chart_index` (1, 2 or 3)
/// names `c`. Charts 1 and 2 are the chart-3 construction under the cyclic
/// relabeling 1 -> 2 -> 3 -> 1, which preserves `eps_abc`.
///
/// `psi1 = -phi_a / q_c`, `psi2 = phi_b / q_c - g psi3`, `psi3 = q . phi`
/// with `g = q_b / (q_c (q_b^2 + q_c^2))`.
pub fn abelianize_so3(
    m: &ConstraintModel,
    chart_index: usize,
    opts: &WeakOptions,
) -> Result<AbelianSet, AbelianizeError> {
    if m.algebra != so3_structure() || m.chart.dim() != 3 || m.len() != 3 {
        return Err(AbelianizeError::NotApplicable(
            "expects the three-generator so(3) model".into(),
        ));
    }
    if !(1..=3).contains(&chart_index) {
        return Err(AbelianizeError::NotApplicable(format!(
            "chart index {chart_index} is not 1, 2 or 3"
        )));
    }
    if m.l_is_zero() {
        return Err(AbelianizeError::LIsZero);
    }
    let shift = chart_index % 3;
    let (a, b, c) = (shift, (1 + shift) % 3, (2 + shift) % 3);
    let chart = &m.chart;
    let q: Vec<_> = (0..3).map(|i| chart.qv(i)).collect();
    let one = RationalFunction::one();
    let inv_qc = one.checked_div(&q[c])?;
    let norm = &(&q[b] * &q[b]) + &(&q[c] * &q[c]);
    let g = q[b].checked_div(&(&q[c] * &norm))?;

    let mut rows = vec![vec![RationalFunction::zero(); 3]; 3];
    rows[0][a] = -&inv_qc;
    for k in 0..3 {
        let base = if k == b { inv_qc.clone() } else { RationalFunction::zero() };
        rows[1][k] = &base - &(&g * &q[k]);
        rows[2][k] = q[k].clone();
    }
    let c_matrix = ExprMatrix::from_rows(rows).expect("3x3");
    let psis = c_matrix.apply(&m.constraints);

    let phi = &m.constraints;
    let psi2_old = phi[b].checked_div(&q[c])?;
    let psi3 = &psis[2];
    let (n, qa, qb, qc) = (
        |i: usize| i + 1,
        format!("q{}", a + 1),
        format!("q{}", b + 1),
        format!("q{}", c + 1),
    );
    let psi1_text = format!(
        "p{} - {qb}/{qc}*p{} - L{}/{qc}",
        n(b),
        n(c),
        n(a)
    );
    let psi2_text = format!(
        "p{} - {qa}/{qc}*p{} + L{}/{qc}",
        n(a),
        n(c),
        n(b)
    );
    let l = &m.l_terms;
    let q_dot_l: RationalFunction = q.iter().zip(l).map(|(x, y)| x * y).sum();
    let qc3 = q[c].pow(3);
    let bracket_12_old = poisson_bracket(&psis[0], &psi2_old, chart);
    let identities = vec![
        IdentityCheck::new("psi1 expanded", &psis[0], &literal(chart, l, &psi1_text)),
        IdentityCheck::new("psi2_old expanded", &psi2_old, &literal(chart, l, &psi2_text)),
        IdentityCheck::new("psi3 = q.L", psi3, &q_dot_l),
        IdentityCheck::new(
            "{psi1, psi2_old} = -psi3/q_c^3",
            &bracket_12_old,
            &-psi3.checked_div(&qc3)?,
        ),
        IdentityCheck::new(
            "{psi1, psi3} = 0",
            &poisson_bracket(&psis[0], psi3, chart),
            &RationalFunction::zero(),
        ),
        IdentityCheck::new(
            "{psi2_old, psi3} = 0",
            &poisson_bracket(&psi2_old, psi3, chart),
            &RationalFunction::zero(),
        ),
        IdentityCheck::new(
            "{psi1, g} = -1/q_c^3",
            &poisson_bracket(&psis[0], &g, chart),
            &-one.checked_div(&qc3)?,
        ),
    ];

    let chart_conditions = vec![q[c].clone(), norm];
    let (brackets, witnesses) =
        bracket_table(chart, &psis, &chart_conditions, &[0, 1, 2], None, opts)?;
    Ok(AbelianSet {
        names: vec!["psi1".into(), "psi2".into(), "psi3".into()],
        psis,
        c_matrix,
        chart_conditions,
        brackets,
        weak_generators: vec![0, 1, 2],
        witnesses,
        identities,
    })
}
