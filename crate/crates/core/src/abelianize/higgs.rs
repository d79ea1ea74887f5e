use super::{bracket_table, AbelianSet, AbelianizeError, IdentityCheck, WeakOptions};
use crate::expr::RationalFunction;
use crate::lie::epsilon3;
use crate::models::ConstraintModel;
use crate::poisson::{poisson_bracket, ExprMatrix};

/// `psi_i = q0 p_i - p0 q_i` on the chart `q0 != 0`, with
/// `C = (q0^2 I - q0 [q x] + q q^T) / (q0^2 + q^2)`.
///
/// Records the coordinate brackets, the gauge-parameter identity with
/// `n' = n + (n x q) / q0` for symbolic `n1..n3`, and the closed form of
/// `{psi_i, psi_j}`.
pub fn higgs_abelian_candidate(
    m: &ConstraintModel,
    opts: &WeakOptions,
) -> Result<AbelianSet, AbelianizeError> {
    if m.chart.dim() != 4 || m.len() != 3 || m.chart.symbol("q0").is_none() {
        return Err(AbelianizeError::NotApplicable(
            "expects the four-coordinate Higgs model".into(),
        ));
    }
    let chart = &m.chart;
    let q0 = chart.qv(0);
    let p0 = chart.pv(0);
    let q: Vec<_> = (1..4).map(|i| chart.qv(i)).collect();
    let p: Vec<_> = (1..4).map(|i| chart.pv(i)).collect();
    let psis: Vec<_> = (0..3).map(|i| &(&q0 * &p[i]) - &(&p0 * &q[i])).collect();

    let q_sq: RationalFunction = q.iter().map(|x| x * x).sum();
    let norm = &(&q0 * &q0) + &q_sq;
    let c_matrix = ExprMatrix::from_fn(3, 3, |i, k| {
        let mut num = &q[i] * &q[k];
        if i == k {
            num = &num + &(&q0 * &q0);
        }
        for (j, qj) in q.iter().enumerate() {
            let e = epsilon3(i, j, k);
            if e != 0 {
                num = &num - &(&RationalFunction::from_int(e as i64) * &(&q0 * qj));
            }
        }
        num.checked_div(&norm).expect("nonzero")
    });

    let mut identities: Vec<IdentityCheck> = c_matrix
        .apply(&m.constraints)
        .iter()
        .zip(&psis)
        .enumerate()
        .map(|(i, (cphi, psi))| IdentityCheck::new(format!("psi{} = (C phi){}", i + 1, i + 1), psi, cphi))
        .collect();
    for i in 0..3 {
        for j in 0..3 {
            let expected = if i == j { q0.clone() } else { RationalFunction::zero() };
            identities.push(IdentityCheck::new(
                format!("{{q{}, psi{}}} = q0 delta", i + 1, j + 1),
                &poisson_bracket(&q[i], &psis[j], chart),
                &expected,
            ));
        }
    }

    let mut ext = chart.clone();
    let n: Vec<RationalFunction> = (1..=3)
        .map(|i| ext.ensure_parameter(&format!("n{i}")).map(RationalFunction::var))
        .collect::<Result<_, _>>()
        .map_err(|e| AbelianizeError::NotApplicable(e.to_string()))?;
    let cross = |a: &[RationalFunction], b: &[RationalFunction], k: usize| -> RationalFunction {
        let mut acc = RationalFunction::zero();
        for i in 0..3 {
            for j in 0..3 {
                let e = epsilon3(i, j, k);
                if e != 0 {
                    acc = &acc + &(&RationalFunction::from_int(e as i64) * &(&a[i] * &b[j]));
                }
            }
        }
        acc
    };
    let n_prime: Vec<_> = (0..3)
        .map(|k| &n[k] + &cross(&n, &q, k).checked_div(&q0).expect("nonzero"))
        .collect();
    for i in 0..3 {
        let delta_phi: RationalFunction = (0..3)
            .map(|j| &n[j] * &poisson_bracket(&q[i], &m.constraints[j], &ext))
            .sum();
        let delta_psi: RationalFunction = (0..3)
            .map(|j| &n_prime[j] * &poisson_bracket(&q[i], &psis[j], &ext))
            .sum();
        let direct = &cross(&n, &q, i) + &(&q0 * &n[i]);
        identities.push(IdentityCheck::new(
            format!("delta q{} = (n x q){} + q0 n{}", i + 1, i + 1, i + 1),
            &delta_phi,
            &direct,
        ));
        identities.push(IdentityCheck::new(
            format!("delta q{} agrees under n -> n'", i + 1),
            &delta_phi,
            &delta_psi,
        ));
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let b = poisson_bracket(&psis[i], &psis[j], chart);
        let k = 3 - i - j;
        let closed = &(&q[i] * &p[j]) - &(&q[j] * &p[i]);
        let via_psi = (&RationalFunction::from_int(epsilon3(i, j, k) as i64) * &cross(&q, &psis, k))
            .checked_div(&q0)?;
        identities.push(IdentityCheck::new(
            format!("{{psi{}, psi{}}} = q{} p{} - q{} p{}", i + 1, j + 1, i + 1, j + 1, j + 1, i + 1),
            &b,
            &closed,
        ));
        identities.push(IdentityCheck::new(
            format!("{{psi{}, psi{}}} = eps (q x psi) / q0", i + 1, j + 1),
            &b,
            &via_psi,
        ));
    }

    let chart_conditions = vec![q0, norm];
    let (brackets, witnesses) =
        bracket_table(chart, &psis, &chart_conditions, &[0, 1, 2], None, opts)?;
    Ok(AbelianSet {
        names: (1..=3).map(|i| format!("psi{i}")).collect(),
        psis,
        c_matrix,
        chart_conditions,
        brackets,
        weak_generators: vec![0, 1, 2],
        witnesses,
        identities,
    })
}
