//! Canonical Poisson brackets, bracket matrices, Jacobians and exact determinants.

use std::ops::Index;

use num_rational::BigRational;
use thiserror::Error;

use crate::expr::{
    parse_expr, ExprError, Polynomial, RationalFunction, Symbol, SymbolTable, Valuation,
};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoissonError {
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("{rows}x{cols} matrix needs {expected} entries, got {got}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("coordinate and momentum lists differ in length ({0} vs {1})")]
    PairLengthMismatch(usize, usize),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Ordered canonical pairs `(q, p)` plus any non-dynamical parameter symbols.
///
/// Registration order is: primary coordinates, primary momenta, auxiliary
/// coordinates, auxiliary momenta, then parameters. That order is the
/// monomial variable order and the column order of [`jacobian`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalChart {
    symbols: SymbolTable,
    pairs: Vec<(Symbol, Symbol)>,
    primary: usize,
}

impl CanonicalChart {
    pub fn new(coordinates: &[&str], momenta: &[&str]) -> Result<Self, PoissonError> {
        let mut chart = CanonicalChart {
            symbols: SymbolTable::new(),
            pairs: Vec::new(),
            primary: 0,
        };
        chart.push_block(coordinates, momenta)?;
        chart.primary = chart.pairs.len();
        Ok(chart)
    }

    /// Standard names `q1..qn`, `p1..pn`.
    pub fn standard(n: usize) -> Self {
        let qs: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
        let ps: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
        let qs: Vec<&str> = qs.iter().map(String::as_str).collect();
        let ps: Vec<&str> = ps.iter().map(String::as_str).collect();
        Self::new(&qs, &ps).expect("standard names are valid")
    }

    fn push_block(&mut self, coordinates: &[&str], momenta: &[&str]) -> Result<(), PoissonError> {
        if coordinates.len() != momenta.len() {
            return Err(PoissonError::PairLengthMismatch(
                coordinates.len(),
                momenta.len(),
            ));
        }
        let qs = coordinates
            .iter()
            .map(|n| self.symbols.insert(n))
            .collect::<Result<Vec<_>, _>>()?;
        let ps = momenta
            .iter()
            .map(|n| self.symbols.insert(n))
            .collect::<Result<Vec<_>, _>>()?;
        self.pairs.extend(qs.into_iter().zip(ps));
        Ok(())
    }

    fn has_parameters(&self) -> bool {
        self.symbols.len() > self.pairs.len() * 2
    }

    /// Appends an auxiliary canonical block. Must precede any parameters.
    pub fn with_auxiliary(mut self, coordinates: &[&str], momenta: &[&str]) -> Result<Self, PoissonError> {
        assert!(!self.has_parameters(), "auxiliary pairs must be added before parameters");
        self.push_block(coordinates, momenta)?;
        Ok(self)
    }

    /// Registers a non-dynamical symbol (gauge parameter, `eps`, ...), reusing it if present.
    pub fn ensure_parameter(&mut self, name: &str) -> Result<Symbol, PoissonError> {
        if let Some(s) = self.symbols.get(name) {
            if self.is_phase_space(s) {
                return Err(ExprError::DuplicateSymbol(name.to_string()).into());
            }
            return Ok(s);
        }
        Ok(self.symbols.insert(name)?)
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn pairs(&self) -> &[(Symbol, Symbol)] {
        &self.pairs
    }

    pub fn primary_pairs(&self) -> &[(Symbol, Symbol)] {
        &self.pairs[..self.primary]
    }

    pub fn auxiliary_pairs(&self) -> &[(Symbol, Symbol)] {
        &self.pairs[self.primary..]
    }

    pub fn dim(&self) -> usize {
        self.primary
    }

    /// Primary coordinate `q_{i+1}`.
    pub fn q(&self, i: usize) -> Symbol {
        self.pairs[i].0
    }

    /// Primary momentum `p_{i+1}`.
    pub fn p(&self, i: usize) -> Symbol {
        self.pairs[i].1
    }

    pub fn qv(&self, i: usize) -> RationalFunction {
        RationalFunction::var(self.q(i))
    }

    pub fn pv(&self, i: usize) -> RationalFunction {
        RationalFunction::var(self.p(i))
    }

    pub fn is_phase_space(&self, s: Symbol) -> bool {
        s.index() < self.pairs.len() * 2
    }

    pub fn is_momentum(&self, s: Symbol) -> bool {
        self.pairs.iter().any(|&(_, p)| p == s)
    }

    pub fn is_coordinate(&self, s: Symbol) -> bool {
        self.pairs.iter().any(|&(q, _)| q == s)
    }

    /// Phase-space symbols `z_mu` in registration order.
    pub fn phase_space(&self) -> Vec<Symbol> {
        self.symbols
            .symbols()
            .filter(|&s| self.is_phase_space(s))
            .collect()
    }

    pub fn parameters(&self) -> Vec<Symbol> {
        self.symbols
            .symbols()
            .filter(|&s| !self.is_phase_space(s))
            .collect()
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.symbols.get(name)
    }

    pub fn parse(&self, text: &str) -> Result<RationalFunction, ExprError> {
        parse_expr(text, &self.symbols)
    }

    pub fn render(&self, f: &RationalFunction) -> String {
        f.render(&self.symbols)
    }
}

/// `{F, G} = sum over pairs of dF/dq dG/dp - dF/dp dG/dq`.
pub fn poisson_bracket(
    f: &RationalFunction,
    g: &RationalFunction,
    chart: &CanonicalChart,
) -> RationalFunction {
    let mut terms = Vec::new();
    for &(q, p) in chart.pairs() {
        if f.uses(q) && g.uses(p) {
            terms.push(&f.diff(q) * &g.diff(p));
        }
        if f.uses(p) && g.uses(q) {
            terms.push(-(&f.diff(p) * &g.diff(q)));
        }
    }
    sum_balanced(terms)
}

/// Pairwise summation keeps intermediate denominators balanced.
fn sum_balanced(mut terms: Vec<RationalFunction>) -> RationalFunction {
    if terms.is_empty() {
        return RationalFunction::zero();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(&a + &b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().expect("nonempty")
}

/// Rectangular grid of rational-function entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RationalFunction>,
}

impl ExprMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<RationalFunction>) -> Result<Self, PoissonError> {
        if entries.len() != rows * cols {
            return Err(PoissonError::Shape {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(ExprMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> RationalFunction) -> Self {
        let mut f = f;
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        ExprMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<RationalFunction>>) -> Result<Self, PoissonError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let entries: Vec<_> = rows.into_iter().flatten().collect();
        Self::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&RationalFunction> {
        (i < self.rows && j < self.cols).then(|| &self.entries[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[RationalFunction] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> ExprMatrix {
        ExprMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// `self * v` for a column of rational functions.
    pub fn apply(&self, v: &[RationalFunction]) -> Vec<RationalFunction> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| sum_balanced(self.row(i).iter().zip(v).map(|(a, b)| a * b).collect()))
            .collect()
    }

    pub fn eval(&self, point: &Valuation) -> Result<Vec<Vec<BigRational>>, ExprError> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.eval(point)).collect())
            .collect()
    }

    pub fn render(&self, table: &SymbolTable) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.render(table)).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for ExprMatrix {
    type Output = RationalFunction;
    fn index(&self, (i, j): (usize, usize)) -> &RationalFunction {
        self.get(i, j).unwrap_or_else(|| {
            panic!("index ({i}, {j}) out of bounds for {}x{} matrix", self.rows, self.cols)
        })
    }
}

/// Entry `(i, j)` is `{a_i, b_j}`.
pub fn bracket_matrix(
    a: &[RationalFunction],
    b: &[RationalFunction],
    chart: &CanonicalChart,
) -> ExprMatrix {
    bracket_matrix_with(a, b, chart, Execution::default())
}

pub fn bracket_matrix_with(
    a: &[RationalFunction],
    b: &[RationalFunction],
    chart: &CanonicalChart,
    exec: Execution,
) -> ExprMatrix {
    let cols = b.len();
    let entries = par::map_range(exec, a.len() * cols, |k| {
        poisson_bracket(&a[k / cols], &b[k % cols], chart)
    });
    ExprMatrix {
        rows: a.len(),
        cols,
        entries,
    }
}

/// `A x 2N` matrix of partial derivatives, columns in phase-space order.
pub fn jacobian(constraints: &[RationalFunction], chart: &CanonicalChart) -> ExprMatrix {
    let z = chart.phase_space();
    ExprMatrix::from_fn(constraints.len(), z.len(), |i, j| constraints[i].diff(z[j]))
}

/// Exact determinant: cofactor expansion up to 4x4, Bareiss beyond.
pub fn det(m: &ExprMatrix) -> Result<RationalFunction, PoissonError> {
    if m.rows <= 4 {
        det_cofactor(m)
    } else {
        det_bareiss(m)
    }
}

fn square_check(m: &ExprMatrix) -> Result<(), PoissonError> {
    if !m.is_square() {
        return Err(PoissonError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok(())
}

/// Laplace expansion along the first row.
pub fn det_cofactor(m: &ExprMatrix) -> Result<RationalFunction, PoissonError> {
    square_check(m)?;
    let idx: Vec<usize> = (0..m.rows).collect();
    Ok(cofactor(m, 0, &idx))
}

fn cofactor(m: &ExprMatrix, row: usize, cols: &[usize]) -> RationalFunction {
    match cols.len() {
        0 => RationalFunction::one(),
        1 => m[(row, cols[0])].clone(),
        _ => {
            let mut terms = Vec::new();
            for (k, &c) in cols.iter().enumerate() {
                let e = &m[(row, c)];
                if e.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = cofactor(m, row + 1, &rest);
                let t = e * &minor;
                terms.push(if k % 2 == 0 { t } else { -t });
            }
            sum_balanced(terms)
        }
    }
}

/// Fraction-free Bareiss elimination after clearing each row's denominator.
pub fn det_bareiss(m: &ExprMatrix) -> Result<RationalFunction, PoissonError> {
    square_check(m)?;
    let n = m.rows;
    if n == 0 {
        return Ok(RationalFunction::one());
    }
    let mut scale = RationalFunction::one();
    let mut a: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
    for i in 0..n {
        let row = m.row(i);
        let d = RationalFunction::common_denominator(row.iter());
        let dr = RationalFunction::from_poly(d.clone());
        a.push(
            row.iter()
                .map(|e| {
                    (e * &dr)
                        .as_polynomial()
                        .expect("common denominator clears the row")
                })
                .collect(),
        );
        scale = scale.checked_div(&dr)?;
    }
    let mut sign = 1i64;
    let mut prev = Polynomial::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(RationalFunction::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t
                    .exact_div(&prev)
                    .expect("Bareiss step divides exactly");
            }
            a[i][k] = Polynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let d = RationalFunction::from_poly(a[n - 1][n - 1].clone());
    Ok(&(&d * &scale) * &RationalFunction::from_int(sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_pairs() {
        let chart = CanonicalChart::standard(2);
        let q1 = chart.qv(0);
        let p1 = chart.pv(0);
        let p2 = chart.pv(1);
        assert_eq!(poisson_bracket(&q1, &p1, &chart), RationalFunction::one());
        assert!(poisson_bracket(&q1, &p2, &chart).is_zero());
        assert_eq!(poisson_bracket(&p1, &q1, &chart), RationalFunction::from_int(-1));
    }

    #[test]
    fn det_small_cases() {
        let m = ExprMatrix::from_rows(vec![
            vec![RationalFunction::zero(), RationalFunction::one()],
            vec![RationalFunction::from_int(-1), RationalFunction::zero()],
        ])
        .unwrap();
        assert_eq!(det(&m).unwrap(), RationalFunction::one());
        assert_eq!(det_bareiss(&m).unwrap(), RationalFunction::one());
        let empty = ExprMatrix::from_rows(vec![]).unwrap();
        assert_eq!(det(&empty).unwrap(), RationalFunction::one());
        let rect = ExprMatrix::from_fn(2, 3, |_, _| RationalFunction::one());
        assert!(matches!(det(&rect), Err(PoissonError::NotSquare { rows: 2, cols: 3 })));
    }

    #[test]
    fn jacobian_of_single_product() {
        let chart = CanonicalChart::standard(2);
        let f = chart.parse("q1*p2").unwrap();
        let j = jacobian(&[f], &chart);
        assert_eq!(j.rows(), 1);
        assert_eq!(j.cols(), 4);
        // columns: q1 q2 p1 p2
        assert_eq!(j[(0, 0)], chart.pv(1));
        assert!(j[(0, 1)].is_zero());
        assert!(j[(0, 2)].is_zero());
        assert_eq!(j[(0, 3)], chart.qv(0));
    }

    #[test]
    fn out_of_bounds_access_is_none() {
        let m = ExprMatrix::from_fn(2, 2, |_, _| RationalFunction::one());
        assert!(m.get(2, 0).is_none());
        assert!(m.get(0, 2).is_none());
    }
}
