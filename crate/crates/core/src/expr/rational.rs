use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::monomial::{Exponent, Monomial};
use super::poly::Polynomial;
use super::symbol::{Symbol, SymbolTable};
use super::valuation::Valuation;
use super::ExprError;

/// Exact multivariate rational function `num / den`.
///
/// The denominator is stored as a product of powers of primitive,
/// positive-leading-coefficient polynomial factors; all rational constants
/// live in the numerator. Equality is decided by cross-multiplication, so the
/// representation never needs a multivariate gcd. Factors that divide each
/// other are refined when denominators meet, and the numerator is divided by
/// any factor it is an exact multiple of.
#[derive(Clone, Default)]
pub struct RationalFunction {
    num: Polynomial,
    den: Vec<(Polynomial, u32)>,
}

/// Splits a nonzero polynomial into its rational content and normalized factors.
fn factor_out(p: &Polynomial) -> (BigRational, Vec<(Polynomial, u32)>) {
    debug_assert!(!p.is_zero());
    let content = p.content();
    let prim = p.scale(&content.recip());
    let mono = prim.monomial_content();
    let mut factors = Vec::new();
    let rest = if mono.is_one() {
        prim
    } else {
        for (s, e) in mono.factors() {
            factors.push((Polynomial::var(s), e as u32));
        }
        prim.exact_div(&Polynomial::monomial(mono, BigRational::one()))
            .expect("monomial content divides")
    };
    if !rest.is_constant() {
        factors.push((rest, 1));
    }
    (content, factors)
}

/// Normalizes an exact quotient of normalized factors (content is a unit).
fn renormalize(q: Polynomial) -> Vec<(Polynomial, u32)> {
    let (c, f) = factor_out(&q);
    debug_assert!(c.is_one(), "quotient of primitive factors must be primitive");
    f
}

/// Inserts `p^e` into a factor list, refining whenever one factor divides another.
fn insert_factor(list: &mut Vec<(Polynomial, u32)>, p: Polynomial, e: u32) {
    let mut pending = vec![(p, e)];
    'outer: while let Some((p, e)) = pending.pop() {
        if p.is_constant() || e == 0 {
            continue;
        }
        for i in 0..list.len() {
            let f = &list[i].0;
            if *f == p {
                list[i].1 += e;
                continue 'outer;
            }
            let (df, dp) = (f.total_degree(), p.total_degree());
            if df < dp {
                if let Some(q) = p.exact_div(f) {
                    list[i].1 += e;
                    pending.extend(renormalize(q).into_iter().map(|(g, k)| (g, k * e)));
                    continue 'outer;
                }
            } else if df > dp {
                if let Some(q) = f.exact_div(&p) {
                    let (_, k) = list.remove(i);
                    pending.extend(renormalize(q).into_iter().map(|(g, j)| (g, j * k)));
                    pending.push((p, e + k));
                    continue 'outer;
                }
            }
        }
        list.push((p, e));
    }
    list.sort_by(|a, b| a.0.cmp(&b.0));
}

fn expand_factors(factors: &[(Polynomial, u32)]) -> Polynomial {
    factors
        .iter()
        .fold(Polynomial::one(), |acc, (f, k)| &acc * &f.pow(*k))
}

/// Exponent of every basis element in `factors`; the basis must be refined
/// against `factors` already.
fn exponents_over(basis: &[(Polynomial, u32)], factors: &[(Polynomial, u32)]) -> Vec<u32> {
    let mut exps = vec![0u32; basis.len()];
    for (f, k) in factors {
        let mut rest = f.clone();
        for (i, (g, _)) in basis.iter().enumerate() {
            if rest.is_constant() {
                break;
            }
            while let Some(q) = rest.exact_div(g) {
                exps[i] += k;
                rest = q;
                if rest.is_constant() {
                    break;
                }
            }
        }
        debug_assert!(rest.is_constant(), "factor not expressible over refined basis");
    }
    exps
}

impl RationalFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(Polynomial::from_int(c))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn var(sym: Symbol) -> Self {
        Self::from_poly(Polynomial::var(sym))
    }

    /// `num / den`; fails if `den` is the zero polynomial.
    pub fn new(num: Polynomial, den: &Polynomial) -> Result<Self, ExprError> {
        Self::from_poly(num).checked_div(&Self::from_poly(den.clone()))
    }

    /// Least common multiple of the (factored) denominators of `fs`.
    pub fn common_denominator<'a, I>(fs: I) -> Polynomial
    where
        I: IntoIterator<Item = &'a RationalFunction>,
    {
        let fs: Vec<&RationalFunction> = fs.into_iter().collect();
        let mut basis: Vec<(Polynomial, u32)> = Vec::new();
        for f in &fs {
            for (g, _) in &f.den {
                insert_factor(&mut basis, g.clone(), 1);
            }
        }
        let mut top = vec![0u32; basis.len()];
        for f in &fs {
            for (t, e) in top.iter_mut().zip(exponents_over(&basis, &f.den)) {
                *t = (*t).max(e);
            }
        }
        basis
            .iter()
            .zip(top)
            .fold(Polynomial::one(), |acc, ((g, _), k)| &acc * &g.pow(k))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    /// Expanded denominator; its leading coefficient is positive.
    pub fn denominator(&self) -> Polynomial {
        expand_factors(&self.den)
    }

    /// Denominator as a product of normalized factors with multiplicities.
    pub fn denominator_factors(&self) -> &[(Polynomial, u32)] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// The polynomial this function equals, if its denominator divides out.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        if self.den.is_empty() {
            Some(self.num.clone())
        } else {
            self.num.exact_div(&self.denominator())
        }
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        self.as_polynomial().and_then(|p| p.as_constant())
    }

    pub fn uses(&self, sym: Symbol) -> bool {
        self.num.uses(sym) || self.den.iter().any(|(f, _)| f.uses(sym))
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut all = self.num.symbols();
        for (f, _) in &self.den {
            all.extend(f.symbols());
        }
        all.sort();
        all.dedup();
        all
    }

    /// `num / den(self)`: keeps the factored denominator, swaps the numerator.
    pub fn with_numerator(&self, num: Polynomial) -> Self {
        RationalFunction {
            num,
            den: self.den.clone(),
        }
        .cancel()
    }

    fn cancel(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        for (f, k) in self.den.iter_mut() {
            while *k > 0 {
                match self.num.exact_div(f) {
                    Some(q) => {
                        self.num = q;
                        *k -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, k)| *k > 0);
        self
    }

    fn sum(&self, other: &Self, negate: bool) -> Self {
        let rhs_num = if negate { -&other.num } else { other.num.clone() };
        if self.num.is_zero() {
            return RationalFunction {
                num: rhs_num,
                den: other.den.clone(),
            };
        }
        if other.num.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RationalFunction {
                num: &self.num + &rhs_num,
                den: self.den.clone(),
            }
            .cancel();
        }
        let mut basis: Vec<(Polynomial, u32)> = Vec::new();
        for (f, _) in self.den.iter().chain(other.den.iter()) {
            insert_factor(&mut basis, f.clone(), 1);
        }
        let ea = exponents_over(&basis, &self.den);
        let eb = exponents_over(&basis, &other.den);
        let mut lcm = Vec::with_capacity(basis.len());
        let mut mult_a = Polynomial::one();
        let mut mult_b = Polynomial::one();
        for (i, (g, _)) in basis.iter().enumerate() {
            let top = ea[i].max(eb[i]);
            if top > ea[i] {
                mult_a = &mult_a * &g.pow(top - ea[i]);
            }
            if top > eb[i] {
                mult_b = &mult_b * &g.pow(top - eb[i]);
            }
            if top > 0 {
                lcm.push((g.clone(), top));
            }
        }
        RationalFunction {
            num: &(&self.num * &mult_a) + &(&rhs_num * &mult_b),
            den: lcm,
        }
        .cancel()
    }

    fn product(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return Self::zero();
        }
        // cross-cancel before multiplying so the product stays small
        let a = RationalFunction {
            num: self.num.clone(),
            den: other.den.clone(),
        }
        .cancel();
        let b = RationalFunction {
            num: other.num.clone(),
            den: self.den.clone(),
        }
        .cancel();
        let mut den = a.den;
        for (f, k) in b.den {
            insert_factor(&mut den, f, k);
        }
        RationalFunction {
            num: &a.num * &b.num,
            den,
        }
    }

    pub fn recip(&self) -> Result<Self, ExprError> {
        if self.num.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        let (content, factors) = factor_out(&self.num);
        let mut den = Vec::new();
        for (f, k) in factors {
            insert_factor(&mut den, f, k);
        }
        Ok(RationalFunction {
            num: self.denominator().scale(&content.recip()),
            den,
        }
        .cancel())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExprError> {
        Ok(self.product(&other.recip()?))
    }

    pub fn pow(&self, k: u32) -> Self {
        RationalFunction {
            num: self.num.pow(k),
            den: self.den.iter().map(|(f, e)| (f.clone(), e * k)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Partial derivative by the quotient rule over the factored denominator.
    pub fn diff(&self, sym: Symbol) -> Self {
        let dn = self.num.diff(sym);
        let moving: Vec<usize> = (0..self.den.len())
            .filter(|&i| self.den[i].0.uses(sym))
            .collect();
        if moving.is_empty() {
            return RationalFunction {
                num: dn,
                den: self.den.clone(),
            }
            .cancel();
        }
        // d(n / prod f_i^k_i) = (n' P - n sum_i k_i f_i' P/f_i) / (D P), P = prod over moving f_i
        let p_all = moving
            .iter()
            .fold(Polynomial::one(), |acc, &i| &acc * &self.den[i].0);
        let mut num = &dn * &p_all;
        for &i in &moving {
            let (f, k) = &self.den[i];
            let others = moving
                .iter()
                .filter(|&&j| j != i)
                .fold(Polynomial::one(), |acc, &j| &acc * &self.den[j].0);
            let term = &(&self.num * &f.diff(sym)) * &others;
            num = &num - &term.scale(&BigRational::from_integer(BigInt::from(*k)));
        }
        let mut den = self.den.clone();
        for &i in &moving {
            den[i].1 += 1;
        }
        RationalFunction { num, den }.cancel()
    }

    /// Simultaneous substitution of symbols by rational functions.
    pub fn substitute(&self, bindings: &[(Symbol, RationalFunction)]) -> Result<Self, ExprError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut result = substitute_poly(&self.num, bindings);
        for (f, k) in &self.den {
            let fs = substitute_poly(f, bindings);
            if fs.is_zero() {
                return Err(ExprError::IdenticallyZeroDenominator);
            }
            result = result.checked_div(&fs.pow(*k))?;
        }
        Ok(result)
    }

    pub fn eval(&self, point: &Valuation) -> Result<BigRational, ExprError> {
        let mut den = BigRational::one();
        for (f, k) in &self.den {
            let v = f.eval(point).map_err(ExprError::UnboundSymbol)?;
            if v.is_zero() {
                return Err(ExprError::DenominatorVanishesAtPoint);
            }
            den *= num_traits::pow(v, *k as usize);
        }
        let n = self.num.eval(point).map_err(ExprError::UnboundSymbol)?;
        Ok(n / den)
    }

    /// Canonical text form: `num` alone, or `(num)/(den)` with both expanded.
    pub fn render(&self, table: &SymbolTable) -> String {
        if self.den.is_empty() {
            self.num.render(table)
        } else {
            format!(
                "({})/({})",
                self.num.render(table),
                self.denominator().render(table)
            )
        }
    }

    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> Display<'a> {
        Display { f: self, table }
    }
}

pub struct Display<'a> {
    f: &'a RationalFunction,
    table: &'a SymbolTable,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.f.render(self.table))
    }
}

fn substitute_poly(p: &Polynomial, bindings: &[(Symbol, RationalFunction)]) -> RationalFunction {
    let active: Vec<(Symbol, &RationalFunction, Exponent)> = bindings
        .iter()
        .filter_map(|(s, b)| {
            let d = p.degree_in(*s);
            (d > 0).then_some((*s, b, d))
        })
        .collect();
    if active.is_empty() {
        return RationalFunction::from_poly(p.clone());
    }
    // bring every term over the common denominator prod_s den(b_s)^deg_s(p)
    let powers: Vec<(Vec<Polynomial>, Vec<Polynomial>)> = active
        .iter()
        .map(|(_, b, d)| {
            let d = *d as usize;
            let dexp = b.denominator();
            let mut npow = vec![Polynomial::one()];
            let mut dpow = vec![Polynomial::one()];
            for j in 1..=d {
                npow.push(&npow[j - 1] * &b.num);
                dpow.push(&dpow[j - 1] * &dexp);
            }
            (npow, dpow)
        })
        .collect();
    let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
    for (m, c) in p.terms() {
        let mut rest = m.clone();
        let mut term = Polynomial::one();
        for (k, (s, _, d)) in active.iter().enumerate() {
            let (r, e) = rest.split_off(*s);
            rest = r;
            let (npow, dpow) = &powers[k];
            term = &term * &npow[e as usize];
            term = &term * &dpow[(*d - e) as usize];
        }
        for (tm, tc) in term.mul_monomial(&rest, c).terms() {
            *acc.entry(tm.clone()).or_insert_with(BigRational::zero) += tc;
        }
    }
    let num = Polynomial::from_terms(acc);
    let mut den = Vec::new();
    for (_, b, d) in &active {
        for (f, k) in &b.den {
            insert_factor(&mut den, f.clone(), k * (*d as u32));
        }
    }
    RationalFunction { num, den }.cancel()
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.sum(other, true).is_zero()
    }
}

impl Eq for RationalFunction {}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?}) / ({:?})", self.num, self.denominator())
        }
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl From<Symbol> for RationalFunction {
    fn from(s: Symbol) -> Self {
        Self::var(s)
    }
}

macro_rules! forward_rf_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a RationalFunction> for &'a RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &'a RationalFunction) -> RationalFunction {
                $body(self, rhs)
            }
        }
        impl $trait<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                $body(&self, &rhs)
            }
        }
        impl<'a> $trait<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &'a RationalFunction) -> RationalFunction {
                $body(&self, rhs)
            }
        }
        impl<'a> $trait<RationalFunction> for &'a RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                $body(self, &rhs)
            }
        }
    };
}

forward_rf_binop!(Add, add, |a: &RationalFunction, b: &RationalFunction| a
    .sum(b, false));
forward_rf_binop!(Sub, sub, |a: &RationalFunction, b: &RationalFunction| a
    .sum(b, true));
forward_rf_binop!(Mul, mul, |a: &RationalFunction, b: &RationalFunction| a
    .product(b));
forward_rf_binop!(Div, div, |a: &RationalFunction, b: &RationalFunction| a
    .checked_div(b)
    .expect("division by zero rational function"));

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(RationalFunction::zero(), |acc, x| &acc + &x)
    }
}
