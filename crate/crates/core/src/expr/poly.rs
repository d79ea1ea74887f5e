use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{Exponent, Monomial};
use super::symbol::{Symbol, SymbolTable};
use super::valuation::Valuation;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept sorted in descending graded-lex order with no zero
/// coefficients, so the first term is the leading term.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, BigRational)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: vec![(Monomial::one(), c)],
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(sym: Symbol) -> Self {
        Self::monomial(Monomial::var(sym, 1), BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: vec![(m, c)] }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(BigRational::zero) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, BigRational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    pub fn degree_in(&self, sym: Symbol) -> Exponent {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(sym))
            .max()
            .unwrap_or(0)
    }

    pub fn uses(&self, sym: Symbol) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(sym) > 0)
    }

    /// Symbols occurring with nonzero exponent, in order.
    pub fn symbols(&self) -> Vec<Symbol> {
        let width = self.terms.iter().map(|(m, _)| m.width()).max().unwrap_or(0);
        (0..width)
            .map(Symbol::from_index)
            .filter(|&s| self.uses(s))
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Self::zero();
        }
        // multiplying by a monomial preserves the term order
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb) {
                    Ordering::Greater => {
                        out.push((ma.clone(), ca.clone()));
                        a.next();
                    }
                    Ordering::Less => {
                        out.push((mb.clone(), if negate_other { -cb } else { cb.clone() }));
                        b.next();
                    }
                    Ordering::Equal => {
                        let c = if negate_other { ca - cb } else { ca + cb };
                        if !c.is_zero() {
                            out.push((ma.clone(), c));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some((ma, ca)), None) => {
                    out.push((ma.clone(), ca.clone()));
                    a.next();
                }
                (None, Some((mb, cb))) => {
                    out.push((mb.clone(), if negate_other { -cb } else { cb.clone() }));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Polynomial { terms: out }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if other.terms.len() == 1 {
            return self.mul_monomial(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, BigRational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    /// Quotient `self / divisor` if the division is exact, `None` otherwise.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if self.total_degree() < divisor.total_degree() {
            return None;
        }
        for s in divisor.symbols() {
            if self.degree_in(s) < divisor.degree_in(s) {
                return None;
            }
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem: BTreeMap<Reverse<Monomial>, BigRational> = self
            .terms
            .iter()
            .map(|(m, c)| (Reverse(m.clone()), c.clone()))
            .collect();
        let mut quotient = Vec::new();
        while let Some((Reverse(m), c)) = rem.pop_first() {
            let qm = m.checked_div(&lm)?;
            let qc = c / &lc;
            for (dm, dc) in divisor.terms.iter().skip(1) {
                let key = Reverse(dm.mul(&qm));
                let delta = dc * &qc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        // quotient terms are produced in strictly decreasing order
        Some(Polynomial { terms: quotient })
    }

    pub fn diff(&self, sym: Symbol) -> Polynomial {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(sym);
            if e == 0 {
                continue;
            }
            let dm = rest.mul(&Monomial::var(sym, e - 1));
            terms.push((dm, c * BigRational::from_integer(BigInt::from(e))));
        }
        // differentiation can reorder terms when exponents drop
        Self::from_terms(terms)
    }

    /// Coefficient of `sym^k`, as a polynomial in the remaining symbols.
    pub fn coefficient_of(&self, sym: Symbol, k: Exponent) -> Polynomial {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let (rest, e) = m.split_off(sym);
            (e == k).then(|| (rest, c.clone()))
        }))
    }

    /// Rational content: `self == content * primitive` where the primitive part
    /// has coprime integer coefficients and a positive leading coefficient.
    pub fn content(&self) -> BigRational {
        let Some((_, lc)) = self.leading() else {
            return BigRational::zero();
        };
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let c = BigRational::new(num_gcd, den_lcm);
        if lc.is_negative() {
            -c
        } else {
            c
        }
    }

    pub fn primitive_part(&self) -> Polynomial {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.content().recip())
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, (m, _)| acc.gcd(m))
    }

    pub fn eval(&self, point: &Valuation) -> Result<BigRational, Symbol> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (s, e) in m.factors() {
                let v = point.get(s).ok_or(s)?;
                term *= num_traits::pow(v.clone(), e as usize);
            }
            total += term;
        }
        Ok(total)
    }

    /// Canonical text: terms in descending monomial order with explicit `*`.
    pub fn render(&self, table: &SymbolTable) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut parts: Vec<String> = Vec::new();
            if m.is_one() || !abs.is_one() {
                parts.push(abs.to_string());
            }
            for (s, e) in m.factors() {
                if e == 1 {
                    parts.push(table.name(s).to_string());
                } else {
                    parts.push(format!("{}^{}", table.name(s), e));
                }
            }
            let _ = write!(out, "{}", parts.join("*"));
        }
        out
    }
}

impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            let ord = a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m:?}")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                $body(self, rhs)
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                $body(&self, &rhs)
            }
        }
        impl<'a> $trait<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                $body(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Polynomial, b: &Polynomial| a.merge(b, false));
forward_binop!(Sub, sub, |a: &Polynomial, b: &Polynomial| a.merge(b, true));
forward_binop!(Mul, mul, |a: &Polynomial, b: &Polynomial| a.product(b));

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
