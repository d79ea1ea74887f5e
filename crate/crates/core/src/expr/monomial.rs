use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::symbol::Symbol;

pub type Exponent = u16;

/// Exponent vector indexed by symbol position in a [`SymbolTable`](super::SymbolTable).
///
/// Trailing zero exponents are never stored, so structural equality is
/// monomial equality. Ordering is graded-lexicographic: total degree first,
/// then the earlier symbol with the larger exponent wins.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: SmallVec<[Exponent; 16]>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(sym: Symbol, exp: Exponent) -> Self {
        let mut m = Self::one();
        if exp > 0 {
            m.exps.resize(sym.index() + 1, 0);
            m.exps[sym.index()] = exp;
            m.degree = exp as u32;
        }
        m
    }

    pub fn from_exponents(exps: &[Exponent]) -> Self {
        let mut m = Monomial {
            exps: exps.iter().copied().collect(),
            degree: exps.iter().map(|&e| e as u32).sum(),
        };
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.exps.last() == Some(&0) {
            self.exps.pop();
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponent(&self, sym: Symbol) -> Exponent {
        self.exps.get(sym.index()).copied().unwrap_or(0)
    }

    /// Number of exponent slots in use (one past the highest symbol present).
    pub fn width(&self) -> usize {
        self.exps.len()
    }

    /// Nonzero `(symbol, exponent)` pairs in symbol order.
    pub fn factors(&self) -> impl Iterator<Item = (Symbol, Exponent)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Symbol::from_index(i), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.exps.len() >= other.exps.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.exps.clone();
        for (e, s) in exps.iter_mut().zip(short.exps.iter()) {
            *e = e.checked_add(*s).expect("monomial exponent overflow");
        }
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree
            && self.exps.len() <= other.exps.len()
            && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut exps = self.exps.clone();
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e -= *o;
        }
        let mut m = Monomial {
            exps,
            degree: self.degree - other.degree,
        };
        m.trim();
        Some(m)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[Exponent; 16]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| *a.min(b))
            .collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        let mut m = Monomial { exps, degree };
        m.trim();
        m
    }

    /// Removes `sym` entirely, returning the stripped monomial and the exponent it had.
    pub fn split_off(&self, sym: Symbol) -> (Monomial, Exponent) {
        let e = self.exponent(sym);
        if e == 0 {
            return (self.clone(), 0);
        }
        let mut m = self.clone();
        m.exps[sym.index()] = 0;
        m.degree -= e as u32;
        m.trim();
        (m, e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let n = self.exps.len().max(other.exps.len());
            for i in 0..n {
                let a = self.exps.get(i).copied().unwrap_or(0);
                let b = other.exps.get(i).copied().unwrap_or(0);
                match a.cmp(&b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (s, e) in self.factors() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", s.index())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[Exponent]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn graded_lex_order() {
        // degree dominates
        assert!(m(&[0, 0, 2]) > m(&[1]));
        // same degree: earlier symbol wins
        assert!(m(&[1, 1]) > m(&[0, 2]));
        assert!(m(&[2]) > m(&[1, 1]));
        assert_eq!(m(&[1, 0, 0]), m(&[1]));
    }

    #[test]
    fn mul_and_div() {
        let a = m(&[1, 2]);
        let b = m(&[0, 1, 3]);
        let ab = a.mul(&b);
        assert_eq!(ab, m(&[1, 3, 3]));
        assert_eq!(ab.degree(), 7);
        assert_eq!(ab.checked_div(&b), Some(a.clone()));
        assert_eq!(a.checked_div(&b), None);
        assert_eq!(a.gcd(&b), m(&[0, 1]));
    }
}
