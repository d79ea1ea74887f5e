use std::collections::BTreeMap;

use num_rational::BigRational;

use super::symbol::{Symbol, SymbolTable};

/// Exact assignment of rational values to symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    values: Vec<Option<BigRational>>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, sym: Symbol, value: BigRational) {
        if self.values.len() <= sym.index() {
            self.values.resize(sym.index() + 1, None);
        }
        self.values[sym.index()] = Some(value);
    }

    pub fn with(mut self, sym: Symbol, value: BigRational) -> Self {
        self.set(sym, value);
        self
    }

    pub fn get(&self, sym: Symbol) -> Option<&BigRational> {
        self.values.get(sym.index()).and_then(Option::as_ref)
    }

    pub fn is_bound(&self, sym: Symbol) -> bool {
        self.get(sym).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, &BigRational)> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.as_ref().map(|v| (Symbol::from_index(i), v)))
    }

    /// Name-keyed copy, handy for reports.
    pub fn named(&self, table: &SymbolTable) -> BTreeMap<String, BigRational> {
        self.iter()
            .map(|(s, v)| (table.name(s).to_string(), v.clone()))
            .collect()
    }
}

impl From<&BTreeMap<Symbol, BigRational>> for Valuation {
    fn from(map: &BTreeMap<Symbol, BigRational>) -> Self {
        let mut v = Valuation::new();
        for (s, x) in map {
            v.set(*s, x.clone());
        }
        v
    }
}

impl FromIterator<(Symbol, BigRational)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Symbol, BigRational)>>(iter: I) -> Self {
        let mut v = Valuation::new();
        for (s, x) in iter {
            v.set(s, x);
        }
        v
    }
}
