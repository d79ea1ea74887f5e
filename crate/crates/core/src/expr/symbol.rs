use std::collections::HashMap;
use std::fmt;

use super::ExprError;

/// Handle to a name registered in a [`SymbolTable`].
///
/// Symbols compare by registration position, which is also the variable
/// order used by the monomial ordering.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u16);

impl Symbol {
    pub(crate) fn from_index(i: usize) -> Self {
        Symbol(u16::try_from(i).expect("symbol index exceeds u16"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({})", self.0)
    }
}

/// Ordered registry of symbol names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    lookup: HashMap<String, Symbol>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str) -> Result<Symbol, ExprError> {
        if !valid_name(name) {
            return Err(ExprError::InvalidSymbolName(name.to_string()));
        }
        if self.lookup.contains_key(name) {
            return Err(ExprError::DuplicateSymbol(name.to_string()));
        }
        let sym = Symbol::from_index(self.names.len());
        self.names.push(name.to_string());
        self.lookup.insert(name.to_string(), sym);
        Ok(sym)
    }

    /// Returns the existing symbol for `name`, registering it if absent.
    pub fn ensure(&mut self, name: &str) -> Result<Symbol, ExprError> {
        match self.lookup.get(name) {
            Some(&s) => Ok(s),
            None => self.insert(name),
        }
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len()).map(Symbol::from_index)
    }
}
