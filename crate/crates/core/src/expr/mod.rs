//! Exact multivariate rational-function arithmetic.
//!
//! Everything here is exact: coefficients are arbitrary-precision rationals
//! and identities are decided by polynomial subtraction, never by floating
//! point evaluation.

mod monomial;
mod parse;
mod poly;
mod rational;
mod symbol;
mod valuation;

use thiserror::Error;

pub use monomial::{Exponent, Monomial};
pub use num_rational::BigRational;
pub use parse::parse_expr;
pub use poly::Polynomial;
pub use rational::RationalFunction;
pub use symbol::{Symbol, SymbolTable};
pub use valuation::Valuation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unknown symbol '{name}' at offset {position}")]
    UnknownSymbol { name: String, position: usize },
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("division by a constant zero at offset {position}")]
    DivisionByZeroLiteral { position: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution makes a denominator identically zero")]
    IdenticallyZeroDenominator,
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishesAtPoint,
    #[error("symbol #{} is not bound at the evaluation point", .0.index())]
    UnboundSymbol(Symbol),
    #[error("invalid symbol name '{0}'")]
    InvalidSymbolName(String),
    #[error("symbol '{0}' registered twice")]
    DuplicateSymbol(String),
}

/// True iff `f` vanishes identically.
pub fn is_zero(f: &RationalFunction) -> bool {
    f.is_zero()
}

pub fn diff(f: &RationalFunction, s: Symbol) -> RationalFunction {
    f.diff(s)
}

pub fn substitute(
    f: &RationalFunction,
    bindings: &[(Symbol, RationalFunction)],
) -> Result<RationalFunction, ExprError> {
    f.substitute(bindings)
}

pub fn eval_point(f: &RationalFunction, point: &Valuation) -> Result<BigRational, ExprError> {
    f.eval(point)
}

/// Integer-valued rational shorthand.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}
