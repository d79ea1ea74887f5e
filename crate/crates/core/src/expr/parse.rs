//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' nonneg-integer)?
//! atom   := integer | identifier | '(' expr ')' | '-' factor
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use super::rational::RationalFunction;
use super::symbol::SymbolTable;
use super::ExprError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().expect("digits")), start));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(ExprError::Syntax {
                    position: start,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((tok, start));
        i += c.len_utf8();
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    table: &'a SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<RationalFunction, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let rhs = self.factor()?;
                    if rhs.is_zero() {
                        return Err(ExprError::DivisionByZeroLiteral { position: at });
                    }
                    acc = acc.checked_div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RationalFunction, ExprError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            return match self.bump() {
                Tok::Int(n) => match u32::try_from(&n) {
                    Ok(k) if k <= u16::MAX as u32 => Ok(base.pow(k)),
                    _ => self.syntax("exponent too large"),
                },
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    self.syntax("expected a non-negative integer exponent")
                }
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction, ExprError> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => Ok(RationalFunction::constant(BigRational::from_integer(n))),
            Tok::Ident(name) => match self.table.get(&name) {
                Some(s) => Ok(RationalFunction::var(s)),
                None => Err(ExprError::UnknownSymbol { name, position: at }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.syntax("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Minus => Ok(-self.factor()?),
            Tok::End => Err(ExprError::Syntax {
                position: at,
                message: "unexpected end of input".into(),
            }),
            other => Err(ExprError::Syntax {
                position: at,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }
}

/// Parses `text` over the symbols registered in `table`.
pub fn parse_expr(text: &str, table: &SymbolTable) -> Result<RationalFunction, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        table,
    };
    let f = p.expr()?;
    if *p.peek() != Tok::End {
        return p.syntax("trailing input");
    }
    Ok(f)
}
