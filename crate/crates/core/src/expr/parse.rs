//! Infix parser.
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = ("-" | "+") unary | power ;
//! power    = primary [ "^" exponent ] ;
//! exponent = ("-" | "+") exponent | primary [ "^" exponent ] ;
//! primary  = integer | variable | ("ln" | "exp") "(" expr ")" | "(" expr ")" ;
//! variable = "x" | "y" | "z" | "u" | "v" ;
//! ```
//!
//! An exponent must reduce to a rational constant; `x^(1/3)` and `x^-2` are
//! accepted, `x^y` is not. Whitespace is ignored. The result is canonical.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::Expr;
use crate::error::{Error, Result};
use crate::var::Var;
use crate::{BigInt, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = s[start..i].parse().map_err(|_| Error::Syntax {
                position: start,
                message: "bad integer".to_string(),
            })?;
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Syntax { position: i, message: alloc::format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { position: self.offset(), message: msg.to_string() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = alloc::vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(self.term()?.neg());
            } else {
                break;
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(self.unary()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat('^') {
            let q = self.exponent()?;
            return Ok(Expr::pow(base, q));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Rational> {
        let at = self.offset();
        let e = self.exponent_expr()?;
        match e {
            Expr::Const(q) => Ok(q),
            _ => Err(Error::NonRationalExponent { position: at }),
        }
    }

    fn exponent_expr(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(self.exponent_expr()?.neg());
        }
        if self.eat('+') {
            return self.exponent_expr();
        }
        let base = self.primary()?;
        if self.eat('^') {
            let q = self.exponent()?;
            return Ok(Expr::pow(base, q));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        match tok {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::Const(Rational::from_integer(n)))
            }
            Tok::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(v) = Var::from_name(&name) {
                    self.pos += 1;
                    return Ok(Expr::Var(v));
                }
                let f: fn(Expr) -> Expr = match name.as_str() {
                    "ln" => Expr::ln,
                    "exp" => Expr::exp,
                    _ => return self.err(&alloc::format!("unknown identifier '{name}'")),
                };
                self.pos += 1;
                if !self.eat('(') {
                    return self.err("expected '(' after function name");
                }
                let arg = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(f(arg))
            }
            Tok::Op(c) => self.err(&alloc::format!("unexpected '{c}'")),
        }
    }
}

/// Parse infix text into a canonical [`Expr`].
pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
