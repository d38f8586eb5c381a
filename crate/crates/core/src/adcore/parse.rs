//! Infix grammar for profile expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' unary)?          right associative
//! atom   := number | constant | variable | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Variables: `t` (base), `x`, `s`, `r` or `theta` (fiber). An expression may
//! use only one variable name. Constants: `pi`, `e`. Functions: `exp`, `log`
//! (alias `ln`), `sin`, `cos`, `sinh`, `cosh`, `sqrt`. Numbers accept the
//! usual decimal and exponent forms (`2`, `0.5`, `1e-3`).

use super::expr::{Expr, Func};
use crate::error::{Result, SmmsError};

pub const VARIABLES: [&str; 5] = ["t", "x", "s", "r", "theta"];

/// Parse an expression; returns the tree and the variable name used (if any).
pub fn parse_expr(src: &str) -> Result<(Expr, Option<String>)> {
    let mut p = Parser {
        src,
        pos: 0,
        var: None,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok((e, p.var))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    var: Option<String>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> SmmsError {
        SmmsError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs + self.term()?;
            } else if self.eat('-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = lhs * self.unary()?;
            } else if self.eat('/') {
                lhs = lhs / self.unary()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let exponent = self.unary()?;
            Ok(base.pow(exponent))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let ident = &self.src[start..self.pos];
                if let Some(func) = Func::from_name(ident) {
                    if !self.eat('(') {
                        return Err(self.err("expected '(' after function name"));
                    }
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.err("expected ')'"));
                    }
                    return Ok(Expr::call(func, arg));
                }
                match ident {
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "e" => Ok(Expr::Const(std::f64::consts::E)),
                    v if VARIABLES.contains(&v) => {
                        match &self.var {
                            Some(prev) if prev != v => {
                                self.pos = start;
                                return Err(self.err(&format!(
                                    "expression mixes variables '{prev}' and '{v}'"
                                )));
                            }
                            _ => self.var = Some(v.to_string()),
                        }
                        Ok(Expr::Var)
                    }
                    _ => {
                        self.pos = start;
                        Err(self.err(&format!("unknown identifier '{ident}'")))
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = self.pos;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        self.pos = i;
        self.src[start..i]
            .parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| {
                self.pos = start;
                self.err("malformed number")
            })
    }
}
