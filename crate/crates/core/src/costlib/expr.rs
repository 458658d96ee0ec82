//! Cost expression grammar: parsing, printing and jet evaluation.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' '-'? integer)*
//! primary := number | 'z' | ident '(' expr ')' | '(' expr ')'
//! ```

use std::fmt;

use thiserror::Error;

use crate::jets::{Elementary, Jet, JetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Lit(f64),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Elementary, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        let mut p = Parser { src: text, pos: 0 };
        p.skip_ws();
        if p.at_end() {
            return Err(p.error(&["expression"]));
        }
        let expr = p.expr()?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error(&["operator", "end of input"]));
        }
        Ok(expr)
    }

    pub fn lit(v: f64) -> Expr {
        Expr::Lit(v)
    }

    pub fn call(f: Elementary, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn eval_jet<const N: usize>(&self, base: f64) -> Result<Jet<N>, JetError> {
        let z = Jet::<N>::variable(base);
        self.eval_on(&z)
    }

    /// Evaluates the expression with `z` replaced by an arbitrary jet.
    pub fn eval_on<const N: usize>(&self, z: &Jet<N>) -> Result<Jet<N>, JetError> {
        Ok(match self {
            Expr::Lit(v) => Jet::constant(z.base(), *v),
            Expr::Var => *z,
            Expr::Neg(a) => -a.eval_on(z)?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval_on(z)?, b.eval_on(z)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.checked_div(&b)?,
                }
            }
            Expr::Pow(a, n) => a.eval_on(z)?.powi(*n)?,
            Expr::Call(f, a) => f.apply(&a.eval_on(z)?)?,
        })
    }

    pub fn eval(&self, z: f64) -> Result<f64, JetError> {
        self.eval_jet::<1>(z).map(|j| j.value())
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Lit(_) | Expr::Var | Expr::Call(..) => 5,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool| {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Lit(v) => write!(f, "{v}"),
            Expr::Var => f.write_str("z"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, a.precedence() < 3)
            }
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                wrap(f, a, a.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                // left-associative: an equal-precedence right operand needs parens
                wrap(f, b, b.precedence() <= p)
            }
            Expr::Pow(a, n) => {
                wrap(f, a, a.precedence() < 5)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, a) => write!(f, "{func}({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let found = match self.src[self.pos.min(self.src.len())..].chars().next() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(b'+') {
                BinOp::Add
            } else if self.eat(b'-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(b'*') {
                BinOp::Mul
            } else if self.eat(b'/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            if self.peek() == Some(b'-') {
                self.pos += 1;
            }
            let digits = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == digits {
                self.pos = digits;
                return Err(self.error(&["integer exponent"]));
            }
            let n: i32 = self.src[start..self.pos].parse().map_err(|_| {
                self.pos = start;
                self.error(&["integer exponent"])
            })?;
            base = Expr::Pow(Box::new(base), n);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error(&["')'"]));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let ident = &self.src[start..self.pos];
                if ident == "z" {
                    return Ok(Expr::Var);
                }
                let Some(func) = Elementary::from_name(ident) else {
                    self.pos = start;
                    return Err(self.error(&["'z'", "function name"]));
                };
                if !self.eat(b'(') {
                    return Err(self.error(&["'('"]));
                }
                let arg = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error(&["')'"]));
                }
                Ok(Expr::call(func, arg))
            }
            _ => Err(self.error(&["number", "'z'", "function call", "'('"])),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = self.pos;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        match self.src[start..end].parse::<f64>() {
            Ok(v) => {
                self.pos = end;
                Ok(Expr::Lit(v))
            }
            Err(_) => Err(self.error(&["number"])),
        }
    }
}
