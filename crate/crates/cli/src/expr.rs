//! Tokens and arithmetic expressions appearing in problem-file values.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

pub(crate) fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Int(digits.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()[],".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

/// Cursor over a token list.
pub(crate) struct Cursor {
    toks: Vec<Tok>,
    pos: usize,
}

impl Cursor {
    pub fn new(s: &str) -> Result<Self, String> {
        Ok(Cursor { toks: tokenize(s)?, pos: 0 })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected '{c}', found {}", self.describe_next()))
        }
    }

    pub fn finish(&self) -> Result<(), String> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(format!("unexpected trailing {}", self.describe_next())),
        }
    }

    fn describe_next(&self) -> String {
        match self.peek() {
            None => "end of value".into(),
            Some(Tok::Int(n)) => format!("'{n}'"),
            Some(Tok::Ident(s)) => format!("'{s}'"),
            Some(Tok::Sym(c)) => format!("'{c}'"),
        }
    }

    fn int(&mut self) -> Result<BigInt, String> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            _ => {
                self.pos -= 1;
                Err(format!("expected an integer, found {}", self.describe_next()))
            }
        }
    }

    /// `[-]n` or `[-]n/d` with `d > 0`.
    pub fn rational(&mut self) -> Result<BigRational, String> {
        let neg = self.eat('-');
        let n = self.int()?;
        let d = if self.eat('/') { self.int()? } else { BigInt::from(1) };
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        let q = BigRational::new(n, d);
        Ok(if neg { -q } else { q })
    }

    /// `(q1, q2, ...)`.
    pub fn vector(&mut self) -> Result<Vec<BigRational>, String> {
        self.expect('(')?;
        let mut v = vec![self.rational()?];
        while self.eat(',') {
            v.push(self.rational()?);
        }
        self.expect(')')?;
        Ok(v)
    }

    /// `[item, item, ...]`, possibly empty.
    pub fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, String>) -> Result<Vec<T>, String> {
        self.expect('[')?;
        let mut v = Vec::new();
        if self.eat(']') {
            return Ok(v);
        }
        v.push(item(self)?);
        while self.eat(',') {
            v.push(item(self)?);
        }
        self.expect(']')?;
        Ok(v)
    }

    pub fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let n = self.int()?;
            let n: u32 = n.try_into().map_err(|_| "exponent too large".to_string())?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(Expr::Num(n)),
            Some(Tok::Ident(s)) if s == "t" || s == "a" => Ok(Expr::Var(s.chars().next().unwrap())),
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => {
                self.pos -= 1;
                Err(format!("expected a number, 't', 'a' or '(', found {}", self.describe_next()))
            }
        }
    }
}

/// Arithmetic expression in the variable `t` and the field generator `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Var(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr, String> {
        let mut c = Cursor::new(s)?;
        let e = c.expr()?;
        c.finish()?;
        Ok(e)
    }

    pub fn int(n: i64) -> Expr {
        if n < 0 {
            Expr::Neg(Box::new(Expr::Num((-n).into())))
        } else {
            Expr::Num(n.into())
        }
    }

    /// Expression for a rational number.
    pub fn rational(q: &BigRational) -> Expr {
        let num = Expr::Num(q.numer().abs());
        let body = if q.is_integer() { num } else { Expr::Div(Box::new(num), Box::new(Expr::Num(q.denom().clone()))) };
        if q.is_negative() {
            Expr::Neg(Box::new(body))
        } else {
            body
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Var(_) => 5,
        }
    }

    pub fn eval<R: Ring>(&self, r: &R) -> Result<R::V, String> {
        Ok(match self {
            Expr::Num(n) => r.num(n),
            Expr::Var(c) => r.var(*c)?,
            Expr::Neg(a) => r.neg(&a.eval(r)?),
            Expr::Add(a, b) => r.add(&a.eval(r)?, &b.eval(r)?),
            Expr::Sub(a, b) => r.add(&a.eval(r)?, &r.neg(&b.eval(r)?)),
            Expr::Mul(a, b) => r.mul(&a.eval(r)?, &b.eval(r)?),
            Expr::Div(a, b) => r.div(&a.eval(r)?, &b.eval(r)?)?,
            Expr::Pow(a, n) => {
                let base = a.eval(r)?;
                (0..*n).try_fold(r.num(&BigInt::from(1)), |acc, _| Ok::<_, String>(r.mul(&acc, &base)))?
            }
        })
    }
}

fn wrap(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let binary = |f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, p: u8| {
            wrap(a, p, f)?;
            write!(f, "{op}")?;
            wrap(b, p + 1, f)
        };
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Var(c) => write!(f, "{c}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(a, 3, f)
            }
            Expr::Add(a, b) => binary(f, a, " + ", b, 1),
            Expr::Sub(a, b) => binary(f, a, " - ", b, 1),
            Expr::Mul(a, b) => binary(f, a, "*", b, 2),
            Expr::Div(a, b) => binary(f, a, "/", b, 2),
            Expr::Pow(a, n) => {
                wrap(a, 5, f)?;
                write!(f, "^{n}")
            }
        }
    }
}

/// Where expressions are evaluated.
pub trait Ring {
    type V;
    fn num(&self, n: &BigInt) -> Self::V;
    fn var(&self, c: char) -> Result<Self::V, String>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, String>;
}
