//! Laurent polynomials in `X0..Xn`, a small parser for homogeneous
//! equations, and division with remainder by a single polynomial.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::add_term;
use crate::scalar::Scalar;

/// Exponent vector, possibly with negative entries.
pub type Exps = Vec<i32>;

/// Sparse Laurent polynomial: exponents to coefficients.
pub type Poly<S> = BTreeMap<Exps, S>;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PolyError {
    #[error("unexpected character {0:?} at position {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("unknown variable {0} (expected X0..X{1})")]
    Variable(String, usize),
    #[error("number out of range: {0}")]
    Number(String),
    #[error("division is only allowed between numeric literals")]
    Division,
    #[error("exponent must be a nonnegative integer")]
    Exponent,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial is constant")]
    Constant,
}

pub fn monomial<S: Scalar>(e: Exps, c: S) -> Poly<S> {
    let mut p = Poly::new();
    if !c.is_negligible() {
        p.insert(e, c);
    }
    p
}

pub fn add<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> Poly<S> {
    let mut out = a.clone();
    for (e, c) in b {
        add_term(&mut out, e.clone(), c.clone());
    }
    out
}

pub fn scale<S: Scalar>(c: &S, a: &Poly<S>) -> Poly<S> {
    let mut out = Poly::new();
    for (e, x) in a {
        add_term(&mut out, e.clone(), c.clone() * x.clone());
    }
    out
}

pub fn mul<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> Poly<S> {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            add_term(&mut out, e, ca.clone() * cb.clone());
        }
    }
    out
}

pub fn shift<S: Scalar>(a: &Poly<S>, by: &[i32]) -> Poly<S> {
    a.iter().map(|(e, c)| (e.iter().zip(by).map(|(x, y)| x + y).collect(), c.clone())).collect()
}

pub fn pow<S: Scalar>(a: &Poly<S>, n: u32, nvars: usize) -> Poly<S> {
    let mut out = monomial(vec![0; nvars], S::one());
    for _ in 0..n {
        out = mul(&out, a);
    }
    out
}

/// Total degree of a homogeneous polynomial.
pub fn homogeneous_degree<S: Scalar>(p: &Poly<S>) -> Result<i32, PolyError> {
    let mut it = p.keys().map(|e| e.iter().sum::<i32>());
    let d = it.next().ok_or(PolyError::Constant)?;
    if it.any(|x| x != d) {
        return Err(PolyError::NotHomogeneous);
    }
    Ok(d)
}

fn divides(a: &[i32], b: &[i32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Remainder of `p` modulo `f` (lex order, `f`'s leading monomial the
/// lex-largest). Both must be honest polynomials.
pub fn remainder<S: Scalar>(p: &Poly<S>, f: &Poly<S>) -> Poly<S> {
    let (lm, lc) = f.iter().next_back().expect("nonzero divisor");
    let mut p = p.clone();
    let mut r = Poly::new();
    while let Some((m, c)) = p.pop_last() {
        if divides(lm, &m) {
            let q: Vec<i32> = m.iter().zip(lm).map(|(x, y)| x - y).collect();
            let coef = c / lc.clone();
            for (e, fc) in f.iter().rev().skip(1) {
                let t: Vec<i32> = e.iter().zip(&q).map(|(x, y)| x + y).collect();
                add_term(&mut p, t, -(coef.clone() * fc.clone()));
            }
        } else {
            r.insert(m, c);
        }
    }
    r
}

/// Exact quotient `p / f`, if `f` divides `p`.
pub fn exact_quotient<S: Scalar>(p: &Poly<S>, f: &Poly<S>) -> Option<Poly<S>> {
    let (lm, lc) = f.iter().next_back().expect("nonzero divisor");
    let mut p = p.clone();
    let mut quo = Poly::new();
    while let Some((m, c)) = p.pop_last() {
        if !divides(lm, &m) {
            return None;
        }
        let q: Vec<i32> = m.iter().zip(lm).map(|(x, y)| x - y).collect();
        let coef = c / lc.clone();
        for (e, fc) in f.iter().rev().skip(1) {
            let t: Vec<i32> = e.iter().zip(&q).map(|(x, y)| x + y).collect();
            add_term(&mut p, t, -(coef.clone() * fc.clone()));
        }
        add_term(&mut quo, q, coef);
    }
    Some(quo)
}

/// `X_i` divides `p`.
pub fn divisible_by_variable<S: Scalar>(p: &Poly<S>, i: usize) -> bool {
    p.keys().all(|e| e[i] >= 1)
}

/// Human-readable form with variables `X0..`.
pub fn display<S: Scalar>(p: &Poly<S>) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.iter().rev().enumerate() {
        let s = c.to_string();
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        if i > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let vars: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(v, x)| if *x == 1 { format!("X{v}") } else { format!("X{v}^{x}") })
            .collect();
        if vars.is_empty() {
            out.push_str(&s);
        } else {
            if s != "1" {
                out.push_str(&s);
                out.push('*');
            }
            out.push_str(&vars.join("*"));
        }
    }
    out
}

/// Parses `+ − * ^ ( )`, integer and `a/b` rational literals and variables
/// `X0..X{nvars−1}`.
pub fn parse<S: Scalar>(text: &str, nvars: usize) -> Result<Poly<S>, PolyError> {
    let chars: Vec<char> = text.chars().collect();
    let mut p = Parser { chars, pos: 0, nvars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(PolyError::Unexpected(p.chars[p.pos], p.pos));
    }
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr<S: Scalar>(&mut self) -> Result<Poly<S>, PolyError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = add(&acc, &self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = add(&acc, &scale(&-S::one(), &self.term()?));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term<S: Scalar>(&mut self) -> Result<Poly<S>, PolyError> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = mul(&acc, &self.power()?);
        }
        if self.peek() == Some('/') {
            return Err(PolyError::Division);
        }
        Ok(acc)
    }

    fn power<S: Scalar>(&mut self) -> Result<Poly<S>, PolyError> {
        let base = self.unary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            let n: u32 = digits.parse().map_err(|_| PolyError::Exponent)?;
            return Ok(pow(&base, n, self.nvars));
        }
        Ok(base)
    }

    fn unary<S: Scalar>(&mut self) -> Result<Poly<S>, PolyError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(scale(&-S::one(), &self.unary()?))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom<S: Scalar>(&mut self) -> Result<Poly<S>, PolyError> {
        match self.peek() {
            None => Err(PolyError::Eof),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return match self.peek() {
                        Some(c) => Err(PolyError::Unexpected(c, self.pos)),
                        None => Err(PolyError::Eof),
                    };
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits();
                let n: i64 = num.parse().map_err(|_| PolyError::Number(num.clone()))?;
                let mut d: i64 = 1;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.digits();
                    if den.is_empty() {
                        return Err(PolyError::Division);
                    }
                    d = den.parse().map_err(|_| PolyError::Number(den.clone()))?;
                    if d == 0 {
                        return Err(PolyError::Number(format!("{num}/0")));
                    }
                }
                Ok(monomial(vec![0; self.nvars], S::ratio(n, d)))
            }
            Some('X') | Some('x') => {
                self.pos += 1;
                let idx = self.digits();
                let i: usize = idx.parse().map_err(|_| PolyError::Variable(format!("X{idx}"), self.nvars - 1))?;
                if i >= self.nvars {
                    return Err(PolyError::Variable(format!("X{i}"), self.nvars - 1));
                }
                let mut e = vec![0; self.nvars];
                e[i] = 1;
                Ok(monomial(e, S::one()))
            }
            Some(c) => Err(PolyError::Unexpected(c, self.pos)),
        }
    }
}
