//! Recursive-descent parser for rational expressions in two variables.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := ("-" | "+") unary | power
//! power   := primary ("^" exponent)?
//! primary := number | name | "(" expr ")"
//! ```
//!
//! An exponent is a primary or signed primary that evaluates to a
//! nonnegative integer constant. Numbers are integers or decimals; both are
//! read exactly.

use num_traits::{One, Signed, ToPrimitive, Zero};
use regulous_core::{Poly1, Poly2, Rat, RatFunc, RatFuncError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("parse error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("division by zero at {pos}")]
    ZeroDenominator { pos: usize },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::ZeroDenominator { pos } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(Rat),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Name(String),
    Sym(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[start..i].iter().collect();
            let mut frac = String::new();
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                frac = chars[fs..i].iter().collect();
            }
            if int.is_empty() && frac.is_empty() {
                return Err(ParseError::Syntax { pos: start, message: "malformed number".into() });
            }
            let digits = format!("{int}{frac}");
            let n: num_bigint::BigInt = digits.parse().expect("ascii digits");
            let d = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
            out.push((Tok::Num(Rat::new(n, d)), start));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(ParseError::Syntax { pos: i, message: format!("unexpected character '{c}'") });
        }
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
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

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if *self.peek() == Tok::Sym('/') {
                let pos = self.pos();
                self.at += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let e = if self.eat('-') { Expr::Neg(Box::new(self.primary()?)) } else { self.primary()? };
        let v = eval(&e, self.names.len()).map_err(|_| ParseError::Syntax { pos, message: "bad exponent".into() })?;
        let n = if v.is_constant() { v.num().constant_term() } else { return Err(ParseError::Syntax { pos, message: "exponent must be a constant".into() }) };
        if !n.is_integer() || n.is_negative() {
            return Err(ParseError::Syntax { pos, message: format!("exponent {n} is not a nonnegative integer") });
        }
        let n = n.to_integer().to_u32().ok_or(ParseError::Syntax { pos, message: "exponent too large".into() })?;
        Ok(Expr::Pow(Box::new(base), n))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(r) => {
                self.at += 1;
                Ok(Expr::Num(r))
            }
            Tok::Name(n) => match self.names.iter().position(|m| *m == n) {
                Some(i) => {
                    self.at += 1;
                    Ok(Expr::Var(i))
                }
                None => self.err(format!("unknown variable '{n}'")),
            },
            Tok::Sym('(') => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Tok::End => self.err("unexpected end of input"),
            Tok::Sym(c) => self.err(format!("unexpected '{c}'")),
        }
    }
}

/// Parse `text` over the given variable names (at most two).
pub fn parse_ast(text: &str, names: &[&str]) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, names };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

fn eval(e: &Expr, nvars: usize) -> Result<RatFunc, ParseError> {
    Ok(match e {
        Expr::Num(r) => RatFunc::constant(r.clone()),
        Expr::Var(0) => RatFunc::from_poly(Poly2::x()),
        Expr::Var(_) => RatFunc::from_poly(Poly2::y()),
        Expr::Neg(a) => -&eval(a, nvars)?,
        Expr::Add(a, b) => &eval(a, nvars)? + &eval(b, nvars)?,
        Expr::Sub(a, b) => &eval(a, nvars)? - &eval(b, nvars)?,
        Expr::Mul(a, b) => &eval(a, nvars)? * &eval(b, nvars)?,
        Expr::Div(a, b, pos) => match eval(a, nvars)?.div(&eval(b, nvars)?) {
            Ok(f) => f,
            Err(RatFuncError::ZeroDenominator | RatFuncError::DivisionByZeroFunction) => {
                return Err(ParseError::ZeroDenominator { pos: *pos })
            }
            Err(e) => return Err(ParseError::Syntax { pos: *pos, message: e.to_string() }),
        },
        Expr::Pow(a, n) => eval(a, nvars)?.pow(*n),
    })
}

pub fn to_ratfunc(e: &Expr) -> Result<RatFunc, ParseError> {
    eval(e, 2)
}

/// Parse an expression in `x` and `y` to a reduced rational function.
pub fn parse_expression(text: &str) -> Result<RatFunc, ParseError> {
    parse_expression_in(text, ("x", "y"))
}

pub fn parse_expression_in(text: &str, names: (&str, &str)) -> Result<RatFunc, ParseError> {
    to_ratfunc(&parse_ast(text, &[names.0, names.1])?)
}

/// Parse a polynomial in `t`.
pub fn parse_poly_t(text: &str) -> Result<Poly1, ParseError> {
    let f = to_ratfunc(&parse_ast(text, &["t"])?)?;
    if !f.is_polynomial() {
        return Err(ParseError::Syntax { pos: 0, message: format!("{text} is not a polynomial in t") });
    }
    Ok(f.num().as_univariate(regulous_core::Var::X).expect("only x occurs"))
}

/// Weighted squares `[(c, g)]` with `e = Σ c g^2` read off the syntax, if
/// `e` is visibly a sum of squares with positive constant weights.
pub fn syntactic_squares(e: &Expr) -> Option<Vec<(Rat, Poly2)>> {
    let poly = |e: &Expr| {
        let f = to_ratfunc(e).ok()?;
        f.is_polynomial().then(|| f.num().clone())
    };
    match e {
        Expr::Add(a, b) => {
            let mut l = syntactic_squares(a)?;
            l.extend(syntactic_squares(b)?);
            Some(l)
        }
        Expr::Num(r) if r.is_positive() => Some(vec![(r.clone(), Poly2::one())]),
        Expr::Num(r) if r.is_zero() => Some(vec![]),
        Expr::Pow(a, n) if n % 2 == 0 => Some(vec![(Rat::one(), poly(a)?.pow(n / 2))]),
        Expr::Mul(a, b) => {
            let (l, r) = (syntactic_squares(a)?, syntactic_squares(b)?);
            match (l.as_slice(), r.as_slice()) {
                ([(c, g)], _) => Some(r.iter().map(|(d, h)| (c * d, g * h)).collect()),
                (_, [(d, h)]) => Some(l.iter().map(|(c, g)| (c * d, g * h)).collect()),
                _ => None,
            }
        }
        Expr::Div(a, b, _) => {
            let d = to_ratfunc(b).ok()?;
            let c = if d.is_constant() { d.num().constant_term() } else { return None };
            c.is_positive().then(|| syntactic_squares(a).map(|l| l.into_iter().map(|(w, g)| (w / &c, g)).collect()))?
        }
        _ => None,
    }
}
