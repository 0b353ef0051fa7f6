//! Reduced rational functions of two variables.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::poly::{gcd_poly, Mono, Point, Poly1, Poly2, Rat, Var};
use crate::realroots::{local_positive_definiteness, zero_set_2d, InfiniteWitness, RootsError, ZeroBox};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFuncError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by the zero function")]
    DivisionByZeroFunction,
    #[error("order of the zero function is undefined")]
    ZeroFunction,
    #[error("the denominator vanishes identically along the arc")]
    IdenticallyUndefined,
    #[error("the restriction keeps a pole at the base point")]
    NoDerivative,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("the denominator has infinitely many real zeros")]
    InfiniteZeroSet(InfiniteWitness),
}

impl From<RootsError> for RatFuncError {
    fn from(e: RootsError) -> Self {
        match e {
            RootsError::ZeroPolynomial => RatFuncError::ZeroFunction,
            RootsError::NotHomogeneous(p) => RatFuncError::PreconditionViolated(format!("not homogeneous: {p}")),
        }
    }
}

/// `num / den` with `gcd(num, den) = 1` and `den` integer-primitive with a
/// positive graded-lex leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RatFuncRepr")]
pub struct RatFunc {
    num: Poly2,
    den: Poly2,
}

#[derive(Deserialize)]
struct RatFuncRepr {
    num: Poly2,
    den: Poly2,
}

impl TryFrom<RatFuncRepr> for RatFunc {
    type Error = RatFuncError;
    fn try_from(r: RatFuncRepr) -> Result<Self, Self::Error> {
        reduce_fraction(&r.num, &r.den)
    }
}

pub fn reduce_fraction(p: &Poly2, q: &Poly2) -> Result<RatFunc, RatFuncError> {
    if q.is_zero() {
        return Err(RatFuncError::ZeroDenominator);
    }
    if p.is_zero() {
        return Ok(RatFunc::zero());
    }
    let g = gcd_poly(p, q);
    let (p, q) = if g.is_constant() {
        (p.clone(), q.clone())
    } else {
        (p.div_exact(&g).expect("gcd divides"), q.div_exact(&g).expect("gcd divides"))
    };
    let c = q.content();
    Ok(RatFunc { num: p.scale(&c.recip()), den: q.scale(&c.recip()) })
}

/// `num / den` already coprime; only the scalar normalization is applied.
fn normalized(num: Poly2, den: Poly2) -> RatFunc {
    if num.is_zero() {
        return RatFunc::zero();
    }
    let c = den.content();
    RatFunc { num: num.scale(&c.recip()), den: den.scale(&c.recip()) }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly2::zero(), den: Poly2::one() }
    }

    pub fn one() -> Self {
        RatFunc::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatFunc { num: Poly2::constant(c), den: Poly2::one() }
    }

    pub fn from_poly(p: Poly2) -> Self {
        RatFunc { num: p, den: Poly2::one() }
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Value at a point of the domain; `None` at a pole.
    pub fn evaluate(&self, a: &Point) -> Option<Rat> {
        let d = self.den.evaluate(a);
        if d.is_zero() {
            None
        } else {
            Some(self.num.evaluate(a) / d)
        }
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, n: u32) -> RatFunc {
        RatFunc { num: self.num.pow(n), den: self.den.pow(n) }
    }

    pub fn div(&self, g: &RatFunc) -> Result<RatFunc, RatFuncError> {
        if g.is_zero() {
            return Err(RatFuncError::DivisionByZeroFunction);
        }
        Ok(reduce_fraction(&(&self.num * &g.den), &(&self.den * &g.num)).expect("nonzero denominator"))
    }

    pub fn recip(&self) -> Result<RatFunc, RatFuncError> {
        RatFunc::one().div(self)
    }

    /// Translate so that `a` becomes the origin.
    pub fn translate(&self, a: &Point) -> RatFunc {
        RatFunc { num: self.num.translate(a), den: self.den.translate(a) }
    }

    pub fn poles(&self) -> Result<PoleSet, RatFuncError> {
        poles(self)
    }

    pub fn derivative(&self, v: Var) -> RatFunc {
        derivative_rf(self, v)
    }

    /// `∂^i/∂x^i ∂^j/∂y^j`.
    pub fn partial(&self, i: u32, j: u32) -> RatFunc {
        let mut f = self.clone();
        for _ in 0..i {
            f = f.derivative(Var::X);
        }
        for _ in 0..j {
            f = f.derivative(Var::Y);
        }
        f
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, g: &RatFunc) -> RatFunc {
        if self.den == g.den {
            return reduce_fraction(&(&self.num + &g.num), &self.den).expect("nonzero denominator");
        }
        // gcd(num, b d / h) = gcd(num, h) for h = gcd(b, d)
        let h = gcd_poly(&self.den, &g.den);
        let b = self.den.div_exact(&h).expect("gcd divides");
        let d = g.den.div_exact(&h).expect("gcd divides");
        let num = &(&self.num * &d) + &(&g.num * &b);
        let den = &self.den * &d;
        if h.is_constant() || num.is_zero() {
            return normalized(num, den);
        }
        let k = gcd_poly(&num, &h);
        normalized(num.div_exact(&k).expect("gcd divides"), den.div_exact(&k).expect("gcd divides"))
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, g: &RatFunc) -> RatFunc {
        self + &-g
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, g: &RatFunc) -> RatFunc {
        if self.is_zero() || g.is_zero() {
            return RatFunc::zero();
        }
        let cancel = |p: &Poly2, q: &Poly2| {
            let h = gcd_poly(p, q);
            if h.is_constant() {
                (p.clone(), q.clone())
            } else {
                (p.div_exact(&h).expect("gcd divides"), q.div_exact(&h).expect("gcd divides"))
            }
        };
        let (a, d) = cancel(&self.num, &g.den);
        let (c, b) = cancel(&g.num, &self.den);
        normalized(&a * &c, &b * &d)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl RatFunc {
    /// Text form `P / Q` with custom variable names.
    pub fn display_in(&self, names: (&str, &str)) -> String {
        if self.den == Poly2::one() {
            return self.num.display_in(names);
        }
        let wrap = |p: &Poly2| {
            let s = p.display_in(names);
            if p.num_terms() > 1 || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{} / {}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in(("x", "y")))
    }
}

/// Real zeros of the denominator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleSet {
    pub points: Vec<Point>,
    pub complete: bool,
    pub boxes: Vec<ZeroBox>,
}

pub fn poles(f: &RatFunc) -> Result<PoleSet, RatFuncError> {
    let z = zero_set_2d(&f.den)?;
    match z.infinite_witness {
        Some(w) => Err(RatFuncError::InfiniteZeroSet(w)),
        None => Ok(PoleSet { complete: z.unresolved_boxes.is_empty(), points: z.points, boxes: z.unresolved_boxes }),
    }
}

/// Reduced partial derivative by the quotient rule.
pub fn derivative_rf(f: &RatFunc, v: Var) -> RatFunc {
    if f.is_polynomial() {
        return RatFunc::from_poly(f.num.partial(v));
    }
    // with g = gcd(d, d'), d = g e and d' = g e1, the quotient is
    // (n' e - n e1) / (g e^2) and only factors of g can cancel
    let dv = f.den.partial(v);
    let g = gcd_poly(&f.den, &dv);
    let e = f.den.div_exact(&g).expect("gcd divides");
    let e1 = dv.div_exact(&g).expect("gcd divides");
    let num = &(&f.num.partial(v) * &e) - &(&f.num * &e1);
    let den = &g * &(&e * &e);
    if g.is_constant() || num.is_zero() {
        return normalized(num, den);
    }
    let k = gcd_poly(&num, &g);
    normalized(num.div_exact(&k).expect("gcd divides"), den.div_exact(&k).expect("gcd divides"))
}

/// Reduced univariate rational function with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniRatFunc {
    pub num: Poly1,
    pub den: Poly1,
}

impl UniRatFunc {
    pub fn new(num: &Poly1, den: &Poly1) -> Result<Self, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(UniRatFunc { num: Poly1::zero(), den: Poly1::one() });
        }
        let g = num.gcd(den);
        let (n, d) = (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"));
        let lc = d.lc().recip();
        Ok(UniRatFunc { num: n.scale(&lc), den: d.scale(&lc) })
    }

    pub fn eval(&self, t: &Rat) -> Option<Rat> {
        let d = self.den.eval(t);
        (!d.is_zero()).then(|| self.num.eval(t) / d)
    }

    pub fn derivative(&self) -> UniRatFunc {
        let n = &(&self.num.derivative() * &self.den) - &(&self.den.derivative() * &self.num);
        UniRatFunc::new(&n, &self.den.pow(2)).expect("nonzero denominator")
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }
}

impl fmt::Display for UniRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// `f(x(t), y(t))` as a reduced univariate fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcRestriction {
    pub x_of_t: Poly1,
    pub y_of_t: Poly1,
    pub value: UniRatFunc,
}

pub fn restrict_to_arc(f: &RatFunc, x_of_t: &Poly1, y_of_t: &Poly1) -> Result<ArcRestriction, RatFuncError> {
    let d = f.den.substitute_arc(x_of_t, y_of_t);
    if d.is_zero() {
        return Err(RatFuncError::IdenticallyUndefined);
    }
    let n = f.num.substitute_arc(x_of_t, y_of_t);
    Ok(ArcRestriction { x_of_t: x_of_t.clone(), y_of_t: y_of_t.clone(), value: UniRatFunc::new(&n, &d)? })
}

/// Derivative at `t = 0` of the reduced restriction `t -> f(a + t v)`.
pub fn directional_derivative_at(f: &RatFunc, a: &Point, v: (&Rat, &Rat)) -> Result<Rat, RatFuncError> {
    let line = |c: &Rat, d: &Rat| Poly1::new(vec![c.clone(), d.clone()]);
    let g = restrict_to_arc(f, &line(&a.x, v.0), &line(&a.y, v.1)).map_err(|_| RatFuncError::NoDerivative)?;
    g.value.derivative().eval(&Rat::zero()).ok_or(RatFuncError::NoDerivative)
}

/// `ord_a(num) - ord_a(den)`.
pub fn order_at_rf(f: &RatFunc, a: &Point) -> Result<i64, RatFuncError> {
    if f.is_zero() {
        return Err(RatFuncError::ZeroFunction);
    }
    let n = f.num.order_at(a).expect("nonzero");
    let d = f.den.order_at(a).expect("nonzero");
    Ok(i64::from(n) - i64::from(d))
}

/// Outcome of the order-`k` expansion test at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub holds: bool,
    /// The expansion polynomial in the original coordinates.
    pub taylor: Option<Poly2>,
    /// Whether every coefficient of the expansion was forced.
    pub unique: bool,
}

/// Look for `T` with `deg T <= k` and `ord_a(num - den T) >= ord_a(den) + k + 1`.
pub fn expansion_criterion(f: &RatFunc, a: &Point, k: u32) -> Result<Expansion, RatFuncError> {
    let verdict = local_positive_definiteness(&f.den, a)?;
    if !verdict.is_definite() {
        return Err(RatFuncError::PreconditionViolated(format!(
            "denominator is not locally definite at {a}"
        )));
    }
    let p = f.num.translate(a);
    let q = f.den.translate(a);
    let m = q.low_degree().expect("nonzero denominator");
    let unknowns: Vec<Mono> = (0..=k).flat_map(|d| (0..=d).map(move |j| Mono::new(d - j, j))).collect();
    let top = m + k;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for d in 0..=top {
        for j in 0..=d {
            let target = Mono::new(d - j, j);
            let row: Vec<Rat> = unknowns
                .iter()
                .map(|u| {
                    if u.x <= target.x && u.y <= target.y {
                        q.coeff(target.x - u.x, target.y - u.y)
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            rows.push(row);
            rhs.push(p.coeff(target.x, target.y));
        }
    }
    match linalg::solve(rows, rhs, unknowns.len()) {
        None => Ok(Expansion { holds: false, taylor: None, unique: false }),
        Some((c, unique)) => {
            let local = Poly2::from_terms(unknowns.iter().zip(c).map(|(u, c)| (u.x, u.y, c)));
            Ok(Expansion { holds: true, taylor: Some(local.translate(&a.neg())), unique })
        }
    }
}
