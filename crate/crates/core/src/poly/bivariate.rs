use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_rat, rat_pow, Point, Poly1, PolyError, Rat, Var};

/// Exponent pair `x^x * y^y`, ordered graded-lexicographically with `x > y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mono {
    pub x: u32,
    pub y: u32,
}

impl Mono {
    pub fn new(x: u32, y: u32) -> Self {
        Mono { x, y }
    }

    pub fn degree(&self) -> u32 {
        self.x + self.y
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then(self.x.cmp(&o.x))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Bivariate polynomial with rational coefficients.
///
/// Stored as a sparse map from exponent pair to nonzero coefficient, so
/// structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<Mono, Rat>,
}

/// Homogeneous decomposition of a polynomial recentered at a point.
///
/// `components[l]` is homogeneous of degree `l` in `(x - center.x, y - center.y)`,
/// written in the shifted coordinates (so the component itself is an ordinary
/// homogeneous polynomial in `x, y`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogDecomp {
    pub center: Point,
    pub components: Vec<Poly2>,
    pub order: u32,
}

impl HomogDecomp {
    /// The nonzero component of smallest degree.
    pub fn lowest(&self) -> &Poly2 {
        &self.components[self.order as usize]
    }

    pub fn component(&self, l: u32) -> Poly2 {
        self.components.get(l as usize).cloned().unwrap_or_default()
    }

    /// Shift a component back to the original coordinates.
    pub fn component_at_center(&self, l: u32) -> Poly2 {
        self.component(l).translate(&self.center.neg())
    }
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly2::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly2::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Poly2::monomial(Rat::one(), 1, 0)
    }

    pub fn y() -> Self {
        Poly2::monomial(Rat::one(), 0, 1)
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Poly2::x(),
            Var::Y => Poly2::y(),
        }
    }

    pub fn monomial(c: Rat, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::new(i, j), c);
        }
        Poly2 { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u32, Rat)>>(it: I) -> Self {
        let mut p = Poly2::zero();
        for (i, j, c) in it {
            p.add_term(Mono::new(i, j), c);
        }
        p
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        Poly2::from_terms(terms.iter().map(|&(i, j, c)| (i, j, Rat::from_integer(BigInt::from(c)))))
    }

    fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&Mono::new(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0, 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| match v {
                Var::X => m.x,
                Var::Y => m.y,
            })
            .max()
    }

    /// Largest monomial in graded-lex order with its coefficient.
    pub fn leading_term(&self) -> Option<(Mono, Rat)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c.clone()))
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term().map(|(_, c)| c).unwrap_or_else(Rat::zero)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Mono::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Poly2 {
        let mut acc = Poly2::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn evaluate(&self, a: &Point) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            acc += c * rat_pow(&a.x, m.x) * rat_pow(&a.y, m.y);
        }
        acc
    }

    /// Substitute `x = x_of_t(t)`, `y = y_of_t(t)`.
    pub fn substitute_arc(&self, x_of_t: &Poly1, y_of_t: &Poly1) -> Poly1 {
        let dx = self.degree_in(Var::X).unwrap_or(0);
        let dy = self.degree_in(Var::Y).unwrap_or(0);
        let xp = powers1(x_of_t, dx);
        let yp = powers1(y_of_t, dy);
        let mut acc = Poly1::zero();
        for (m, c) in &self.terms {
            let t = (&xp[m.x as usize] * &yp[m.y as usize]).scale(c);
            acc = &acc + &t;
        }
        acc
    }

    /// Specialize one variable to a rational value, giving a univariate
    /// polynomial in the other.
    pub fn specialize(&self, v: Var, value: &Rat) -> Poly1 {
        let mut coeffs: Vec<Rat> = Vec::new();
        for (m, c) in &self.terms {
            let (fixed, free) = match v {
                Var::X => (m.x, m.y),
                Var::Y => (m.y, m.x),
            };
            let free = free as usize;
            if coeffs.len() <= free {
                coeffs.resize(free + 1, Rat::zero());
            }
            coeffs[free] += c * rat_pow(value, fixed);
        }
        Poly1::new(coeffs)
    }

    /// `p(x + a.x, y + a.y)`.
    pub fn translate(&self, a: &Point) -> Poly2 {
        if a.is_origin() {
            return self.clone();
        }
        let dx = self.degree_in(Var::X).unwrap_or(0);
        let dy = self.degree_in(Var::Y).unwrap_or(0);
        let xs = powers2(&(&Poly2::x() + &Poly2::constant(a.x.clone())), dx);
        let ys = powers2(&(&Poly2::y() + &Poly2::constant(a.y.clone())), dy);
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            let t = (&xs[m.x as usize] * &ys[m.y as usize]).scale(c);
            out = &out + &t;
        }
        out
    }

    /// Homogeneous components of `translate(p, a)`.
    pub fn homogeneous_components(&self, a: &Point) -> Result<HomogDecomp, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let shifted = self.translate(a);
        let top = shifted.total_degree().unwrap_or(0) as usize;
        let mut components = vec![Poly2::zero(); top + 1];
        for (m, c) in shifted.terms {
            components[m.degree() as usize].add_term(m, c);
        }
        let order = components.iter().position(|c| !c.is_zero()).unwrap_or(0) as u32;
        Ok(HomogDecomp { center: a.clone(), components, order })
    }

    pub fn order_at(&self, a: &Point) -> Result<u32, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if a.is_origin() {
            return Ok(self.terms.keys().map(Mono::degree).min().unwrap_or(0));
        }
        if !self.evaluate(a).is_zero() {
            return Ok(0);
        }
        Ok(self.homogeneous_components(a)?.order)
    }

    /// Smallest total degree of a term (order at the origin); `None` for zero.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).min()
    }

    pub fn partial(&self, v: Var) -> Poly2 {
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            let (e, nm) = match v {
                Var::X if m.x > 0 => (m.x, Mono::new(m.x - 1, m.y)),
                Var::Y if m.y > 0 => (m.y, Mono::new(m.x, m.y - 1)),
                _ => continue,
            };
            out.add_term(nm, c * Rat::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Apply a monomial map `x^i y^j -> x^f(i,j).0 y^f(i,j).1`.
    pub fn map_monomials(&self, f: impl Fn(u32, u32) -> (u32, u32)) -> Poly2 {
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            let (i, j) = f(m.x, m.y);
            out.add_term(Mono::new(i, j), c.clone());
        }
        out
    }

    pub fn swap_vars(&self) -> Poly2 {
        self.map_monomials(|i, j| (j, i))
    }

    /// Largest `k` with `v^k` dividing the polynomial; `0` for zero.
    pub fn valuation_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|m| match v {
                Var::X => m.x,
                Var::Y => m.y,
            })
            .min()
            .unwrap_or(0)
    }

    /// Divide by `v^k`; the caller guarantees divisibility.
    pub fn shift_down(&self, v: Var, k: u32) -> Poly2 {
        self.map_monomials(|i, j| match v {
            Var::X => (i - k, j),
            Var::Y => (i, j - k),
        })
    }

    /// View as a polynomial in `v` with coefficients univariate in the other
    /// variable; index `k` holds the coefficient of `v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly1> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut raw: Vec<Vec<Rat>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (k, e) = match v {
                Var::Y => (m.y, m.x),
                Var::X => (m.x, m.y),
            };
            let slot = &mut raw[k as usize];
            if slot.len() <= e as usize {
                slot.resize(e as usize + 1, Rat::zero());
            }
            slot[e as usize] = c.clone();
        }
        if self.is_zero() {
            return Vec::new();
        }
        raw.into_iter().map(Poly1::new).collect()
    }

    /// Inverse of [`Poly2::coeffs_in`].
    pub fn from_coeffs_in(v: Var, coeffs: &[Poly1]) -> Poly2 {
        let mut out = Poly2::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in c.coeffs().iter().enumerate() {
                let m = match v {
                    Var::Y => Mono::new(e as u32, k as u32),
                    Var::X => Mono::new(k as u32, e as u32),
                };
                out.add_term(m, a.clone());
            }
        }
        out
    }

    /// Univariate view when the polynomial only involves `v`.
    pub fn as_univariate(&self, v: Var) -> Option<Poly1> {
        if self.degree_in(v.other()).unwrap_or(0) > 0 {
            return None;
        }
        Some(self.specialize(v.other(), &Rat::zero()))
    }

    /// Embed a univariate polynomial as a polynomial in `v`.
    pub fn from_univariate(p: &Poly1, v: Var) -> Poly2 {
        Poly2::from_coeffs_in(v.other(), &[p.clone()])
    }

    /// Rational content, signed so that the primitive part has a positive
    /// leading coefficient in graded-lex order.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let c = Rat::new(num, den);
        if self.leading_coeff().is_negative() {
            -c
        } else {
            c
        }
    }

    /// Integer coefficients, coprime, positive graded-lex leading coefficient.
    pub fn primitive(&self) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        self.scale(&self.content().recip())
    }

    /// Exact division, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly2) -> Option<Poly2> {
        let (lm, lc) = d.leading_term()?;
        if d.num_terms() == 1 {
            let mut out = Poly2::zero();
            for (m, c) in &self.terms {
                if m.x < lm.x || m.y < lm.y {
                    return None;
                }
                out.add_term(Mono::new(m.x - lm.x, m.y - lm.y), c / &lc);
            }
            return Some(out);
        }
        let mut r = self.clone();
        let mut q = Poly2::zero();
        while let Some((rm, rc)) = r.leading_term() {
            if rm.x < lm.x || rm.y < lm.y {
                return None;
            }
            let t = Poly2::monomial(rc / &lc, rm.x - lm.x, rm.y - lm.y);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    pub fn divides(&self, p: &Poly2) -> bool {
        p.div_exact(self).is_some()
    }

    /// Canonical text form, terms by ascending degree and descending `x`.
    pub fn to_canonical(&self) -> String {
        self.to_string()
    }

    /// Terms in the canonical print order.
    pub fn canonical_terms(&self) -> Vec<(Mono, Rat)> {
        let mut v: Vec<(Mono, Rat)> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then(b.x.cmp(&a.x)));
        v
    }

    /// Structured triples `[i, j, "num/den"]`.
    pub fn to_triples(&self) -> Vec<(u32, u32, String)> {
        self.canonical_terms().into_iter().map(|(m, c)| (m.x, m.y, c.to_string())).collect()
    }

    pub fn from_triples(t: &[(u32, u32, String)]) -> Result<Poly2, PolyError> {
        let mut p = Poly2::zero();
        for (i, j, c) in t {
            p.add_term(Mono::new(*i, *j), parse_rat(c)?);
        }
        Ok(p)
    }
}

fn powers1(p: &Poly1, n: u32) -> Vec<Poly1> {
    let mut v = vec![Poly1::one()];
    for k in 0..n as usize {
        let next = &v[k] * p;
        v.push(next);
    }
    v
}

fn powers2(p: &Poly2, n: u32) -> Vec<Poly2> {
    let mut v = vec![Poly2::one()];
    for k in 0..n as usize {
        let next = &v[k] * p;
        v.push(next);
    }
    v
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, o: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, o: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, o: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                out.add_term(Mono::new(a.x + b.x, a.y + b.y), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly2 {
            type Output = Poly2;
            fn $f(self, o: Poly2) -> Poly2 {
                (&self).$f(&o)
            }
        }
        impl $tr<&Poly2> for Poly2 {
            type Output = Poly2;
            fn $f(self, o: &Poly2) -> Poly2 {
                (&self).$f(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}

impl Poly2 {
    /// Canonical text with custom names for the two variables.
    pub fn display_in(&self, names: (&str, &str)) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.canonical_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.degree() == 0 {
                factors.push(mag.to_string());
            }
            for (e, name) in [(m.x, names.0), (m.y, names.1)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in(("x", "y")))
    }
}

impl Serialize for Poly2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_triples().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = Vec::<(u32, u32, String)>::deserialize(d)?;
        Poly2::from_triples(&t).map_err(serde::de::Error::custom)
    }
}
