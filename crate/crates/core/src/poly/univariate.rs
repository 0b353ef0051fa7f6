use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

/// Dense univariate polynomial over `Q`, coefficients from degree 0 upward.
///
/// The coefficient vector never carries trailing zeros; the zero polynomial
/// is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly1 {
    coeffs: Vec<Rat>,
}

impl Poly1 {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly1::new(coeffs.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly1::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly1::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn t() -> Self {
        Poly1::new(vec![Rat::zero(), Rat::one()])
    }

    /// `c * t^n`.
    pub fn monomial(c: Rat, n: usize) -> Self {
        let mut v = vec![Rat::zero(); n + 1];
        v[n] = c;
        Poly1::new(v)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Composition `self(inner(t))`.
    pub fn compose(&self, inner: &Poly1) -> Poly1 {
        let mut acc = Poly1::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly1::constant(c.clone());
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Poly1 {
        if c.is_zero() {
            return Poly1::zero();
        }
        Poly1 { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, n: u32) -> Poly1 {
        let mut acc = Poly1::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Poly1 {
        Poly1::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly1) -> (Poly1, Poly1) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.lc();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly1::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Poly1::new(q), Poly1::new(r))
    }

    pub fn rem(&self, d: &Poly1) -> Poly1 {
        self.div_rem(d).1
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly1) -> Option<Poly1> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Poly1 {
        if self.is_zero() {
            return Poly1::zero();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly1) -> Poly1 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Rational content with the sign of the leading coefficient, so that
    /// `self = content * primitive()` and the primitive part has coprime
    /// integer coefficients and positive leading coefficient.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in &self.coeffs {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let c = Rat::new(num, den);
        if self.lc().is_negative() {
            -c
        } else {
            c
        }
    }

    pub fn primitive(&self) -> Poly1 {
        if self.is_zero() {
            return Poly1::zero();
        }
        self.scale(&self.content().recip())
    }

    /// Product of the distinct irreducible factors, primitive.
    pub fn squarefree(&self) -> Poly1 {
        if self.is_constant() {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").primitive()
    }

    /// Yun's squarefree factorization: `self = c * prod_i factors[i]^(i+1)`
    /// with each factor squarefree, primitive, and pairwise coprime.
    pub fn squarefree_factors(&self) -> Vec<Poly1> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.div_exact(&a0).expect("gcd divides");
        let mut c = d.div_exact(&a0).expect("gcd divides");
        let mut dd = &c - &b.derivative();
        loop {
            let a = b.gcd(&dd);
            out.push(a.primitive());
            b = b.div_exact(&a).expect("gcd divides");
            if b.is_constant() {
                break;
            }
            c = dd.div_exact(&a).expect("gcd divides");
            dd = &c - &b.derivative();
        }
        while out.last().is_some_and(|f| f.is_constant()) {
            out.pop();
        }
        out
    }

    /// Product of the squarefree factors of odd multiplicity.
    pub fn odd_part(&self) -> Poly1 {
        let mut acc = Poly1::one();
        for (i, f) in self.squarefree_factors().iter().enumerate() {
            if i % 2 == 0 {
                acc = &acc * f;
            }
        }
        acc
    }

    /// `p(-t)`.
    pub fn reflect(&self) -> Poly1 {
        Poly1::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &Rat) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly1::new(vec![-r.clone(), Rat::one()]);
        let mut p = self.clone();
        let mut m = 0;
        while let Some(q) = p.div_exact(&lin) {
            p = q;
            m += 1;
        }
        m
    }
}

impl Add for &Poly1 {
    type Output = Poly1;
    fn add(self, o: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly1::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly1 {
    type Output = Poly1;
    fn sub(self, o: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly1::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &Poly1 {
    type Output = Poly1;
    fn mul(self, o: &Poly1) -> Poly1 {
        if self.is_zero() || o.is_zero() {
            return Poly1::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly1::new(v)
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        Poly1 { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        // (t^2 - 1) = (t - 1)(t + 1)
        let p = Poly1::from_ints(&[-1, 0, 1]);
        let d = Poly1::from_ints(&[-1, 1]);
        let (q, r) = p.div_rem(&d);
        assert_eq!(q, Poly1::from_ints(&[1, 1]));
        assert!(r.is_zero());
        let g = p.gcd(&Poly1::from_ints(&[1, 2, 1]));
        assert_eq!(g, Poly1::from_ints(&[1, 1]));
    }

    #[test]
    fn squarefree_part() {
        // t^2 (t - 1)^3
        let p = &Poly1::t().pow(2) * &Poly1::from_ints(&[-1, 1]).pow(3);
        assert_eq!(p.squarefree(), Poly1::from_ints(&[0, -1, 1]));
        assert_eq!(p.root_multiplicity(&Rat::one()), 3);
    }

    #[test]
    fn yun_factors() {
        // t (t - 1)^2 (t + 2)^3
        let p = &(&Poly1::t() * &Poly1::from_ints(&[-1, 1]).pow(2)) * &Poly1::from_ints(&[2, 1]).pow(3);
        let f = p.squarefree_factors();
        assert_eq!(f, vec![Poly1::t(), Poly1::from_ints(&[-1, 1]), Poly1::from_ints(&[2, 1])]);
        assert_eq!(p.odd_part(), &Poly1::t() * &Poly1::from_ints(&[2, 1]));
    }

    #[test]
    fn content_sign_follows_leading_coefficient() {
        let p = Poly1::new(vec![Rat::new(1.into(), 2.into()), Rat::from_integer((-3).into())]);
        assert_eq!(p.primitive(), Poly1::from_ints(&[-1, 6]));
    }
}
