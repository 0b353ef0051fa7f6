//! Greatest common divisors and resultants in `Q[x, y]`, computed in `Q[x][y]`
//! by primitive pseudo-remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Poly1, Poly2, PolyError, Rat, Var};

/// Polynomial in `y` with coefficients in `Q[x]`, index = power of `y`.
type Dense = Vec<Poly1>;

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(Poly1::is_zero) {
        p.pop();
    }
    p
}

fn deg(p: &Dense) -> usize {
    p.len().saturating_sub(1)
}

/// Monic gcd of all coefficients.
fn content(p: &Dense) -> Poly1 {
    let mut g = Poly1::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_constant() && !g.is_zero() {
            return Poly1::one();
        }
    }
    g
}

fn divide_coeffs(p: &Dense, c: &Poly1) -> Dense {
    p.iter().map(|a| a.div_exact(c).expect("content divides every coefficient")).collect()
}

fn primitive(p: &Dense) -> Dense {
    if p.is_empty() {
        return Vec::new();
    }
    let c = content(p);
    let q = divide_coeffs(p, &c);
    // normalize scalars: integer-primitive leading coefficient in x
    let lc = q.last().unwrap();
    let s = lc.content().recip();
    q.iter().map(|a| a.scale(&s)).collect()
}

/// Pseudo-remainder of `a` by `b` in `y`.
fn prem(a: &Dense, b: &Dense) -> Dense {
    let db = deg(b);
    let lcb = b.last().unwrap().clone();
    let mut r = a.clone();
    while !r.is_empty() && deg(&r) >= db {
        let dr = deg(&r);
        let lcr = r.last().unwrap().clone();
        let shift = dr - db;
        let mut next: Dense = r.iter().map(|c| c * &lcb).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(bc * &lcr);
        }
        r = trim(next);
    }
    r
}

/// Normalize to integer coefficients, coprime, positive graded-lex leading
/// coefficient.
fn normalize(p: &Poly2) -> Poly2 {
    p.primitive()
}

/// Greatest common divisor in `Q[x, y]`, primitive over `Z` with positive
/// graded-lex leading coefficient. `gcd(p, 0)` is the normalized `p`;
/// `gcd(0, 0)` is `0`.
pub fn gcd_poly(p: &Poly2, q: &Poly2) -> Poly2 {
    if p.is_zero() {
        return normalize(q);
    }
    if q.is_zero() {
        return normalize(p);
    }
    if p.is_constant() || q.is_constant() {
        return Poly2::one();
    }
    let a = trim(p.coeffs_in(Var::Y));
    let b = trim(q.coeffs_in(Var::Y));
    let ca = content(&a);
    let cb = content(&b);
    let cg = ca.gcd(&cb);
    let mut a = primitive(&divide_coeffs(&a, &ca));
    let mut b = primitive(&divide_coeffs(&b, &cb));
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    if coprime_by_specialization(&a, &b) {
        a = vec![Poly1::one()];
        b = Vec::new();
    } else if let Some(g) = gcd_by_interpolation(&a, &b) {
        a = g;
        b = Vec::new();
    }
    let g = loop {
        if b.is_empty() {
            break a;
        }
        if deg(&b) == 0 {
            break vec![Poly1::one()];
        }
        let r = prem(&a, &b);
        a = b;
        b = primitive(&r);
    };
    let g = primitive(&g);
    let mut out = Poly2::from_coeffs_in(Var::Y, &g);
    out = &out * &Poly2::from_univariate(&cg, Var::X);
    normalize(&out)
}

/// Sufficient test for `gcd = 1` of primitive parts: if some `x = x0` keeps
/// both leading coefficients nonzero and the specialized gcd is constant, no
/// common factor of positive degree in `y` exists.
fn coprime_by_specialization(a: &Dense, b: &Dense) -> bool {
    if a.len() < 2 || b.len() < 2 {
        return false;
    }
    let at = |p: &Dense, x0: &Rat| Poly1::new(p.iter().map(|c| c.eval(x0)).collect());
    let lca = a.last().unwrap();
    let lcb = b.last().unwrap();
    for k in [0i64, 1, -1, 2, -2, 3, -3, 5, 7, 11] {
        let x0 = Rat::from_integer(k.into());
        if lca.eval(&x0).is_zero() || lcb.eval(&x0).is_zero() {
            continue;
        }
        return at(a, &x0).gcd(&at(b, &x0)).is_constant();
    }
    false
}

fn deg_x(p: &Dense) -> usize {
    p.iter().filter_map(Poly1::degree).max().unwrap_or(0)
}

/// Newton interpolation through `(xs[i], vs[i])`.
fn interpolate(xs: &[Rat], vs: &[Rat]) -> Poly1 {
    let n = xs.len();
    let mut dd = vs.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut out = Poly1::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = Poly1::new(vec![-xs[i].clone(), Rat::one()]);
        out = &(&out * &lin) + &Poly1::constant(dd[i].clone());
    }
    out
}

fn divides_dense(g: &Dense, p: &Dense) -> bool {
    let g2 = Poly2::from_coeffs_in(Var::Y, g);
    Poly2::from_coeffs_in(Var::Y, p).div_exact(&g2).is_some()
}

/// Gcd of primitive `a, b` from univariate gcds at `x = x_i`, with leading
/// coefficient forced to `gcd(lc a, lc b)` and checked by exact division.
fn gcd_by_interpolation(a: &Dense, b: &Dense) -> Option<Dense> {
    let lca = a.last()?;
    let lcb = b.last()?;
    let gamma = lca.gcd(lcb);
    let need = gamma.degree().unwrap_or(0) + deg_x(a).min(deg_x(b)) + 1;
    let mut pts: Vec<(Rat, Poly1)> = Vec::new();
    let mut min_deg = usize::MAX;
    let mut k = 0i64;
    let mut tried = 0;
    while pts.len() < need {
        tried += 1;
        if tried > 4 * need + 20 {
            return None;
        }
        let x0 = Rat::from_integer(k.into());
        k = if k > 0 { -k } else { 1 - k };
        if lca.eval(&x0).is_zero() || lcb.eval(&x0).is_zero() {
            continue;
        }
        let at = |p: &Dense| Poly1::new(p.iter().map(|c| c.eval(&x0)).collect());
        let g = at(a).gcd(&at(b));
        let d = g.degree().unwrap_or(0);
        if d == 0 {
            return Some(vec![Poly1::one()]);
        }
        if d < min_deg {
            min_deg = d;
            pts.clear();
        }
        if d == min_deg {
            let s = gamma.eval(&x0);
            pts.push((x0, g.scale(&s)));
        }
    }
    let xs: Vec<Rat> = pts.iter().map(|(x, _)| x.clone()).collect();
    let h: Dense = (0..=min_deg)
        .map(|j| interpolate(&xs, &pts.iter().map(|(_, g)| g.coeff(j)).collect::<Vec<_>>()))
        .collect();
    let g = primitive(&trim(h));
    (divides_dense(&g, a) && divides_dense(&g, b)).then_some(g)
}

/// Determinant of an integer matrix by fraction-free elimination.
fn int_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Integer coefficient lists `c * p_i` and the common multiplier `c`.
fn integral(p: &[Poly1]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut l = BigInt::one();
    for c in p.iter().flat_map(|q| q.coeffs()) {
        l = l.lcm(c.denom());
    }
    let ints = p.iter().map(|q| q.coeffs().iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect()).collect();
    (ints, l)
}

fn eval_int(c: &[BigInt], t: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, v| acc * t + v)
}

/// Univariate resultant in `Q[t]` of the Sylvester matrix, by evaluation at
/// `t = 0, 1, ..., D` and Newton interpolation.
pub(crate) fn resultant_dense(a: &[Poly1], b: &[Poly1]) -> Poly1 {
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 {
        return a[0].pow(n as u32);
    }
    if n == 0 {
        return b[0].pow(m as u32);
    }
    let (ai, la) = integral(a);
    let (bi, lb) = integral(b);
    let dx = |p: &[Poly1]| p.iter().filter_map(Poly1::degree).max().unwrap_or(0);
    let bound = n * dx(a) + m * dx(b);
    let size = m + n;
    let mut vals: Vec<BigInt> = Vec::with_capacity(bound + 1);
    for k in 0..=bound {
        let t = BigInt::from(k);
        let av: Vec<BigInt> = ai.iter().map(|c| eval_int(c, &t)).collect();
        let bv: Vec<BigInt> = bi.iter().map(|c| eval_int(c, &t)).collect();
        let mut rows = Vec::with_capacity(size);
        for (count, coeffs) in [(n, &av), (m, &bv)] {
            for i in 0..count {
                let mut row = vec![BigInt::zero(); size];
                for (j, c) in coeffs.iter().rev().enumerate() {
                    row[i + j] = c.clone();
                }
                rows.push(row);
            }
        }
        vals.push(int_det(rows));
    }
    // forward differences at 0
    let mut diffs = Vec::with_capacity(bound + 1);
    let mut cur = vals;
    while !cur.is_empty() {
        diffs.push(cur[0].clone());
        cur = cur.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let mut fact = vec![BigInt::one()];
    for j in 1..=bound {
        let f = &fact[j - 1] * BigInt::from(j);
        fact.push(f);
    }
    let mut out = Poly1::zero();
    for j in (0..=bound).rev() {
        let lin = Poly1::new(vec![Rat::from_integer(-BigInt::from(j)), Rat::one()]);
        out = &(&out * &lin) + &Poly1::constant(Rat::new(diffs[j].clone(), fact[j].clone()));
    }
    let scale = Rat::new(BigInt::one(), num_traits::pow(la, n) * num_traits::pow(lb, m));
    out.scale(&scale)
}

/// Resultant of `p` and `q` with respect to `eliminate`, as a polynomial in
/// the other variable. The sign follows the Sylvester matrix with the rows of
/// `p` first.
pub fn resultant(p: &Poly2, q: &Poly2, eliminate: Var) -> Result<Poly2, PolyError> {
    if p.is_zero() || q.is_zero() {
        return Ok(Poly2::zero());
    }
    let a = trim(p.coeffs_in(eliminate));
    let b = trim(q.coeffs_in(eliminate));
    if a.len() == 1 && b.len() == 1 {
        return Err(PolyError::DegenerateInput);
    }
    let r = resultant_dense(&a, &b);
    Ok(Poly2::from_univariate(&r, eliminate.other()))
}

/// Resultant of two univariate polynomials.
pub fn resultant1(a: &Poly1, b: &Poly1) -> Rat {
    if a.is_zero() || b.is_zero() {
        return Rat::zero();
    }
    let ac: Vec<Poly1> = a.coeffs().iter().map(|c| Poly1::constant(c.clone())).collect();
    let bc: Vec<Poly1> = b.coeffs().iter().map(|c| Poly1::constant(c.clone())).collect();
    resultant_dense(&ac, &bc).coeff(0)
}

/// Squarefree part `p / gcd(p, p_x, p_y)`, primitive.
pub fn squarefree_part(p: &Poly2) -> Poly2 {
    if p.is_constant() {
        return p.primitive();
    }
    let g = gcd_poly(&gcd_poly(p, &p.partial(Var::X)), &p.partial(Var::Y));
    p.div_exact(&g).expect("gcd divides").primitive()
}

/// Split `p` into its content as a polynomial in `v` (univariate in the other
/// variable) and the primitive part.
pub fn content_in(p: &Poly2, v: Var) -> (Poly1, Poly2) {
    let c = trim(p.coeffs_in(v));
    if c.is_empty() {
        return (Poly1::zero(), Poly2::zero());
    }
    let g = content(&c);
    let pp = divide_coeffs(&c, &g);
    (g, Poly2::from_coeffs_in(v, &pp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn x() -> Poly2 {
        Poly2::x()
    }
    fn y() -> Poly2 {
        Poly2::y()
    }

    #[test]
    fn gcd_examples() {
        let d = &x() - &y();
        assert_eq!(gcd_poly(&(&x().pow(2) - &y().pow(2)), &d), d);
        assert_eq!(gcd_poly(&x().pow(3), &(&x().pow(2) + &y().pow(2))), Poly2::one());
        // u^3 v^2 + u v^4 = u v^2 (u^2 + v^2); u^2 v -> common u v
        let p = &(&x().pow(3) * &y().pow(2)) + &(&x() * &y().pow(4));
        let q = &x().pow(2) * &y();
        assert_eq!(gcd_poly(&p, &q), &x() * &y());
        assert_eq!(gcd_poly(&p, &Poly2::zero()), p.primitive());
    }

    #[test]
    fn gcd_with_content_in_x() {
        // (x - 1)(x + y^2) and (x - 1)^2 y
        let a = &(&x() - &Poly2::one()) * &(&x() + &y().pow(2));
        let b = &(&x() - &Poly2::one()).pow(2) * &y();
        assert_eq!(gcd_poly(&a, &b), &x() - &Poly2::one());
    }

    #[test]
    fn resultant_examples() {
        let p = &y().pow(2) - &x();
        assert_eq!(resultant(&p, &y(), Var::Y).unwrap(), -&x());
        let r = resultant(&(&x().pow(2) + &y().pow(2)), &Poly2::one(), Var::Y).unwrap();
        assert_eq!(r, Poly2::one());
        let s = &y().pow(2) + &Poly2::one();
        assert!(resultant(&s, &s, Var::Y).unwrap().is_zero());
        assert_eq!(
            resultant(&x(), &Poly2::constant(rat(2)), Var::Y),
            Err(PolyError::DegenerateInput)
        );
    }

    #[test]
    fn squarefree() {
        let a = &x() + &y().pow(2);
        let p = &a.pow(3) * &y();
        assert_eq!(squarefree_part(&p), (&a * &y()).primitive());
    }
}
