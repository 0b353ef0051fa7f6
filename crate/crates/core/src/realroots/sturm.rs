//! Sturm sequences and real root isolation for univariate polynomials.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Interval, IntervalKind, RootsError};
use crate::poly::{Poly1, Rat};

/// One end of a counting range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Unbounded,
    Open(Rat),
    Closed(Rat),
}

/// A possibly unbounded range of the real line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub lo: Bound,
    pub hi: Bound,
}

impl Span {
    pub fn all() -> Self {
        Span { lo: Bound::Unbounded, hi: Bound::Unbounded }
    }

    pub fn open(lo: Rat, hi: Rat) -> Self {
        Span { lo: Bound::Open(lo), hi: Bound::Open(hi) }
    }

    pub fn closed(lo: Rat, hi: Rat) -> Self {
        Span { lo: Bound::Closed(lo), hi: Bound::Closed(hi) }
    }

    pub fn positive() -> Self {
        Span { lo: Bound::Open(Rat::zero()), hi: Bound::Unbounded }
    }
}

impl From<&Interval> for Span {
    fn from(i: &Interval) -> Self {
        match i.kind {
            IntervalKind::Open => Span::open(i.lo.clone(), i.hi.clone()),
            IntervalKind::Closed | IntervalKind::Point => Span::closed(i.lo.clone(), i.hi.clone()),
        }
    }
}

/// Divide by the absolute content, keeping signs.
fn positive_primitive(p: &Poly1) -> Poly1 {
    if p.is_zero() {
        return Poly1::zero();
    }
    p.scale(&p.content().abs().recip())
}

/// Sturm chain of a polynomial, computed on its squarefree part.
#[derive(Debug, Clone)]
pub struct SturmChain {
    seq: Vec<Poly1>,
}

impl SturmChain {
    pub fn new(p: &Poly1) -> Self {
        let sf = p.squarefree();
        let mut seq = vec![sf.clone()];
        if !sf.is_constant() {
            seq.push(positive_primitive(&sf.derivative()));
            loop {
                let n = seq.len();
                let r = seq[n - 2].rem(&seq[n - 1]);
                if r.is_zero() {
                    break;
                }
                seq.push(positive_primitive(&-&r));
            }
        }
        SturmChain { seq }
    }

    pub fn base(&self) -> &Poly1 {
        &self.seq[0]
    }

    fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, t: &Rat) -> usize {
        Self::variations(self.seq.iter().map(|p| sign(&p.eval(t))))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.seq.iter().map(|p| {
            let s = sign(&p.lc());
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in the span.
    pub fn count(&self, span: &Span) -> usize {
        let base = self.base();
        let (v_lo, lo_adjust) = match &span.lo {
            Bound::Unbounded => (self.variations_at_infinity(false), 0),
            Bound::Open(a) => (self.variations_at(a), 0),
            Bound::Closed(a) => (self.variations_at(a), usize::from(base.eval(a).is_zero())),
        };
        let (v_hi, hi_adjust) = match &span.hi {
            Bound::Unbounded => (self.variations_at_infinity(true), 0),
            Bound::Open(b) => (self.variations_at(b), usize::from(base.eval(b).is_zero())),
            Bound::Closed(b) => (self.variations_at(b), 0),
        };
        // V(a) - V(b) counts roots in (a, b]
        (v_lo + lo_adjust).saturating_sub(v_hi + hi_adjust)
    }
}

pub(crate) fn sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Number of distinct real roots of `p` in `span`.
pub fn sturm_count(p: &Poly1, span: &Span) -> Result<usize, RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    Ok(SturmChain::new(p).count(span))
}

/// Power of two bounding the absolute value of every root.
fn root_bound(p: &Poly1) -> Rat {
    let lc = p.lc().abs();
    let mut m = Rat::zero();
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let r = c.abs() / &lc;
        if r > m {
            m = r;
        }
    }
    let bound = m + Rat::one();
    let mut b = Rat::one();
    while b < bound {
        b *= Rat::from_integer(BigInt::from(2));
    }
    b
}

fn two() -> Rat {
    Rat::from_integer(BigInt::from(2))
}

fn mid(a: &Rat, b: &Rat) -> Rat {
    (a + b) / two()
}

/// A split point strictly inside `(lo, hi)` that is not a root of `p`.
fn split_point(p: &Poly1, lo: &Rat, hi: &Rat) -> Rat {
    let m = mid(lo, hi);
    if !p.eval(&m).is_zero() {
        return m;
    }
    let mut step = (hi - lo) / Rat::from_integer(BigInt::from(4));
    loop {
        for c in [&m + &step, &m - &step] {
            if !p.eval(&c).is_zero() {
                return c;
            }
        }
        step /= Rat::from_integer(BigInt::from(3));
    }
}

/// Disjoint open intervals with non-root rational endpoints, each holding
/// exactly one root of the squarefree polynomial, in increasing order.
fn isolate(chain: &SturmChain) -> Vec<(Rat, Rat)> {
    let p = chain.base();
    if p.is_constant() {
        return Vec::new();
    }
    let b = root_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = chain.count(&Span::open(lo.clone(), hi.clone()));
        match n {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let m = split_point(p, &lo, &hi);
                stack.push((lo, m.clone()));
                stack.push((m, hi));
            }
        }
    }
    out.sort();
    out
}

/// Simplest rational (smallest denominator) strictly inside `(lo, hi)`;
/// `hi = None` means `+infinity`.
pub(crate) fn simplest_between(lo: &Rat, hi: Option<&Rat>) -> Rat {
    if lo.is_negative() {
        match hi {
            None => return Rat::zero(),
            Some(h) if h.is_positive() => return Rat::zero(),
            Some(h) => return -simplest_between(&-h, Some(&-lo)),
        }
    }
    let f = lo.floor();
    let n = &f + Rat::one();
    if hi.is_none_or(|h| &n < h) {
        return n;
    }
    let h = hi.expect("bounded here");
    let upper = if lo == &f { None } else { Some((lo - &f).recip()) };
    let inner_lo = (h - &f).recip();
    f + simplest_between(&inner_lo, upper.as_ref()).recip()
}

/// Shrink an isolating interval of a simple root by sign bisection. Returns
/// `Err(root)` if a bisection point hits the root exactly.
fn bisect_once(p: &Poly1, lo: &Rat, hi: &Rat) -> Result<(Rat, Rat), Rat> {
    let m = mid(lo, hi);
    let sm = sign(&p.eval(&m));
    if sm == 0 {
        return Err(m);
    }
    if sm == sign(&p.eval(lo)) {
        Ok((m, hi.clone()))
    } else {
        Ok((lo.clone(), m))
    }
}

/// Refine `(lo, hi)` (one simple root, endpoints not roots) until its width is
/// at most `width`.
pub fn refine(p: &Poly1, iv: &Interval, width: &Rat) -> Interval {
    if iv.kind == IntervalKind::Point {
        return iv.clone();
    }
    let sf = p.squarefree();
    let (mut lo, mut hi) = (iv.lo.clone(), iv.hi.clone());
    while &(&hi - &lo) > width {
        match bisect_once(&sf, &lo, &hi) {
            Ok((a, b)) => {
                lo = a;
                hi = b;
            }
            Err(root) => return Interval::point(root),
        }
    }
    Interval::open(lo, hi)
}

/// All real roots: rational ones exactly, irrational ones as isolating open
/// intervals with rational endpoints.
pub fn real_roots(p: &Poly1) -> Result<(Vec<Rat>, Vec<Interval>), RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    let chain = SturmChain::new(p);
    let sf = chain.base().clone();
    // rational roots have denominators dividing the leading coefficient of
    // the integer primitive part; distinct ones are >= 1/lc^2 apart
    let lc = sf.lc().abs();
    let sep = (&lc * &lc).recip();
    let mut rational = Vec::new();
    let mut irrational = Vec::new();
    for (lo, hi) in isolate(&chain) {
        let (mut lo, mut hi) = (lo, hi);
        let mut exact = None;
        loop {
            let cand = simplest_between(&lo, Some(&hi));
            if sf.eval(&cand).is_zero() {
                exact = Some(cand);
                break;
            }
            if &hi - &lo <= sep {
                break;
            }
            match bisect_once(&sf, &lo, &hi) {
                Ok((a, b)) => {
                    lo = a;
                    hi = b;
                }
                Err(root) => {
                    exact = Some(root);
                    break;
                }
            }
        }
        match exact {
            Some(r) => rational.push(r),
            None => irrational.push(Interval::open(lo, hi)),
        }
    }
    Ok((rational, irrational))
}

/// Either an exact rational root or an isolating interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealRoot {
    Exact(Rat),
    Isolated(Interval),
}

impl RealRoot {
    pub fn lower(&self) -> &Rat {
        match self {
            RealRoot::Exact(r) => r,
            RealRoot::Isolated(i) => &i.lo,
        }
    }

    pub fn upper(&self) -> &Rat {
        match self {
            RealRoot::Exact(r) => r,
            RealRoot::Isolated(i) => &i.hi,
        }
    }

    pub fn as_interval(&self) -> Interval {
        match self {
            RealRoot::Exact(r) => Interval::point(r.clone()),
            RealRoot::Isolated(i) => i.clone(),
        }
    }
}

/// Real roots in increasing order.
pub fn sorted_roots(p: &Poly1) -> Result<Vec<RealRoot>, RootsError> {
    let (rat, irr) = real_roots(p)?;
    let mut all: Vec<RealRoot> = rat.into_iter().map(RealRoot::Exact).chain(irr.into_iter().map(RealRoot::Isolated)).collect();
    all.sort_by(|a, b| a.lower().cmp(b.lower()));
    Ok(all)
}

/// One rational sample in each open cell cut out by the given sorted roots.
pub fn cell_samples(roots: &[RealRoot]) -> Vec<Rat> {
    if roots.is_empty() {
        return vec![Rat::zero()];
    }
    let mut out = vec![roots[0].lower().floor() - Rat::one()];
    for w in roots.windows(2) {
        out.push(mid(w[0].upper(), w[1].lower()));
    }
    out.push(roots[roots.len() - 1].upper().ceil() + Rat::one());
    out
}

/// `2^-k` as a rational.
pub fn dyadic(k: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    #[test]
    fn sturm_examples() {
        let p = Poly1::from_ints(&[1, 0, 1]);
        assert_eq!(sturm_count(&p, &Span::all()).unwrap(), 0);
        let p = Poly1::from_ints(&[0, -1, 0, 1]);
        assert_eq!(sturm_count(&p, &Span::closed(rat(-2), rat(2))).unwrap(), 3);
        // (t^2 - 1)(t^2 - 4): roots 1, 2 are positive
        let p = Poly1::from_ints(&[4, 0, -5, 0, 1]);
        assert_eq!(sturm_count(&p, &Span::positive()).unwrap(), 2);
        assert_eq!(sturm_count(&Poly1::zero(), &Span::all()), Err(RootsError::ZeroPolynomial));
    }

    #[test]
    fn endpoint_conventions() {
        // t^3 - t has roots -1, 0, 1
        let p = Poly1::from_ints(&[0, -1, 0, 1]);
        assert_eq!(sturm_count(&p, &Span::open(rat(-1), rat(1))).unwrap(), 1);
        assert_eq!(sturm_count(&p, &Span::closed(rat(-1), rat(1))).unwrap(), 3);
        assert_eq!(
            sturm_count(&p, &Span { lo: Bound::Closed(rat(0)), hi: Bound::Unbounded }).unwrap(),
            2
        );
    }

    #[test]
    fn multiple_roots_count_once() {
        let p = &Poly1::from_ints(&[-1, 1]).pow(3) * &Poly1::from_ints(&[2, 1]).pow(2);
        assert_eq!(sturm_count(&p, &Span::all()).unwrap(), 2);
    }

    #[test]
    fn real_roots_examples() {
        let (r, i) = real_roots(&Poly1::from_ints(&[-1, 0, 1])).unwrap();
        assert_eq!(r, vec![rat(-1), rat(1)]);
        assert!(i.is_empty());
        let (r, i) = real_roots(&Poly1::from_ints(&[1, 0, 1])).unwrap();
        assert!(r.is_empty() && i.is_empty());
        let (r, i) = real_roots(&Poly1::from_ints(&[-2, 0, 1])).unwrap();
        assert!(r.is_empty());
        assert_eq!(i, vec![Interval::open(rat(-2), rat(-1)), Interval::open(rat(1), rat(2))]);
    }

    #[test]
    fn rational_roots_with_denominators() {
        // (3t - 2)(5t + 7)(t^2 - 3)
        let p = &(&Poly1::from_ints(&[-2, 3]) * &Poly1::from_ints(&[7, 5])) * &Poly1::from_ints(&[-3, 0, 1]);
        let (r, i) = real_roots(&p).unwrap();
        assert_eq!(r, vec![ratio(-7, 5), ratio(2, 3)]);
        assert_eq!(i.len(), 2);
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&ratio(1, 3), Some(&ratio(1, 2))), ratio(2, 5));
        assert_eq!(simplest_between(&ratio(-1, 2), Some(&ratio(1, 2))), rat(0));
        assert_eq!(simplest_between(&rat(1), Some(&rat(2))), ratio(3, 2));
        assert_eq!(simplest_between(&ratio(-7, 3), Some(&ratio(-2, 1))), ratio(-9, 4));
    }

    #[test]
    fn refinement_reaches_width() {
        let p = Poly1::from_ints(&[-2, 0, 1]);
        let w = dyadic(32);
        let r = refine(&p, &Interval::open(rat(1), rat(2)), &w);
        assert!(&r.hi - &r.lo <= w);
        assert!(r.lo.clone() * r.lo.clone() < rat(2) && r.hi.clone() * r.hi.clone() > rat(2));
    }
}
