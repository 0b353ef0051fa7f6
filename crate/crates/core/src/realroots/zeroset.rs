//! Finiteness of real zero sets of bivariate polynomials.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::interval_eval::box_excludes_zero;
use super::sturm::{cell_samples, dyadic, real_roots, refine, sorted_roots, sturm_count, RealRoot, Span};
use super::{Interval, RootsError};
use crate::poly::{content_in, rat, resultant, squarefree_part, Point, Poly1, Poly2, Rat, Var};

/// Box holding a zero with at least one irrational coordinate. When
/// `certain` is false the box holds at most one zero, possibly none.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroBox {
    pub x: Interval,
    pub y: Interval,
    pub certain: bool,
}

/// `fixed = value` meets the zero set in a real root inside `root`, and the
/// meeting persists for an open range of `value` (or along a whole line).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfiniteWitness {
    pub fixed: Var,
    #[serde(with = "crate::poly::rat_string")]
    pub value: Rat,
    pub root: Interval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSet2D {
    pub finite: bool,
    pub points: Vec<Point>,
    pub unresolved_boxes: Vec<ZeroBox>,
    pub infinite_witness: Option<InfiniteWitness>,
}

impl ZeroSet2D {
    fn infinite(fixed: Var, value: Rat, root: Interval) -> Self {
        ZeroSet2D {
            finite: false,
            points: Vec::new(),
            unresolved_boxes: Vec::new(),
            infinite_witness: Some(InfiniteWitness { fixed, value, root }),
        }
    }

    fn finite(points: Vec<Point>, unresolved_boxes: Vec<ZeroBox>) -> Self {
        ZeroSet2D { finite: true, points, unresolved_boxes, infinite_witness: None }
    }

    /// Finite with every zero rational.
    pub fn is_complete(&self) -> bool {
        self.finite && self.unresolved_boxes.is_empty()
    }
}

fn first_root(p: &Poly1) -> Result<Option<Interval>, RootsError> {
    if p.is_constant() {
        return Ok(None);
    }
    Ok(sorted_roots(p)?.first().map(RealRoot::as_interval))
}

fn fiber_gcd(polys: &[&Poly2], v: Var, value: &Rat) -> Poly1 {
    polys.iter().fold(Poly1::zero(), |g, p| g.gcd(&p.specialize(v, value)))
}

fn univariate(p: &Poly2, v: Var) -> Poly1 {
    p.as_univariate(v).expect("resultant eliminates the other variable")
}

/// Decide whether `q` has finitely many real zeros and, if so, list them.
pub fn zero_set_2d(q: &Poly2) -> Result<ZeroSet2D, RootsError> {
    if q.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    if q.is_constant() {
        return Ok(ZeroSet2D::finite(Vec::new(), Vec::new()));
    }
    let s = squarefree_part(q);
    let (c, r) = content_in(&s, Var::Y);
    if let Some(root) = first_root(&c)? {
        // vertical line through a root of the content
        let y0 = (0..)
            .map(rat)
            .find(|y0| !r.specialize(Var::Y, y0).is_zero())
            .expect("a nonzero polynomial has a non-vanishing row");
        return Ok(ZeroSet2D::infinite(Var::Y, y0, root));
    }
    if r.degree_in(Var::Y).unwrap_or(0) == 0 {
        return Ok(ZeroSet2D::finite(Vec::new(), Vec::new()));
    }
    let rx = r.partial(Var::X);
    let ry = r.partial(Var::Y);
    let lc = r.coeffs_in(Var::Y).pop().expect("positive degree in y");
    let disc = univariate(&resultant(&r, &ry, Var::Y).map_err(|_| RootsError::ZeroPolynomial)?, Var::X);
    let crit = &lc * &disc;
    let roots = sorted_roots(&crit)?;
    for x0 in cell_samples(&roots) {
        if let Some(root) = first_root(&r.specialize(Var::X, &x0))? {
            return Ok(ZeroSet2D::infinite(Var::X, x0, root));
        }
    }

    // every remaining zero is a singular point of r over a critical x-value
    let width = dyadic(32);
    let sing = [&r, &rx, &ry];
    let mut points = BTreeSet::new();
    let mut boxes = Vec::new();
    let mut irr_x = Vec::new();
    for root in &roots {
        match root {
            RealRoot::Exact(x0) => {
                let g = fiber_gcd(&sing, Var::X, x0);
                if g.is_constant() {
                    continue;
                }
                let (rat_ys, irr_ys) = real_roots(&g)?;
                points.extend(rat_ys.into_iter().map(|y0| Point::new(x0.clone(), y0)));
                for iv in irr_ys {
                    boxes.push(ZeroBox { x: Interval::point(x0.clone()), y: refine(&g, &iv, &width), certain: true });
                }
            }
            RealRoot::Isolated(iv) => irr_x.push(refine(&crit, iv, &width)),
        }
    }
    if !irr_x.is_empty() && r.degree_in(Var::X).unwrap_or(0) > 0 {
        let ey = univariate(&resultant(&r, &rx, Var::X).map_err(|_| RootsError::ZeroPolynomial)?, Var::Y);
        debug_assert!(!ey.is_zero(), "squarefree polynomials have a nonzero discriminant");
        let mut irr_y = Vec::new();
        for root in sorted_roots(&ey)? {
            match root {
                RealRoot::Exact(y0) => {
                    let g = fiber_gcd(&sing, Var::Y, &y0);
                    if g.is_constant() {
                        continue;
                    }
                    let (_, irr_xs) = real_roots(&g)?;
                    for iv in irr_xs {
                        boxes.push(ZeroBox { x: refine(&g, &iv, &width), y: Interval::point(y0.clone()), certain: true });
                    }
                }
                RealRoot::Isolated(iv) => irr_y.push(refine(&ey, &iv, &width)),
            }
        }
        for bx in &irr_x {
            for by in &irr_y {
                let cx = Interval::closed(bx.lo.clone(), bx.hi.clone());
                let cy = Interval::closed(by.lo.clone(), by.hi.clone());
                if sing.iter().any(|p| box_excludes_zero(p, &cx, &cy)) {
                    continue;
                }
                boxes.push(ZeroBox { x: bx.clone(), y: by.clone(), certain: false });
            }
        }
    }
    boxes.sort_by(|a, b| (&a.x.lo, &a.y.lo).cmp(&(&b.x.lo, &b.y.lo)));
    Ok(ZeroSet2D::finite(points.into_iter().collect(), boxes))
}

/// Whether a zero of a polynomial is an isolated point of its zero set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Isolation {
    NotZero,
    Isolated,
    OnCurve,
    /// An irrational multiple tangent direction (slope interval) was met.
    Unsupported(Interval),
}

const MAX_BLOWUPS: u32 = 64;

/// Decide whether `a` is an isolated point of `Z(h)` by following real
/// tangent directions through point blow-ups.
pub fn is_isolated_zero(h: &Poly2, a: &Point) -> Result<Isolation, RootsError> {
    if h.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    if !h.evaluate(a).is_zero() {
        return Ok(Isolation::NotZero);
    }
    Ok(isolation_at_origin(&squarefree_part(h).translate(a), 0))
}

fn isolation_at_origin(s: &Poly2, depth: u32) -> Isolation {
    if !s.coeff(1, 0).is_zero() || !s.coeff(0, 1).is_zero() {
        return Isolation::OnCurve;
    }
    if depth >= MAX_BLOWUPS {
        return Isolation::Unsupported(Interval::point(Rat::zero()));
    }
    let m = s.low_degree().expect("nonzero");
    let lowest = Poly2::from_terms(s.terms().filter(|(mono, _)| mono.degree() == m).map(|(mono, c)| (mono.x, mono.y, c.clone())));
    let g = lowest.specialize(Var::X, &Rat::one());
    let mut pending = None;
    if !g.is_constant() {
        let simple = g.squarefree_factors().into_iter().next().unwrap_or_else(Poly1::one);
        // chart (u, uv): strict transform s(u, uv) / u^m
        let chart1 = s.map_monomials(|i, j| (i + j - m, j));
        for root in sorted_roots(&g).expect("nonzero") {
            match root {
                RealRoot::Exact(v0) => {
                    if g.root_multiplicity(&v0) == 1 {
                        return Isolation::OnCurve;
                    }
                    let next = squarefree_part(&chart1.translate(&Point::new(Rat::zero(), v0)));
                    match isolation_at_origin(&next, depth + 1) {
                        Isolation::Isolated => {}
                        other @ Isolation::OnCurve => return other,
                        other => pending = pending.or(Some(other)),
                    }
                }
                RealRoot::Isolated(iv) => {
                    let simple_here = !simple.is_constant() && sturm_count(&simple, &Span::from(&iv)).unwrap_or(0) > 0;
                    if simple_here {
                        return Isolation::OnCurve;
                    }
                    pending = pending.or(Some(Isolation::Unsupported(iv)));
                }
            }
        }
    }
    if lowest.coeff(0, m).is_zero() {
        // direction of the y-axis: chart (uv, v), strict transform s(uv, v) / v^m
        let chart2 = squarefree_part(&s.map_monomials(|i, j| (i, i + j - m)));
        match isolation_at_origin(&chart2, depth + 1) {
            Isolation::Isolated => {}
            other @ Isolation::OnCurve => return other,
            other => pending = pending.or(Some(other)),
        }
    }
    pending.unwrap_or(Isolation::Isolated)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly2 {
        Poly2::x()
    }
    fn y() -> Poly2 {
        Poly2::y()
    }
    fn one() -> Poly2 {
        Poly2::one()
    }

    #[test]
    fn two_points() {
        let q = &(&x().pow(2) + &y().pow(2)) * &(&(&x() - &one()).pow(2) + &y().pow(2));
        let z = zero_set_2d(&q).unwrap();
        assert!(z.finite);
        assert_eq!(z.points, vec![Point::from_ints(0, 0), Point::from_ints(1, 0)]);
        assert!(z.unresolved_boxes.is_empty());
    }

    #[test]
    fn empty_and_infinite() {
        let z = zero_set_2d(&(&(&x().pow(2) + &y().pow(2)) + &one())).unwrap();
        assert!(z.finite && z.points.is_empty());
        let z = zero_set_2d(&(&x() * &y())).unwrap();
        assert!(!z.finite);
        let w = z.infinite_witness.unwrap();
        let probe = match w.fixed {
            Var::X => (&x() * &y()).specialize(Var::X, &w.value),
            Var::Y => (&x() * &y()).specialize(Var::Y, &w.value),
        };
        assert!(sturm_count(&probe, &Span::from(&w.root)).unwrap() >= 1 || probe.is_zero());
        assert!(!zero_set_2d(&(&y().pow(2) - &x().pow(3))).unwrap().finite);
        assert!(!zero_set_2d(&(&x() - &one()).pow(2)).unwrap().finite);
        assert!(!zero_set_2d(&(&(&x().pow(2) - &Poly2::constant(rat(2))) * &(&y().pow(2) + &one()))).unwrap().finite);
        assert!(!zero_set_2d(&(&y().pow(2) - &Poly2::constant(rat(3)))).unwrap().finite);
    }

    #[test]
    fn irrational_zeros() {
        // (x^2 - 2)^2 + y^2: zeros (+-sqrt2, 0)
        let q = &(&x().pow(2) - &Poly2::constant(rat(2))).pow(2) + &y().pow(2);
        let z = zero_set_2d(&q).unwrap();
        assert!(z.finite && z.points.is_empty());
        assert_eq!(z.unresolved_boxes.len(), 2);
        assert!(z.unresolved_boxes.iter().all(|b| b.certain && b.y == Interval::point(rat(0))));
        // (x^2 - 2)^2 + (y^2 - 3)^2: four irrational zeros
        let q = &(&x().pow(2) - &Poly2::constant(rat(2))).pow(2) + &(&y().pow(2) - &Poly2::constant(rat(3))).pow(2);
        let z = zero_set_2d(&q).unwrap();
        assert!(z.finite);
        assert_eq!(z.unresolved_boxes.len(), 4);
        assert!(z.unresolved_boxes.iter().all(|b| b.x.width() <= dyadic(32)));
    }

    #[test]
    fn squared_input() {
        let base = &(&x().pow(2) + &y().pow(2)) * &(&(&x() - &one()).pow(2) + &y().pow(2));
        let z = zero_set_2d(&base.pow(2)).unwrap();
        assert_eq!(z.points, vec![Point::from_ints(0, 0), Point::from_ints(1, 0)]);
    }

    #[test]
    fn isolation() {
        let o = Point::origin();
        assert_eq!(is_isolated_zero(&(&x().pow(2) + &y().pow(2)), &o).unwrap(), Isolation::Isolated);
        assert_eq!(is_isolated_zero(&(&x().pow(2) + &y().pow(4)), &o).unwrap(), Isolation::Isolated);
        assert_eq!(is_isolated_zero(&(&x().pow(2) - &y().pow(2)), &o).unwrap(), Isolation::OnCurve);
        assert_eq!(is_isolated_zero(&(&y().pow(2) - &x().pow(3)), &o).unwrap(), Isolation::OnCurve);
        let parabola = &y() - &x().pow(2);
        let q = &parabola.pow(2) + &x().pow(6);
        assert_eq!(is_isolated_zero(&q, &o).unwrap(), Isolation::Isolated);
        let q = &parabola.pow(2) - &x().pow(6);
        assert_eq!(is_isolated_zero(&q, &o).unwrap(), Isolation::OnCurve);
        assert_eq!(is_isolated_zero(&(&x().pow(2) + &y().pow(2)), &Point::from_ints(1, 0)).unwrap(), Isolation::NotZero);
        // the circle is a curve through (1, 0)
        let circle = &(&x().pow(2) + &y().pow(2)) - &one();
        assert_eq!(is_isolated_zero(&circle, &Point::from_ints(1, 0)).unwrap(), Isolation::OnCurve);
        // the cubic y^2 = x^2 (x - 1) has an isolated point at the origin
        let q = &y().pow(2) - &(&x().pow(2) * &(&x() - &one()));
        assert_eq!(is_isolated_zero(&q, &o).unwrap(), Isolation::Isolated);
    }
}
