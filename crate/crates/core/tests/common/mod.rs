#![allow(dead_code)]

use regulous_core::{rat, reduce_fraction, Poly2, RatFunc};

pub fn x() -> Poly2 {
    Poly2::x()
}

pub fn y() -> Poly2 {
    Poly2::y()
}

pub fn c(n: i64) -> Poly2 {
    Poly2::constant(rat(n))
}

pub fn rf(p: &Poly2, q: &Poly2) -> RatFunc {
    reduce_fraction(p, q).unwrap()
}

pub fn sq(p: &Poly2) -> Poly2 {
    p * p
}

pub fn r2() -> Poly2 {
    &sq(&x()) + &sq(&y())
}

/// `1 - x^(2l+m) / (y^2 + x^(2l))`.
pub fn topology(l: u32, m: u32) -> RatFunc {
    let den = &y().pow(2) + &x().pow(2 * l);
    rf(&(&den - &x().pow(2 * l + m)), &den)
}

pub fn worked() -> RatFunc {
    let p = &sq(&(&x() + &y())) + &sq(&(&(&x() - &y()) + &y().pow(2)));
    let q = &sq(&(&x() + &y().pow(2))) + &y().pow(2);
    rf(&p, &q)
}

/// Named functions with their expected number of blow-up stages; `None`
/// marks functions that are not regulous.
pub fn corpus() -> Vec<(&'static str, RatFunc, Option<u32>)> {
    let x1 = &x() - &c(1);
    let two_poles = &r2() * &(&sq(&x1) + &sq(&y()));
    let y4 = &sq(&x()) + &y().pow(4);
    vec![
        ("x^3/(x^2+y^2)", rf(&x().pow(3), &r2()), Some(1)),
        ("x^3/(x^2+y^4)", rf(&x().pow(3), &y4), Some(2)),
        ("y*x^2/(x^2+y^4)", rf(&(&y() * &sq(&x())), &y4), Some(2)),
        ("y^2*x^2/(x^2+y^4)", rf(&(&sq(&y()) * &sq(&x())), &y4), Some(2)),
        ("x^3*(x-1)^3/((x^2+y^2)*((x-1)^2+y^2))", rf(&(&x().pow(3) * &x1.pow(3)), &two_poles), Some(1)),
        ("1 - x^5/(y^2+x^4)", topology(2, 1), Some(2)),
        ("1 - x^5/(y^2+x^2)", topology(1, 3), Some(1)),
        ("1 - x^9/(y^2+x^4)", topology(2, 5), Some(2)),
        ("1 - x^9/(y^2+x^6)", topology(3, 3), Some(3)),
        ("x^6/(x^2+y^2)^2", rf(&x().pow(6), &sq(&r2())), Some(1)),
        ("x^4/(x^2+y^2)", rf(&x().pow(4), &r2()), Some(1)),
        ("((x+y)^2+(x-y+y^2)^2)/((x+y^2)^2+y^2)", worked(), Some(1)),
        ("(x^4+y^4)/(x^2+y^2)", rf(&(&x().pow(4) + &y().pow(4)), &r2()), Some(1)),
        ("x*y+1", RatFunc::from_poly(&(&x() * &y()) + &c(1)), Some(0)),
        ("x*y/(x^2+y^2)", rf(&(&x() * &y()), &r2()), None),
        ("x^2/(x^2+y^4)", rf(&sq(&x()), &y4), None),
    ]
}
