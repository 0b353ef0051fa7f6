//! Inputs shared by the benchmarks.

use regulous_core::{reduce_fraction, Poly2, RatFunc};

fn p(terms: &[(u32, u32, i64)]) -> Poly2 {
    Poly2::from_int_terms(terms)
}

/// `((x+y)^2 + (x-y+y^2)^2) / ((x+y^2)^2 + y^2)`.
pub fn worked() -> RatFunc {
    let num = p(&[(2, 0, 2), (0, 2, 2), (1, 2, 2), (0, 3, -2), (0, 4, 1)]);
    let den = p(&[(2, 0, 1), (0, 2, 1), (1, 2, 2), (0, 4, 1)]);
    reduce_fraction(&num, &den).expect("nonzero denominator")
}

/// `1 - x^(2l+m) / (y^2 + x^(2l))`, resolved after exactly `l` stages.
pub fn topology(l: u32, m: u32) -> RatFunc {
    let den = p(&[(0, 2, 1), (2 * l, 0, 1)]);
    let num = &den - &p(&[(2 * l + m, 0, 1)]);
    reduce_fraction(&num, &den).expect("nonzero denominator")
}

/// `x^3 / (x^2 + y^4)`.
pub fn cubic_over_quartic() -> RatFunc {
    reduce_fraction(&p(&[(3, 0, 1)]), &p(&[(2, 0, 1), (0, 4, 1)])).expect("nonzero denominator")
}
