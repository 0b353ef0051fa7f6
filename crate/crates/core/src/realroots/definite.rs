//! Definiteness of homogeneous binary forms.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::sturm::{sign, sorted_roots, RealRoot};
use super::{Interval, RootsError};
use crate::poly::{Point, Poly2, Rat, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
    Degenerate,
}

/// Why a form fails to be definite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Real root of `h(1, t)`: `h` vanishes on the line `y = t x`.
    Root(Interval),
    /// A linear factor of `h` (always `x` here: `h` vanishes on the `y`-axis).
    LineFactor(Poly2),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitenessVerdict {
    pub status: Definiteness,
    pub witness: Option<Witness>,
}

impl DefinitenessVerdict {
    fn definite(positive: bool) -> Self {
        let status = if positive { Definiteness::PositiveDefinite } else { Definiteness::NegativeDefinite };
        DefinitenessVerdict { status, witness: None }
    }

    fn failing(status: Definiteness, witness: Witness) -> Self {
        DefinitenessVerdict { status, witness: Some(witness) }
    }

    pub fn is_positive_definite(&self) -> bool {
        self.status == Definiteness::PositiveDefinite
    }

    pub fn is_definite(&self) -> bool {
        matches!(self.status, Definiteness::PositiveDefinite | Definiteness::NegativeDefinite)
    }
}

/// Root closest to zero, positive on ties.
fn smallest_root(roots: &[RealRoot]) -> Option<Interval> {
    let key = |r: &RealRoot| {
        let (lo, hi) = (r.lower().abs(), r.upper().abs());
        let near = if lo < hi { lo } else { hi };
        (near, r.lower().is_negative())
    };
    roots.iter().min_by(|a, b| key(a).cmp(&key(b))).map(RealRoot::as_interval)
}

pub fn definiteness_of_form(h: &Poly2) -> Result<DefinitenessVerdict, RootsError> {
    if h.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    if !h.is_homogeneous() {
        return Err(RootsError::NotHomogeneous(h.clone()));
    }
    let d = h.total_degree().unwrap_or(0);
    if d == 0 {
        return Ok(DefinitenessVerdict::definite(h.constant_term().is_positive()));
    }
    let g = h.specialize(Var::X, &Rat::from(num_bigint::BigInt::from(1)));
    let x_mult = h.valuation_in(Var::X);
    let odd_roots = sorted_roots(&g.odd_part())?;
    let line = || Witness::LineFactor(Poly2::x());
    if let Some(w) = smallest_root(&odd_roots) {
        return Ok(DefinitenessVerdict::failing(Definiteness::Indefinite, Witness::Root(w)));
    }
    if x_mult % 2 == 1 {
        return Ok(DefinitenessVerdict::failing(Definiteness::Indefinite, line()));
    }
    debug_assert!(d % 2 == 0, "an odd form always has a sign change");
    if let Some(w) = smallest_root(&sorted_roots(&g)?) {
        return Ok(DefinitenessVerdict::failing(Definiteness::Degenerate, Witness::Root(w)));
    }
    if x_mult > 0 {
        return Ok(DefinitenessVerdict::failing(Definiteness::Degenerate, line()));
    }
    Ok(DefinitenessVerdict::definite(sign(&g.eval(&Rat::zero())) > 0))
}

/// Definiteness of the lowest homogeneous component of `p` at `a`; a point
/// where `p` does not vanish gives the sign of `p(a)`.
pub fn local_positive_definiteness(p: &Poly2, a: &Point) -> Result<DefinitenessVerdict, RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    let v = p.evaluate(a);
    if !v.is_zero() {
        return Ok(DefinitenessVerdict::definite(v.is_positive()));
    }
    let dec = p.homogeneous_components(a).map_err(|_| RootsError::ZeroPolynomial)?;
    definiteness_of_form(dec.lowest())
}
