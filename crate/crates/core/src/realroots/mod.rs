//! Exact real-root counting, definiteness of binary forms and a decision
//! procedure for finiteness of planar zero sets.

mod definite;
mod interval_eval;
mod sturm;
mod zeroset;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{rat_to_string, Poly2, Rat};

pub use definite::{definiteness_of_form, local_positive_definiteness, Definiteness, DefinitenessVerdict, Witness};
pub use interval_eval::box_excludes_zero;
pub use sturm::{cell_samples, dyadic, real_roots, refine, sorted_roots, sturm_count, Bound, RealRoot, Span, SturmChain};
pub use zeroset::{is_isolated_zero, zero_set_2d, InfiniteWitness, Isolation, ZeroBox, ZeroSet2D};

#[allow(unused_imports)]
pub(crate) use sturm::{sign, simplest_between};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootsError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(Poly2),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalKind {
    Open,
    Closed,
    Point,
}

/// Interval with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
    pub kind: IntervalKind,
}

impl Interval {
    pub fn open(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, kind: IntervalKind::Open }
    }

    pub fn closed(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, kind: IntervalKind::Closed }
    }

    pub fn point(r: Rat) -> Self {
        Interval { lo: r.clone(), hi: r, kind: IntervalKind::Point }
    }

    pub fn is_point(&self) -> bool {
        self.kind == IntervalKind::Point
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, r: &Rat) -> bool {
        match self.kind {
            IntervalKind::Open => &self.lo < r && r < &self.hi,
            IntervalKind::Closed | IntervalKind::Point => &self.lo <= r && r <= &self.hi,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            IntervalKind::Point => write!(f, "{{{}}}", self.lo),
            IntervalKind::Open => write!(f, "({}, {})", self.lo, self.hi),
            IntervalKind::Closed => write!(f, "[{}, {}]", self.lo, self.hi),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: String,
    hi: String,
    kind: IntervalKind,
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IntervalRepr { lo: rat_to_string(&self.lo), hi: rat_to_string(&self.hi), kind: self.kind }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = IntervalRepr::deserialize(d)?;
        let lo = crate::poly::parse_rat(&r.lo).map_err(serde::de::Error::custom)?;
        let hi = crate::poly::parse_rat(&r.hi).map_err(serde::de::Error::custom)?;
        if lo > hi || (r.kind == IntervalKind::Point && lo != hi) {
            return Err(serde::de::Error::custom("malformed interval"));
        }
        Ok(Interval { lo, hi, kind: r.kind })
    }
}
