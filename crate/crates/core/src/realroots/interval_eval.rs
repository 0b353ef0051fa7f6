//! Rational interval arithmetic for excluding zeros from boxes.

use num_traits::{One, Zero};

use super::Interval;
use crate::poly::{Poly2, Rat};

#[derive(Debug, Clone)]
struct Range {
    lo: Rat,
    hi: Rat,
}

impl Range {
    fn exact(c: Rat) -> Self {
        Range { lo: c.clone(), hi: c }
    }

    fn add(&self, o: &Range) -> Range {
        Range { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn mul(&self, o: &Range) -> Range {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().cloned().expect("four products");
        let hi = c.iter().max().cloned().expect("four products");
        Range { lo, hi }
    }

    fn pow(&self, n: u32) -> Range {
        if n == 0 {
            return Range::exact(Rat::one());
        }
        let lo_n = crate::poly::rat_pow(&self.lo, n);
        let hi_n = crate::poly::rat_pow(&self.hi, n);
        if n % 2 == 1 {
            return Range { lo: lo_n, hi: hi_n };
        }
        let top = if lo_n > hi_n { lo_n.clone() } else { hi_n.clone() };
        if self.lo <= Rat::zero() && self.hi >= Rat::zero() {
            Range { lo: Rat::zero(), hi: top }
        } else {
            let bottom = if lo_n < hi_n { lo_n } else { hi_n };
            Range { lo: bottom, hi: top }
        }
    }

    fn contains_zero(&self) -> bool {
        self.lo <= Rat::zero() && self.hi >= Rat::zero()
    }
}

fn eval(p: &Poly2, bx: &Interval, by: &Interval) -> Range {
    let rx = Range { lo: bx.lo.clone(), hi: bx.hi.clone() };
    let ry = Range { lo: by.lo.clone(), hi: by.hi.clone() };
    let mut acc = Range::exact(Rat::zero());
    for (m, c) in p.terms() {
        let t = rx.pow(m.x).mul(&ry.pow(m.y)).mul(&Range::exact(c.clone()));
        acc = acc.add(&t);
    }
    acc
}

/// `true` when interval evaluation proves `p` has no zero in the closed box.
pub fn box_excludes_zero(p: &Poly2, bx: &Interval, by: &Interval) -> bool {
    !eval(p, bx, by).contains_zero()
}
