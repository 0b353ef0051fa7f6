//! Four-square decomposition of positive rationals.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive};

use super::{PolyError, Rat};

/// Write a positive rational as a sum of four rational squares.
///
/// `c = n/d` is reduced to the integer `N = n*d`; `N` is decomposed into
/// integer squares preferring the fewest nonzero parts and then the
/// lexicographically smallest non-increasing tuple; each part is divided
/// by `d`.
pub fn four_squares(c: &Rat) -> Result<(Rat, Rat, Rat, Rat), PolyError> {
    if !c.is_positive() {
        return Err(PolyError::NonPositiveScalar(c.clone()));
    }
    let n: BigInt = c.numer() * c.denom();
    let parts: Vec<BigInt> = match n.to_u128() {
        Some(small) => integer_four_squares(small).into_iter().map(BigInt::from).collect(),
        None => integer_four_squares(n.clone()),
    };
    let d = c.denom().clone();
    let r = |k: usize| Rat::new(parts[k].clone(), d.clone());
    Ok((r(0), r(1), r(2), r(3)))
}

/// Non-increasing `[a, b, c, e]` with `a^2 + b^2 + c^2 + e^2 = n`.
fn integer_four_squares<T: Integer + Roots + Clone>(n: T) -> Vec<T> {
    if n.is_zero() {
        return vec![T::zero(), T::zero(), T::zero(), T::zero()];
    }
    for k in 1..=4 {
        if k == 3 && !three_square_representable(&n) {
            continue;
        }
        if let Some(mut v) = search(&n, k, None) {
            v.resize(4, T::zero());
            return v;
        }
    }
    unreachable!("every nonnegative integer is a sum of four squares")
}

/// Legendre: `n` is a sum of three squares unless `n = 4^a (8b + 7)`.
fn three_square_representable<T: Integer + Clone>(n: &T) -> bool {
    let four = T::one() + T::one() + T::one() + T::one();
    let eight = four.clone() + four.clone();
    let seven = eight.clone() - T::one();
    let mut m = n.clone();
    while !m.is_zero() && (m.clone() % four.clone()).is_zero() {
        m = m / four.clone();
    }
    m % eight != seven
}

/// Lexicographically smallest non-increasing tuple of `k` positive integers,
/// each at most `cap`, whose squares sum to `n`.
fn search<T: Integer + Roots + Clone>(n: &T, k: usize, cap: Option<&T>) -> Option<Vec<T>> {
    if n.is_zero() {
        return None;
    }
    let root = n.sqrt();
    if k == 1 {
        let ok = root.clone() * root.clone() == *n && cap.is_none_or(|c| root <= *c);
        return ok.then(|| vec![root]);
    }
    if k == 2 && !two_square_candidate(n) {
        return None;
    }
    // the first part is the largest, so a^2 >= n / k
    let kk = small::<T>(k);
    let mut a = ceil_sqrt(&((n.clone() + kk.clone() - T::one()) / kk));
    if a.is_zero() {
        a = T::one();
    }
    let mut hi = root;
    if let Some(c) = cap {
        if *c < hi {
            hi = c.clone();
        }
    }
    while a <= hi {
        let sq = a.clone() * a.clone();
        if sq < *n {
            let rest = n.clone() - sq;
            if k - 1 != 3 || three_square_representable(&rest) {
                if let Some(mut tail) = search(&rest, k - 1, Some(&a)) {
                    tail.insert(0, a);
                    return Some(tail);
                }
            }
        }
        a = a + T::one();
    }
    None
}

/// `n = 4^a m` with `m = 3 (mod 4)` is never a sum of two squares.
fn two_square_candidate<T: Integer + Clone>(n: &T) -> bool {
    let four = small::<T>(4);
    let mut m = n.clone();
    while !m.is_zero() && (m.clone() % four.clone()).is_zero() {
        m = m / four.clone();
    }
    if m.clone() % four.clone() == small::<T>(3) {
        return false;
    }
    // a small prime 3 (mod 4) dividing to an odd power also rules it out
    for p in [3usize, 7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83] {
        let p = small::<T>(p);
        let mut e = 0;
        while !m.is_zero() && (m.clone() % p.clone()).is_zero() {
            m = m / p.clone();
            e += 1;
        }
        if e % 2 == 1 {
            return false;
        }
    }
    true
}

fn small<T: Integer + Clone>(k: usize) -> T {
    let mut v = T::zero();
    for _ in 0..k {
        v = v + T::one();
    }
    v
}

fn ceil_sqrt<T: Integer + Roots + Clone>(n: &T) -> T {
    let r = n.sqrt();
    if r.clone() * r.clone() == *n {
        r
    } else {
        r + T::one()
    }
}
