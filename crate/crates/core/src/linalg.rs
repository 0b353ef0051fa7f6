//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::poly::Rat;

/// Solve `A c = b`. Returns `None` when inconsistent; free unknowns are set
/// to zero. The flag reports whether every unknown was determined.
pub(crate) fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>, nvars: usize) -> Option<(Vec<Rat>, bool)> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][col].recip();
        for c in col..nvars {
            a[r][c] = &a[r][c] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i == r || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for c in col..nvars {
                let d = &f * &a[r][c];
                a[i][c] -= d;
            }
            let d = &f * &b[r];
            b[i] -= d;
        }
        pivots.push(col);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); nvars];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = b[i].clone();
    }
    Some((x, pivots.len() == nvars))
}
