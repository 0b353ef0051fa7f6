//! `C^k` classification and flattening powers.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{squarefree_part, Point, Rat, Var};
use crate::ratfunc::{poles, RatFunc, RatFuncError};
use crate::realroots::{local_positive_definiteness, zero_set_2d, DefinitenessVerdict, RootsError};
use crate::resolve::{continuity_at, one_blowup_criterion, resolve, Continuity, ResolveError, Verdict, DEFAULT_MAX_STAGES};

pub const DEFAULT_FLAT_BUDGET: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
    #[error("the function is not regulous")]
    NotRegulous,
    #[error("no flattening power up to {0}")]
    BudgetExhausted(u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl From<RootsError> for ClassifyError {
    fn from(e: RootsError) -> Self {
        ClassifyError::RatFunc(e.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleClass {
    pub point: Point,
    #[serde(with = "crate::poly::opt_rat_string")]
    pub limit: Option<Rat>,
    pub definiteness: DefinitenessVerdict,
    /// Order of the first partial derivative without a limit here.
    pub first_failing_order: Option<u32>,
    /// `(i, j)` of the failing `∂^(i+j) / ∂x^i ∂y^j`.
    pub failing_partial: Option<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub is_rational_with_finite_poles: bool,
    pub regulous: bool,
    /// Largest `k` with every partial of order `<= k` continuous; `None` when
    /// the function itself is not continuous.
    pub max_verified_k: Option<u32>,
    pub stages: u32,
    pub per_pole: Vec<PoleClass>,
    pub budget_exhausted: bool,
}

/// The `j + 1` distinct partials of order `j`, as `((i, j - i), partial)`
/// with `i` decreasing, computed from those of order `j - 1`.
fn next_partials(prev: &[((u32, u32), RatFunc)]) -> Vec<((u32, u32), RatFunc)> {
    let mut out: Vec<((u32, u32), RatFunc)> =
        prev.iter().map(|((i, j), g)| ((i + 1, *j), g.derivative(Var::X))).collect();
    let ((i, j), last) = prev.last().expect("at least one partial");
    out.push(((*i, j + 1), last.derivative(Var::Y)));
    out
}

/// Largest `k <= k_max` such that every partial of order `<= k` extends
/// continuously across the poles.
pub fn regularity_class(f: &RatFunc, k_max: u32) -> Result<ClassificationReport, ClassifyError> {
    let report = resolve(f, DEFAULT_MAX_STAGES)?;
    if report.verdict == Verdict::Unsupported {
        return Err(ClassifyError::Unsupported("poles or infinitely near points with irrational coordinates".into()));
    }
    let finite = !report.witnesses.iter().any(|w| matches!(w, crate::resolve::ResolutionWitness::InfinitePoleSet(_)));
    if !finite {
        return Ok(ClassificationReport {
            is_rational_with_finite_poles: false,
            regulous: false,
            max_verified_k: None,
            stages: 0,
            per_pole: Vec::new(),
            budget_exhausted: false,
        });
    }
    let mut per_pole = Vec::new();
    for a in &report.poles {
        per_pole.push(PoleClass {
            point: a.clone(),
            limit: report.limit_at(a).cloned(),
            definiteness: local_positive_definiteness(f.den(), a)?,
            first_failing_order: None,
            failing_partial: None,
        });
    }
    let mut partials = vec![((0, 0), f.clone())];
    let mut max_verified = None;
    let mut exhausted = true;
    'orders: for order in 0..=k_max {
        if order > 0 {
            partials = next_partials(&partials);
        }
        for ((i, j), g) in &partials {
            for pc in per_pole.iter_mut() {
                match continuity_at(g, &pc.point)? {
                    Continuity::Regular(_) | Continuity::Limit(_) => {}
                    Continuity::NoLimit(_) => {
                        pc.first_failing_order = Some(order);
                        pc.failing_partial = Some((*i, *j));
                        exhausted = false;
                        break 'orders;
                    }
                    Continuity::Unsupported(_) => {
                        return Err(ClassifyError::Unsupported(format!("partial ({i}, {j}) at {}", pc.point)))
                    }
                }
            }
        }
        max_verified = Some(order);
    }
    Ok(ClassificationReport {
        is_rational_with_finite_poles: true,
        regulous: report.regulous,
        max_verified_k: max_verified,
        stages: report.stages,
        per_pole,
        budget_exhausted: exhausted,
    })
}

/// Whether every partial of `f^m` of order `<= k` vanishes (as a value or a
/// limit) at every zero of `f`.
pub fn verify_k_flat(f: &RatFunc, m: u32, k: u32) -> Result<bool, ClassifyError> {
    if f.is_zero() {
        return Ok(true);
    }
    let ps = poles(f)?;
    if !ps.complete {
        return Err(ClassifyError::Unsupported("poles with irrational coordinates".into()));
    }
    let mut zero_poles = Vec::new();
    for a in &ps.points {
        match continuity_at(f, a)? {
            Continuity::Limit(l) if l.is_zero() => zero_poles.push(a.clone()),
            Continuity::Limit(_) | Continuity::Regular(_) => {}
            Continuity::NoLimit(_) => return Err(ClassifyError::NotRegulous),
            Continuity::Unsupported(_) => return Err(ClassifyError::Unsupported(format!("continuity at {a}"))),
        }
    }
    let s = squarefree_part(f.num());
    let g = f.pow(m);
    let mut partials = vec![((0u32, 0u32), g)];
    for order in 0..=k {
        if order > 0 {
            partials = next_partials(&partials);
        }
        for (_, p) in &partials {
            if p.is_zero() {
                continue;
            }
            for a in &zero_poles {
                match continuity_at(p, a)? {
                    Continuity::Regular(v) | Continuity::Limit(v) if v.is_zero() => {}
                    Continuity::Unsupported(_) => return Err(ClassifyError::Unsupported(format!("continuity at {a}"))),
                    _ => return Ok(false),
                }
            }
            if s.is_constant() {
                continue;
            }
            // zeros of f where this partial may be nonzero lie on Z(r)
            let common = crate::poly::gcd_poly(&s, p.num());
            let r = s.div_exact(&common).expect("gcd divides");
            if r.is_constant() {
                continue;
            }
            let z = zero_set_2d(&r)?;
            if !z.finite {
                return Ok(false);
            }
            if !z.unresolved_boxes.is_empty() {
                return Err(ClassifyError::Unsupported("zeros with irrational coordinates".into()));
            }
            for b in &z.points {
                if ps.points.contains(b) {
                    continue;
                }
                if p.evaluate(b).is_some_and(|v| !v.is_zero()) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Least `m` (or the closed form `2k` when one blow-up resolves `f`) with
/// `f^m` `k`-flat.
pub fn flat_power(f: &RatFunc, k: u32) -> Result<u32, ClassifyError> {
    flat_power_with(f, k, DEFAULT_FLAT_BUDGET)
}

pub fn flat_power_with(f: &RatFunc, k: u32, budget: u32) -> Result<u32, ClassifyError> {
    let report = resolve(f, DEFAULT_MAX_STAGES)?;
    match report.verdict {
        Verdict::Regulous => {}
        Verdict::NotRegulous => return Err(ClassifyError::NotRegulous),
        Verdict::Unsupported => return Err(ClassifyError::Unsupported("irrational coordinates".into())),
    }
    if !report.poles.is_empty() && one_blowup_criterion(f)?.0 {
        return Ok((2 * k).max(1));
    }
    for m in 1..=budget {
        if verify_k_flat(f, m, k)? {
            return Ok(m);
        }
    }
    Err(ClassifyError::BudgetExhausted(budget))
}
