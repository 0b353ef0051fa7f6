//! Sums of squares of rational functions for nonnegative functions that are
//! resolved by one blow-up, and an exact certificate verifier.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{four_squares, Point, Poly2, Rat};
use crate::ratfunc::{reduce_fraction, RatFunc, RatFuncError};
use crate::realroots::{local_positive_definiteness, zero_set_2d, DefinitenessVerdict, RootsError, ZeroSet2D};
use crate::resolve::{continuity_at, Continuity, ResolveError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("invalid witness: {0}")]
    WitnessInvalid(String),
    #[error("denominator is not locally positive definite at {0}")]
    NotOneBlowup(String),
    #[error("negative value {value} at {point}")]
    NegativeValueDetected { point: Point, value: Rat },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("bad points present: {0:?}")]
    FlatnessViolated(Vec<Point>),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
}

impl From<RootsError> for CertifyError {
    fn from(e: RootsError) -> Self {
        CertifyError::RatFunc(e.into())
    }
}

/// `scalar * Σ terms[i]^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SosRep {
    #[serde(with = "crate::poly::rat_string")]
    pub scalar: Rat,
    pub terms: Vec<Poly2>,
}

impl SosRep {
    pub fn new(scalar: Rat, terms: Vec<Poly2>) -> Result<Self, CertifyError> {
        if !scalar.is_positive() {
            return Err(CertifyError::WitnessInvalid(format!("scalar {scalar} is not positive")));
        }
        Ok(SosRep { scalar, terms })
    }

    pub fn unit(terms: Vec<Poly2>) -> Self {
        SosRep { scalar: Rat::one(), terms }
    }

    pub fn expand(&self) -> Poly2 {
        sum_of_squares(&self.terms).scale(&self.scalar)
    }
}

fn sum_of_squares(ts: &[Poly2]) -> Poly2 {
    ts.iter().fold(Poly2::zero(), |acc, t| &acc + &(t * t))
}

/// `[Σ X_i Y_i] ++ [X_i Y_j - X_j Y_i : i < j]` without zero entries; the
/// squares sum to `(Σ X_i^2)(Σ Y_j^2)`.
pub fn product_of_sos(xs: &[Poly2], ys: &[Poly2]) -> Vec<Poly2> {
    let n = xs.len().max(ys.len());
    let zero = Poly2::zero();
    let get = |v: &'_ [Poly2], i: usize| v.get(i).cloned().unwrap_or_else(|| zero.clone());
    let xs: Vec<Poly2> = (0..n).map(|i| get(xs, i)).collect();
    let ys: Vec<Poly2> = (0..n).map(|i| get(ys, i)).collect();
    let mut out = vec![xs.iter().zip(&ys).fold(Poly2::zero(), |acc, (a, b)| &acc + &(a * b))];
    for i in 0..n {
        for j in i + 1..n {
            out.push(&(&xs[i] * &ys[j]) - &(&xs[j] * &ys[i]));
        }
    }
    out.retain(|p| !p.is_zero());
    out
}

/// Terms whose plain sum of squares is `scalar * Σ terms^2`: every term times
/// every nonzero part of a four-square decomposition of the scalar.
pub fn scalar_absorb(rep: &SosRep) -> Result<Vec<Poly2>, CertifyError> {
    if rep.scalar.is_one() {
        return Ok(rep.terms.clone());
    }
    let (a, b, c, d) = four_squares(&rep.scalar).map_err(|e| CertifyError::WitnessInvalid(e.to_string()))?;
    let parts: Vec<Rat> = [a, b, c, d].into_iter().filter(|r| !r.is_zero()).collect();
    Ok(rep.terms.iter().flat_map(|t| parts.iter().map(move |c| t.scale(c))).filter(|t| !t.is_zero()).collect())
}

// ---------------------------------------------------------------------------
// witness search

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise convex hull (monotone chain) without collinear points.
fn hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn in_hull(h: &[(i64, i64)], p: (i64, i64)) -> bool {
    match h.len() {
        0 => false,
        1 => h[0] == p,
        2 => {
            cross(h[0], h[1], p) == 0
                && p.0 >= h[0].0.min(h[1].0)
                && p.0 <= h[0].0.max(h[1].0)
                && p.1 >= h[0].1.min(h[1].1)
                && p.1 <= h[0].1.max(h[1].1)
        }
        n => (0..n).all(|i| cross(h[i], h[(i + 1) % n], p) >= 0),
    }
}

/// Exact search for a sum-of-squares decomposition using a Gram matrix on
/// the half Newton polytope. Diagonal entries take the coefficient of a
/// square monomial, the rest is split evenly over off-diagonal pairs, and the
/// matrix is factored by exact `LDL^T`. `None` means nothing was found, not
/// that `p` is not a sum of squares.
pub fn find_sos_witness(p: &Poly2) -> Option<SosRep> {
    if p.is_zero() {
        return Some(SosRep::unit(Vec::new()));
    }
    let exps: Vec<(i64, i64)> = p.terms().map(|(m, _)| (m.x as i64, m.y as i64)).collect();
    let h = hull(exps.clone());
    let max_x = exps.iter().map(|e| e.0).max().unwrap_or(0) / 2;
    let max_y = exps.iter().map(|e| e.1).max().unwrap_or(0) / 2;
    let mut basis: Vec<(i64, i64)> = Vec::new();
    for i in 0..=max_x {
        for j in 0..=max_y {
            if in_hull(&h, (2 * i, 2 * j)) {
                basis.push((i, j));
            }
        }
    }
    basis.sort_by_key(|&(i, j)| (i + j, -i));
    let n = basis.len();
    let mut g = vec![vec![Rat::zero(); n]; n];
    for (m, c) in p.terms() {
        let mu = (m.x as i64, m.y as i64);
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .filter(|&(i, j)| (basis[i].0 + basis[j].0, basis[i].1 + basis[j].1) == mu)
            .collect();
        if pairs.is_empty() {
            return None;
        }
        if let Some(&(i, _)) = pairs.iter().find(|(i, j)| i == j) {
            g[i][i] = c.clone();
        } else {
            let share = c / Rat::from_integer((2 * pairs.len()).into());
            for (i, j) in pairs {
                g[i][j] = share.clone();
                g[j][i] = share.clone();
            }
        }
    }
    let mono = |k: usize| Poly2::monomial(Rat::one(), basis[k].0 as u32, basis[k].1 as u32);
    let mut weights = Vec::new();
    let mut terms = Vec::new();
    for k in 0..n {
        let piv = g[k][k].clone();
        if piv.is_zero() {
            if (k + 1..n).any(|i| !g[k][i].is_zero()) {
                return None;
            }
            continue;
        }
        if piv.is_negative() {
            return None;
        }
        let l: Vec<Rat> = (0..n).map(|i| if i > k { &g[i][k] / &piv } else { Rat::zero() }).collect();
        let mut t = mono(k);
        for i in k + 1..n {
            if !l[i].is_zero() {
                t = &t + &mono(i).scale(&l[i]);
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let d = &l[i] * &g[k][j];
                g[i][j] -= d;
            }
        }
        weights.push(piv);
        terms.push(t);
    }
    let rep = if weights.windows(2).all(|w| w[0] == w[1]) {
        SosRep { scalar: weights.first().cloned().unwrap_or_else(Rat::one), terms }
    } else {
        let mut out = Vec::new();
        for (w, t) in weights.iter().zip(&terms) {
            out.extend(scalar_absorb(&SosRep { scalar: w.clone(), terms: vec![t.clone()] }).ok()?);
        }
        SosRep::unit(out)
    };
    (rep.expand() == *p).then_some(rep)
}

// ---------------------------------------------------------------------------
// pipeline

fn value_at(g: &RatFunc, a: &Point) -> Result<Rat, CertifyError> {
    match continuity_at(g, a)? {
        Continuity::Regular(v) | Continuity::Limit(v) => Ok(v),
        Continuity::NoLimit(_) => Err(CertifyError::PreconditionViolated(format!("{g} has no limit at {a}"))),
        Continuity::Unsupported(_) => Err(CertifyError::Unsupported(format!("continuity of {g} at {a}"))),
    }
}

fn rational_zeros(q: &Poly2) -> Result<Vec<Point>, CertifyError> {
    let z = zero_set_2d(q)?;
    if !z.finite {
        return Err(CertifyError::Unsupported(format!("{q} has infinitely many real zeros")));
    }
    if !z.unresolved_boxes.is_empty() {
        return Err(CertifyError::Unsupported(format!("{q} has zeros with irrational coordinates")));
    }
    Ok(z.points)
}

/// Zeros of the continuous function `q / d^2` at which `f` does not vanish,
/// sorted.
pub fn bad_set(f: &RatFunc, q: &Poly2, d: &Poly2) -> Result<Vec<Point>, CertifyError> {
    bad_among(f, q, d, &rational_zeros(q)?)
}

/// `bad_set` with the zeros of `q` already known.
fn bad_among(f: &RatFunc, q: &Poly2, d: &Poly2, zeros: &[Point]) -> Result<Vec<Point>, CertifyError> {
    let g = reduce_fraction(q, &(d * d))?;
    let mut out = Vec::new();
    for a in zeros {
        if value_at(&g, a)?.is_zero() && !value_at(f, a)?.is_zero() {
            out.push(a.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// State threaded through bad-point elimination: `f = p / q`,
/// `p = p_rep`, `q = q_rep`, and every term over `d` is continuous.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineState {
    pub p: Poly2,
    pub q: Poly2,
    pub d: Poly2,
    pub p_rep: SosRep,
    pub q_rep: SosRep,
    pub eliminated: Vec<Point>,
    pub bad: Vec<Point>,
    /// Real zeros of `q`; a step multiplies `q` by a form vanishing only at
    /// one of them, so this never changes.
    pub zeros: Vec<Point>,
}

impl PipelineState {
    pub fn new(f: &RatFunc, p_rep: SosRep, q_rep: SosRep) -> Result<Self, CertifyError> {
        let (p, q) = check_witnesses(f, &p_rep, &q_rep)?;
        let zeros = check_one_blowup(&q)?;
        let d = Poly2::one();
        let bad = bad_among(f, &q, &d, &zeros)?;
        Ok(PipelineState { p, q, d, p_rep, q_rep, eliminated: Vec::new(), bad, zeros })
    }
}

fn check_witnesses(f: &RatFunc, p_rep: &SosRep, q_rep: &SosRep) -> Result<(Poly2, Poly2), CertifyError> {
    for rep in [p_rep, q_rep] {
        if !rep.scalar.is_positive() {
            return Err(CertifyError::WitnessInvalid(format!("scalar {} is not positive", rep.scalar)));
        }
    }
    let p = p_rep.expand();
    let q = q_rep.expand();
    if q.is_zero() {
        return Err(CertifyError::WitnessInvalid("denominator witness is zero".into()));
    }
    if reduce_fraction(&p, &q)? != *f {
        return Err(CertifyError::WitnessInvalid(format!("({p}) / ({q}) is not {f}")));
    }
    Ok((p, q))
}

/// Record of one elimination step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepTrace {
    pub point: Point,
    #[serde(with = "crate::poly::rat_string")]
    pub f_value: Rat,
    pub order: u32,
    /// Lowest form of `q` at the point.
    pub q_lowest: Poly2,
    pub p_lowest: Poly2,
    /// Lowest-degree parts of the incoming terms.
    pub q_low_terms: Vec<Poly2>,
    pub p_low_terms: Vec<Poly2>,
    pub q_terms: Vec<Poly2>,
    pub p_terms: Vec<Poly2>,
    #[serde(with = "crate::poly::rat_string")]
    pub p_scalar: Rat,
    #[serde(with = "crate::poly::rat_string")]
    pub q_scalar: Rat,
    pub d: Poly2,
}

/// Degree `deg` component at `a` of each term, in the original coordinates.
fn components_at(terms: &[Poly2], a: &Point, deg: u32) -> Vec<Poly2> {
    terms
        .iter()
        .map(|t| if t.is_zero() { Poly2::zero() } else { t.homogeneous_components(a).expect("nonzero").component_at_center(deg) })
        .collect()
}

fn lowest_at(p: &Poly2, a: &Point) -> (u32, Poly2) {
    let dec = p.homogeneous_components(a).expect("nonzero");
    (dec.order, dec.component_at_center(dec.order))
}

/// Remove the bad point `a`: multiply `p` and `q` by the lowest form `q_a` of
/// `q` at `a`, rewrite both sums of squares through the product identity with
/// the lowest-degree parts of their terms, and set `d <- d * q_a`.
pub fn bad_point_step(f: &RatFunc, state: &PipelineState, a: &Point) -> Result<(PipelineState, StepTrace), CertifyError> {
    if !state.bad.contains(a) {
        return Err(CertifyError::PreconditionViolated(format!("{a} is not a bad point")));
    }
    if state.d.evaluate(a).is_zero() {
        return Err(CertifyError::PreconditionViolated(format!("d vanishes at {a}")));
    }
    let (m, q_low) = lowest_at(&state.q, a);
    let (n, p_low) = lowest_at(&state.p, a);
    if !q_low.is_zero() && !local_positive_definiteness(&state.q, a)?.is_positive_definite() {
        return Err(CertifyError::PreconditionViolated(format!("lowest form {q_low} of q at {a} is not positive definite")));
    }
    if n != m || m % 2 == 1 {
        return Err(CertifyError::PreconditionViolated(format!("orders of p and q at {a} are {n} and {m}")));
    }
    let fa = p_low.leading_coeff() / q_low.leading_coeff();
    if p_low != q_low.scale(&fa) {
        return Err(CertifyError::PreconditionViolated(format!("lowest forms at {a} are not proportional: {p_low} and {q_low}")));
    }
    if fa.is_negative() {
        return Err(CertifyError::NegativeValueDetected { point: a.clone(), value: fa });
    }
    let tq = components_at(&state.q_rep.terms, a, m / 2);
    let tp = components_at(&state.p_rep.terms, a, m / 2);
    if sum_of_squares(&tq).scale(&state.q_rep.scalar) != q_low {
        return Err(CertifyError::InvariantViolated(format!("lowest parts of the q-terms do not give {q_low}")));
    }
    if sum_of_squares(&tp).scale(&state.p_rep.scalar) != p_low {
        return Err(CertifyError::InvariantViolated(format!("lowest parts of the p-terms do not give {p_low}")));
    }
    let q_terms = product_of_sos(&state.q_rep.terms, &tq);
    let p_terms = product_of_sos(&state.p_rep.terms, &tp);
    let beta = &state.q_rep.scalar * &state.q_rep.scalar;
    let alpha = &state.p_rep.scalar * &state.p_rep.scalar / &fa;
    let d = &state.d * &q_low;
    let mut eliminated = state.eliminated.clone();
    eliminated.push(a.clone());
    let next = PipelineState {
        p: &state.p * &q_low,
        q: &state.q * &q_low,
        d: d.clone(),
        p_rep: SosRep { scalar: alpha.clone(), terms: p_terms.clone() },
        q_rep: SosRep { scalar: beta.clone(), terms: q_terms.clone() },
        eliminated,
        bad: state.bad.iter().filter(|b| *b != a).cloned().collect(),
        zeros: state.zeros.clone(),
    };
    check_state(f, &next)?;
    let trace = StepTrace {
        point: a.clone(),
        f_value: fa,
        order: m,
        q_lowest: q_low,
        p_lowest: p_low,
        q_low_terms: tq,
        p_low_terms: tp,
        q_terms,
        p_terms,
        p_scalar: alpha,
        q_scalar: beta,
        d,
    };
    Ok((next, trace))
}

/// Re-check every state invariant after a step.
fn check_state(f: &RatFunc, s: &PipelineState) -> Result<(), CertifyError> {
    let fail = |m: String| Err(CertifyError::InvariantViolated(m));
    if reduce_fraction(&s.p, &s.q)? != *f {
        return fail("p / q changed".into());
    }
    if s.p_rep.expand() != s.p || s.q_rep.expand() != s.q {
        return fail("sum of squares does not expand to p or q".into());
    }
    if bad_among(f, &s.q, &s.d, &s.zeros)? != s.bad {
        return fail("bad set did not shrink by exactly the eliminated point".into());
    }
    for t in s.p_rep.terms.iter().chain(&s.q_rep.terms) {
        let g = reduce_fraction(t, &s.d)?;
        for e in &s.eliminated {
            if !continuity_at(&g, e)?.is_continuous() {
                return fail(format!("{g} is not continuous at {e}"));
            }
            if g.den().evaluate(e).is_zero() && !local_positive_definiteness(g.den(), e)?.is_definite() {
                return fail(format!("denominator of {g} is not locally definite at {e}"));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// certificates

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scalars {
    #[serde(with = "crate::poly::rat_string")]
    pub p: Rat,
    #[serde(with = "crate::poly::rat_string")]
    pub q: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub eliminated_points: Vec<Point>,
    pub step_traces: Vec<StepTrace>,
    pub scalars: Option<Scalars>,
    /// `Σ S_j^2` for the final denominator terms `S_j`, before reduction.
    pub denominator: Option<Poly2>,
}

/// `target = Σ terms[i]^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatSosCertificate {
    pub target: RatFunc,
    pub terms: Vec<RatFunc>,
    #[serde(default)]
    pub provenance: Provenance,
}

/// `f = (alpha / beta) Σ (R_i S_j / s)^2` with `s = Σ S_j^2`.
fn assemble(f: &RatFunc, s: &PipelineState, step_traces: Vec<StepTrace>) -> Result<RatSosCertificate, CertifyError> {
    let den = sum_of_squares(&s.q_rep.terms);
    let absorbed = scalar_absorb(&SosRep { scalar: &s.p_rep.scalar / &s.q_rep.scalar, terms: s.p_rep.terms.clone() })?;
    let mut terms = Vec::new();
    for r in &absorbed {
        for q in &s.q_rep.terms {
            let t = reduce_fraction(&(r * q), &den)?;
            if !t.is_zero() {
                terms.push(t);
            }
        }
    }
    Ok(RatSosCertificate {
        target: f.clone(),
        terms,
        provenance: Provenance {
            eliminated_points: s.eliminated.clone(),
            step_traces,
            scalars: Some(Scalars { p: s.p_rep.scalar.clone(), q: s.q_rep.scalar.clone() }),
            denominator: Some(den),
        },
    })
}

fn finish(cert: RatSosCertificate) -> Result<RatSosCertificate, CertifyError> {
    let report = verify_certificate(&cert);
    if !report.passed {
        return Err(CertifyError::InvariantViolated(format!("certificate failed verification: {report:?}")));
    }
    Ok(cert)
}

/// Every zero of `q` must be rational and `q` locally positive definite
/// there. Returns the zeros.
fn check_one_blowup(q: &Poly2) -> Result<Vec<Point>, CertifyError> {
    let z = zero_set_2d(q)?;
    if let Some(w) = &z.infinite_witness {
        return Err(CertifyError::NotOneBlowup(format!("{q} vanishes on a curve through x = {} or y = {}", w.root, w.value)));
    }
    if !z.unresolved_boxes.is_empty() {
        return Err(CertifyError::Unsupported(format!("{q} has zeros with irrational coordinates")));
    }
    for a in &z.points {
        let v = local_positive_definiteness(q, a)?;
        if !v.is_positive_definite() {
            return Err(CertifyError::NotOneBlowup(format!("{a} ({:?})", v.status)));
        }
    }
    Ok(z.points)
}

/// Certificate when no bad point exists: `f = Σ_ij (p_i q_j / Σ q_k^2)^2`
/// with the scalars absorbed into the `p_i`.
pub fn flat_case_certificate(f: &RatFunc, p_rep: &SosRep, q_rep: &SosRep) -> Result<RatSosCertificate, CertifyError> {
    let state = PipelineState::new(f, p_rep.clone(), q_rep.clone())?;
    if !state.bad.is_empty() {
        return Err(CertifyError::FlatnessViolated(state.bad));
    }
    finish(assemble(f, &state, Vec::new())?)
}

/// Exact values of `f` on the grid `{-2, -19/10, ..., 2}^2`; the first
/// negative one is returned.
pub fn negative_sample(f: &RatFunc) -> Option<(Point, Rat)> {
    for i in -20..=20 {
        for j in -20..=20 {
            let a = Point::new(Rat::new(i.into(), 10.into()), Rat::new(j.into(), 10.into()));
            if let Some(v) = f.evaluate(&a) {
                if v.is_negative() {
                    return Some((a, v));
                }
            }
        }
    }
    None
}

/// Write a nonnegative `f = p / q`, given by sum-of-squares witnesses for
/// `p` and `q`, as a sum of squares of rational functions, each continuous
/// and resolved by one blow-up.
pub fn certify_nonnegative(f: &RatFunc, p_rep: &SosRep, q_rep: &SosRep) -> Result<RatSosCertificate, CertifyError> {
    if let Some((point, value)) = negative_sample(f) {
        return Err(CertifyError::NegativeValueDetected { point, value });
    }
    let mut state = PipelineState::new(f, p_rep.clone(), q_rep.clone())?;
    let mut traces = Vec::new();
    while let Some(a) = state.bad.first().cloned() {
        let (next, trace) = bad_point_step(f, &state, &a)?;
        state = next;
        traces.push(trace);
    }
    finish(assemble(f, &state, traces)?)
}

// ---------------------------------------------------------------------------
// verification

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub pass: bool,
    /// `Σ terms^2 - target` when nonzero.
    pub difference: Option<RatFunc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleCheck {
    pub point: Point,
    pub definiteness: DefinitenessVerdict,
    pub continuous: bool,
    #[serde(with = "crate::poly::opt_rat_string")]
    pub limit: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermCheck {
    pub index: usize,
    pub pass: bool,
    pub finite_poles: bool,
    pub poles: Vec<PoleCheck>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub identity: IdentityCheck,
    pub terms: Vec<TermCheck>,
}

fn check_term(index: usize, t: &RatFunc, zero_sets: &mut HashMap<Poly2, Result<ZeroSet2D, String>>) -> TermCheck {
    let mut tc = TermCheck { index, pass: false, finite_poles: false, poles: Vec::new(), failure: None };
    let z = zero_sets.entry(t.den().clone()).or_insert_with(|| zero_set_2d(t.den()).map_err(|e| e.to_string()));
    let z = match z {
        Ok(z) => z.clone(),
        Err(e) => {
            tc.failure = Some(e.clone());
            return tc;
        }
    };
    if !z.finite {
        tc.failure = Some(format!("denominator {} has infinitely many real zeros", t.den()));
        return tc;
    }
    tc.finite_poles = true;
    if !z.unresolved_boxes.is_empty() {
        tc.failure = Some(format!("denominator {} has zeros with irrational coordinates", t.den()));
        return tc;
    }
    for a in &z.points {
        let definiteness = match local_positive_definiteness(t.den(), a) {
            Ok(v) => v,
            Err(e) => {
                tc.failure = Some(e.to_string());
                return tc;
            }
        };
        let limit = match continuity_at(t, a) {
            Ok(c) => c.value().cloned(),
            Err(_) => None,
        };
        if tc.failure.is_none() {
            if !definiteness.is_definite() {
                let low = t.den().homogeneous_components(a).map(|d| d.lowest().to_string()).unwrap_or_default();
                tc.failure = Some(format!("lowest form {low} of the denominator at {a} is {:?}", definiteness.status));
            } else if limit.is_none() {
                tc.failure = Some(format!("no limit at {a}"));
            }
        }
        tc.poles.push(PoleCheck { point: a.clone(), definiteness, continuous: limit.is_some(), limit });
    }
    tc.pass = tc.failure.is_none();
    tc
}

/// Check `Σ terms^2 = target` exactly and that every term is continuous with
/// a locally definite denominator at each of its poles.
pub fn verify_certificate(cert: &RatSosCertificate) -> VerificationReport {
    let sum = cert.terms.iter().fold(RatFunc::zero(), |acc, t| &acc + &(t * t));
    let diff = &sum - &cert.target;
    let identity = IdentityCheck { pass: diff.is_zero(), difference: (!diff.is_zero()).then_some(diff) };
    let mut zero_sets = HashMap::new();
    let terms: Vec<TermCheck> = cert.terms.iter().enumerate().map(|(i, t)| check_term(i, t, &mut zero_sets)).collect();
    VerificationReport { passed: identity.pass && terms.iter().all(|t| t.pass), identity, terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn x() -> Poly2 {
        Poly2::x()
    }
    fn y() -> Poly2 {
        Poly2::y()
    }
    fn c(n: i64) -> Poly2 {
        Poly2::constant(rat(n))
    }
    fn r2() -> Poly2 {
        &x().pow(2) + &y().pow(2)
    }
    fn worked() -> (RatFunc, SosRep, SosRep) {
        let pt = vec![&x() + &y(), &(&x() - &y()) + &y().pow(2)];
        let qt = vec![&x() + &y().pow(2), y()];
        let (p, q) = (sum_of_squares(&pt), sum_of_squares(&qt));
        (reduce_fraction(&p, &q).unwrap(), SosRep::unit(pt), SosRep::unit(qt))
    }

    #[test]
    fn product_identity_examples() {
        assert_eq!(product_of_sos(&[x()], &[y()]), vec![&x() * &y()]);
        let out = product_of_sos(&[x(), y()], &[x(), -y()]);
        assert_eq!(out, vec![&x().pow(2) - &y().pow(2), (&x() * &y()).scale(&rat(-2))]);
        let out = product_of_sos(&[&x() + &y().pow(2), y()], &[x(), y()]);
        assert_eq!(out, vec![&r2() + &(&x() * &y().pow(2)), y().pow(3)]);
    }

    #[test]
    fn absorb_examples() {
        let g = &x() + &c(1);
        assert_eq!(scalar_absorb(&SosRep { scalar: ratio(1, 2), terms: vec![g.clone()] }).unwrap(), vec![g.scale(&ratio(1, 2)); 2]);
        assert_eq!(scalar_absorb(&SosRep::unit(vec![x(), y()])).unwrap(), vec![x(), y()]);
        assert_eq!(scalar_absorb(&SosRep { scalar: rat(2), terms: vec![x()] }).unwrap(), vec![x(), x()]);
    }

    #[test]
    fn witness_search() {
        let r = find_sos_witness(&(&x().pow(2) + &y().pow(4))).unwrap();
        assert_eq!(r, SosRep::unit(vec![x(), y().pow(2)]));
        let q = &(&x() + &y().pow(2)).pow(2) + &y().pow(2);
        assert_eq!(find_sos_witness(&q).unwrap(), SosRep::unit(vec![&x() + &y().pow(2), y()]));
        let motzkin = Poly2::from_int_terms(&[(4, 2, 1), (2, 4, 1), (2, 2, -3), (0, 0, 1)]);
        assert_eq!(find_sos_witness(&motzkin), None);
        let (f, _, _) = worked();
        let rep = find_sos_witness(f.num()).unwrap();
        assert_eq!(rep.expand(), *f.num());
        assert_eq!(find_sos_witness(&(&x() * &y())), None);
    }

    #[test]
    fn bad_set_examples() {
        let (f, _, q) = worked();
        assert_eq!(bad_set(&f, &q.expand(), &Poly2::one()).unwrap(), vec![Point::origin()]);
        let g = reduce_fraction(&x().pow(6), &r2().pow(2)).unwrap();
        assert!(bad_set(&g, &r2().pow(2), &Poly2::one()).unwrap().is_empty());
        let x1 = &x() - &c(1);
        let den = &r2() * &(&x1.pow(2) + &y().pow(2));
        let h = reduce_fraction(&(&x().pow(3) * &x1.pow(3)).pow(2), &den.pow(2)).unwrap();
        assert!(bad_set(&h, &den.pow(2), &Poly2::one()).unwrap().is_empty());
    }

    #[test]
    fn worked_example_step() {
        let (f, p, q) = worked();
        let state = PipelineState::new(&f, p, q).unwrap();
        let (next, trace) = bad_point_step(&f, &state, &Point::origin()).unwrap();
        assert_eq!(trace.q_low_terms, vec![x(), y()]);
        assert_eq!(trace.p_low_terms, vec![&x() + &y(), &x() - &y()]);
        assert_eq!(trace.q_terms, vec![&r2() + &(&x() * &y().pow(2)), y().pow(3)]);
        let p1 = &r2().scale(&rat(2)) + &(&y().pow(2) * &(&x() - &y()));
        assert_eq!(trace.p_terms, vec![p1, -(&y().pow(2) * &(&x() + &y()))]);
        assert_eq!((trace.f_value.clone(), trace.p_scalar.clone(), trace.q_scalar.clone()), (rat(2), ratio(1, 2), rat(1)));
        assert_eq!(next.d, r2());
        assert!(next.bad.is_empty());
    }

    #[test]
    fn worked_example_certificate() {
        let (f, p, q) = worked();
        let cert = certify_nonnegative(&f, &p, &q).unwrap();
        assert_eq!(cert.terms.len(), 8);
        assert_eq!(cert.provenance.denominator, Some(&r2() * &q.expand()));
        assert!(verify_certificate(&cert).passed);
    }

    #[test]
    fn flat_case() {
        let f = reduce_fraction(&x().pow(6), &r2().pow(2)).unwrap();
        let cert = certify_nonnegative(&f, &SosRep::unit(vec![x().pow(3)]), &SosRep::unit(vec![r2()])).unwrap();
        assert_eq!(cert.terms, vec![reduce_fraction(&x().pow(3), &r2()).unwrap()]);
        let g = reduce_fraction(&x().pow(4), &r2()).unwrap();
        let p = SosRep::unit(vec![x().pow(3), &x().pow(2) * &y()]);
        let cert = flat_case_certificate(&g, &p, &SosRep::unit(vec![r2()])).unwrap();
        let t = |n: Poly2| reduce_fraction(&n, &r2()).unwrap();
        assert_eq!(cert.terms, vec![t(x().pow(3)), t(&x().pow(2) * &y())]);
        let one = &r2() + &c(1);
        let h = reduce_fraction(&x().pow(2), &one).unwrap();
        let cert = flat_case_certificate(&h, &SosRep::unit(vec![x()]), &SosRep::unit(vec![x(), y(), c(1)])).unwrap();
        assert!(verify_certificate(&cert).passed);
        let (w, p, q) = worked();
        assert_eq!(flat_case_certificate(&w, &p, &q), Err(CertifyError::FlatnessViolated(vec![Point::origin()])));
    }

    #[test]
    fn single_term_denominator_step() {
        // v = 0: all cross terms vanish
        let f = RatFunc::constant(rat(2));
        let p = SosRep::unit(vec![r2(), r2()]);
        let q = SosRep::unit(vec![r2()]);
        let state = PipelineState::new(&f, p, q).unwrap();
        assert_eq!(state.bad, vec![Point::origin()]);
        let (next, trace) = bad_point_step(&f, &state, &Point::origin()).unwrap();
        assert_eq!(trace.q_terms, vec![r2().pow(2)]);
        assert!(next.bad.is_empty());
    }

    #[test]
    fn step_contract() {
        let f = reduce_fraction(&x().pow(6), &r2().pow(2)).unwrap();
        let state = PipelineState::new(&f, SosRep::unit(vec![x().pow(3)]), SosRep::unit(vec![r2()])).unwrap();
        assert!(matches!(bad_point_step(&f, &state, &Point::origin()), Err(CertifyError::PreconditionViolated(_))));
    }

    #[test]
    fn refusals() {
        let x1 = &x() - &c(1);
        let den = &r2() * &(&x1.pow(2) + &y().pow(2));
        let f = reduce_fraction(&(&x().pow(3) * &x1.pow(3)), &den).unwrap();
        let any = SosRep::unit(vec![c(1)]);
        assert!(matches!(certify_nonnegative(&f, &any, &any), Err(CertifyError::NegativeValueDetected { .. })));
        assert_eq!(f.evaluate(&Point::new(ratio(1, 2), rat(0))).map(|v| v.is_negative()), Some(true));
        let g = &x().pow(2) + &y().pow(4);
        let h = reduce_fraction(&(&x().pow(2) + &c(1)), &g).unwrap();
        let err = certify_nonnegative(&h, &SosRep::unit(vec![x(), c(1)]), &SosRep::unit(vec![x(), y().pow(2)]));
        assert!(matches!(err, Err(CertifyError::NotOneBlowup(_))));
        assert!(matches!(
            certify_nonnegative(&h, &SosRep::unit(vec![x()]), &SosRep::unit(vec![x(), y().pow(2)])),
            Err(CertifyError::WitnessInvalid(_))
        ));
    }

    #[test]
    fn verifier_controls() {
        let (f, p, q) = worked();
        let mut cert = certify_nonnegative(&f, &p, &q).unwrap();
        cert.terms[0] = cert.terms[0].scale(&rat(2));
        let r = verify_certificate(&cert);
        assert!(!r.identity.pass && !r.passed);
        assert!(!r.identity.difference.unwrap().is_zero());
        let g = &x().pow(2) + &y().pow(4);
        let t = reduce_fraction(&x().pow(3), &g).unwrap();
        let cert = RatSosCertificate { target: &t * &t, terms: vec![t], provenance: Provenance::default() };
        let r = verify_certificate(&cert);
        assert!(r.identity.pass && !r.passed);
        assert!(r.terms[0].failure.as_ref().unwrap().contains("Degenerate"));
    }

    #[test]
    fn certificate_round_trip() {
        let (f, p, q) = worked();
        let cert = certify_nonnegative(&f, &p, &q).unwrap();
        let s = serde_json::to_string(&cert).unwrap();
        let back: RatSosCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cert);
    }
}
