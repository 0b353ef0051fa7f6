//! Point blow-ups, resolution trees and continuity at poles.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{rat, Point, Poly1, Poly2, Rat, Var};
use crate::ratfunc::{poles, reduce_fraction, RatFunc, RatFuncError};
use crate::realroots::{
    is_isolated_zero, local_positive_definiteness, sorted_roots, DefinitenessVerdict, InfiniteWitness, Interval,
    Isolation, RealRoot, ZeroBox,
};

pub const DEFAULT_MAX_STAGES: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("more than {0} blow-up stages needed")]
    StageBudgetExceeded(u32),
    #[error("{0} lies on a curve of poles")]
    NonIsolatedPole(Point),
    #[error("poles with irrational coordinates")]
    UnsupportedPoles(Vec<ZeroBox>),
    #[error("the denominator has infinitely many real zeros")]
    InfinitePoleSet(InfiniteWitness),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
}

/// The two affine charts of a point blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `(u, v) -> (u, uv)`; exceptional line `u = 0`.
    UUv,
    /// `(u, v) -> (uv, v)`; exceptional line `v = 0`.
    UvV,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    pub center: Point,
    pub branch: Branch,
}

impl Substitution {
    /// Image in the parent chart of a point of this chart.
    pub fn push_forward(&self, p: &Point) -> Point {
        let (x, y) = match self.branch {
            Branch::UUv => (p.x.clone(), &p.x * &p.y),
            Branch::UvV => (&p.x * &p.y, p.y.clone()),
        };
        Point::new(x + &self.center.x, y + &self.center.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub composition: Vec<Substitution>,
    pub local_fn: RatFunc,
    /// Valuations in the exceptional coordinate of the pulled-back
    /// numerator and denominator before cancellation.
    pub cleared_exponents: (u32, u32),
}

impl Chart {
    /// Image in the original plane of a point of this chart.
    pub fn push_forward(&self, p: &Point) -> Point {
        self.composition.iter().rev().fold(p.clone(), |q, s| s.push_forward(&q))
    }

    pub fn branch(&self) -> Branch {
        self.composition.last().map(|s| s.branch).unwrap_or(Branch::UUv)
    }

    /// Whether `p` lies on the exceptional line of the last blow-up.
    pub fn on_exceptional_line(&self, p: &Point) -> bool {
        match self.branch() {
            Branch::UUv => p.x.is_zero(),
            Branch::UvV => p.y.is_zero(),
        }
    }
}

fn pull_back(f: &RatFunc, a: &Point, branch: Branch, parent: &[Substitution]) -> Chart {
    let g = f.translate(a);
    let map = |p: &Poly2| match branch {
        Branch::UUv => p.map_monomials(|i, j| (i + j, j)),
        Branch::UvV => p.map_monomials(|i, j| (i, i + j)),
    };
    let (n, d) = (map(g.num()), map(g.den()));
    let exc = match branch {
        Branch::UUv => Var::X,
        Branch::UvV => Var::Y,
    };
    let cleared = (n.valuation_in(exc), d.valuation_in(exc));
    let mut composition = parent.to_vec();
    composition.push(Substitution { center: a.clone(), branch });
    Chart { composition, local_fn: reduce_fraction(&n, &d).expect("nonzero denominator"), cleared_exponents: cleared }
}

/// Both charts of the blow-up of `a`, with common powers of the
/// exceptional coordinate cancelled.
pub fn blowup_charts(f: &RatFunc, a: &Point) -> (Chart, Chart) {
    (pull_back(f, a, Branch::UUv, &[]), pull_back(f, a, Branch::UvV, &[]))
}

/// A point in chart coordinates, exact or boxed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Exact(Point),
    Approx { u: Interval, v: Interval },
}

impl Location {
    fn on_line(root: &RealRoot) -> Location {
        match root {
            RealRoot::Exact(v) => Location::Exact(Point::new(Rat::zero(), v.clone())),
            RealRoot::Isolated(iv) => Location::Approx { u: Interval::point(Rat::zero()), v: iv.clone() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalKind {
    Indeterminate,
    PoleHit,
    Unsupported,
}

/// Special points on the exceptional line of a chart. For the first chart
/// the whole line `u = 0` is examined; for the second only its origin, the
/// rest of that line being covered by the first chart.
pub fn exceptional_indeterminacies(c: &Chart) -> Vec<(Location, ExceptionalKind)> {
    match c.branch() {
        Branch::UUv => line_analysis(&c.local_fn).special,
        Branch::UvV => match origin_kind(&c.local_fn) {
            OriginKind::Regular(_) => Vec::new(),
            OriginKind::PoleHit => vec![(Location::Exact(Point::origin()), ExceptionalKind::PoleHit)],
            OriginKind::Indeterminate => vec![(Location::Exact(Point::origin()), ExceptionalKind::Indeterminate)],
        },
    }
}

struct LineAnalysis {
    special: Vec<(Location, ExceptionalKind)>,
    /// Constant value on the line, or two line points with distinct values.
    fiber: Result<(Point, Rat), ((Point, Rat), (Point, Rat))>,
}

fn line_analysis(g: &RatFunc) -> LineAnalysis {
    let n = g.num().specialize(Var::X, &Rat::zero());
    let d = g.den().specialize(Var::X, &Rat::zero());
    let line_point = |v: &Rat| Point::new(Rat::zero(), v.clone());
    if d.is_zero() {
        let v0 = first_nonroot(&n);
        return LineAnalysis {
            special: vec![(Location::Exact(line_point(&v0)), ExceptionalKind::PoleHit)],
            fiber: Err(((line_point(&v0), Rat::zero()), (line_point(&v0), Rat::zero()))),
        };
    }
    let common = n.gcd(&d);
    let d_red = d.div_exact(&common).expect("gcd divides");
    let n_red = if n.is_zero() { Poly1::zero() } else { n.div_exact(&common).expect("gcd divides") };
    let mut special = Vec::new();
    let pole_roots = if d_red.is_constant() { Vec::new() } else { sorted_roots(&d_red).expect("nonzero") };
    for r in &pole_roots {
        special.push((Location::on_line(r), ExceptionalKind::PoleHit));
    }
    if !common.is_constant() {
        for r in sorted_roots(&common).expect("nonzero") {
            let on_pole = match &r {
                RealRoot::Exact(v) => d_red.eval(v).is_zero(),
                RealRoot::Isolated(_) => false,
            };
            if on_pole {
                continue;
            }
            let kind = match r {
                RealRoot::Exact(_) => ExceptionalKind::Indeterminate,
                RealRoot::Isolated(_) => ExceptionalKind::Unsupported,
            };
            special.push((Location::on_line(&r), kind));
        }
    }
    let fiber = if n_red.is_constant() && d_red.is_constant() {
        let v0 = first_nonroot(&d);
        Ok((line_point(&v0), n_red.coeff(0) / d_red.coeff(0)))
    } else {
        let mut seen: Option<(Point, Rat)> = None;
        let mut k = 0i64;
        loop {
            let v = rat(k);
            k += 1;
            let dv = d.eval(&v);
            if dv.is_zero() {
                continue;
            }
            let val = n.eval(&v) / dv;
            match &seen {
                None => seen = Some((line_point(&v), val)),
                Some((_, first)) if *first != val => break Err((seen.expect("set"), (line_point(&v), val))),
                Some(_) => {}
            }
        }
    };
    LineAnalysis { special, fiber }
}

fn first_nonroot(p: &Poly1) -> Rat {
    (0..).map(rat).find(|v| !p.eval(v).is_zero()).expect("a nonzero polynomial has a non-root")
}

enum OriginKind {
    Regular(Rat),
    PoleHit,
    Indeterminate,
}

fn origin_kind(g: &RatFunc) -> OriginKind {
    let n0 = g.num().constant_term();
    let d0 = g.den().constant_term();
    if !d0.is_zero() {
        OriginKind::Regular(n0 / d0)
    } else if !n0.is_zero() {
        OriginKind::PoleHit
    } else {
        OriginKind::Indeterminate
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum NodeStatus {
    ResolvedRegular,
    BlownUp,
    PoleHit { witness: Location },
    UnsupportedCoordinates { location: Location },
}

/// An infinitely near point: a pole of the root function (depth 0) or a
/// point on an exceptional line, in the coordinates of the chart it lies in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionNode {
    pub point: Location,
    pub depth: u32,
    /// Chart of the parent's blow-up holding this point; `None` at the root.
    pub chart: Option<Branch>,
    pub status: NodeStatus,
    /// Limit of the function at this point when it exists.
    #[serde(with = "crate::poly::opt_rat_string")]
    pub limit: Option<Rat>,
    /// The two charts of this point's blow-up; empty for leaves that were
    /// not blown up.
    pub charts: Vec<Chart>,
    pub children: Vec<ResolutionNode>,
}

impl ResolutionNode {
    pub fn walk<'a>(&'a self, out: &mut Vec<&'a ResolutionNode>) {
        out.push(self);
        for c in &self.children {
            c.walk(out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ResolutionWitness {
    PoleHit {
        pole: Point,
        chart: Vec<Substitution>,
        at: Location,
    },
    NonconstantFiber {
        pole: Point,
        chart: Vec<Substitution>,
        first: Location,
        #[serde(with = "crate::poly::rat_string")]
        first_value: Rat,
        /// May lie in the sibling chart or be a limit at a deeper point.
        second: Location,
        #[serde(with = "crate::poly::rat_string")]
        second_value: Rat,
    },
    UnsupportedCoordinates {
        pole: Option<Point>,
        chart: Vec<Substitution>,
        at: Location,
    },
    InfinitePoleSet(InfiniteWitness),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Regulous,
    NotRegulous,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleLimit {
    pub point: Point,
    #[serde(with = "crate::poly::rat_string")]
    pub limit: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub stages: u32,
    pub regulous: bool,
    pub verdict: Verdict,
    pub poles: Vec<Point>,
    pub pole_limits: Vec<PoleLimit>,
    pub witnesses: Vec<ResolutionWitness>,
    pub tree: Vec<ResolutionNode>,
}

impl ResolutionReport {
    pub fn limit_at(&self, a: &Point) -> Option<&Rat> {
        self.pole_limits.iter().find(|l| &l.point == a).map(|l| &l.limit)
    }

    /// Every chart of every blow-up in the forest.
    pub fn charts(&self) -> Vec<&Chart> {
        let mut nodes = Vec::new();
        for t in &self.tree {
            t.walk(&mut nodes);
        }
        nodes.into_iter().flat_map(|n| n.charts.iter()).collect()
    }
}

enum Outcome {
    Limit(Rat),
    Fail,
    Unsupported,
}

struct Resolver {
    pole: Point,
    max_stages: u32,
    stages: u32,
    witnesses: Vec<ResolutionWitness>,
}

impl Resolver {
    fn new(pole: Point, max_stages: u32) -> Self {
        Resolver { pole, max_stages, stages: 0, witnesses: Vec::new() }
    }

    fn fiber_mismatch(&mut self, chart: &Chart, first: (Point, Rat), second: (Location, Rat)) {
        self.witnesses.push(ResolutionWitness::NonconstantFiber {
            pole: self.pole.clone(),
            chart: chart.composition.clone(),
            first: Location::Exact(first.0),
            first_value: first.1,
            second: second.0,
            second_value: second.1,
        });
    }

    /// Blow up `center` of the chart function `g` and examine both charts.
    fn node(
        &mut self,
        g: &RatFunc,
        center: Point,
        depth: u32,
        composition: &[Substitution],
        chart: Option<Branch>,
    ) -> Result<(ResolutionNode, Outcome), ResolveError> {
        if depth >= self.max_stages {
            return Err(ResolveError::StageBudgetExceeded(self.max_stages));
        }
        self.stages = self.stages.max(depth + 1);
        let c1 = pull_back(g, &center, Branch::UUv, composition);
        let c2 = pull_back(g, &center, Branch::UvV, composition);
        let line = line_analysis(&c1.local_fn);
        let origin = origin_kind(&c2.local_fn);

        let mut pole_hit = None;
        for (loc, kind) in &line.special {
            if *kind == ExceptionalKind::PoleHit {
                pole_hit = Some((loc.clone(), &c1));
                break;
            }
        }
        if pole_hit.is_none() && matches!(origin, OriginKind::PoleHit) {
            pole_hit = Some((Location::Exact(Point::origin()), &c2));
        }
        if let Some((loc, c)) = pole_hit {
            self.witnesses.push(ResolutionWitness::PoleHit {
                pole: self.pole.clone(),
                chart: c.composition.clone(),
                at: loc.clone(),
            });
            let node = ResolutionNode {
                point: Location::Exact(center),
                depth,
                chart,
                status: NodeStatus::PoleHit { witness: loc },
                limit: None,
                charts: vec![c1, c2],
                children: Vec::new(),
            };
            return Ok((node, Outcome::Fail));
        }

        let mut failed = false;
        let mut unsupported = false;
        let value = match &line.fiber {
            Ok((p, c)) => Some((p.clone(), c.clone())),
            Err((a, b)) => {
                self.fiber_mismatch(&c1, a.clone(), (Location::Exact(b.0.clone()), b.1.clone()));
                failed = true;
                None
            }
        };
        let mut children = Vec::new();
        let check_limit = |this: &mut Self, lim: Rat, at: Location, c: &Chart, failed: &mut bool| {
            if let Some((p, v)) = &value {
                if *v != lim {
                    this.fiber_mismatch(c, (p.clone(), v.clone()), (at, lim));
                    *failed = true;
                }
            }
        };
        for (loc, kind) in &line.special {
            match (kind, loc) {
                (ExceptionalKind::Indeterminate, Location::Exact(p)) => {
                    let (child, out) = self.node(&c1.local_fn, p.clone(), depth + 1, &c1.composition, Some(Branch::UUv))?;
                    children.push(child);
                    match out {
                        Outcome::Limit(l) => check_limit(self, l, loc.clone(), &c1, &mut failed),
                        Outcome::Fail => failed = true,
                        Outcome::Unsupported => unsupported = true,
                    }
                }
                _ => {
                    unsupported = true;
                    self.witnesses.push(ResolutionWitness::UnsupportedCoordinates {
                        pole: Some(self.pole.clone()),
                        chart: c1.composition.clone(),
                        at: loc.clone(),
                    });
                    children.push(ResolutionNode {
                        point: loc.clone(),
                        depth: depth + 1,
                        chart: Some(Branch::UUv),
                        status: NodeStatus::UnsupportedCoordinates { location: loc.clone() },
                        limit: None,
                        charts: Vec::new(),
                        children: Vec::new(),
                    });
                }
            }
        }
        let o = Location::Exact(Point::origin());
        match origin {
            OriginKind::Regular(v) => check_limit(self, v, o, &c2, &mut failed),
            OriginKind::Indeterminate => {
                let (child, out) = self.node(&c2.local_fn, Point::origin(), depth + 1, &c2.composition, Some(Branch::UvV))?;
                children.push(child);
                match out {
                    Outcome::Limit(l) => check_limit(self, l, o, &c2, &mut failed),
                    Outcome::Fail => failed = true,
                    Outcome::Unsupported => unsupported = true,
                }
            }
            OriginKind::PoleHit => unreachable!("handled above"),
        }
        let outcome = if failed {
            Outcome::Fail
        } else if unsupported {
            Outcome::Unsupported
        } else {
            Outcome::Limit(value.expect("constant fiber").1)
        };
        let status = if children.is_empty() { NodeStatus::ResolvedRegular } else { NodeStatus::BlownUp };
        let limit = match &outcome {
            Outcome::Limit(l) => Some(l.clone()),
            _ => None,
        };
        let node = ResolutionNode { point: Location::Exact(center), depth, chart, status, limit, charts: vec![c1, c2], children };
        Ok((node, outcome))
    }
}

/// Resolve the indeterminacy of `f` at every pole by iterated point
/// blow-ups.
pub fn resolve(f: &RatFunc, max_stages: u32) -> Result<ResolutionReport, ResolveError> {
    let ps = match poles(f) {
        Ok(ps) => ps,
        Err(RatFuncError::InfiniteZeroSet(w)) => {
            return Ok(ResolutionReport {
                stages: 0,
                regulous: false,
                verdict: Verdict::NotRegulous,
                poles: Vec::new(),
                pole_limits: Vec::new(),
                witnesses: vec![ResolutionWitness::InfinitePoleSet(w)],
                tree: Vec::new(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let mut stages = 0;
    let mut witnesses = Vec::new();
    let mut tree = Vec::new();
    let mut limits = Vec::new();
    let mut failed = false;
    let mut unsupported = false;
    for b in &ps.boxes {
        unsupported = true;
        witnesses.push(ResolutionWitness::UnsupportedCoordinates {
            pole: None,
            chart: Vec::new(),
            at: Location::Approx { u: b.x.clone(), v: b.y.clone() },
        });
    }
    for a in &ps.points {
        let mut r = Resolver::new(a.clone(), max_stages);
        let (node, out) = r.node(f, a.clone(), 0, &[], None)?;
        stages = stages.max(r.stages);
        witnesses.extend(r.witnesses);
        tree.push(node);
        match out {
            Outcome::Limit(l) => limits.push(PoleLimit { point: a.clone(), limit: l }),
            Outcome::Fail => failed = true,
            Outcome::Unsupported => unsupported = true,
        }
    }
    let verdict = if failed {
        Verdict::NotRegulous
    } else if unsupported {
        Verdict::Unsupported
    } else {
        Verdict::Regulous
    };
    Ok(ResolutionReport {
        stages,
        regulous: verdict == Verdict::Regulous,
        verdict,
        poles: ps.points,
        pole_limits: limits,
        witnesses,
        tree,
    })
}

/// Behaviour of a rational function at a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Continuity {
    Regular(#[serde(with = "crate::poly::rat_string")] Rat),
    Limit(#[serde(with = "crate::poly::rat_string")] Rat),
    NoLimit(Box<ResolutionWitness>),
    Unsupported(Location),
}

impl Continuity {
    /// The value or limit, when there is one.
    pub fn value(&self) -> Option<&Rat> {
        match self {
            Continuity::Regular(v) | Continuity::Limit(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_continuous(&self) -> bool {
        self.value().is_some()
    }
}

pub fn continuity_at(g: &RatFunc, a: &Point) -> Result<Continuity, ResolveError> {
    continuity_at_with(g, a, DEFAULT_MAX_STAGES)
}

pub fn continuity_at_with(g: &RatFunc, a: &Point, max_stages: u32) -> Result<Continuity, ResolveError> {
    if let Some(v) = g.evaluate(a) {
        return Ok(Continuity::Regular(v));
    }
    match is_isolated_zero(g.den(), a).map_err(RatFuncError::from)? {
        Isolation::OnCurve => return Err(ResolveError::NonIsolatedPole(a.clone())),
        Isolation::Unsupported(iv) => {
            return Ok(Continuity::Unsupported(Location::Approx { u: Interval::point(Rat::zero()), v: iv }))
        }
        Isolation::Isolated | Isolation::NotZero => {}
    }
    let mut r = Resolver::new(a.clone(), max_stages);
    let (_, out) = r.node(g, a.clone(), 0, &[], None)?;
    Ok(match out {
        Outcome::Limit(l) => Continuity::Limit(l),
        Outcome::Fail => {
            let w = r
                .witnesses
                .into_iter()
                .find(|w| !matches!(w, ResolutionWitness::UnsupportedCoordinates { .. }))
                .expect("a failure records a witness");
            Continuity::NoLimit(Box::new(w))
        }
        Outcome::Unsupported => {
            let at = r
                .witnesses
                .into_iter()
                .find_map(|w| match w {
                    ResolutionWitness::UnsupportedCoordinates { at, .. } => Some(at),
                    _ => None,
                })
                .expect("unsupported records a witness");
            Continuity::Unsupported(at)
        }
    })
}

/// Whether the denominator is locally definite at every pole, i.e. whether
/// one blow-up per pole suffices.
pub fn one_blowup_criterion(f: &RatFunc) -> Result<(bool, BTreeMap<Point, DefinitenessVerdict>), ResolveError> {
    let ps = match poles(f) {
        Ok(ps) => ps,
        Err(RatFuncError::InfiniteZeroSet(w)) => return Err(ResolveError::InfinitePoleSet(w)),
        Err(e) => return Err(e.into()),
    };
    if !ps.complete {
        return Err(ResolveError::UnsupportedPoles(ps.boxes));
    }
    let mut all = true;
    let mut verdicts = BTreeMap::new();
    for a in ps.points {
        let v = local_positive_definiteness(f.den(), &a).map_err(RatFuncError::from)?;
        all &= v.is_definite();
        verdicts.insert(a, v);
    }
    Ok((all, verdicts))
}
