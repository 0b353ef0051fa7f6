//! Subcommands.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_traits::{One, Signed, Zero};
use regulous_core::certify::negative_sample;
use regulous_core::classify::ClassifyError;
use regulous_core::resolve::{Branch, ResolveError, DEFAULT_MAX_STAGES};
use regulous_core::{
    certify_nonnegative, directional_derivative_at, find_sos_witness, flat_power, rat_to_string, reduce_fraction,
    regularity_class, resolve, restrict_to_arc, scalar_absorb, verify_certificate, verify_k_flat, CertifyError, Point,
    Poly1, Poly2, Rat, RatFunc, RatFuncError, RatSosCertificate, SosRep, UniRatFunc, Var, Verdict,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::parse::{parse_ast, parse_poly_t, syntactic_squares, to_ratfunc, Expr, ParseError};
use crate::report::{Format, Outcome, Report, EXIT_ERROR, EXIT_OK, EXIT_UNSUPPORTED};

#[derive(Debug, Parser)]
#[command(name = "regulous", version, about = "Exact analysis of rational functions in two variables")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continuity, C^k class and blow-up stages.
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 2)]
        kmax: u32,
    },
    /// Resolve the poles by point blow-ups.
    Resolve {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Include the full resolution tree.
        #[arg(long)]
        tree: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STAGES)]
        max_stages: u32,
    },
    /// Build a sum-of-squares certificate for a nonnegative function.
    Certify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Sum-of-squares witness for the numerator.
        #[arg(long)]
        p_witness: Option<PathBuf>,
        /// Sum-of-squares witness for the denominator.
        #[arg(long)]
        q_witness: Option<PathBuf>,
        /// Write the certificate here instead of embedding it in the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate file.
    Verify { cert: PathBuf },
    /// Least power of the function that is k-flat.
    FlatPower {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        k: u32,
    },
    /// Exact values along an arc at t = 1/2, 1/4, ..., 1/2^depth.
    Sample {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Arc as "x(t),y(t)" with polynomial components.
        #[arg(long, allow_hyphen_values = true)]
        arc: String,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// Differentiate first, e.g. "x", "xy", "yy".
        #[arg(long)]
        partial: Option<String>,
    },
    /// Regression fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixtureAction {
    /// Run every fixture and compare against the golden reports.
    Run {
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Rewrite the golden reports instead of comparing.
        #[arg(long)]
        update: bool,
    },
}

struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn error(kind: &'static str, message: impl Into<String>) -> Self {
        Failure { code: EXIT_ERROR, kind, message: message.into() }
    }

    fn unsupported(message: impl Into<String>) -> Self {
        Failure { code: EXIT_UNSUPPORTED, kind: "unsupported", message: message.into() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        let kind = match e {
            ParseError::Syntax { .. } => "parse_error",
            ParseError::ZeroDenominator { .. } => "zero_denominator",
        };
        Failure::error(kind, e.to_string())
    }
}

impl From<RatFuncError> for Failure {
    fn from(e: RatFuncError) -> Self {
        let kind = match e {
            RatFuncError::InfiniteZeroSet(_) => "infinite_pole_set",
            _ => "error",
        };
        Failure::error(kind, e.to_string())
    }
}

impl From<ResolveError> for Failure {
    fn from(e: ResolveError) -> Self {
        match e {
            ResolveError::UnsupportedPoles(_) => Failure::unsupported(e.to_string()),
            ResolveError::RatFunc(e) => e.into(),
            _ => Failure::error("error", e.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Unsupported(_) | ClassifyError::BudgetExhausted(_) => Failure::unsupported(e.to_string()),
            ClassifyError::Resolve(e) => e.into(),
            ClassifyError::RatFunc(e) => e.into(),
            ClassifyError::NotRegulous => Failure::error("not_regulous", e.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Unsupported(_) | CertifyError::NotOneBlowup(_) => Failure::unsupported(e.to_string()),
            CertifyError::WitnessInvalid(_) => Failure::error("witness_invalid", e.to_string()),
            CertifyError::Resolve(e) => e.into(),
            CertifyError::RatFunc(e) => e.into(),
            _ => Failure::error("error", e.to_string()),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn s(r: &Rat) -> String {
    rat_to_string(r)
}

fn point(p: &Point) -> Value {
    json!([s(&p.x), s(&p.y)])
}

fn ratfunc_uv(f: &RatFunc) -> String {
    f.display_in(("u", "v"))
}

pub fn dispatch(cli: &Cli, args: Vec<String>) -> Outcome {
    let (name, input) = match &cli.command {
        Command::Classify { expr, .. } => ("classify", Some(expr)),
        Command::Resolve { expr, .. } => ("resolve", Some(expr)),
        Command::Certify { expr, .. } => ("certify", Some(expr)),
        Command::Verify { .. } => ("verify", None),
        Command::FlatPower { expr, .. } => ("flat-power", Some(expr)),
        Command::Sample { expr, .. } => ("sample", Some(expr)),
        Command::Fixtures { .. } => ("fixtures", None),
    };
    let mut report = Report { command: name.to_string(), args, input: None, result: Value::Null };
    let parsed = match input.map(|t| parse_ast(t, &["x", "y"]).and_then(|e| to_ratfunc(&e).map(|f| (e, f)))) {
        Some(Ok((e, f))) => {
            report.input = Some(f.to_string());
            Some((e, f))
        }
        Some(Err(e)) => return fail(report, e.into()),
        None => None,
    };
    let result = match (&cli.command, parsed) {
        (Command::Classify { kmax, .. }, Some((_, f))) => classify(&f, *kmax),
        (Command::Resolve { tree, max_stages, .. }, Some((_, f))) => resolve_cmd(&f, *tree, *max_stages),
        (Command::Certify { p_witness, q_witness, out, .. }, Some((e, f))) => {
            certify(&e, &f, p_witness.as_ref(), q_witness.as_ref(), out.as_ref())
        }
        (Command::Verify { cert }, _) => verify(cert),
        (Command::FlatPower { k, .. }, Some((_, f))) => flat_power_cmd(&f, *k),
        (Command::Sample { arc, depth, partial, .. }, Some((_, f))) => sample(&f, arc, *depth, partial.as_deref()),
        (Command::Fixtures { action: FixtureAction::Run { dir, update } }, _) => {
            crate::fixtures::run_all(dir.as_deref(), *update).map_err(|m| Failure::error("fixtures", m))
        }
        _ => unreachable!("every expression command has parsed input"),
    };
    match result {
        Ok((code, v)) => {
            report.result = v;
            Outcome { code, report }
        }
        Err(f) => fail(report, f),
    }
}

fn fail(mut report: Report, f: Failure) -> Outcome {
    report.result = json!({ "error": f.kind, "message": f.message });
    Outcome { code: f.code, report }
}

type CmdResult = Result<(i32, Value), Failure>;

fn classify(f: &RatFunc, kmax: u32) -> CmdResult {
    let r = regularity_class(f, kmax)?;
    let axes = [(Rat::one(), Rat::zero()), (Rat::zero(), Rat::one())];
    let poles: Vec<Value> = r
        .per_pole
        .iter()
        .map(|p| {
            let dirs: Vec<Value> = axes
                .iter()
                .map(|(a, b)| {
                    let d = directional_derivative_at(f, &p.point, (a, b)).ok();
                    json!({ "direction": [s(a), s(b)], "value": d.as_ref().map(s) })
                })
                .collect();
            json!({
                "point": point(&p.point),
                "limit": p.limit.as_ref().map(s),
                "definiteness": to_json(&p.definiteness.status),
                "first_failing_order": p.first_failing_order,
                "failing_partial": p.failing_partial.map(|(i, j)| json!([i, j])),
                "directional_derivatives": dirs,
            })
        })
        .collect();
    Ok((
        EXIT_OK,
        json!({
            "regulous": r.regulous,
            "finite_poles": r.is_rational_with_finite_poles,
            "max_verified_k": r.max_verified_k,
            "kmax": kmax,
            "stages": r.stages,
            "poles": poles,
            "budget_exhausted": r.budget_exhausted,
            "partials": {
                "dx": f.derivative(Var::X).to_string(),
                "dy": f.derivative(Var::Y).to_string(),
            },
        }),
    ))
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::UUv => "(u, u*v)",
        Branch::UvV => "(u*v, v)",
    }
}

fn resolve_cmd(f: &RatFunc, tree: bool, max_stages: u32) -> CmdResult {
    let r = resolve(f, max_stages)?;
    let charts: Vec<Value> = r
        .charts()
        .into_iter()
        .map(|c| {
            json!({
                "stage": c.composition.len(),
                "centers": c.composition.iter().map(|t| point(&t.center)).collect::<Vec<_>>(),
                "maps": c.composition.iter().map(|t| branch_name(t.branch)).collect::<Vec<_>>(),
                "function": ratfunc_uv(&c.local_fn),
            })
        })
        .collect();
    let mut v = json!({
        "verdict": to_json(&r.verdict),
        "regulous": r.regulous,
        "stages": r.stages,
        "poles": r.poles.iter().map(point).collect::<Vec<_>>(),
        "pole_limits": r.pole_limits.iter().map(|l| json!({ "point": point(&l.point), "limit": s(&l.limit) })).collect::<Vec<_>>(),
        "charts": charts,
        "witnesses": to_json(&r.witnesses),
    });
    if tree {
        v["tree"] = to_json(&r.tree);
    }
    let code = if r.verdict == Verdict::Unsupported { EXIT_UNSUPPORTED } else { EXIT_OK };
    Ok((code, v))
}

/// `Σ c_i g_i^2` as a witness, with unequal weights absorbed into the terms.
fn weighted_to_rep(l: Vec<(Rat, Poly2)>) -> Option<SosRep> {
    let l: Vec<(Rat, Poly2)> = l.into_iter().filter(|(_, g)| !g.is_zero()).collect();
    let first = l.first()?.0.clone();
    if l.iter().all(|(c, _)| *c == first) {
        return SosRep::new(first, l.into_iter().map(|(_, g)| g).collect()).ok();
    }
    let mut terms = Vec::new();
    for (c, g) in l {
        terms.extend(scalar_absorb(&SosRep::new(c, vec![g]).ok()?).ok()?);
    }
    Some(SosRep::unit(terms))
}

/// Witnesses read off an input of the shape `A / B` or `A`.
fn syntactic_witnesses(e: &Expr, f: &RatFunc) -> Option<(SosRep, SosRep)> {
    let (a, b) = match e {
        Expr::Div(a, b, _) => (syntactic_squares(a)?, syntactic_squares(b)?),
        other => (syntactic_squares(other)?, vec![(Rat::one(), Poly2::one())]),
    };
    let (p, q) = (weighted_to_rep(a)?, weighted_to_rep(b)?);
    (reduce_fraction(&p.expand(), &q.expand()).ok()? == *f).then_some((p, q))
}

fn read_witness(path: &PathBuf) -> Result<SosRep, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::error("io", format!("{}: {e}", path.display())))?;
    let rep: SosRep =
        serde_json::from_str(&text).map_err(|e| Failure::error("witness_invalid", format!("{}: {e}", path.display())))?;
    if !rep.scalar.is_positive() {
        return Err(Failure::error("witness_invalid", format!("{}: scalar must be positive", path.display())));
    }
    Ok(rep)
}

fn certify(
    e: &Expr,
    f: &RatFunc,
    p_path: Option<&PathBuf>,
    q_path: Option<&PathBuf>,
    out: Option<&PathBuf>,
) -> CmdResult {
    if let Some((a, value)) = negative_sample(f) {
        return Ok((EXIT_OK, json!({ "certified": false, "negative_value": { "point": point(&a), "value": s(&value) } })));
    }
    let syntactic = syntactic_witnesses(e, f);
    let pick = |path: Option<&PathBuf>, syn: Option<SosRep>, poly: &Poly2, what: &str| -> Result<(SosRep, &'static str), Failure> {
        if let Some(p) = path {
            return Ok((read_witness(p)?, "file"));
        }
        if let Some(r) = syn {
            return Ok((r, "syntactic"));
        }
        find_sos_witness(poly)
            .map(|r| (r, "search"))
            .ok_or_else(|| Failure::unsupported(format!("no sum-of-squares witness found for the {what} {poly}")))
    };
    let (syn_p, syn_q) = match (&syntactic, p_path.is_none() && q_path.is_none()) {
        (Some((p, q)), true) => (Some(p.clone()), Some(q.clone())),
        _ => (None, None),
    };
    let (p_rep, p_src) = pick(p_path, syn_p, f.num(), "numerator")?;
    let (q_rep, q_src) = pick(q_path, syn_q, f.den(), "denominator")?;
    let cert = match certify_nonnegative(f, &p_rep, &q_rep) {
        Ok(c) => c,
        Err(CertifyError::NegativeValueDetected { point: a, value }) => {
            return Ok((
                EXIT_OK,
                json!({ "certified": false, "negative_value": { "point": point(&a), "value": s(&value) } }),
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let check = verify_certificate(&cert);
    let traces: Vec<Value> = cert
        .provenance
        .step_traces
        .iter()
        .map(|t| {
            json!({
                "point": point(&t.point),
                "f_value": s(&t.f_value),
                "order": t.order,
                "q_lowest": t.q_lowest.to_string(),
                "p_lowest": t.p_lowest.to_string(),
                "q_terms": t.q_terms.iter().map(Poly2::to_string).collect::<Vec<_>>(),
                "p_terms": t.p_terms.iter().map(Poly2::to_string).collect::<Vec<_>>(),
                "p_scalar": s(&t.p_scalar),
                "q_scalar": s(&t.q_scalar),
                "d": t.d.to_string(),
            })
        })
        .collect();
    let mut v = json!({
        "certified": true,
        "witnesses": {
            "numerator": { "source": p_src, "scalar": s(&p_rep.scalar), "terms": p_rep.terms.iter().map(Poly2::to_string).collect::<Vec<_>>() },
            "denominator": { "source": q_src, "scalar": s(&q_rep.scalar), "terms": q_rep.terms.iter().map(Poly2::to_string).collect::<Vec<_>>() },
        },
        "eliminated_points": cert.provenance.eliminated_points.iter().map(point).collect::<Vec<_>>(),
        "step_traces": traces,
        "denominator": cert.provenance.denominator.as_ref().map(Poly2::to_string),
        "term_count": cert.terms.len(),
        "terms": cert.terms.iter().map(RatFunc::to_string).collect::<Vec<_>>(),
        "verified": check.passed,
    });
    let text = serde_json::to_string_pretty(&cert).expect("certificates serialize") + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::error("io", format!("{}: {e}", path.display())))?;
        }
        None => v["certificate"] = to_json(&cert),
    }
    Ok((EXIT_OK, v))
}

fn verify(path: &PathBuf) -> CmdResult {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::error("io", format!("{}: {e}", path.display())))?;
    let cert: RatSosCertificate =
        serde_json::from_str(&text).map_err(|e| Failure::error("bad_certificate", format!("{}: {e}", path.display())))?;
    let r = verify_certificate(&cert);
    let terms: Vec<Value> = r
        .terms
        .iter()
        .map(|t| {
            json!({
                "index": t.index,
                "term": cert.terms[t.index].to_string(),
                "pass": t.pass,
                "finite_poles": t.finite_poles,
                "poles": t.poles.iter().map(|p| json!({
                    "point": point(&p.point),
                    "definiteness": to_json(&p.definiteness.status),
                    "continuous": p.continuous,
                    "limit": p.limit.as_ref().map(s),
                })).collect::<Vec<_>>(),
                "failure": t.failure,
            })
        })
        .collect();
    Ok((
        EXIT_OK,
        json!({
            "passed": r.passed,
            "target": cert.target.to_string(),
            "identity": if r.identity.pass { "pass" } else { "fail" },
            "difference": r.identity.difference.as_ref().map(RatFunc::to_string),
            "terms": terms,
        }),
    ))
}

fn flat_power_cmd(f: &RatFunc, k: u32) -> CmdResult {
    match flat_power(f, k) {
        Ok(m) => {
            let verified = verify_k_flat(f, m, k)?;
            Ok((EXIT_OK, json!({ "regulous": true, "k": k, "m": m, "verified": verified })))
        }
        Err(ClassifyError::NotRegulous) => Ok((EXIT_OK, json!({ "regulous": false, "k": k, "m": null, "verified": false }))),
        Err(e) => Err(e.into()),
    }
}

/// Split at the top-level comma.
fn split_arc(arc: &str) -> Result<(&str, &str), Failure> {
    let mut depth = 0i32;
    for (i, c) in arc.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Ok((&arc[..i], &arc[i + 1..])),
            _ => {}
        }
    }
    Err(Failure::error("parse_error", format!("arc '{arc}' must have the form \"x(t),y(t)\"")))
}

/// Limit at `t = 0` from the right, if finite.
fn limit_at_zero(g: &UniRatFunc) -> Option<Rat> {
    let val = |p: &Poly1| p.coeffs().iter().position(|c| !c.is_zero());
    let (Some(vn), Some(vd)) = (val(&g.num), val(&g.den)) else {
        return Some(Rat::zero());
    };
    match vn.cmp(&vd) {
        std::cmp::Ordering::Greater => Some(Rat::zero()),
        std::cmp::Ordering::Equal => Some(g.num.coeff(vn) / g.den.coeff(vd)),
        std::cmp::Ordering::Less => None,
    }
}

fn sample(f: &RatFunc, arc: &str, depth: u32, partial: Option<&str>) -> CmdResult {
    let mut g = f.clone();
    for c in partial.unwrap_or("").chars() {
        g = match c {
            'x' => g.derivative(Var::X),
            'y' => g.derivative(Var::Y),
            _ => return Err(Failure::error("usage", format!("--partial takes letters x and y, got '{c}'"))),
        };
    }
    let (xs, ys) = split_arc(arc)?;
    let (xt, yt) = (parse_poly_t(xs)?, parse_poly_t(ys)?);
    let r = restrict_to_arc(&g, &xt, &yt)?;
    let samples: Vec<Value> = (1..=depth)
        .map(|i| {
            let t = Rat::new(1.into(), num_bigint::BigInt::from(2u32).pow(i));
            json!({ "t": s(&t), "value": r.value.eval(&t).as_ref().map(s) })
        })
        .collect();
    Ok((
        EXIT_OK,
        json!({
            "function": g.to_string(),
            "partial": partial,
            "arc": [xt.to_string(), yt.to_string()],
            "restriction": r.value.to_string(),
            "samples": samples,
            "limit_at_0": limit_at_zero(&r.value).as_ref().map(s),
        }),
    ))
}
