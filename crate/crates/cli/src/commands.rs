//! Command dispatch: each command runs one library operation and returns the
//! deterministic body of its report.

use crate::config::{RunConfig, DEFAULT_SAMPLES};
use crate::report::{Body, ReportDocument, ReportError, Status, FORMAT_VERSION};
use serde::Serialize;
use serde_json::{json, Value};
use sminima::forms::{bsd_check, form_from_ideal, is_fundamental, m_form, m_form_box, FormError};
use sminima::minima::{
    compute_m, covering_verify, decide_norm_euclidean, m_exact_in, search_lower, spot_check, verify_certificate, BracketParams,
    CoverOutcome, CoverParams, CoveringCertificate, MinError, Verdict, Witness,
};
use sminima::rational::{fmt_q, Q};
use sminima::sarith::Place;
use sminima::torus::char_pair;
use sminima::{FieldError, SError};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Half-width of the box searched by the direct form minimum.
const FORM_BOX_RADIUS: i64 = 30;
/// Random points compared by the form dictionary exploration.
const FORM_SAMPLES: usize = 20;
/// Surviving boxes included in an unresolved covering report.
const SURVIVORS_SHOWN: usize = 16;
/// Bits of precision for archimedean absolute value enclosures.
const ABS_BITS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Info,
    Snorm,
    /// `m`: the minimum at one point.
    Min,
    Search,
    Cover,
    /// `M`: bracket the minimum over the torus.
    Max,
    Decide,
    Form,
    Orbit,
    Dual,
    VerifyCert,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Info,
        Command::Snorm,
        Command::Min,
        Command::Search,
        Command::Cover,
        Command::Max,
        Command::Decide,
        Command::Form,
        Command::Orbit,
        Command::Dual,
        Command::VerifyCert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Info => "info",
            Command::Snorm => "snorm",
            Command::Min => "m",
            Command::Search => "search",
            Command::Cover => "cover",
            Command::Max => "M",
            Command::Decide => "decide",
            Command::Form => "form",
            Command::Orbit => "orbit",
            Command::Dual => "dual",
            Command::VerifyCert => "verify-cert",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Command, String> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Command::ALL.iter().map(|c| c.name()).collect();
            format!("unknown command {s:?}; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("parameter {0} is required for this command")]
    Missing(&'static str),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Min(#[from] MinError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    S(#[from] SError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl CommandError {
    fn kind(&self) -> &'static str {
        match self {
            CommandError::Missing(_) => "missing_parameter",
            CommandError::Io { .. } => "io",
            CommandError::Input(_) => "input",
            CommandError::Min(_) => "minima",
            CommandError::Form(_) => "form",
            CommandError::S(_) => "s_arith",
            CommandError::Field(_) => "field",
        }
    }
}

type CmdResult = Result<Body, CommandError>;

fn q(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn ok(result: Value, evidence: Option<Value>, effort: Value) -> Body {
    Body { status: Status::Ok, result, evidence, effort, error: None }
}

/// Runs `command` on a validated configuration.
pub fn run_command(cfg: &RunConfig, command: Command) -> ReportDocument {
    let start = Instant::now();
    let body = execute(cfg, command).unwrap_or_else(|e| error_body(e.kind(), e.to_string()));
    ReportDocument::new(command.name(), to_json(&cfg.spec), body, start.elapsed())
}

fn error_body(kind: &str, message: String) -> Body {
    Body {
        status: Status::Error,
        result: Value::Null,
        evidence: None,
        effort: json!({}),
        error: Some(ReportError { kind: kind.to_string(), message }),
    }
}

/// A report for a run that failed before a configuration was available.
pub fn error_report(command: &str, kind: &str, message: String) -> ReportDocument {
    ReportDocument::new(command, Value::Null, error_body(kind, message), Duration::ZERO)
}

fn execute(cfg: &RunConfig, command: Command) -> CmdResult {
    match command {
        Command::Info => info(cfg),
        Command::Snorm => snorm(cfg),
        Command::Min => minimum(cfg),
        Command::Search => search(cfg),
        Command::Cover => cover(cfg),
        Command::Max => bracket(cfg),
        Command::Decide => decide(cfg),
        Command::Form => form(cfg),
        Command::Orbit => orbit(cfg),
        Command::Dual => dual(cfg),
        Command::VerifyCert => verify_cert(cfg),
    }
}

fn place_value(p: &Place) -> Value {
    match p {
        Place::Real(i) => json!({"kind": "real", "index": i}),
        Place::Complex(i) => json!({"kind": "complex", "index": i}),
        Place::Finite(v) => json!({
            "kind": "finite",
            "p": v.p.to_string(),
            "e": v.e,
            "f": v.f,
            "norm": v.norm.to_string(),
            "generator": to_json(&v.gen),
        }),
    }
}

fn xi(cfg: &RunConfig) -> Result<&sminima::FieldElement, CommandError> {
    cfg.params.xi.as_ref().ok_or(CommandError::Missing("xi"))
}

fn info(cfg: &RunConfig) -> CmdResult {
    let k = &cfg.field;
    let s = &cfg.s;
    let dom = &cfg.domain;
    let (r1, r2) = k.signature();
    let basis: Vec<Vec<String>> = k.integral_basis().iter().map(|r| r.iter().map(fmt_q).collect()).collect();
    let places: Vec<Value> = s.places().iter().map(place_value).collect();
    let result = json!({
        "field": {
            "poly": k.poly().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "degree": k.degree(),
            "signature": [r1, r2],
            "discriminant": k.discriminant().to_string(),
            "integral_basis": basis,
        },
        "S": {"places": places, "size": s.size(), "unit_rank": s.unit_rank()},
        "units": {
            "generators": to_json(&s.units),
            "torsion": to_json(&s.torsion),
            "torsion_order": s.torsion_order,
            "verified": s.verified,
            "full_group": s.full_group,
        },
        "ideal": {
            "lattice": to_json(&cfg.ideal),
            "prime_to_s": to_json(&dom.ideal),
            "basis": to_json(&dom.basis),
            "s_norm": q(&dom.norm),
        },
    });
    Ok(ok(result, None, json!({})))
}

fn snorm(cfg: &RunConfig) -> CmdResult {
    let x = xi(cfg)?;
    let k = &cfg.field;
    let s = &cfg.s;
    let n = k.norm(x);
    let abs_norm = if n < Q::default() { -n } else { n };
    let mut result = json!({
        "xi": to_json(x),
        "s_norm": q(&s.s_norm(x)),
        "abs_norm": q(&abs_norm),
    });
    if !x.is_zero() {
        let places: Vec<Value> = s
            .places()
            .iter()
            .zip(s.abs_values(x, ABS_BITS))
            .map(|(pl, iv)| json!({"place": place_value(pl), "lo": q(&iv.lo), "hi": q(&iv.hi)}))
            .collect();
        result["abs_values"] = Value::Array(places);
    }
    Ok(ok(result, None, json!({})))
}

fn minimum(cfg: &RunConfig) -> CmdResult {
    let x = xi(cfg)?;
    let mv = m_exact_in(&cfg.domain, x)?;
    let result = json!({
        "xi": to_json(x),
        "value": q(&mv.value),
        "attaining_shift": to_json(&mv.attaining_shift),
        "orbit_size": mv.search_box.orbit_size,
    });
    let effort = json!({"candidates": mv.search_box.candidates});
    let w = Witness { xi: x.clone(), minimum: mv };
    Ok(ok(result, Some(json!({"witness": to_json(&w)})), effort))
}

fn search(cfg: &RunConfig) -> CmdResult {
    let w = search_lower(&cfg.domain, cfg.params.denom_bound)?;
    let result = json!({"lower": q(&w.minimum.value), "xi": to_json(&w.xi), "denom_bound": cfg.params.denom_bound});
    let effort = json!({"denominator_searched": cfg.params.denom_bound});
    Ok(ok(result, Some(json!({"witness": to_json(&w)})), effort))
}

fn cover(cfg: &RunConfig) -> CmdResult {
    let t = cfg.params.t.clone().unwrap_or_else(|| Q::from_integer(1.into()));
    let params = CoverParams { threshold: t.clone(), budget: cfg.params.budget, workers: cfg.params.workers };
    match covering_verify(&cfg.domain, &params) {
        CoverOutcome::Certified(cert, stats) => {
            let max = cert.boxes.iter().map(|b| &b.bound).max().cloned().unwrap_or_default();
            let result = json!({"threshold": q(&t), "certified": true, "boxes": cert.boxes.len(), "max_bound": q(&max)});
            Ok(ok(result, Some(json!({"certificate": to_json(&cert)})), to_json(&stats)))
        }
        CoverOutcome::Unresolved(boxes, stats) => {
            let result = json!({
                "threshold": q(&t),
                "certified": false,
                "surviving": boxes.len(),
                "worst_bound": boxes.first().map(|b| q(&b.bound)),
            });
            let shown: Vec<_> = boxes.iter().take(SURVIVORS_SHOWN).collect();
            Ok(Body {
                status: Status::Undecided,
                result,
                evidence: Some(json!({"surviving_boxes": to_json(&shown)})),
                effort: to_json(&stats),
                error: None,
            })
        }
    }
}

fn bracket(cfg: &RunConfig) -> CmdResult {
    let p = &cfg.params;
    let bp = BracketParams { gap: p.gap.clone(), denom_bound: p.denom_bound, budget: p.budget, workers: p.workers };
    let rep = compute_m(&cfg.domain, &bp)?;
    let result = json!({
        "lower": q(&rep.lower),
        "upper": rep.upper.as_ref().map(q),
        "gap": q(&p.gap),
        "exact": rep.exact,
        "complete": rep.complete,
        "witness_xi": to_json(&rep.witness.xi),
        "witness_orbit_size": rep.witness_orbit_size,
        "denominator_searched": rep.denominator_searched,
        "certificate_threshold": rep.certificate.as_ref().map(|c| q(&c.threshold)),
    });
    let evidence = json!({"witness": to_json(&rep.witness), "certificate": to_json(&rep.certificate)});
    let evaluations: u64 = rep.attempts.iter().map(|a| a.evaluations).sum();
    let effort = json!({"attempts": to_json(&rep.attempts), "evaluations": evaluations});
    let status = if rep.complete { Status::Ok } else { Status::Undecided };
    Ok(Body { status, result, evidence: Some(evidence), effort, error: None })
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Euclidean => "euclidean",
        Verdict::NotEuclidean => "not_euclidean",
        Verdict::Undecided { .. } => "undecided",
    }
}

fn decide(cfg: &RunConfig) -> CmdResult {
    let p = &cfg.params;
    let v = decide_norm_euclidean(&cfg.domain, p.budget, p.workers)?;
    let mut result = json!({"verdict": verdict_name(&v.verdict), "budget": p.budget});
    let mut evidence = serde_json::Map::new();
    if let Some(c) = &v.certificate {
        evidence.insert("certificate".into(), to_json(c));
    }
    if let Some(w) = &v.witness {
        result["witness_xi"] = to_json(&w.xi);
        result["witness_value"] = q(&w.minimum.value);
        evidence.insert("witness".into(), to_json(w));
    }
    let status = match v.verdict {
        Verdict::Undecided { .. } => Status::Undecided,
        _ => Status::Ok,
    };
    let evidence = (!evidence.is_empty()).then_some(Value::Object(evidence));
    Ok(Body { status, result, evidence, effort: to_json(&v.effort), error: None })
}

fn form(cfg: &RunConfig) -> CmdResult {
    let p = &cfg.params;
    let f = match &p.form {
        Some(f) => f.clone(),
        None => {
            if cfg.field.degree() != 2 {
                return Err(FormError::NotQuadratic.into());
            }
            let b = cfg.ideal.basis();
            form_from_ideal(&cfg.field, &cfg.ideal, &[b[0].clone(), b[1].clone()])?
        }
    };
    let d = f.discriminant();
    let mut result = json!({
        "form": to_json(&f),
        "discriminant": d.to_string(),
        "primitive": f.is_primitive(),
        "fundamental": is_fundamental(&d),
    });
    if let Some(pt) = &p.point {
        result["point"] = json!([q(&pt.0), q(&pt.1)]);
        result["m_form"] = q(&m_form(&f, pt)?);
        result["m_form_box"] = q(&m_form_box(&f, pt, FORM_BOX_RADIUS));
    }
    let mut evidence = None;
    if d > 0.into() && f.is_primitive() && is_fundamental(&d) {
        let rep = bsd_check(&f, p.denom_bound, p.samples.unwrap_or(FORM_SAMPLES), p.seed)?;
        result["lower"] = q(&rep.lower);
        result["lower_point"] = json!(rep.p0.iter().map(fmt_q).collect::<Vec<_>>());
        result["routes_agree"] = json!(rep.rows.iter().all(|r| r.agree));
        evidence = Some(json!({"rows": to_json(&rep.rows)}));
    }
    Ok(ok(result, evidence, json!({})))
}

fn orbit(cfg: &RunConfig) -> CmdResult {
    let x = xi(cfg)?;
    let dom = &cfg.domain;
    let pts = dom.orbit_points(x);
    let mut values = Vec::with_capacity(pts.len());
    for pt in &pts {
        values.push(m_exact_in(dom, &pt.rep)?.value);
    }
    let points: Vec<Value> = pts
        .iter()
        .zip(&values)
        .map(|(pt, v)| json!({"rep": to_json(&pt.rep), "unit_exponents": pt.exponents, "m": q(v)}))
        .collect();
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let result = json!({
        "xi": to_json(x),
        "size": pts.len(),
        "points": points,
        "values_agree": agree,
        "m": q(&values[0]),
    });
    Ok(ok(result, None, json!({})))
}

fn dual(cfg: &RunConfig) -> CmdResult {
    let k = &cfg.field;
    let s = &cfg.s;
    let a0 = &cfg.domain.ideal;
    let dual = cfg.domain.s_trace_dual();
    let product = s.prime_to_s(&k.ideal_mul(a0, &dual));
    let inv_diff = s.prime_to_s(&k.inverse_different());
    let mut vanishes = true;
    for x in dual.basis() {
        for y in a0.basis() {
            vanishes &= char_pair(s, &x, &y).is_zero();
        }
    }
    let result = json!({
        "dual": to_json(&dual),
        "dual_basis": to_json(&dual.basis()),
        "product": to_json(&product),
        "inverse_different": to_json(&inv_diff),
        "product_is_inverse_different": product == inv_diff,
        "pairing_vanishes": vanishes,
    });
    Ok(ok(result, None, json!({})))
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
        Check { name, passed, detail: detail.into() }
    }
}

/// Replays a covering certificate at its own threshold (and at `--t` when
/// given), then samples random points of K against it.
fn replay_certificate(cfg: &RunConfig, raw: &Value, checks: &mut Vec<Check>) -> Option<CoveringCertificate> {
    let cert: CoveringCertificate = match serde_json::from_value(raw.clone()) {
        Ok(c) => c,
        Err(e) => {
            checks.push(Check::new("certificate_format", false, e.to_string()));
            return None;
        }
    };
    let dom = &cfg.domain;
    let mut thresholds = vec![cert.threshold.clone()];
    if let Some(t) = &cfg.params.t {
        thresholds.push(t.clone());
    }
    for t in &thresholds {
        match verify_certificate(dom, &cert, t) {
            Ok(()) => checks.push(Check::new("replay", true, format!("{} boxes below {}", cert.boxes.len(), fmt_q(t)))),
            Err(e) => checks.push(Check::new("replay", false, format!("at {}: {e}", fmt_q(t)))),
        }
    }
    let samples = cfg.params.samples.unwrap_or(DEFAULT_SAMPLES);
    match spot_check(dom, &cert, &cert.threshold, samples, cfg.params.seed) {
        Ok(worst) => checks.push(Check::new("spot_check", true, format!("{samples} samples, worst {}", fmt_q(&worst)))),
        Err(e) => checks.push(Check::new("spot_check", false, e.to_string())),
    }
    Some(cert)
}

fn replay_witness(cfg: &RunConfig, raw: &Value, checks: &mut Vec<Check>) -> Option<Witness> {
    let w: Witness = match serde_json::from_value(raw.clone()) {
        Ok(w) => w,
        Err(e) => {
            checks.push(Check::new("witness_format", false, e.to_string()));
            return None;
        }
    };
    match w.replay(&cfg.domain) {
        Ok(true) => checks.push(Check::new("witness", true, format!("m = {}", fmt_q(&w.minimum.value)))),
        Ok(false) => checks.push(Check::new("witness", false, "recomputed minimum or shift differs")),
        Err(e) => checks.push(Check::new("witness", false, e.to_string())),
    }
    Some(w)
}

fn claim(checks: &mut Vec<Check>, name: &'static str, stated: Option<&Value>, actual: String) {
    let ok = stated.and_then(Value::as_str) == Some(actual.as_str());
    checks.push(Check::new(name, ok, format!("stated {}, evidence {actual}", stated.unwrap_or(&Value::Null))));
}

/// Checks that the replayed evidence supports what the report claims.
fn check_claims(doc: &ReportDocument, cert: Option<&CoveringCertificate>, wit: Option<&Witness>, checks: &mut Vec<Check>) {
    let r = &doc.result;
    match doc.command.as_str() {
        "decide" => match r.get("verdict").and_then(Value::as_str) {
            Some("euclidean") => {
                let good = cert.is_some_and(|c| c.threshold <= Q::from_integer(1.into()));
                checks.push(Check::new("verdict", good, "euclidean needs a covering certificate at t <= 1"));
            }
            Some("not_euclidean") => {
                let good = wit.is_some_and(|w| w.minimum.value >= Q::from_integer(1.into()));
                checks.push(Check::new("verdict", good, "not_euclidean needs a witness with m >= 1"));
                if let Some(w) = wit {
                    claim(checks, "witness_value", r.get("witness_value"), fmt_q(&w.minimum.value));
                }
            }
            other => checks.push(Check::new("verdict", false, format!("nothing to replay for verdict {other:?}"))),
        },
        "M" => {
            if let Some(w) = wit {
                claim(checks, "lower", r.get("lower"), fmt_q(&w.minimum.value));
            }
            if let Some(c) = cert {
                claim(checks, "upper", r.get("upper"), fmt_q(&c.threshold));
            }
        }
        "m" => {
            if let Some(w) = wit {
                claim(checks, "value", r.get("value"), fmt_q(&w.minimum.value));
            }
        }
        "search" => {
            if let Some(w) = wit {
                claim(checks, "lower", r.get("lower"), fmt_q(&w.minimum.value));
            }
        }
        "cover" => {
            if let Some(c) = cert {
                claim(checks, "threshold", r.get("threshold"), fmt_q(&c.threshold));
            }
        }
        _ => {}
    }
}

fn verify_cert(cfg: &RunConfig) -> CmdResult {
    let path = cfg.params.certificate.as_ref().ok_or(CommandError::Missing("certificate"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CommandError::Input(format!("{}: {e}", path.display())))?;
    let mut checks = Vec::new();
    let (source, evidence, doc) = if value.get("format_version").is_some() {
        let doc: ReportDocument = serde_json::from_value(value).map_err(|e| CommandError::Input(format!("{}: {e}", path.display())))?;
        checks.push(Check::new("format_version", doc.format_version == FORMAT_VERSION, doc.format_version.to_string()));
        checks.push(Check::new("digest", doc.digests_match(), doc.digest.clone()));
        ("report", doc.evidence.clone().unwrap_or(Value::Null), Some(doc))
    } else if value.get("boxes").is_some() {
        ("certificate", json!({"certificate": value}), None)
    } else if value.get("minimum").is_some() {
        ("witness", json!({"witness": value}), None)
    } else {
        return Err(CommandError::Input(format!("{}: no report, certificate or witness found", path.display())));
    };
    let cert = match evidence.get("certificate") {
        Some(c) if !c.is_null() => replay_certificate(cfg, c, &mut checks),
        _ => None,
    };
    let wit = match evidence.get("witness") {
        Some(w) if !w.is_null() => replay_witness(cfg, w, &mut checks),
        _ => None,
    };
    if cert.is_none() && wit.is_none() && !checks.iter().any(|c| c.name.ends_with("_format")) {
        checks.push(Check::new("evidence", false, "no certificate or witness to replay"));
    }
    if let Some(doc) = &doc {
        check_claims(doc, cert.as_ref(), wit.as_ref(), &mut checks);
    }
    let passed = checks.iter().all(|c| c.passed);
    let result = json!({"source": source, "passed": passed, "checks": to_json(&checks)});
    let status = if passed { Status::Ok } else { Status::ReplayFailed };
    Ok(Body { status, result, evidence: None, effort: json!({}), error: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn run(text: &str, c: Command) -> ReportDocument {
        run_command(&parse_config(text).unwrap(), c)
    }

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
        assert!("mm".parse::<Command>().is_err());
    }

    #[test]
    fn minimum_at_one_half() {
        let doc = run(r#"{"field":{"poly":[-1,1]},"params":{"xi":["1/2"]}}"#, Command::Min);
        assert_eq!(doc.status, Status::Ok);
        assert_eq!(doc.result["value"], "1/2");
    }

    #[test]
    fn missing_xi_is_an_error() {
        let doc = run(r#"{"field":{"poly":[-1,1]}}"#, Command::Snorm);
        assert_eq!(doc.status, Status::Error);
        assert_eq!(doc.error.unwrap().kind, "missing_parameter");
    }

    #[test]
    fn gaussian_decide_is_euclidean() {
        let doc = run(r#"{"field":{"poly":[1,0,1]},"S":{"primes":[]},"ideal":{"gens":[[1,0]]}}"#, Command::Decide);
        assert_eq!(doc.result["verdict"], "euclidean");
        assert!(doc.evidence.unwrap()["certificate"].is_object());
    }

    #[test]
    fn deterministic_documents() {
        let text = r#"{"field":{"poly":[-1,1]},"S":{"primes":[2]},"params":{"t":"3/5","xi":["1/3"]}}"#;
        for c in [Command::Info, Command::Snorm, Command::Min, Command::Cover, Command::Orbit, Command::Dual] {
            let a = run(text, c);
            let b = run(text, c);
            assert_eq!(a.digest, b.digest, "{c}");
            assert_eq!(a.status, Status::Ok, "{c}: {:?}", a.error);
        }
    }

    #[test]
    fn orbit_sizes_over_sixth_integers() {
        let base = r#"{"field":{"poly":[-1,1]},"S":{"primes":[2,3]},"params":{"xi":["XI"]}}"#;
        for (x, size) in [("1/5", 4), ("1/7", 6)] {
            let doc = run(&base.replace("XI", x), Command::Orbit);
            assert_eq!(doc.result["size"], size);
            assert_eq!(doc.result["values_agree"], true);
        }
    }

    #[test]
    fn form_of_the_ring_of_integers() {
        let doc = run(r#"{"field":{"poly":[-2,0,1]},"params":{"point":["1/2","0"],"denom_bound":4,"samples":5}}"#, Command::Form);
        assert_eq!(doc.status, Status::Ok, "{:?}", doc.error);
        assert_eq!(doc.result["discriminant"], "8");
        assert_eq!(doc.result["m_form"], "1/4");
        assert_eq!(doc.result["m_form_box"], "1/4");
        assert_eq!(doc.result["routes_agree"], true);
    }

    #[test]
    fn dual_of_gaussian_integers() {
        let doc = run(r#"{"field":{"poly":[1,0,1]}}"#, Command::Dual);
        assert_eq!(doc.result["product_is_inverse_different"], true);
        assert_eq!(doc.result["pairing_vanishes"], true);
    }

    #[test]
    fn unresolved_cover_is_undecided() {
        let doc = run(r#"{"field":{"poly":[-1,1]},"params":{"t":"2/5","budget":500}}"#, Command::Cover);
        assert_eq!(doc.status, Status::Undecided);
        assert_eq!(doc.exit_code(), 2);
    }
}
