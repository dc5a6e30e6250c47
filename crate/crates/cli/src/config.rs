//! Run configuration: the JSON schema, its defaults, and validation into
//! constructed field, S and ideal objects.

use serde::{Deserialize, Serialize};
use sminima::forms::BinaryQuadraticForm;
use sminima::rational::{fmt_q, parse_q, Q, Z};
use sminima::{FieldElement, FractionalIdeal, FundamentalDomain, NumberField, SConfig, SError};
use std::path::PathBuf;
use thiserror::Error;

pub const DEFAULT_DENOM_BOUND: u64 = 20;
pub const DEFAULT_WORKERS: usize = 1;
pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid {path}: {message}")]
    Validation { path: String, message: String },
}

impl ConfigError {
    fn at(path: impl Into<String>, message: impl ToString) -> ConfigError {
        ConfigError::Validation { path: path.into(), message: message.to_string() }
    }
}

/// A rational given either as a JSON integer or as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatSpec {
    Int(i64),
    Text(String),
}

impl RatSpec {
    fn value(&self, path: &str) -> Result<Q, ConfigError> {
        match self {
            RatSpec::Int(n) => Ok(Q::from_integer(Z::from(*n))),
            RatSpec::Text(s) => parse_q(s).ok_or_else(|| ConfigError::at(path, format!("{s:?} is not a rational"))),
        }
    }

    fn canonical(x: &Q) -> RatSpec {
        RatSpec::Text(fmt_q(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    /// Coefficients of the monic defining polynomial, constant term first.
    pub poly: Vec<i64>,
}

/// A prime of S: every place above it, or the places at the given indices
/// into the sorted `places_above` list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrimeSpec {
    All(i64),
    Selected { p: i64, places: Vec<usize> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SSpec {
    #[serde(default)]
    pub primes: Vec<PrimeSpec>,
}

/// Generators as coordinate vectors on the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GensSpec {
    pub gens: Vec<Vec<RatSpec>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<RatSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<RatSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denom_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// The point of K for `snorm`, `m` and `orbit`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<RatSpec>>,
    /// `[a, b, c]` for the `form` command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<[i64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[RatSpec; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Report or certificate replayed by `verify-cert`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl Params {
    /// Fields set in `other` replace those of `self`.
    pub fn merge(&mut self, other: &Params) {
        macro_rules! take {
            ($($f:ident),*) => {$(
                if other.$f.is_some() {
                    self.$f = other.$f.clone();
                }
            )*};
        }
        take!(t, gap, denom_bound, budget, workers, xi, form, point, samples, seed, certificate, output);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    pub field: FieldSpec,
    #[serde(rename = "S", default)]
    pub s: SSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<GensSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<GensSpec>,
    #[serde(default)]
    pub params: Params,
}

/// Parameters with defaults applied and values parsed.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub t: Option<Q>,
    pub gap: Q,
    pub denom_bound: u64,
    pub budget: u64,
    pub workers: usize,
    pub xi: Option<FieldElement>,
    pub form: Option<BinaryQuadraticForm>,
    pub point: Option<(Q, Q)>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub certificate: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

/// A validated configuration with every referenced object constructed.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// The configuration as echoed in reports, with defaults filled in and
    /// rationals in lowest terms.
    pub spec: ConfigSpec,
    pub field: NumberField,
    pub s: SConfig,
    pub ideal: FractionalIdeal,
    pub domain: FundamentalDomain,
    pub params: Resolved,
}

pub fn parse_spec(text: &str) -> Result<ConfigSpec, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RunConfig::from_spec(parse_spec(text)?)
}

fn element(k: &NumberField, coords: &[RatSpec], path: &str) -> Result<FieldElement, ConfigError> {
    if coords.len() != k.degree() {
        return Err(ConfigError::at(path, format!("expected {} coordinates, got {}", k.degree(), coords.len())));
    }
    let v = coords.iter().enumerate().map(|(j, c)| c.value(&format!("{path}[{j}]"))).collect::<Result<Vec<_>, _>>()?;
    k.elem(v).map_err(|e| ConfigError::at(path, e))
}

fn s_error(e: SError, index: usize, spec: &PrimeSpec) -> ConfigError {
    let base = format!("S.primes[{index}]");
    match (&e, spec) {
        (SError::PlaceIndex { index: bad, .. }, PrimeSpec::Selected { places, .. }) => {
            let j = places.iter().position(|i| i == bad).unwrap_or(0);
            ConfigError::at(format!("{base}.places[{j}]"), e)
        }
        _ => ConfigError::at(base, e),
    }
}

impl RunConfig {
    pub fn from_spec(mut spec: ConfigSpec) -> Result<RunConfig, ConfigError> {
        if spec.field.poly.is_empty() {
            return Err(ConfigError::at("field.poly", "empty polynomial"));
        }
        let field = NumberField::new(&spec.field.poly).map_err(|e| ConfigError::at("field.poly", e))?;

        let mut primes: Vec<(Z, Option<Vec<usize>>)> = Vec::new();
        for (i, p) in spec.s.primes.iter().enumerate() {
            let (pz, sel) = match p {
                PrimeSpec::All(p) => (Z::from(*p), None),
                PrimeSpec::Selected { p, places } => (Z::from(*p), Some(places.clone())),
            };
            if primes.iter().any(|(q, _)| q == &pz) {
                return Err(ConfigError::at(format!("S.primes[{i}]"), SError::DuplicatePrime(pz)));
            }
            // validate each prime on its own so errors point at the entry
            SConfig::new(&field, &[(pz.clone(), sel.clone())]).map_err(|e| s_error(e, i, p))?;
            primes.push((pz, sel));
        }
        let bare = SConfig::new(&field, &primes).map_err(|e| ConfigError::at("S.primes", e))?;
        let s = match &spec.units {
            Some(u) => {
                let gens = u
                    .gens
                    .iter()
                    .enumerate()
                    .map(|(i, g)| element(&field, g, &format!("units.gens[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                bare.verify_s_unit_basis(&gens).map_err(|e| match e {
                    SError::NotAnSUnit(i) => ConfigError::at(format!("units.gens[{i}]"), e),
                    _ => ConfigError::at("units.gens", e),
                })?
            }
            None => bare.with_builtin_units().map_err(|e| ConfigError::at("units", e))?,
        };

        let ideal = match &spec.ideal {
            None => field.unit_ideal(),
            Some(g) => {
                if g.gens.is_empty() {
                    return Err(ConfigError::at("ideal.gens", "no generators"));
                }
                let gens = g
                    .gens
                    .iter()
                    .enumerate()
                    .map(|(i, x)| element(&field, x, &format!("ideal.gens[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                field.ideal_from_gens(&gens).map_err(|e| ConfigError::at("ideal.gens", e))?
            }
        };
        let domain = FundamentalDomain::new(&s, &ideal);
        let params = resolve(&field, &spec.params)?;
        spec.params = echo(&spec.params, &params);
        Ok(RunConfig { spec, field, s, ideal, domain, params })
    }
}

fn resolve(k: &NumberField, p: &Params) -> Result<Resolved, ConfigError> {
    let t = p.t.as_ref().map(|t| t.value("params.t")).transpose()?;
    if t.as_ref().is_some_and(|t| *t <= Q::from_integer(0.into())) {
        return Err(ConfigError::at("params.t", "threshold must be positive"));
    }
    let gap = match &p.gap {
        Some(g) => g.value("params.gap")?,
        None => Q::new(1.into(), 100.into()),
    };
    if gap <= Q::from_integer(0.into()) {
        return Err(ConfigError::at("params.gap", "gap must be positive"));
    }
    let workers = p.workers.unwrap_or(DEFAULT_WORKERS);
    if workers == 0 {
        return Err(ConfigError::at("params.workers", "at least one worker is required"));
    }
    let denom_bound = p.denom_bound.unwrap_or(DEFAULT_DENOM_BOUND);
    if denom_bound == 0 {
        return Err(ConfigError::at("params.denom_bound", "must be at least 1"));
    }
    let xi = p.xi.as_ref().map(|x| element(k, x, "params.xi")).transpose()?;
    let point = match &p.point {
        Some([x, y]) => Some((x.value("params.point[0]")?, y.value("params.point[1]")?)),
        None => None,
    };
    let form = p.form.map(|[a, b, c]| BinaryQuadraticForm::new(a, b, c));
    Ok(Resolved {
        t,
        gap,
        denom_bound,
        budget: p.budget.unwrap_or(DEFAULT_BUDGET),
        workers,
        xi,
        form,
        point,
        samples: p.samples,
        seed: p.seed.unwrap_or(DEFAULT_SEED),
        certificate: p.certificate.as_ref().map(PathBuf::from),
        output: p.output.as_ref().map(PathBuf::from),
    })
}

/// The parameters as echoed: defaults explicit, rationals canonical.
fn echo(p: &Params, r: &Resolved) -> Params {
    Params {
        t: r.t.as_ref().map(RatSpec::canonical),
        gap: Some(RatSpec::canonical(&r.gap)),
        denom_bound: Some(r.denom_bound),
        budget: Some(r.budget),
        workers: Some(r.workers),
        xi: r.xi.as_ref().map(|x| x.coords.iter().map(RatSpec::canonical).collect()),
        form: p.form,
        point: r.point.as_ref().map(|(x, y)| [RatSpec::canonical(x), RatSpec::canonical(y)]),
        samples: r.samples,
        seed: Some(r.seed),
        certificate: p.certificate.clone(),
        output: p.output.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sminima::rational::q;

    #[test]
    fn gaussian_integers() {
        let cfg = parse_config(r#"{"field":{"poly":[1,0,1]},"S":{"primes":[]},"ideal":{"gens":[[1,0]]}}"#).unwrap();
        assert_eq!(cfg.field.degree(), 2);
        assert_eq!(cfg.s.size(), 1);
        assert_eq!(cfg.ideal, cfg.field.unit_ideal());
        assert_eq!(cfg.params.gap, q(1, 100));
        assert_eq!(cfg.params.denom_bound, 20);
        assert_eq!(cfg.params.workers, 1);
    }

    #[test]
    fn sixth_integers() {
        let cfg = parse_config(r#"{"field":{"poly":[-1,1]},"S":{"primes":[2,3]},"ideal":{"gens":[[1]]}}"#).unwrap();
        assert_eq!(cfg.s.size(), 3);
        assert_eq!(cfg.s.unit_rank(), 2);
        assert_eq!(cfg.domain.norm, q(1, 1));
    }

    #[test]
    fn reducible_polynomial_is_located() {
        let err = parse_config(r#"{"field":{"poly":[-4,0,1]},"S":{"primes":[]},"ideal":{"gens":[[1,0]]}}"#).unwrap_err();
        match err {
            ConfigError::Validation { path, message } => {
                assert_eq!(path, "field.poly");
                assert!(message.contains("reducible"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validation_paths() {
        let cases = [
            (r#"{"field":{"poly":[-1,1]},"S":{"primes":[2,3,2]}}"#, "S.primes[2]"),
            (r#"{"field":{"poly":[-1,1]},"S":{"primes":[4]}}"#, "S.primes[0]"),
            (r#"{"field":{"poly":[1,0,1]},"S":{"primes":[{"p":5,"places":[0,2]}]}}"#, "S.primes[0].places[1]"),
            (r#"{"field":{"poly":[1,0,1]},"ideal":{"gens":[[1]]}}"#, "ideal.gens[0]"),
            (r#"{"field":{"poly":[1,0,1]},"ideal":{"gens":[[1,"x"]]}}"#, "ideal.gens[0][1]"),
            (r#"{"field":{"poly":[1,0,1]},"ideal":{"gens":[[0,0]]}}"#, "ideal.gens"),
            (r#"{"field":{"poly":[-1,1]},"params":{"gap":"0"}}"#, "params.gap"),
            (r#"{"field":{"poly":[-1,1]},"params":{"workers":0}}"#, "params.workers"),
            (r#"{"field":{"poly":[-1,1]},"params":{"xi":["1/2","1"]}}"#, "params.xi"),
            (r#"{"field":{"poly":[-2,0,1]},"units":{"gens":[[2,0]]}}"#, "units.gens[0]"),
        ];
        for (text, want) in cases {
            match parse_config(text) {
                Err(ConfigError::Validation { path, .. }) => assert_eq!(path, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn malformed_json_reports_position() {
        match parse_config("{\"field\":\n{\"poly\": [1,0,}") {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config(r#"{"field":{"poly":[1]},"extra":1}"#), Err(ConfigError::Parse { .. })));
    }

    #[test]
    fn place_selection_and_units() {
        let cfg = parse_config(r#"{"field":{"poly":[1,0,1]},"S":{"primes":[{"p":5,"places":[0]}]},"units":{"gens":[[2,1]]}}"#).unwrap();
        assert_eq!(cfg.s.finite.len(), 1);
        assert!(cfg.s.verified);
    }

    #[test]
    fn echo_is_canonical() {
        let cfg = parse_config(r#"{"field":{"poly":[-1,1]},"params":{"gap":"2/200","xi":["3/6"]}}"#).unwrap();
        assert_eq!(cfg.spec.params.gap, Some(RatSpec::Text("1/100".into())));
        assert_eq!(cfg.spec.params.xi, Some(vec![RatSpec::Text("1/2".into())]));
        let again = RunConfig::from_spec(cfg.spec.clone()).unwrap();
        assert_eq!(again.spec, cfg.spec);
    }
}
