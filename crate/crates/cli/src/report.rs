//! Versioned report documents and their canonical serialization.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;
use std::time::Duration;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// The budget ran out before an answer was reached.
    Undecided,
    /// `verify-cert` found the evidence invalid.
    ReplayFailed,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Undecided => 2,
            Status::ReplayFailed => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportError {
    pub kind: String,
    pub message: String,
}

/// Wall-clock data, kept apart from the deterministic content and hashed
/// on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub elapsed_ms: u64,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub format_version: u32,
    pub command: String,
    /// The validated configuration, or null when it failed to parse.
    pub config: Value,
    pub status: Status,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Value>,
    pub effort: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ReportError>,
    /// SHA-256 of the canonical document without `digest` and `timing`.
    pub digest: String,
    pub timing: Timing,
}

/// The deterministic parts of a report.
#[derive(Clone, Debug)]
pub struct Body {
    pub status: Status,
    pub result: Value,
    pub evidence: Option<Value>,
    pub effort: Value,
    pub error: Option<ReportError>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl ReportDocument {
    pub fn new(command: &str, config: Value, body: Body, elapsed: Duration) -> ReportDocument {
        let elapsed_ms = u64::try_from(elapsed.as_millis()).unwrap_or(u64::MAX);
        let mut doc = ReportDocument {
            format_version: FORMAT_VERSION,
            command: command.to_string(),
            config,
            status: body.status,
            result: body.result,
            evidence: body.evidence,
            effort: body.effort,
            error: body.error,
            digest: String::new(),
            timing: Timing { elapsed_ms, digest: timing_digest(elapsed_ms) },
        };
        doc.digest = doc.content_digest();
        doc
    }

    pub fn content_digest(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        let map = v.as_object_mut().expect("report is an object");
        map.remove("digest");
        map.remove("timing");
        sha256_hex(serde_json::to_string(&v).expect("value serializes").as_bytes())
    }

    /// Both digests match the content they cover.
    pub fn digests_match(&self) -> bool {
        self.digest == self.content_digest() && self.timing.digest == timing_digest(self.timing.elapsed_ms)
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

fn timing_digest(elapsed_ms: u64) -> String {
    sha256_hex(serde_json::json!({ "elapsed_ms": elapsed_ms }).to_string().as_bytes())
}

/// Canonical text: sorted keys, two-space indentation, trailing newline.
pub fn to_canonical(doc: &ReportDocument) -> String {
    let v = serde_json::to_value(doc).expect("report serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

pub fn parse_report(text: &str) -> Result<ReportDocument, serde_json::Error> {
    serde_json::from_str(text)
}

/// Writes the canonical report to `path`, or to standard output.
pub fn emit_report(doc: &ReportDocument, path: Option<&Path>) -> std::io::Result<()> {
    let text = to_canonical(doc);
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample(ms: u64) -> ReportDocument {
        let body = Body {
            status: Status::Ok,
            result: json!({"value": "1/2", "zeta": [1, 2], "alpha": {"b": 1, "a": 2}}),
            evidence: Some(json!({"witness": {"xi": ["1/2"]}})),
            effort: json!({"evaluations": 3}),
            error: None,
        };
        ReportDocument::new("m", json!({"field": {"poly": [-1, 1]}}), body, Duration::from_millis(ms))
    }

    #[test]
    fn round_trip_and_determinism() {
        let doc = sample(5);
        let text = to_canonical(&doc);
        assert_eq!(parse_report(&text).unwrap(), doc);
        assert_eq!(to_canonical(&parse_report(&text).unwrap()), text);
        assert!(doc.digests_match());
    }

    #[test]
    fn keys_are_sorted() {
        let text = to_canonical(&sample(5));
        let a = text.find("\"alpha\"").unwrap();
        let v = text.find("\"value\"").unwrap();
        let z = text.find("\"zeta\"").unwrap();
        assert!(a < v && v < z);
        let top: Vec<usize> = ["\"command\"", "\"config\"", "\"digest\"", "\"effort\"", "\"evidence\"", "\"format_version\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(top.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn timing_does_not_change_content_digest() {
        let a = sample(5);
        let b = sample(900);
        assert_eq!(a.digest, b.digest);
        assert_ne!(a.timing.digest, b.timing.digest);
    }

    #[test]
    fn tampering_breaks_the_digest() {
        let mut doc = sample(5);
        doc.result["value"] = json!("1/3");
        assert!(!doc.digests_match());
    }

    #[test]
    fn unwritable_path_is_an_io_error() {
        let doc = sample(1);
        let err = emit_report(&doc, Some(Path::new("/nonexistent-dir/for/sure/report.json")));
        assert!(err.is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Status::Ok.exit_code(), 0);
        assert_eq!(Status::Error.exit_code(), 1);
        assert_eq!(Status::Undecided.exit_code(), 2);
        assert_eq!(Status::ReplayFailed.exit_code(), 3);
    }
}
