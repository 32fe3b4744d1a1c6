use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Outcome class of a run; also the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Error = 2,
    Undetermined = 3,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
            Status::Undetermined => "undetermined",
        }
    }

    /// Failure dominates, then undetermined.
    pub fn and(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Error, _) | (_, Error) => Error,
            (Fail, _) | (_, Fail) => Fail,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            _ => Pass,
        }
    }

    pub fn from_pass(pass: bool) -> Status {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Hash of the command line and of every input file read.
#[derive(Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn add(&mut self, bytes: &[u8]) {
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    pub fn finish(self) -> String {
        format!("{:x}", self.0.finalize())
    }
}

pub struct Report {
    pub command: Vec<String>,
    pub digest: String,
    pub status: Status,
    pub results: Value,
    pub elapsed_ms: Option<u128>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "inputs_digest": self.digest,
            "results": self.results,
            "status": self.status.name(),
            "version": env!("CARGO_PKG_VERSION"),
        });
        if let Some(ms) = self.elapsed_ms {
            v["timing_ms"] = json!(ms);
        }
        v
    }
}

pub fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

pub fn big(b: &BigInt) -> Value {
    i64::try_from(b).map(Value::from).unwrap_or_else(|_| Value::String(b.to_string()))
}

/// Text form of a JSON report: one `key: value` line per scalar, nested
/// objects indented below their key.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => render_map(m, 0, &mut out),
        other => out.push_str(&format!("{}\n", scalar(other))),
    }
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.is_empty(),
        Value::Array(a) => a.iter().all(|x| x.is_number() || x.is_boolean() || x.is_null()),
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_map(m: &Map<String, Value>, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for (k, v) in m {
        if is_flat(v) {
            out.push_str(&format!("{pad}{k}: {}\n", scalar(v)));
        } else {
            out.push_str(&format!("{pad}{k}:\n"));
            render_nested(v, depth + 1, out);
        }
    }
}

fn render_nested(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => render_map(m, depth, out),
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_nested(x, depth + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_combines() {
        assert_eq!(Status::Pass.and(Status::Undetermined), Status::Undetermined);
        assert_eq!(Status::Undetermined.and(Status::Fail), Status::Fail);
        assert_eq!(Status::Pass.and(Status::Pass), Status::Pass);
    }

    #[test]
    fn text_follows_json() {
        let v = json!({"b": {"rank": 0, "factors": [2]}, "a": [{"x": 1}], "c": "ok"});
        assert_eq!(render_text(&v), "a:\n  -\n    x: 1\nb:\n  factors: [2]\n  rank: 0\nc: ok\n");
    }
}
