use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "vfilt";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    InvalidInput,
    ResourceCap,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::InvalidInput => 2,
            Status::ResourceCap => 3,
        }
    }
}

#[derive(Serialize)]
struct Body<'a> {
    tool: &'a str,
    version: &'a str,
    input: &'a Value,
    status: Status,
    output: &'a Value,
}

/// Serializes the report. The digest is the SHA-256 of the report body
/// without the digest field; object keys are emitted in sorted order.
pub fn render(input: &Value, status: Status, output: &Value) -> String {
    let body = Body { tool: TOOL, version: VERSION, input, status, output };
    let mut value = serde_json::to_value(&body).expect("report is serializable");
    let digest = hex::encode(Sha256::digest(serde_json::to_vec(&value).expect("report is serializable")));
    value["digest"] = Value::String(digest);
    let mut out = serde_json::to_string_pretty(&value).expect("report is serializable");
    out.push('\n');
    out
}
