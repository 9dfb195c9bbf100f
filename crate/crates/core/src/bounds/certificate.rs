use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of one exact check over a parameter range. The verdict is derived
/// from the witnesses: a certificate passes exactly when no failing point
/// was recorded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub id: String,
    pub statement: String,
    pub params: Value,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
    pub wall_time_ms: u64,
}

impl Certificate {
    pub fn new(
        id: impl Into<String>,
        statement: impl Into<String>,
        params: Value,
        witnesses: Vec<Value>,
        wall_time: Duration,
    ) -> Certificate {
        Certificate {
            id: id.into(),
            statement: statement.into(),
            params,
            verdict: if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail },
            witnesses,
            wall_time_ms: wall_time.as_millis() as u64,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Add a key to `params` (which must be an object).
    pub fn with_param(mut self, key: &str, value: Value) -> Certificate {
        if let Value::Object(m) = &mut self.params {
            m.insert(key.to_string(), value);
        }
        self
    }

    /// Zero the timing so that output depends only on the inputs.
    pub fn without_timing(mut self) -> Certificate {
        self.wall_time_ms = 0;
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("certificates serialize")
    }
}

pub fn to_json_lines(certs: &[Certificate]) -> String {
    certs.iter().map(|c| c.to_json_line() + "\n").collect()
}

pub fn to_json_array(certs: &[Certificate]) -> String {
    serde_json::to_string_pretty(certs).expect("certificates serialize") + "\n"
}
