//! Claim-by-claim verification reports. Reports hold only data that is a function of the
//! inputs, so two runs with the same configuration serialize to identical bytes; timings
//! are kept separately by the caller.

use std::fmt::Display;

use serde::{Serialize, Serializer};

pub fn as_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub stage: String,
    pub claims: Vec<ClaimResult>,
    /// Free-form supporting data (per-condition values, mismatch lists, assumptions).
    pub details: serde_json::Map<String, serde_json::Value>,
}

impl VerificationReport {
    pub fn new(stage: &str) -> Self {
        VerificationReport { stage: stage.to_string(), ..Default::default() }
    }

    /// Records a claim; it passes iff the two renderings are identical.
    pub fn check(&mut self, claim: &str, expected: impl Display, computed: impl Display) -> bool {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let pass = expected == computed;
        self.claims.push(ClaimResult { claim: claim.to_string(), expected, computed, pass });
        pass
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or_else(|e| serde_json::Value::String(format!("unserializable: {e}")));
        self.details.insert(key.to_string(), v);
    }

    pub fn passes(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| !c.pass)
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.claim == id)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.claims.extend(other.claims);
        for (k, v) in other.details {
            self.details.insert(format!("{}.{k}", other.stage), v);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization") + "\n"
    }

    /// One line per claim.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark} {}: expected {}, computed {}\n", c.claim, c.expected, c.computed));
        }
        out.push_str(&format!(
            "{}: {}/{} claims pass\n",
            self.stage,
            self.claims.iter().filter(|c| c.pass).count(),
            self.claims.len()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_requires_identical_rendering() {
        let mut r = VerificationReport::new("t");
        assert!(r.check("a", 2300, "2300"));
        assert!(!r.check("b", "1/729", "1/728"));
        assert!(!r.passes());
        assert_eq!(r.first_failure().unwrap().claim, "b");
        assert!(r.summary().contains("FAIL b"));
        assert_eq!(r.to_json(), r.clone().to_json());
    }
}
