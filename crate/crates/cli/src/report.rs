use std::fmt;
use std::time::Duration;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A value worth logging that no claim pins down.
    Recorded,
}

impl Status {
    pub fn check(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Recorded => "recorded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: String,
    /// Which statement the claim reproduces, in words.
    pub anchor: String,
    pub computed: String,
    pub expected: String,
    pub status: Status,
}

impl Claim {
    pub fn new(id: impl Into<String>, anchor: &str, computed: impl ToString, expected: impl ToString, status: Status) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.to_string(),
            computed: computed.to_string(),
            expected: expected.to_string(),
            status,
        }
    }

    /// Passes when the two renderings agree.
    pub fn equal(id: impl Into<String>, anchor: &str, computed: impl ToString, expected: impl ToString) -> Self {
        let (c, e) = (computed.to_string(), expected.to_string());
        let status = Status::check(c == e);
        Self::new(id, anchor, c, e, status)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproductionReport {
    pub suite: String,
    pub claims: Vec<Claim>,
    pub ms: u128,
}

impl ReproductionReport {
    pub fn new(suite: &str) -> Self {
        Self { suite: suite.to_string(), claims: Vec::new(), ms: 0 }
    }

    pub fn push(&mut self, claim: Claim) {
        self.claims.push(claim);
    }

    pub fn extend(&mut self, other: ReproductionReport) {
        self.claims.extend(other.claims);
        self.ms += other.ms;
    }

    pub fn finish(mut self, elapsed: Duration) -> Self {
        self.ms = elapsed.as_millis();
        self
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ReproductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w_id = self.claims.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        let w_c = self.claims.iter().map(|c| c.computed.len()).max().unwrap_or(8).max(8);
        let w_e = self.claims.iter().map(|c| c.expected.len()).max().unwrap_or(8).max(8);
        writeln!(f, "suite {} ({} ms)", self.suite, self.ms)?;
        writeln!(f, "{:<w_id$}  {:<w_c$}  {:<w_e$}  status", "id", "computed", "expected")?;
        for c in &self.claims {
            writeln!(f, "{:<w_id$}  {:<w_c$}  {:<w_e$}  {}", c.id, c.computed, c.expected, c.status)?;
        }
        let fails = self.failures().count();
        write!(f, "{} claims, {} failed", self.claims.len(), fails)
    }
}
