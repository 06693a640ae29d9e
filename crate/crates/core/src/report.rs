//! Verification reports.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::vortex::{SweepStats, WindingMode, WindingReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub points_evaluated: usize,
    pub excluded_points: usize,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    /// A check passes when its largest residual is below tolerance; a sweep
    /// that evaluated nothing fails.
    pub fn from_stats(name: &str, stats: &SweepStats, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            max_residual: stats.max,
            mean_residual: stats.mean(),
            points_evaluated: stats.evaluated,
            excluded_points: stats.excluded,
            tolerance,
            pass: stats.evaluated > 0 && stats.max < tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalEntry {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingSummary {
    pub mode: WindingMode,
    pub value: f64,
    pub nearest_rational_expectation: f64,
    pub delta: f64,
    pub integral: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub local: Vec<LocalEntry>,
}

impl From<&WindingReport> for WindingSummary {
    fn from(w: &WindingReport) -> Self {
        Self {
            mode: w.mode,
            value: w.value,
            nearest_rational_expectation: w.expected,
            delta: w.delta,
            integral: w.integral,
            local: w
                .local
                .iter()
                .map(|l| LocalEntry {
                    re: l.location.re,
                    im: l.location.im,
                    multiplicity: l.multiplicity,
                    value: l.value,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub tool_version: String,
    /// Seconds since the Unix epoch; ignored by golden comparisons.
    pub timestamp: u64,
}

impl Provenance {
    pub fn now(config_hash: String) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            config_hash,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub case: String,
    pub checks: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winding: Option<WindingSummary>,
    pub pass: bool,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(
        case: String,
        checks: Vec<CheckResult>,
        winding: Option<WindingSummary>,
        provenance: Provenance,
    ) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            case,
            checks,
            winding,
            pass,
            provenance,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Serialisation with the timestamp zeroed, for golden comparisons.
    pub fn canonical_json(&self) -> Result<String> {
        let mut r = self.clone();
        r.provenance.timestamp = 0;
        r.to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule() {
        let mut s = SweepStats::default();
        assert!(!CheckResult::from_stats("x", &s, 1.0).pass);
        s.push(0.5);
        assert!(CheckResult::from_stats("x", &s, 1.0).pass);
        assert!(!CheckResult::from_stats("x", &s, 0.5).pass);
        s.push(f64::NAN);
        assert!(!CheckResult::from_stats("x", &s, 1.0).pass);
    }

    #[test]
    fn canonical_ignores_timestamp() {
        let mut a = Report::new("c".into(), vec![], None, Provenance::now("h".into()));
        let mut b = a.clone();
        a.provenance.timestamp = 1;
        b.provenance.timestamp = 2;
        assert_ne!(a.to_json().unwrap(), b.to_json().unwrap());
        assert_eq!(a.canonical_json().unwrap(), b.canonical_json().unwrap());
    }
}
