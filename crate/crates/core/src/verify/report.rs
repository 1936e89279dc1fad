use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Relation::Le => value <= threshold,
            Relation::Ge => value >= threshold,
            Relation::Lt => value < threshold,
            Relation::Gt => value > threshold,
        }
    }
}

/// One named check: `value relation threshold`.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub outcome: Outcome,
    pub value: Option<f64>,
    pub relation: Option<Relation>,
    pub threshold: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub scenario: String,
    /// SHA-256 of the scenario description.
    pub digest: String,
    pub series: BTreeMap<String, Vec<f64>>,
    pub constants: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: &str, scenario: impl Into<String>) -> Self {
        let scenario = scenario.into();
        VerificationReport {
            suite: suite.to_string(),
            digest: hex::encode(Sha256::digest(scenario.as_bytes())),
            scenario,
            series: BTreeMap::new(),
            constants: BTreeMap::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Prefixes the scenario with a label and refreshes the digest.
    pub fn labelled(mut self, label: &str) -> Self {
        self.scenario = format!("{label} | {}", self.scenario);
        self.digest = hex::encode(Sha256::digest(self.scenario.as_bytes()));
        self
    }

    pub fn series(&mut self, name: &str, values: Vec<f64>) {
        self.series.insert(name.to_string(), values);
    }

    pub fn constant(&mut self, name: &str, value: f64) {
        self.constants.insert(name.to_string(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Records `value relation threshold`; non-finite values fail.
    pub fn check(&mut self, name: &str, value: f64, relation: Relation, threshold: f64, detail: impl Into<String>) -> bool {
        let ok = value.is_finite() && relation.holds(value, threshold);
        self.verdicts.push(Verdict {
            name: name.to_string(),
            outcome: if ok { Outcome::Pass } else { Outcome::Fail },
            value: Some(value),
            relation: Some(relation),
            threshold: Some(threshold),
            detail: detail.into(),
        });
        ok
    }

    pub fn not_applicable(&mut self, name: &str, reason: impl Into<String>) {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            outcome: Outcome::NotApplicable,
            value: None,
            relation: None,
            threshold: None,
            detail: reason.into(),
        });
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    /// No verdict failed.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.outcome != Outcome::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_record_thresholds() {
        let mut r = VerificationReport::new("demo", "scenario");
        assert!(r.check("a", 1.0, Relation::Le, 2.0, ""));
        assert!(!r.check("b", f64::NAN, Relation::Le, 2.0, ""));
        r.not_applicable("c", "empty window");
        assert!(!r.passed());
        let json = r.to_json();
        assert!(json.contains("\"<=\""));
        assert!(json.contains("not_applicable"));
        assert_eq!(r.digest.len(), 64);
    }
}
