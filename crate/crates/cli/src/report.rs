//! Machine-readable corpus reports.

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "websym.corpus-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Measured residual or deviation, when the check is numeric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub name: String,
    pub degree: usize,
    pub coordinates: [String; 2],
    pub mode: String,
    pub passed: bool,
    /// `None` for infinite-dimensional algebras.
    pub dimension: Option<usize>,
    pub checks: Vec<CheckReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub schema: String,
    pub version: u32,
    pub passed: bool,
    pub entries: Vec<EntryReport>,
}

impl CorpusReport {
    pub fn new(entries: Vec<EntryReport>) -> CorpusReport {
        CorpusReport {
            schema: SCHEMA.to_string(),
            version: SCHEMA_VERSION,
            passed: entries.iter().all(|e| e.passed),
            entries,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<CorpusReport> {
        serde_json::from_str(s)
    }

    /// One line per entry and an indented line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let dim = e.dimension.map_or_else(|| String::from("infinite"), |d| d.to_string());
            out.push_str(&format!(
                "{} {} (degree {}, {}, dimension {})\n",
                verdict(e.passed),
                e.name,
                e.degree,
                e.mode,
                dim
            ));
            for c in &e.checks {
                out.push_str(&format!("    {} {}: {}\n", verdict(c.passed), c.name, c.detail));
            }
        }
        let failed = self.entries.iter().filter(|e| !e.passed).count();
        out.push_str(&format!("{} entries, {} failed\n", self.entries.len(), failed));
        out
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListEntry {
    pub name: String,
    pub degree: usize,
    pub coordinates: [String; 2],
    pub mode: String,
    pub expected_dimension: Option<usize>,
    pub expected_basis: Vec<[String; 2]>,
    pub description: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trips() {
        let r = CorpusReport::new(vec![EntryReport {
            name: "a".into(),
            degree: 3,
            coordinates: ["x".into(), "y".into()],
            mode: "exact".into(),
            passed: true,
            dimension: Some(3),
            checks: vec![CheckReport { name: "c".into(), passed: true, detail: "Δ ok".into(), value: Some(1.25e-13) }],
        }]);
        let s = r.to_json();
        let back = CorpusReport::from_json(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), s);
        assert!(r.passed);
    }
}
