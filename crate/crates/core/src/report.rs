//! Verification reports, serialised as
//! `{"check", "order", "reliable_order", "status", "residual_terms"}`.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A coefficient that should have vanished (or a mismatch between two
/// routes). `source` names the equation, `term` the monomial or index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualTerm {
    pub source: String,
    pub term: String,
    pub value: String,
}

impl ResidualTerm {
    pub fn new(source: impl Into<String>, term: impl Into<String>, value: impl Into<String>) -> Self {
        Self { source: source.into(), term: term.into(), value: value.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub order: u32,
    pub reliable_order: i64,
    pub status: Status,
    pub residual_terms: Vec<ResidualTerm>,
}

impl Report {
    /// Passes iff `residual_terms` is empty.
    pub fn new(check: impl Into<String>, order: u32, reliable_order: i64, residual_terms: Vec<ResidualTerm>) -> Self {
        let status = if residual_terms.is_empty() { Status::Pass } else { Status::Fail };
        Self { check: check.into(), order, reliable_order, status, residual_terms }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = Report::new("virasoro", 10, 9, vec![]);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"check":"virasoro","order":10,"reliable_order":9,"status":"pass","residual_terms":[]}"#
        );
        let r = Report::new("kdv", 8, 3, vec![ResidualTerm::new("kdv", "p1", "1/2")]);
        assert!(!r.passed());
        assert!(serde_json::to_string(&r).unwrap().contains(r#""status":"fail""#));
    }
}
