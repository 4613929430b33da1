//! One row per verified statement: an exact comparison of two rationals.

use num_rational::BigRational;
use serde::Serialize;

use crate::rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
}

impl Relation {
    pub fn test(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Le => lhs <= rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub check: String,
    pub inputs: String,
    pub lhs: String,
    pub relation: Relation,
    pub rhs: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Only filled in when timing is requested, so that reports stay
    /// reproducible byte for byte by default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl AuditReport {
    pub fn compare(
        check: impl Into<String>,
        inputs: impl Into<String>,
        lhs: &BigRational,
        relation: Relation,
        rhs: &BigRational,
    ) -> Self {
        AuditReport {
            check: check.into(),
            inputs: inputs.into(),
            lhs: rational::format(lhs),
            relation,
            rhs: rational::format(rhs),
            verdict: Verdict::from_bool(relation.test(lhs, rhs)),
            witness: None,
            wall_time_ms: None,
        }
    }

    /// A floating-point comparison with absolute tolerance `tol` (used for
    /// entropies only).
    pub fn compare_f64(
        check: impl Into<String>,
        inputs: impl Into<String>,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        tol: f64,
    ) -> Self {
        let ok = match relation {
            Relation::Eq => (lhs - rhs).abs() <= tol,
            Relation::Ge => lhs >= rhs - tol,
            Relation::Le => lhs <= rhs + tol,
        };
        AuditReport {
            check: check.into(),
            inputs: inputs.into(),
            lhs: format!("{lhs:.12}"),
            relation,
            rhs: format!("{rhs:.12}"),
            verdict: Verdict::from_bool(ok),
            witness: None,
            wall_time_ms: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn verdicts_follow_the_relation() {
        let r = AuditReport::compare("x", "", &int(18), Relation::Ge, &int(16));
        assert!(r.holds());
        assert_eq!(r.lhs, "18");
        let r = AuditReport::compare("x", "", &ratio(1, 3), Relation::Eq, &ratio(2, 6));
        assert!(r.holds());
        let r = AuditReport::compare("x", "", &int(1), Relation::Le, &int(0));
        assert!(!r.holds());
        let r = AuditReport::compare_f64("x", "", 1.0, Relation::Ge, 1.0 + 1e-12, 1e-9);
        assert!(r.holds());
    }

    #[test]
    fn serializes_without_timing() {
        let r = AuditReport::compare("c", "G=K3", &int(2), Relation::Eq, &int(2));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"check":"c","inputs":"G=K3","lhs":"2","relation":"=","rhs":"2","verdict":"holds"}"#
        );
    }
}
