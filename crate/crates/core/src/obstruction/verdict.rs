use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational witness; serialized as `"p"` or `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Q(pub BigRational);

impl Q {
    pub fn int(n: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Q(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}

impl From<BigRational> for Q {
    fn from(r: BigRational) -> Self {
        Q(r)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BigRational::from_str(&s)
            .map(Q)
            .map_err(|_| serde::de::Error::custom(format!("invalid rational `{s}`")))
    }
}

/// A re-evaluable predicate over exact witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Check {
    Holds { value: bool },
    Eq { lhs: Q, rhs: Q },
    Ne { lhs: Q, rhs: Q },
    Lt { lhs: Q, rhs: Q },
    Any { of: Vec<Check> },
    All { of: Vec<Check> },
}

impl Check {
    pub fn holds(value: bool) -> Self {
        Check::Holds { value }
    }

    pub fn eq(lhs: Q, rhs: Q) -> Self {
        Check::Eq { lhs, rhs }
    }

    pub fn ne(lhs: Q, rhs: Q) -> Self {
        Check::Ne { lhs, rhs }
    }

    pub fn lt(lhs: Q, rhs: Q) -> Self {
        Check::Lt { lhs, rhs }
    }

    pub fn eval(&self) -> bool {
        match self {
            Check::Holds { value } => *value,
            Check::Eq { lhs, rhs } => lhs == rhs,
            Check::Ne { lhs, rhs } => lhs != rhs,
            Check::Lt { lhs, rhs } => lhs < rhs,
            Check::Any { of } => of.iter().any(Check::eval),
            Check::All { of } => of.iter().all(Check::eval),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, of: &[Check], sep: &str| {
            let parts: Vec<String> = of.iter().map(|c| format!("({c})")).collect();
            f.write_str(&parts.join(sep))
        };
        match self {
            Check::Holds { value } => write!(f, "{value}"),
            Check::Eq { lhs, rhs } => write!(f, "{lhs} = {rhs}"),
            Check::Ne { lhs, rhs } => write!(f, "{lhs} != {rhs}"),
            Check::Lt { lhs, rhs } => write!(f, "{lhs} < {rhs}"),
            Check::Any { of } => list(f, of, " or "),
            Check::All { of } => list(f, of, " and "),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    /// A hypothesis of the criterion; failure means the criterion cannot be invoked.
    Hypothesis,
    /// An excluded boundary case; failure means the criterion does not apply.
    Exclusion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub id: String,
    pub text: String,
    pub kind: ConditionKind,
    pub check: Check,
    pub satisfied: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub overridden: bool,
}

impl Condition {
    pub fn new(id: &str, text: impl Into<String>, kind: ConditionKind, check: Check) -> Self {
        Self {
            id: id.to_string(),
            text: text.into(),
            kind,
            satisfied: check.eval(),
            check,
            overridden: false,
        }
    }

    pub fn hypothesis(id: &str, text: impl Into<String>, check: Check) -> Self {
        Self::new(id, text, ConditionKind::Hypothesis, check)
    }

    pub fn exclusion(id: &str, text: impl Into<String>, check: Check) -> Self {
        Self::new(id, text, ConditionKind::Exclusion, check)
    }

    /// Counts as met for the verdict.
    pub fn effective(&self) -> bool {
        self.satisfied || self.overridden
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    /// Not represented by any finite-order diffeomorphism.
    ObstructedNoFiniteOrder,
    /// Not represented by any diffeomorphism of order 2.
    ObstructedNoInvolution,
    /// The mapping class is not isotopic to the identity.
    NontrivialClass,
    /// An excluded boundary case; the criterion says nothing.
    Inapplicable,
    /// A hypothesis of the criterion fails.
    HypothesisFailure,
}

impl Conclusion {
    pub fn is_obstructed(self) -> bool {
        matches!(
            self,
            Conclusion::ObstructedNoFiniteOrder | Conclusion::ObstructedNoInvolution
        )
    }

    /// Short label used in tables.
    pub fn label(self) -> &'static str {
        match self {
            Conclusion::ObstructedNoFiniteOrder => "Obstructed (no finite order)",
            Conclusion::ObstructedNoInvolution => "Obstructed (no involution)",
            Conclusion::NontrivialClass => "NontrivialClass",
            Conclusion::Inapplicable => "Inapplicable",
            Conclusion::HypothesisFailure => "HypothesisFailure",
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub rule: String,
    pub subject: String,
    pub mapping_class: String,
    pub conclusion: Conclusion,
    /// Conclusion reached when every condition is met.
    pub claim: Conclusion,
    pub conditions: Vec<Condition>,
    pub citations: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
    /// Verdicts on covers used to confirm this one.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub supporting: Vec<Verdict>,
}

/// Grades a condition list: hypotheses first, then exclusions.
pub fn decide(claim: Conclusion, conditions: &[Condition]) -> Conclusion {
    let failing = |kind| conditions.iter().any(|c| c.kind == kind && !c.effective());
    if failing(ConditionKind::Hypothesis) {
        Conclusion::HypothesisFailure
    } else if failing(ConditionKind::Exclusion) {
        Conclusion::Inapplicable
    } else {
        claim
    }
}

impl Verdict {
    pub fn new(
        rule: &str,
        subject: impl Into<String>,
        mapping_class: impl Into<String>,
        claim: Conclusion,
        conditions: Vec<Condition>,
    ) -> Self {
        Verdict {
            rule: rule.to_string(),
            subject: subject.into(),
            mapping_class: mapping_class.into(),
            conclusion: decide(claim, &conditions),
            claim,
            conditions,
            citations: vec![rule.to_string()],
            notes: Vec::new(),
            discrepancy: None,
            supporting: Vec::new(),
        }
    }

    /// Conclusion recomputed from the recorded witnesses alone.
    pub fn reevaluate(&self) -> Conclusion {
        let fresh: Vec<Condition> = self
            .conditions
            .iter()
            .map(|c| Condition {
                satisfied: c.check.eval(),
                ..c.clone()
            })
            .collect();
        decide(self.claim, &fresh)
    }

    /// Every recorded flag agrees with its witnesses, recursively.
    pub fn certify(&self) -> bool {
        self.conditions
            .iter()
            .all(|c| c.satisfied == c.check.eval())
            && self.reevaluate() == self.conclusion
            && self.supporting.iter().all(Verdict::certify)
    }

    pub fn condition(&self, id: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.id == id)
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        self.write_report(&mut out, 0);
        out
    }

    fn write_report(&self, out: &mut String, depth: usize) {
        use std::fmt::Write;
        let pad = "  ".repeat(depth);
        let _ = writeln!(out, "{pad}{} / {}", self.subject, self.mapping_class);
        let _ = writeln!(out, "{pad}rule: {}", self.rule);
        for c in &self.conditions {
            let mark = match (c.satisfied, c.overridden) {
                (true, _) => "ok  ",
                (false, true) => "OVR ",
                (false, false) => "FAIL",
            };
            let _ = writeln!(out, "{pad}  [{mark}] {}: {}", c.text, c.check);
        }
        for n in &self.notes {
            let _ = writeln!(out, "{pad}  note: {n}");
        }
        if let Some(d) = &self.discrepancy {
            let _ = writeln!(out, "{pad}  discrepancy: {d}");
        }
        for s in &self.supporting {
            let _ = writeln!(out, "{pad}  confirmed on cover:");
            s.write_report(out, depth + 2);
        }
        let _ = writeln!(out, "{pad}conclusion: {}", self.conclusion);
    }
}

/// `n/2` as an exact rational.
pub(crate) fn half(n: i64) -> Q {
    Q::frac(n, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn checks_evaluate_exactly() {
        assert!(Check::ne(Q::frac(-19, 2), Q::int(3)).eval());
        assert!(!Check::lt(Q::int(2), Q::int(2)).eval());
        assert!(Check::Any {
            of: vec![Check::eq(Q::int(1), Q::int(0)), Check::holds(true)]
        }
        .eval());
        assert!(!Check::All {
            of: vec![Check::holds(true), Check::holds(false)]
        }
        .eval());
        assert!(half(0).0.is_zero());
    }

    #[test]
    fn grading() {
        let h = Condition::hypothesis("h", "h", Check::holds(false));
        let e = Condition::exclusion("e", "e", Check::holds(false));
        let ok = Condition::exclusion("ok", "ok", Check::holds(true));
        let c = Conclusion::ObstructedNoFiniteOrder;
        assert_eq!(
            decide(c, &[h.clone(), e.clone()]),
            Conclusion::HypothesisFailure
        );
        assert_eq!(
            decide(c, &[e.clone(), ok.clone()]),
            Conclusion::Inapplicable
        );
        assert_eq!(decide(c, &[ok]), c);
        let mut h2 = h;
        h2.overridden = true;
        assert_eq!(decide(c, &[h2]), c);
    }

    #[test]
    fn json_round_trip_recertifies() {
        let v = Verdict::new(
            "rule",
            "X",
            "T_S",
            Conclusion::ObstructedNoFiniteOrder,
            vec![Condition::exclusion(
                "k",
                "k != -sigma/2",
                Check::ne(Q::int(1), Q::int(4)),
            )],
        );
        let json = serde_json::to_string(&v).unwrap();
        assert!(json.contains(r#""lhs":"1""#));
        let back: Verdict = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert!(back.certify());

        let mut forged = back;
        forged.conditions[0].check = Check::ne(Q::int(4), Q::int(4));
        assert!(!forged.certify());
    }
}
