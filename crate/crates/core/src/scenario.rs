//! Scenario files: a manifold build expression plus a mapping class.
//!
//! ```json
//! {
//!   "build": "Hitchin",
//!   "mapping_class": {
//!     "type": "projective_twist",
//!     "config": { "components": [
//!       { "kind": "projective_plane", "euler": -1, "count": 1, "essential": true }
//!     ] }
//!   },
//!   "options": { "as_paper": false, "format": "json" }
//! }
//! ```
//!
//! Multi-reflections name `X′` and `k`; `build` must describe `X′ # k·CP2bar`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::{validate_config, BuildExpr, Manifold, ManifoldSummary, SurfaceConfig};
use crate::obstruction::{
    check_multi_reflection, check_multi_twist, check_multi_twist_spin, check_projective_twist,
    projective_twist_nontrivial, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MappingClass {
    MultiTwist {
        config: SurfaceConfig,
    },
    ProjectiveTwist {
        config: SurfaceConfig,
    },
    MultiReflection {
        k: u64,
        xprime: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        h1_ok: Option<bool>,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub as_paper: bool,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub build: String,
    pub mapping_class: MappingClass,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub build: String,
    pub manifold: ManifoldSummary,
    pub mapping_class: MappingClass,
    pub as_paper: bool,
    pub verdicts: Vec<Verdict>,
}

fn build(expr: &str) -> Result<Manifold> {
    expr.parse::<BuildExpr>()?.build()
}

fn checked(x: &Manifold, cfg: &SurfaceConfig) -> Result<()> {
    let v = validate_config(x, cfg);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Violations(v))
    }
}

impl Scenario {
    pub fn parse(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| {
            Error::parse(
                0,
                format!("scenario line {} column {}: {e}", e.line(), e.column()),
            )
        })
    }

    /// Run the scenario; `as_paper` is or-ed with the file's own option.
    pub fn run(&self, as_paper: bool) -> Result<ScenarioReport> {
        let as_paper = as_paper || self.options.as_paper;
        let x = build(&self.build)?;
        let verdicts = match &self.mapping_class {
            MappingClass::MultiTwist { config } => {
                checked(&x, config)?;
                if config.eulers().len() > 1 {
                    vec![check_multi_twist_spin(&x, config)?]
                } else {
                    vec![check_multi_twist(&x, config)?]
                }
            }
            MappingClass::ProjectiveTwist { config } => {
                checked(&x, config)?;
                vec![
                    check_projective_twist(&x, config)?,
                    projective_twist_nontrivial(&x),
                ]
            }
            MappingClass::MultiReflection { k, xprime, h1_ok } => {
                let xp = build(xprime)?;
                let k_i = i64::try_from(*k)
                    .map_err(|_| Error::InvalidParams(format!("k = {k} is too large")))?;
                if (x.chi, x.sigma, x.b1) != (xp.chi + k_i, xp.sigma - k_i, xp.b1) {
                    return Err(Error::Precondition(format!(
                        "build `{}` does not match X' # {k} CP2bar with X' = `{}`",
                        self.build, xprime
                    )));
                }
                vec![check_multi_reflection(&xp, *k, *h1_ok, as_paper)?]
            }
        };
        Ok(ScenarioReport {
            build: x.name.clone(),
            manifold: x.summary(),
            mapping_class: self.mapping_class.clone(),
            as_paper,
            verdicts,
        })
    }
}

impl ScenarioReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let m = &self.manifold;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}: chi {}, b2 {}, sigma {}, {:?}, pi1 {}, spin {}, cover spin {}",
            m.name, m.chi, m.b2, m.sigma, m.parity, m.pi1, m.spin, m.cover_spin
        );
        for v in &self.verdicts {
            let _ = writeln!(out, "\n=> {}", v.conclusion);
            out.push_str(&v.report());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstruction::Conclusion;

    #[test]
    fn hitchin_projective() {
        let s = Scenario::parse(
            r#"{"build": "Hitchin", "mapping_class": {"type": "projective_twist",
                "config": {"components": [{"kind": "projective_plane", "euler": -1, "count": 1, "essential": true}]}}}"#,
        )
        .unwrap();
        let r = s.run(false).unwrap();
        let c: Vec<_> = r.verdicts.iter().map(|v| v.conclusion).collect();
        assert_eq!(
            c,
            [
                Conclusion::ObstructedNoFiniteOrder,
                Conclusion::NontrivialClass
            ]
        );
        assert!(r.to_text().contains("Hitchin"));
    }

    #[test]
    fn enriques_boundary() {
        let s = Scenario::parse(
            r#"{"build": "Enriques", "mapping_class": {"type": "multi_twist",
                "config": {"components": [{"kind": "sphere", "euler": -2, "count": 4}]}}}"#,
        )
        .unwrap();
        assert_eq!(
            s.run(false).unwrap().verdicts[0].conclusion,
            Conclusion::Inapplicable
        );
    }

    #[test]
    fn capacity_violation() {
        let s = Scenario::parse(
            r#"{"build": "Enriques", "mapping_class": {"type": "multi_twist",
                "config": {"components": [{"kind": "sphere", "euler": -2, "count": 9}]}}}"#,
        )
        .unwrap();
        assert!(matches!(s.run(false), Err(Error::Violations(v)) if v.len() == 1));
    }

    #[test]
    fn reflection_and_override() {
        let src = r#"{"build": "csum(Hitchin, CP2bar)", "mapping_class":
            {"type": "multi_reflection", "k": 1, "xprime": "Hitchin"}}"#;
        let s = Scenario::parse(src).unwrap();
        assert_eq!(
            s.run(false).unwrap().verdicts[0].conclusion,
            Conclusion::HypothesisFailure
        );
        let r = s.run(true).unwrap();
        assert_eq!(r.verdicts[0].conclusion, Conclusion::ObstructedNoInvolution);
        assert!(r.to_json().contains("\"discrepancy\""));

        let wrong = src.replace("csum(Hitchin, CP2bar)", "Hitchin");
        assert!(Scenario::parse(&wrong).unwrap().run(false).is_err());
    }

    #[test]
    fn malformed() {
        for bad in [
            "",
            "{}",
            "not json",
            r#"{"build": "K3", "mapping_class": {"type": "spin"}}"#,
        ] {
            assert!(
                matches!(Scenario::parse(bad), Err(Error::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn json_is_deterministic() {
        let s = Scenario::parse(
            r#"{"build": "K3", "mapping_class": {"type": "multi_twist",
                "config": {"components": [{"kind": "sphere", "euler": -2, "count": 1}]}}}"#,
        )
        .unwrap();
        assert_eq!(
            s.run(false).unwrap().to_json(),
            s.run(false).unwrap().to_json()
        );
    }
}
