//! Reproduction suite over the example families: `X_{s,n}` built from
//! Teichner blocks, `Y_{r,n}` from Enriques blocks, `Z_{m,n} = mH # n·CP2bar`,
//! elliptic quotients, named boundary cases and the eigenlattice certificate.

use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;

use crate::degtyarev::{build_certificate, verify_certificate};
use crate::error::Result;
use crate::manifold::{BuildExpr, Manifold, SurfaceConfig};
use crate::obstruction::{check_projective_twist, Conclusion, Verdict};
use crate::scenario::{MappingClass, Options, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowInvariants {
    pub chi: i64,
    pub b2: i64,
    pub sigma: i64,
    pub pi1: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Verdict {
        conclusions: Vec<Conclusion>,
    },
    Error {
        message: String,
    },
    Certificate {
        passed: usize,
        total: usize,
        tau_sign: Option<i64>,
    },
}

impl Outcome {
    /// First conclusion of a verdict outcome.
    pub fn conclusion(&self) -> Option<Conclusion> {
        match self {
            Outcome::Verdict { conclusions } => conclusions.first().copied(),
            _ => None,
        }
    }

    fn from_verdicts(vs: &[Verdict]) -> Self {
        Outcome::Verdict {
            conclusions: vs.iter().map(|v| v.conclusion).collect(),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Verdict { conclusions } => {
                let parts: Vec<&str> = conclusions.iter().map(|c| c.label()).collect();
                f.write_str(&parts.join(" + "))
            }
            Outcome::Error { message } => write!(f, "error: {message}"),
            Outcome::Certificate { passed, total, .. } => {
                write!(f, "{passed}/{total} identities pass")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub family: &'static str,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub build: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<RowInvariants>,
    pub mapping_class: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub as_paper: Option<Outcome>,
    pub rules: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn row(&self, label: &str) -> Option<&SuiteRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<34} {:>6} {:>5}  {:<26} {:<40} {}",
            "scenario", "b2", "sigma", "mapping class", "verdict", "rule"
        );
        for r in &self.rows {
            let (b2, s) = r
                .invariants
                .as_ref()
                .map_or((String::new(), String::new()), |i| {
                    (i.b2.to_string(), i.sigma.to_string())
                });
            let mut verdict = r.outcome.to_string();
            if let Some(p) = &r.as_paper {
                verdict = format!("{verdict} / as-paper: {p}");
            }
            let _ = writeln!(
                out,
                "{:<34} {:>6} {:>5}  {:<26} {:<40} {}",
                r.label,
                b2,
                s,
                r.mapping_class,
                verdict,
                r.rules.join(", ")
            );
        }
        out
    }
}

#[derive(Debug, Clone)]
enum Job {
    Scenario(Scenario),
    /// Literal and overridden runs of the same scenario.
    Both(Scenario),
    /// Direct evaluation that skips capacity validation.
    Probe {
        build: String,
        config: SurfaceConfig,
    },
    Certificate,
}

#[derive(Debug, Clone)]
struct Spec {
    family: &'static str,
    label: String,
    mapping_class: String,
    job: Job,
}

fn csum(parts: &[String]) -> String {
    match parts {
        [one] => one.clone(),
        _ => format!("csum({})", parts.join(", ")),
    }
}

fn copies(block: &str, n: u64) -> Option<String> {
    match n {
        0 => None,
        1 => Some(block.to_string()),
        _ => Some(format!("{block}#{n}")),
    }
}

/// `|c|` copies of `block` (or its mirror for `c > 0`) summed along a wedge of genus `g`.
fn wedge_family(block: &str, c: i64, g: u32, mirror_when_positive: bool) -> String {
    let unit = if (c > 0) == mirror_when_positive {
        format!("rev({block})")
    } else {
        block.to_string()
    };
    let n = c.unsigned_abs() as usize;
    if n == 1 {
        unit
    } else {
        format!("sumW(g={g}, {})", vec![unit; n].join(", "))
    }
}

pub fn x_family_build(s: i64, n: u64, b2t: u64) -> String {
    let xs = wedge_family(&format!("Teichner(b2={b2t})"), s, 2, true);
    csum(
        &[Some(xs), copies("S2xS2", n)]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>(),
    )
}

/// `Y_r` has signature `−8r`: Enriques copies for `r > 0`, mirrors for `r < 0`.
pub fn y_family_build(r: i64, n: u64) -> String {
    let yr = wedge_family("Enriques", r, 1, false);
    csum(
        &[Some(yr), copies("S2xS2", n)]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>(),
    )
}

pub fn z_family_build(m: u64, n: u64) -> String {
    csum(
        &[copies("Hitchin", m), copies("CP2bar", n)]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>(),
    )
}

fn twist(build: String, euler: i64, k: u64) -> Scenario {
    Scenario {
        build,
        mapping_class: MappingClass::MultiTwist {
            config: SurfaceConfig::spheres(euler, k),
        },
        options: Options::default(),
    }
}

fn projective(build: String, euler: i64, k: u64) -> Scenario {
    Scenario {
        build,
        mapping_class: MappingClass::ProjectiveTwist {
            config: SurfaceConfig::essential_planes(euler, k),
        },
        options: Options::default(),
    }
}

fn reflection(xprime: String, k: u64) -> Scenario {
    let ex = copies("CP2bar", k).expect("k >= 1");
    Scenario {
        build: csum(&[xprime.clone(), ex]),
        mapping_class: MappingClass::MultiReflection {
            k,
            xprime,
            h1_ok: None,
        },
        options: Options::default(),
    }
}

fn specs() -> Vec<Spec> {
    let mut out = Vec::new();
    let signed = [-4i64, -3, -2, -1, 1, 2, 3, 4];
    for b2t in [2u64, 10, 46] {
        for s in signed {
            for n in 1..=4u64 {
                out.push(Spec {
                    family: "X",
                    label: format!("X_{{{s},{n}}} b2T={b2t}"),
                    mapping_class: "T_S k=1".into(),
                    job: Job::Scenario(twist(x_family_build(s, n, b2t), 2 * s.signum(), 1)),
                });
            }
        }
    }
    for r in signed {
        for n in 0..=4u64 {
            let label = match (r, n) {
                (1, 0) => "Y_{1,0} = Enriques".to_string(),
                _ => format!("Y_{{{r},{n}}}"),
            };
            out.push(Spec {
                family: "Y",
                label,
                mapping_class: "T_S k=1".into(),
                job: Job::Scenario(twist(y_family_build(r, n), -2 * r.signum(), 1)),
            });
        }
    }
    for m in 1..=3u64 {
        for n in 0..=4u64 {
            out.push(Spec {
                family: "Z",
                label: format!("Z_{{{m},{n}}}"),
                mapping_class: "T_R k=1".into(),
                job: Job::Scenario(projective(z_family_build(m, n), -1, 1)),
            });
            if n >= 1 {
                let xprime = z_family_build(m, n - 1);
                out.push(Spec {
                    family: "Z",
                    label: format!("Z_{{{m},{n}}}"),
                    mapping_class: "R_S k=1".into(),
                    job: Job::Both(reflection(xprime, 1)),
                });
            }
        }
    }
    for n in 1..=4u64 {
        for p in [2u64, 3, 5] {
            out.push(Spec {
                family: "elliptic",
                label: format!("Elliptic({n},{p},1)"),
                mapping_class: "T_S k=1".into(),
                job: Job::Scenario(twist(format!("Elliptic(n={n},p={p},t=1)"), -2, 1)),
            });
        }
    }
    out.extend([
        Spec {
            family: "named",
            label: "Hitchin".into(),
            mapping_class: "T_R k=1".into(),
            job: Job::Scenario(projective("Hitchin".into(), -1, 1)),
        },
        Spec {
            family: "named",
            label: "rev(Hitchin)".into(),
            mapping_class: "T_R k=1 (Euler +1)".into(),
            job: Job::Scenario(projective("rev(Hitchin)".into(), 1, 1)),
        },
        Spec {
            family: "named",
            label: "K3 # 3 CP2bar".into(),
            mapping_class: "R_S k=3".into(),
            job: Job::Scenario(reflection("K3".into(), 3)),
        },
        Spec {
            family: "boundary",
            label: "Enriques, k = -sigma/2".into(),
            mapping_class: "T_S k=4".into(),
            job: Job::Scenario(twist("Enriques".into(), -2, 4)),
        },
        Spec {
            family: "boundary",
            label: "K3 # 16 CP2bar, k = -sigma/2".into(),
            mapping_class: "R_S k=16".into(),
            job: Job::Scenario(reflection("K3".into(), 16)),
        },
        Spec {
            family: "boundary",
            label: "X_{-1,1} b2T=2, sigma = -1".into(),
            mapping_class: "T_R k=1 (probe)".into(),
            job: Job::Probe {
                build: x_family_build(-1, 1, 2),
                config: SurfaceConfig::essential_planes(-1, 1),
            },
        },
        Spec {
            family: "boundary",
            label: "Hitchin, k = -sigma".into(),
            mapping_class: "T_R k=4 (probe)".into(),
            job: Job::Probe {
                build: "Hitchin".into(),
                config: SurfaceConfig::essential_planes(-1, 4),
            },
        },
        Spec {
            family: "certificate",
            label: "Degtyarev certificate".into(),
            mapping_class: "c1, tau on L^-1".into(),
            job: Job::Certificate,
        },
    ]);
    out
}

fn invariants(build: &str) -> Option<RowInvariants> {
    let x: Manifold = build.parse::<BuildExpr>().ok()?.build().ok()?;
    Some(RowInvariants {
        chi: x.chi,
        b2: x.b2(),
        sigma: x.sigma,
        pi1: x.pi1.to_string(),
    })
}

fn rules(vs: &[Verdict]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for v in vs {
        for c in &v.citations {
            if !out.contains(c) {
                out.push(c.clone());
            }
        }
    }
    out
}

fn outcome(r: Result<Vec<Verdict>>) -> (Outcome, Vec<Verdict>) {
    match r {
        Ok(vs) => (Outcome::from_verdicts(&vs), vs),
        Err(e) => (
            Outcome::Error {
                message: e.to_string(),
            },
            Vec::new(),
        ),
    }
}

fn evaluate(spec: Spec) -> SuiteRow {
    let mut row = SuiteRow {
        family: spec.family,
        label: spec.label,
        build: None,
        invariants: None,
        mapping_class: spec.mapping_class,
        outcome: Outcome::Error {
            message: String::new(),
        },
        as_paper: None,
        rules: Vec::new(),
        discrepancy: None,
    };
    match spec.job {
        Job::Scenario(s) => {
            let (o, vs) = outcome(s.run(false).map(|r| r.verdicts));
            row.invariants = invariants(&s.build);
            row.build = Some(s.build);
            row.outcome = o;
            row.rules = rules(&vs);
        }
        Job::Both(s) => {
            let (o, vs) = outcome(s.run(false).map(|r| r.verdicts));
            let (p, pvs) = outcome(s.run(true).map(|r| r.verdicts));
            row.invariants = invariants(&s.build);
            row.build = Some(s.build);
            row.outcome = o;
            row.as_paper = Some(p);
            row.rules = rules(&vs);
            row.discrepancy = pvs.iter().find_map(|v| v.discrepancy.clone());
        }
        Job::Probe { build, config } => {
            let run = build
                .parse::<BuildExpr>()
                .and_then(|e| e.build())
                .and_then(|x| check_projective_twist(&x, &config))
                .map(|v| vec![v]);
            let (o, vs) = outcome(run);
            row.invariants = invariants(&build);
            row.build = Some(build);
            row.outcome = o;
            row.rules = rules(&vs);
        }
        Job::Certificate => {
            row.outcome = match build_certificate() {
                Ok(c) => {
                    let r = verify_certificate(&c);
                    Outcome::Certificate {
                        passed: r.passed(),
                        total: r.checks.len(),
                        tau_sign: r.tau_sign,
                    }
                }
                Err(e) => Outcome::Error {
                    message: e.to_string(),
                },
            };
            row.rules = vec!["eigenlattice-certificate".into()];
        }
    }
    row
}

/// Evaluate every row; rows are computed in parallel and returned in a fixed order.
pub fn paper_suite() -> SuiteReport {
    SuiteReport {
        rows: specs().into_par_iter().map(evaluate).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_builds() {
        assert_eq!(x_family_build(-1, 1, 2), "csum(Teichner(b2=2), S2xS2)");
        assert_eq!(
            x_family_build(2, 3, 10),
            "csum(sumW(g=2, rev(Teichner(b2=10)), rev(Teichner(b2=10))), S2xS2#3)"
        );
        assert_eq!(y_family_build(1, 0), "Enriques");
        assert_eq!(
            y_family_build(-2, 1),
            "csum(sumW(g=1, rev(Enriques), rev(Enriques)), S2xS2)"
        );
        assert_eq!(z_family_build(2, 0), "Hitchin#2");
        assert_eq!(z_family_build(1, 3), "csum(Hitchin, CP2bar#3)");
    }

    #[test]
    fn suite_is_deterministic_and_complete() {
        let a = paper_suite();
        assert_eq!(a.to_json(), paper_suite().to_json());
        assert_eq!(a.rows.iter().filter(|r| r.family == "X").count(), 96);
        assert_eq!(a.rows.iter().filter(|r| r.family == "Y").count(), 40);
        assert_eq!(a.rows.iter().filter(|r| r.family == "Z").count(), 27);
        let y = a.row("Y_{1,0} = Enriques").unwrap();
        assert_eq!(
            y.outcome.conclusion(),
            Some(Conclusion::ObstructedNoFiniteOrder)
        );
        let cert = a.row("Degtyarev certificate").unwrap();
        assert!(matches!(
            cert.outcome,
            Outcome::Certificate {
                passed: 9,
                total: 9,
                ..
            }
        ));
        let z = a
            .rows
            .iter()
            .find(|r| r.label == "Z_{1,1}" && r.mapping_class == "R_S k=1")
            .unwrap();
        assert_eq!(z.outcome.conclusion(), Some(Conclusion::HypothesisFailure));
        assert_eq!(
            z.as_paper.as_ref().unwrap().conclusion(),
            Some(Conclusion::ObstructedNoInvolution)
        );
        assert!(z.discrepancy.is_some());
    }
}
