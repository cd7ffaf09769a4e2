//! Exact certificate for the (−1)-eigenlattice of the K3 cover of the
//! Hitchin manifold: gluing of `D4(2) ⊕ U(2)` pieces, the vectors `r^±` and
//! the two commuting involutions acting on them.

use std::fmt::Write as _;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::action::Isometry;
use crate::error::{Error, Result};
use crate::lattice::{
    discriminant_group, glue_search, overlattice_of, Lattice, Overlattice, Parity, RatVector,
};
use crate::linalg::{IntMatrix, IntRow, RatMatrix};

const PLUS: Range<usize> = 0..6;
const MINUS: Range<usize> = 6..12;
const D4_PLUS: Range<usize> = 0..4;
const D4_MINUS: Range<usize> = 6..10;
const RANK: usize = 12;

pub fn build_k3_lattice() -> Lattice {
    Lattice::parse("2*E8 + 3*U").expect("literal parses")
}

/// Overlattice of `D4(s) ⊕ D4(s)` cut out by the glue found for `s = 1`.
#[derive(Debug, Clone)]
pub struct D4Gluing {
    pub scale: i64,
    pub base: Lattice,
    pub glue: Vec<RatVector>,
    pub result: Overlattice,
}

pub fn glue_d4d4_to_e8(scale: i64) -> Result<D4Gluing> {
    if scale != 1 && scale != 2 {
        return Err(Error::InvalidParams(format!(
            "D4 gluing scale must be 1 or 2, got {scale}"
        )));
    }
    let unit = Lattice::parse("2*D4")?;
    let e8 = Lattice::parse("E8")?.invariants();
    let glue = glue_search(&unit, &e8, 2)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Invariant("no gluing of D4 + D4 with E8 invariants".into()))?;
    let base = unit.rescale(scale)?;
    let result = overlattice_of(&base, &glue)?;
    Ok(D4Gluing {
        scale,
        base,
        glue,
        result,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SummandRange {
    pub name: &'static str,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenlatticeCertificate {
    #[serde(skip)]
    pub base: Lattice,
    #[serde(rename = "eigenlattice")]
    pub lattice: Overlattice,
    pub summand_map: Vec<SummandRange>,
    #[serde(serialize_with = "ints")]
    pub a_plus: Vec<BigInt>,
    #[serde(serialize_with = "ints")]
    pub a_minus: Vec<BigInt>,
    #[serde(serialize_with = "rats")]
    pub r_plus: RatVector,
    #[serde(serialize_with = "rats")]
    pub r_minus: RatVector,
    #[serde(serialize_with = "rat_rows")]
    pub glue: Vec<RatVector>,
    pub c1_action: Isometry,
    pub tau_action: Isometry,
}

fn ints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    IntRow(v).serialize(s)
}

fn rats<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

fn rat_rows<S: Serializer>(v: &[RatVector], s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = v
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    rows.serialize(s)
}

impl Serialize for Overlattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            gram: &'a IntMatrix,
            basis: &'a RatMatrix,
            #[serde(serialize_with = "int")]
            index: &'a BigInt,
        }
        fn int<S: Serializer>(v: &&BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
            IntRow(std::slice::from_ref(*v)).serialize(s)
        }
        View {
            gram: self.lattice.gram(),
            basis: &self.basis,
            index: &self.index,
        }
        .serialize(s)
    }
}

fn embed(pieces: &[(Range<usize>, &[BigRational])]) -> RatVector {
    let mut v = vec![BigRational::zero(); RANK];
    for (range, src) in pieces {
        for (dst, x) in v[range.clone()].iter_mut().zip(src.iter()) {
            *dst = x.clone();
        }
    }
    v
}

fn to_rat(v: &[BigInt]) -> RatVector {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

fn combine(a: &[BigInt], b: &[BigInt], sign: i64) -> RatVector {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    a.iter()
        .zip(b)
        .map(|(x, y)| BigRational::from_integer(x + y * sign) * &half)
        .collect()
}

/// Conjugate a diagonal action on base coordinates into the overlattice basis.
fn lift_diagonal(o: &Overlattice, diag: &[i64], name: &str) -> Result<Isometry> {
    let t = RatMatrix::diagonal(
        &diag
            .iter()
            .map(|&d| BigRational::from_integer(d.into()))
            .collect::<Vec<_>>(),
    );
    let bt = o.basis.transpose();
    let inv = bt
        .inverse()
        .ok_or_else(|| Error::Invariant("overlattice basis is singular".into()))?;
    let f = (&(&inv * &t) * &bt)
        .to_int()
        .ok_or_else(|| Error::Invariant(format!("{name} does not preserve the overlattice")))?;
    Isometry::new(o.lattice.clone(), f, true)
}

pub fn build_certificate() -> Result<EigenlatticeCertificate> {
    let base = Lattice::parse("D4(2) + U(2) + D4(2) + U(2)")?;
    let d4 = glue_d4d4_to_e8(2)?;
    let mut glue: Vec<RatVector> = d4
        .glue
        .iter()
        .map(|g| embed(&[(D4_PLUS, &g[0..4]), (D4_MINUS, &g[4..8])]))
        .collect();

    let mut a_plus = vec![BigInt::zero(); RANK];
    a_plus[4] = BigInt::one();
    a_plus[5] = -BigInt::one();
    let mut a_minus = vec![BigInt::zero(); RANK];
    a_minus[10] = BigInt::one();
    a_minus[11] = -BigInt::one();
    let r_plus = combine(&a_plus, &a_minus, 1);
    let r_minus = combine(&a_plus, &a_minus, -1);
    glue.push(r_plus.clone());

    let lattice = overlattice_of(&base, &glue)?;
    let c1 = lift_diagonal(&lattice, &[-1; RANK], "c1")?;
    let tau_diag: Vec<i64> = (0..RANK)
        .map(|i| if PLUS.contains(&i) { -1 } else { 1 })
        .collect();
    let tau = lift_diagonal(&lattice, &tau_diag, "tau")?;

    let cert = EigenlatticeCertificate {
        base,
        lattice,
        summand_map: vec![
            SummandRange {
                name: "D4(2) + U(2), eps = +",
                start: PLUS.start,
                end: PLUS.end,
            },
            SummandRange {
                name: "D4(2) + U(2), eps = -",
                start: MINUS.start,
                end: MINUS.end,
            },
        ],
        a_plus,
        a_minus,
        r_plus,
        r_minus,
        glue,
        c1_action: c1,
        tau_action: tau,
    };
    let report = verify_certificate(&cert);
    if let Some(bad) = report.checks.iter().find(|c| !c.passed) {
        return Err(Error::Invariant(format!(
            "{}: {}",
            bad.statement, bad.detail
        )));
    }
    Ok(cert)
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateCheck {
    pub id: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub checks: Vec<CertificateCheck>,
    /// `s` with `τ(r⁺) = s·r⁻`, if `τ(r⁺) = ±r⁻`.
    pub tau_sign: Option<i64>,
}

impl CertificateReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn transcript(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.checks.iter().enumerate() {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "[{mark}] {}. {}", i + 1, c.statement);
            let _ = writeln!(out, "       {}", c.detail);
        }
        let _ = write!(
            out,
            "{}/{} identities hold",
            self.passed(),
            self.checks.len()
        );
        if let Some(s) = self.tau_sign {
            let _ = write!(out, "; tau(r+) = {}r-", if s < 0 { "-" } else { "" });
        }
        out.push('\n');
        out
    }
}

struct Checker {
    checks: Vec<CertificateCheck>,
}

impl Checker {
    fn push(
        &mut self,
        id: &'static str,
        statement: &'static str,
        run: impl FnOnce() -> Result<(bool, String)>,
    ) {
        let (passed, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(CertificateCheck {
            id,
            statement,
            passed,
            detail,
        });
    }
}

fn rat_pair(g: &IntMatrix, x: &[BigRational], y: &[BigRational]) -> Result<BigRational> {
    g.to_rat().pair(x, y)
}

fn neg(v: &[BigRational]) -> RatVector {
    v.iter().map(|x| -x).collect()
}

fn fmt_vec(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Re-derive every identity of the certificate from raw matrix arithmetic.
/// Violations are reported, never raised.
pub fn verify_certificate(c: &EigenlatticeCertificate) -> CertificateReport {
    let g = c.base.gram();
    let o = &c.lattice;
    let coords = |v: &[BigRational]| o.coordinates(v);
    // apply an action given in overlattice coordinates to a base-coordinate vector
    let act = |f: &Isometry, v: &[BigRational]| -> Result<RatVector> {
        let y =
            coords(v).ok_or_else(|| Error::Invariant("vector not in the overlattice".into()))?;
        let fy = to_rat(&f.apply(&y)?);
        o.basis.transpose().mul_vec(&fy)
    };
    let mut ch = Checker { checks: Vec::new() };
    let mut tau_sign = None;

    ch.push("a_norms", "(a+)^2 = (a-)^2 = -4", || {
        let p = g.pair(&c.a_plus, &c.a_plus)?;
        let m = g.pair(&c.a_minus, &c.a_minus)?;
        Ok((
            p == BigInt::from(-4) && m == BigInt::from(-4),
            format!("(a+)^2 = {p}, (a-)^2 = {m}"),
        ))
    });
    ch.push("r_norms", "(r+)^2 = (r-)^2 = -2", || {
        let p = rat_pair(g, &c.r_plus, &c.r_plus)?;
        let m = rat_pair(g, &c.r_minus, &c.r_minus)?;
        let two = BigRational::from_integer((-2).into());
        Ok((p == two && m == two, format!("(r+)^2 = {p}, (r-)^2 = {m}")))
    });
    ch.push("r_orthogonal", "r+ . r- = 0", || {
        let p = rat_pair(g, &c.r_plus, &c.r_minus)?;
        Ok((p.is_zero(), format!("r+ . r- = {p}")))
    });
    ch.push("r_integral", "r+ and r- lie in the overlattice", || {
        let p = coords(&c.r_plus);
        let m = coords(&c.r_minus);
        let show = |v: &Option<Vec<BigInt>>| {
            v.as_ref()
                .map_or("none".to_string(), |v| fmt_vec(&to_rat(v)))
        };
        Ok((
            p.is_some() && m.is_some(),
            format!("coordinates {} and {}", show(&p), show(&m)),
        ))
    });
    ch.push("c1_action", "c1 is an isometry with c1(r+-) = -r+-", || {
        let iso = c.c1_action.preserves_form();
        let p = act(&c.c1_action, &c.r_plus)?;
        let m = act(&c.c1_action, &c.r_minus)?;
        let ok = iso && p == neg(&c.r_plus) && m == neg(&c.r_minus);
        Ok((
            ok,
            format!("c1(r+) = {}, c1(r-) = {}", fmt_vec(&p), fmt_vec(&m)),
        ))
    });
    ch.push(
        "tau_action",
        "tau is an isometry with tau(r+) = +-r- and tau(r-) = +-r+",
        || {
            let iso = c.tau_action.preserves_form();
            let p = act(&c.tau_action, &c.r_plus)?;
            let m = act(&c.tau_action, &c.r_minus)?;
            let sign_of = |img: &RatVector, target: &RatVector| {
                if img == target {
                    Some(1)
                } else if *img == neg(target) {
                    Some(-1)
                } else {
                    None
                }
            };
            let sp = sign_of(&p, &c.r_minus);
            let sm = sign_of(&m, &c.r_plus);
            tau_sign = sp;
            let show = |s: Option<i64>| s.map_or("none".to_string(), |s| format!("{s:+}"));
            Ok((
                iso && sp.is_some() && sm.is_some(),
                format!(
                    "tau(r+) = {} (sign {}), tau(r-) = {} (sign {})",
                    fmt_vec(&p),
                    show(sp),
                    fmt_vec(&m),
                    show(sm)
                ),
            ))
        },
    );
    ch.push("klein_four", "c1^2 = tau^2 = 1 and c1 tau = tau c1", || {
        let (f, t) = (c.c1_action.matrix(), c.tau_action.matrix());
        let ok =
            c.c1_action.is_involution() && c.tau_action.is_involution() && &(f * t) == &(t * f);
        let prod = c.c1_action.compose(&c.tau_action)?;
        Ok((
            ok,
            format!("c1 tau is an involution: {}", prod.is_involution()),
        ))
    });
    ch.push(
        "d4_gluing",
        "D4 + D4 glues to a lattice with E8 invariants (E8(2) at scale 2)",
        || {
            let one = glue_d4d4_to_e8(1)?;
            let two = glue_d4d4_to_e8(2)?;
            let i1 = one.result.lattice.invariants();
            let i2 = two.result.lattice.invariants();
            let e8 = Lattice::parse("E8")?.invariants();
            let ok = i1 == e8
                && one.result.index == BigInt::from(4)
                && one.glue.len() == 2
                && i2.det.abs() == BigInt::from(256)
                && i2.parity == Parity::Even
                && i2.rank == 8;
            Ok((
                ok,
                format!(
                    "scale 1: rank {}, det {}, b+ {}, {:?}, index {}; scale 2: |det| {}",
                    i1.rank,
                    i1.det,
                    i1.b_plus,
                    i1.parity,
                    one.result.index,
                    i2.det.abs()
                ),
            ))
        },
    );
    ch.push(
        "final_lattice",
        "rank 12, even, |det| = 2^10, discriminant group of E8(2) + U(2) + U, det(base) = det * index^2",
        || {
            let inv = o.lattice.invariants();
            let disc = discriminant_group(&o.lattice)?;
            let model = discriminant_group(&Lattice::parse("E8(2) + U(2) + U")?)?;
            let bookkeeping = c.base.det().abs() == inv.det.abs() * &o.index * &o.index;
            let ok = inv.rank == 12
                && inv.parity == Parity::Even
                && inv.det.abs() == BigInt::from(1024)
                && disc == model
                && bookkeeping;
            Ok((
                ok,
                format!(
                    "rank {}, {:?}, det {}, index {}, discriminant {} vs {}",
                    inv.rank, inv.parity, inv.det, o.index, disc, model
                ),
            ))
        },
    );
    CertificateReport {
        checks: ch.checks,
        tau_sign,
    }
}
