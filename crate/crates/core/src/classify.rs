//! Indefinite unimodular forms are determined by rank, signature and parity:
//! odd ones are `p⟨1⟩ ⊕ q⟨−1⟩`, even ones `±r·E8 ⊕ q·U`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Base, FormExpr, Lattice, Parity, Summand};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassDescriptor {
    pub parity: Parity,
    pub normal_form: FormExpr,
}

fn summand(base: Base, scale: i64, mult: usize) -> Option<Summand> {
    (mult > 0).then(|| Summand::new(base, scale, mult as u32).expect("nonzero scale"))
}

pub fn classify_indefinite(rank: usize, signature: i64, parity: Parity) -> Result<ClassDescriptor> {
    let rank_i = rank as i64;
    if signature.abs() >= rank_i {
        return Err(Error::Classification(format!(
            "rank {rank}, signature {signature} is definite"
        )));
    }
    if (rank_i - signature) % 2 != 0 {
        return Err(Error::Classification(format!(
            "rank {rank} and signature {signature} have different parities"
        )));
    }
    let summands: Vec<Summand> = match parity {
        Parity::Odd => {
            let p = ((rank_i + signature) / 2) as usize;
            let q = ((rank_i - signature) / 2) as usize;
            [summand(Base::One, 1, p), summand(Base::MinusOne, 1, q)]
                .into_iter()
                .flatten()
                .collect()
        }
        Parity::Even => {
            if signature % 8 != 0 {
                return Err(Error::Classification(format!(
                    "even form with signature {signature} not divisible by 8"
                )));
            }
            let r = (signature.abs() / 8) as usize;
            let q = (rank - 8 * r) / 2;
            if q < 1 {
                return Err(Error::Classification("no hyperbolic summand left".into()));
            }
            // E8 is negative definite; positive signature uses E8(-1)
            let e8_scale = if signature > 0 { -1 } else { 1 };
            [summand(Base::E8, e8_scale, r), summand(Base::U, 1, q)]
                .into_iter()
                .flatten()
                .collect()
        }
    };
    Ok(ClassDescriptor {
        parity,
        normal_form: FormExpr::new(summands),
    })
}

fn class_triple(l: &Lattice) -> Result<(usize, i64, Parity)> {
    let inv = l.invariants();
    if !inv.unimodular {
        return Err(Error::Classification("lattice is not unimodular".into()));
    }
    if !inv.indefinite() {
        return Err(Error::Classification("lattice is definite".into()));
    }
    Ok((inv.rank, inv.signature, inv.parity))
}

pub fn same_indefinite_class(a: &Lattice, b: &Lattice) -> Result<bool> {
    Ok(class_triple(a)? == class_triple(b)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// Sums of Teichner blocks along wedges, plus `S²×S²` summands.
    X { b2t: u64 },
    /// Sums of Enriques blocks along loops, plus `S²×S²` summands.
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub family: Family,
    pub signature: i64,
    /// Index of the first family member.
    pub first_n: usize,
    /// Rank of the first member; later members add 2 each.
    pub min_rank: usize,
    pub step: usize,
    /// Ranks of indefinite unimodular forms of this signature and parity
    /// that lie below `min_rank` and are therefore not realized.
    pub excluded_ranks: Vec<usize>,
    /// Whether the realized ranks have the parity forced by the signature
    /// (rank ≡ signature mod 2).
    pub parity_consistent: bool,
}

impl CoverageReport {
    pub fn realized_rank(&self, n: usize) -> Option<usize> {
        (n >= self.first_n).then(|| self.min_rank + self.step * (n - self.first_n))
    }
}

pub fn family_coverage(family: Family, signature: i64) -> Result<CoverageReport> {
    if signature == 0 {
        return Err(Error::Precondition("signature must be nonzero".into()));
    }
    let s = signature.unsigned_abs() as usize;
    let (first_n, min_rank, first_indefinite) = match family {
        Family::X { b2t } => {
            if b2t == 0 {
                return Err(Error::InvalidParams("b2(T) must be positive".into()));
            }
            (1, s * (b2t as usize + 4) - 4 + 2, s + 2)
        }
        Family::Y => {
            if signature % 8 != 0 {
                return Err(Error::Precondition(format!(
                    "even family needs signature divisible by 8, got {signature}"
                )));
            }
            let r = s / 8;
            (0, 12 * r - 2, 8 * r + 2)
        }
    };
    let excluded_ranks = (first_indefinite..min_rank).step_by(2).collect();
    Ok(CoverageReport {
        family,
        signature,
        first_n,
        min_rank,
        step: 2,
        excluded_ranks,
        parity_consistent: (min_rank + s) % 2 == 0,
    })
}
