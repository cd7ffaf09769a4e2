use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::Lattice;
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, IntValue};

/// Finite abelian group `ℤ/d₁ ⊕ ℤ/d₂ ⊕ …` with `d₁ | d₂ | …`, each `dᵢ ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AbGroup {
    pub invariant_factors: Vec<BigInt>,
}

impl AbGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("trivial");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for AbGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.invariant_factors.iter().map(IntValue))
    }
}

/// Generators of `L*/L` in lattice coordinates, one per nontrivial invariant
/// factor, paired with their orders.
pub(crate) fn dual_generators(lat: &Lattice) -> Result<Vec<(Vec<BigRational>, BigInt)>> {
    if !lat.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    // U·G·V = D, so G⁻¹ = V·D⁻¹·U and L* = G⁻¹ℤⁿ = V·D⁻¹ℤⁿ.
    let s = smith_normal_form(lat.gram());
    Ok(s.diagonal()
        .into_iter()
        .enumerate()
        .filter(|(_, d)| !d.is_one())
        .map(|(j, d)| {
            let gen =
                s.v.column(j)
                    .into_iter()
                    .map(|x| BigRational::new(x, d.clone()))
                    .collect();
            (gen, d)
        })
        .collect())
}

pub fn discriminant_group(lat: &Lattice) -> Result<AbGroup> {
    if !lat.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let s = smith_normal_form(lat.gram());
    let invariant_factors = s
        .diagonal()
        .into_iter()
        .filter(|d| !d.is_one() && !d.is_zero())
        .collect();
    Ok(AbGroup { invariant_factors })
}
