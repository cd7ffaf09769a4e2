//! Homological actions of multi-twists, projective twists and
//! multi-reflections, with fixed sublattices and equivariant signatures.
//!
//! Matrices act on coordinate columns: `x ↦ F·x`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{inertia, kernel_basis, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Isometry {
    #[serde(skip)]
    lattice: Lattice,
    matrix: IntMatrix,
    /// Set for twist operators, whose mapping classes preserve spin structures.
    preserves_spin: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquivariantSig {
    pub b_f_plus: usize,
    pub b_f_minus: usize,
    pub sigma_f: i64,
}

impl Isometry {
    /// Checks `Fᵀ·G·F = G` before accepting `matrix`.
    pub fn new(lattice: Lattice, matrix: IntMatrix, preserves_spin: bool) -> Result<Self> {
        let n = lattice.rank();
        if matrix.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "{}x{} matrix on a rank {n} lattice",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let iso = Self {
            lattice,
            matrix,
            preserves_spin,
        };
        if !iso.preserves_form() {
            return Err(Error::Invariant("matrix does not preserve the form".into()));
        }
        Ok(iso)
    }

    pub fn identity(lattice: &Lattice) -> Self {
        Self {
            matrix: IntMatrix::identity(lattice.rank()),
            lattice: lattice.clone(),
            preserves_spin: true,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn preserves_spin(&self) -> bool {
        self.preserves_spin
    }

    pub fn preserves_form(&self) -> bool {
        let g = self.lattice.gram();
        let f = &self.matrix;
        &(&f.transpose() * g) * f == *g
    }

    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.lattice.gram() != other.lattice.gram() {
            return Err(Error::Dimension("isometries of different lattices".into()));
        }
        Ok(Isometry {
            lattice: self.lattice.clone(),
            matrix: self.matrix.try_mul(&other.matrix)?,
            preserves_spin: self.preserves_spin && other.preserves_spin,
        })
    }

    pub fn is_involution(&self) -> bool {
        (&self.matrix * &self.matrix).is_identity()
    }
}

/// Validates orthogonality and returns each class's self-intersection.
fn class_norms(lat: &Lattice, classes: &[Vec<BigInt>]) -> Result<Vec<BigInt>> {
    let n = lat.rank();
    if let Some(c) = classes.iter().find(|c| c.len() != n) {
        return Err(Error::Dimension(format!(
            "class of length {} in a rank {n} lattice",
            c.len()
        )));
    }
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if !lat.pair(&classes[i], &classes[j])?.is_zero() {
                return Err(Error::NotOrthogonal(i, j));
            }
        }
    }
    classes.iter().map(|c| lat.norm(c)).collect()
}

/// `x ↦ x − Σ 2(x·cᵢ)/(cᵢ²)·cᵢ`, requiring `2/cᵢ²` to be an integer.
fn reflection_sum(lat: &Lattice, classes: &[Vec<BigInt>], norms: &[BigInt]) -> IntMatrix {
    let n = lat.rank();
    let mut f = IntMatrix::identity(n);
    for (c, norm) in classes.iter().zip(norms) {
        let coeff = BigInt::from(2) / norm;
        let gc = lat.gram().mul_vec(c).expect("length checked");
        for i in 0..n {
            for j in 0..n {
                f[(i, j)] -= &coeff * &c[i] * &gc[j];
            }
        }
    }
    f
}

/// Picard–Lefschetz action of disjoint spheres with self-intersection ±2.
pub fn multi_twist_operator(lat: &Lattice, classes: &[Vec<BigInt>]) -> Result<Isometry> {
    let norms = class_norms(lat, classes)?;
    for (index, norm) in norms.iter().enumerate() {
        if norm.abs() != BigInt::from(2) {
            return Err(Error::SelfIntersection {
                index,
                found: norm.to_string(),
                expected: "±2".into(),
            });
        }
    }
    Isometry::new(lat.clone(), reflection_sum(lat, classes, &norms), true)
}

/// Simultaneous reflection in disjoint exceptional classes.
///
/// All classes must have self-intersection −1, or all +1 (the mirror case).
pub fn multi_reflection_operator(lat: &Lattice, classes: &[Vec<BigInt>]) -> Result<Isometry> {
    let norms = class_norms(lat, classes)?;
    for (index, norm) in norms.iter().enumerate() {
        if !norm.abs().is_one() {
            return Err(Error::SelfIntersection {
                index,
                found: norm.to_string(),
                expected: "-1".into(),
            });
        }
    }
    if norms.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::MixedSigns);
    }
    Isometry::new(lat.clone(), reflection_sum(lat, classes, &norms), false)
}

/// A projective twist acts trivially on `H₂`.
pub fn projective_twist_operator(lat: &Lattice) -> Isometry {
    Isometry::identity(lat)
}

/// Saturated sublattice `ker(F − I)`, as basis rows, with its rank.
pub fn fixed_sublattice(f: &Isometry) -> (IntMatrix, usize) {
    let n = f.matrix.rows();
    let basis = kernel_basis(&(&f.matrix - &IntMatrix::identity(n)));
    let rank = basis.rows();
    (basis, rank)
}

/// Inertia of the form restricted to the fixed sublattice of an involution.
pub fn involution_signatures(f: &Isometry) -> Result<EquivariantSig> {
    if !f.is_involution() {
        return Err(Error::NotInvolution);
    }
    let (basis, _) = fixed_sublattice(f);
    let restricted = f.lattice.gram().congruence(&basis)?;
    let i = inertia(&restricted.to_rat())?;
    Ok(EquivariantSig {
        b_f_plus: i.positive,
        b_f_minus: i.negative,
        sigma_f: i.positive as i64 - i.negative as i64,
    })
}
