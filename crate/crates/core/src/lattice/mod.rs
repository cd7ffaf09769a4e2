//! Integral lattices: standard building blocks, invariants, discriminant
//! groups and overlattice gluing.

mod discriminant;
mod expr;
mod glue;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inertia, IntMatrix, IntValue};

pub use discriminant::{discriminant_group, AbGroup};
pub use expr::{Base, FormExpr, Summand};
pub use glue::{glue_search, overlattice, overlattice_of, GlueSpec, Overlattice, RatVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn combine(self, other: Parity) -> Parity {
        if self == Parity::Even && other == Parity::Even {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::parse(0, format!("unknown parity `{other}`"))),
        }
    }
}

/// A finite-rank integral lattice given by its symmetric Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeInvariants {
    pub rank: usize,
    pub b_plus: usize,
    pub b_minus: usize,
    pub signature: i64,
    #[serde(serialize_with = "ser_bigint")]
    pub det: BigInt,
    pub parity: Parity,
    pub unimodular: bool,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    IntValue(x).serialize(s)
}

impl LatticeInvariants {
    pub fn nondegenerate(&self) -> bool {
        self.b_plus + self.b_minus == self.rank
    }

    pub fn indefinite(&self) -> bool {
        self.b_plus > 0 && self.b_minus > 0
    }
}

impl fmt::Display for LatticeInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank {}, b+ {}, b- {}, signature {}, det {}, {}, {}",
            self.rank,
            self.b_plus,
            self.b_minus,
            self.signature,
            self.det,
            self.parity,
            if self.unimodular {
                "unimodular"
            } else {
                "not unimodular"
            }
        )
    }
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Self { gram, label: None })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    /// The rank-zero lattice.
    pub fn empty() -> Self {
        Self {
            gram: IntMatrix::zeros(0, 0),
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// Standard lattice described by a form expression.
    pub fn standard(expr: &FormExpr) -> Self {
        expr.build()
    }

    pub fn parse(expr: &str) -> Result<Self> {
        Ok(expr.parse::<FormExpr>()?.build())
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a} + {b}")),
            (Some(a), None) if other.rank() == 0 => Some(a.clone()),
            (None, Some(b)) if self.rank() == 0 => Some(b.clone()),
            _ => None,
        };
        Lattice {
            gram: self.gram.block_diag(&other.gram),
            label,
        }
    }

    pub fn rescale(&self, n: i64) -> Result<Lattice> {
        if n == 0 {
            return Err(Error::ZeroScale(n));
        }
        Ok(Lattice {
            gram: self.gram.scale(&BigInt::from(n)),
            label: self.label.as_ref().map(|l| format!("({l})({n})")),
        })
    }

    /// Same lattice with the opposite form.
    pub fn negate(&self) -> Lattice {
        Lattice {
            gram: -&self.gram,
            label: self.label.as_deref().map(|l| match unwrap_call(l, "-") {
                Some(inner) => inner.to_string(),
                None => format!("-({l})"),
            }),
        }
    }

    pub fn det(&self) -> BigInt {
        self.gram.det().expect("gram is square")
    }

    pub fn parity(&self) -> Parity {
        let two = BigInt::from(2);
        if (0..self.rank()).all(|i| self.gram[(i, i)].is_multiple_of(&two)) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn invariants(&self) -> LatticeInvariants {
        let inertia = inertia(&self.gram.to_rat()).expect("gram is symmetric");
        let det = self.det();
        LatticeInvariants {
            rank: self.rank(),
            b_plus: inertia.positive,
            b_minus: inertia.negative,
            signature: inertia.positive as i64 - inertia.negative as i64,
            unimodular: det.abs().is_one(),
            det,
            parity: self.parity(),
        }
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.gram.pair(x, y)
    }

    pub fn norm(&self, x: &[BigInt]) -> Result<BigInt> {
        self.pair(x, x)
    }

    /// `c` is characteristic iff `c·x ≡ x·x (mod 2)` on every basis vector.
    pub fn is_characteristic(&self, c: &[BigInt]) -> Result<bool> {
        if c.len() != self.rank() {
            return Err(Error::Dimension(format!(
                "vector of length {} in a rank {} lattice",
                c.len(),
                self.rank()
            )));
        }
        let gc = self.gram.mul_vec(c)?;
        let two = BigInt::from(2);
        Ok((0..self.rank()).all(|i| (&gc[i] - &self.gram[(i, i)]).is_multiple_of(&two)))
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }
}

/// For `s = prefix(inner)` with balanced parentheses, returns `inner`.
pub(crate) fn unwrap_call<'a>(s: &'a str, prefix: &str) -> Option<&'a str> {
    let inner = s
        .strip_prefix(prefix)?
        .strip_prefix('(')?
        .strip_suffix(')')?;
    let mut depth = 0i32;
    for c in inner.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    (depth == 0).then_some(inner)
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            writeln!(f, "{l}")?;
        }
        write!(f, "{}", self.gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    fn lat(s: &str) -> Lattice {
        Lattice::parse(s).unwrap()
    }

    #[test]
    fn k3_and_enriques_forms() {
        let k3 = lat("2*E8 + 3*U").invariants();
        assert_eq!(
            (k3.rank, k3.b_plus, k3.b_minus, k3.signature),
            (22, 3, 19, -16)
        );
        assert_eq!(k3.parity, Parity::Even);
        assert!(k3.unimodular);

        let enriques = lat("E8").direct_sum(&lat("U")).invariants();
        assert_eq!((enriques.rank, enriques.signature), (10, -8));
        assert!(enriques.unimodular);
    }

    #[test]
    fn diagonal_minus_ones() {
        let h = lat("4*<-1>");
        assert_eq!(h.gram(), &IntMatrix::diagonal(&int_vec(&[-1, -1, -1, -1])));
        let inv = h.invariants();
        assert_eq!((inv.rank, inv.signature, inv.parity), (4, -4, Parity::Odd));
        assert!(inv.unimodular);
    }

    #[test]
    fn direct_sums() {
        let uu = lat("U").direct_sum(&lat("U"));
        assert_eq!((uu.rank(), uu.invariants().signature), (4, 0));
        let l = lat("E8 + U");
        assert_eq!(l.direct_sum(&Lattice::empty()), l);
    }

    #[test]
    fn rescaling() {
        let u2 = lat("U").rescale(2).unwrap();
        assert_eq!(u2.gram(), &IntMatrix::from_i64(&[&[0, 2], &[2, 0]]));
        assert_eq!(u2.det(), BigInt::from(-4));
        let e82 = lat("E8").rescale(2).unwrap();
        assert_eq!(e82.parity(), Parity::Even);
        assert_eq!(e82.det(), BigInt::from(256));
        assert_eq!(lat("E8").rescale(1).unwrap().gram(), lat("E8").gram());
        assert_eq!(lat("U").rescale(0).unwrap_err(), Error::ZeroScale(0));
    }

    #[test]
    fn negation_is_an_involution() {
        let l = lat("E8 + U");
        assert_eq!(l.negate().negate(), l);
        assert_eq!(l.negate().invariants().signature, 8);
        assert_eq!(unwrap_call("-(a) + -(b)", "-"), None);
    }

    #[test]
    fn hyperbolic_plane_invariants() {
        let inv = lat("U").invariants();
        assert_eq!((inv.rank, inv.signature, inv.parity), (2, 0, Parity::Even));
        assert!(inv.unimodular);
    }

    #[test]
    fn characteristic_vectors() {
        assert!(lat("E8").is_characteristic(&int_vec(&[0; 8])).unwrap());
        assert!(lat("5*<-1>").is_characteristic(&int_vec(&[1; 5])).unwrap());
        assert!(!lat("<1> + <-1>")
            .is_characteristic(&int_vec(&[1, 0]))
            .unwrap());
        assert!(lat("U").is_characteristic(&int_vec(&[1])).is_err());
    }
}
