use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::discriminant::dual_generators;
use super::{FormExpr, Lattice, LatticeInvariants, Parity};
use crate::error::{Error, Result};
use crate::linalg::{hermite_normal_form, RatMatrix};

pub type RatVector = Vec<BigRational>;

/// Base lattice plus rational glue vectors in base coordinates.
#[derive(Debug, Clone)]
pub struct GlueSpec {
    pub base: FormExpr,
    pub glue_vectors: Vec<RatVector>,
}

#[derive(Debug, Clone)]
pub struct Overlattice {
    pub lattice: Lattice,
    /// Hermite-canonical basis of the overlattice, rows in base coordinates.
    pub basis: RatMatrix,
    pub index: BigInt,
}

impl Overlattice {
    /// Coordinates of a base-coordinate vector in the overlattice basis, if
    /// it belongs to the overlattice.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        let inv = self.basis.inverse()?;
        // y · basis = v  ⇒  y = v · basis⁻¹
        let y = inv.transpose().mul_vec(v).ok()?;
        y.iter()
            .all(BigRational::is_integer)
            .then(|| y.iter().map(BigRational::to_integer).collect())
    }
}

pub fn overlattice(spec: &GlueSpec) -> Result<Overlattice> {
    overlattice_of(&spec.base.build(), &spec.glue_vectors)
}

/// Lattice generated by the base basis and `glue` (rows in base coordinates).
pub fn overlattice_of(base: &Lattice, glue: &[RatVector]) -> Result<Overlattice> {
    let n = base.rank();
    let g = base.gram().to_rat();
    for (index, v) in glue.iter().enumerate() {
        if v.len() != n {
            return Err(Error::Dimension(format!(
                "glue vector {index} has length {}, base rank {n}",
                v.len()
            )));
        }
        if !g.mul_vec(v)?.iter().all(BigRational::is_integer) {
            return Err(Error::NotInDual { index });
        }
    }

    let mut gens = RatMatrix::identity(n);
    if !glue.is_empty() {
        gens = gens.vstack(&RatMatrix::from_rows(glue)?)?;
    }
    let denom = gens.common_denominator();
    let scaled = gens
        .scale(&BigRational::from_integer(denom.clone()))
        .to_int()
        .expect("common denominator clears fractions");
    let hnf = hermite_normal_form(&scaled).basis();
    let basis = hnf
        .to_rat()
        .scale(&BigRational::new(BigInt::one(), denom.clone()));

    let gram = g.congruence(&basis)?;
    let gram = gram.to_int().ok_or_else(|| {
        Error::NonIntegralGlue("generated Gram matrix has non-integral entries".into())
    })?;

    let index = num_traits::pow(denom, n) / hnf.det()?.abs();
    let result = Lattice::new(gram)?;

    let lhs = base.det();
    let rhs = result.det() * &index * &index;
    if lhs != rhs {
        return Err(Error::Invariant(format!(
            "det(base) = {lhs} but det(result)·index² = {rhs}"
        )));
    }
    let label = base.label().map(|l| format!("{l} + glue"));
    let lattice = match label {
        Some(l) => result.with_label(l),
        None => result,
    };
    Ok(Overlattice {
        lattice,
        basis,
        index,
    })
}

/// Elements of L*/L as residue vectors against the Smith generators.
struct DiscriminantModel {
    gens: Vec<RatVector>,
    orders: Vec<u64>,
    pairing: Vec<Vec<BigRational>>,
}

impl DiscriminantModel {
    fn new(base: &Lattice) -> Result<Self> {
        let raw = dual_generators(base)?;
        let g = base.gram().to_rat();
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        for (v, d) in raw {
            let d = d.to_u64().ok_or_else(|| {
                Error::Precondition(format!("discriminant factor {d} too large to enumerate"))
            })?;
            gens.push(v);
            orders.push(d);
        }
        let pairing = gens
            .iter()
            .map(|a| {
                gens.iter()
                    .map(|b| g.pair(a, b).expect("ranks agree"))
                    .collect()
            })
            .collect();
        Ok(Self {
            gens,
            orders,
            pairing,
        })
    }

    fn pair(&self, x: &[u64], y: &[u64]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b != 0 {
                    acc += &self.pairing[i][j] * BigRational::from_integer(BigInt::from(a * b));
                }
            }
        }
        acc
    }

    fn order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.orders)
            .map(|(&c, &d)| d / c.gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((&a, &b), &d)| (a + b) % d)
            .collect()
    }

    /// Representative with every coordinate reduced into [0, 1).
    fn representative(&self, x: &[u64]) -> RatVector {
        let n = self.gens.first().map_or(0, Vec::len);
        let mut v = vec![BigRational::zero(); n];
        for (c, g) in x.iter().zip(&self.gens) {
            let c = BigRational::from_integer(BigInt::from(*c));
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += &c * gi;
            }
        }
        v.into_iter().map(|x| &x - x.floor()).collect()
    }

    /// All elements whose order divides some m ≤ bound.
    fn elements_up_to(&self, bound: u64) -> Vec<Vec<u64>> {
        let exponent = (2..=bound).fold(1u64, |acc, m| acc.lcm(&m));
        let steps: Vec<u64> = self.orders.iter().map(|&d| d / d.gcd(&exponent)).collect();
        let mut out = vec![Vec::new()];
        for (&d, &step) in self.orders.iter().zip(&steps) {
            let mut next = Vec::new();
            for prefix in &out {
                let mut c = 0;
                while c < d {
                    let mut e = prefix.clone();
                    e.push(c);
                    next.push(e);
                    c += step;
                }
            }
            out = next;
        }
        out.retain(|x| self.order(x) <= bound);
        out
    }
}

/// Bounded exhaustive search for glue sets whose overlattice has exactly
/// the `target` invariants. Each returned set generates a distinct subgroup
/// of the discriminant group; an empty set means the base itself matches.
pub fn glue_search(
    base: &Lattice,
    target: &LatticeInvariants,
    bound: u64,
) -> Result<Vec<Vec<RatVector>>> {
    if bound < 2 {
        return Err(Error::Precondition(format!("bound {bound} < 2")));
    }
    if !base.is_nondegenerate() || target.det.is_zero() || target.rank != base.rank() {
        return Ok(Vec::new());
    }
    let (q, r) = base.det().abs().div_rem(&target.det.abs());
    if !r.is_zero() {
        return Ok(Vec::new());
    }
    let index = q.sqrt();
    if &index * &index != q {
        return Ok(Vec::new());
    }
    if index.is_one() {
        return Ok(if &base.invariants() == target {
            vec![Vec::new()]
        } else {
            Vec::new()
        });
    }
    let Some(index) = index.to_usize() else {
        return Ok(Vec::new());
    };

    let model = DiscriminantModel::new(base)?;
    let even = target.parity == Parity::Even;
    let two = BigInt::from(2);
    let admissible = |x: &[u64]| {
        let q = model.pair(x, x);
        q.is_integer() && (!even || q.to_integer().is_multiple_of(&two))
    };
    let mut candidates: Vec<Vec<u64>> = model
        .elements_up_to(bound)
        .into_iter()
        .filter(|x| x.iter().any(|&c| c != 0) && admissible(x))
        .collect();
    candidates.sort_by_key(|x| model.representative(x));

    let zero = vec![0u64; model.orders.len()];
    let mut search = Search {
        model: &model,
        candidates: &candidates,
        base,
        target,
        index,
        seen: BTreeSet::new(),
        found: Vec::new(),
    };
    let start: BTreeSet<Vec<u64>> = [zero].into_iter().collect();
    search.extend(&start, &mut Vec::new(), 0)?;
    Ok(search.found)
}

struct Search<'a> {
    model: &'a DiscriminantModel,
    candidates: &'a [Vec<u64>],
    base: &'a Lattice,
    target: &'a LatticeInvariants,
    index: usize,
    seen: BTreeSet<BTreeSet<Vec<u64>>>,
    found: Vec<Vec<RatVector>>,
}

impl Search<'_> {
    fn extend(
        &mut self,
        group: &BTreeSet<Vec<u64>>,
        gens: &mut Vec<usize>,
        from: usize,
    ) -> Result<()> {
        for i in from..self.candidates.len() {
            let cand = &self.candidates[i];
            if group.contains(cand) {
                continue;
            }
            if !gens
                .iter()
                .all(|&g| self.model.pair(cand, &self.candidates[g]).is_integer())
            {
                continue;
            }
            let mut grown = group.clone();
            let mut frontier: Vec<Vec<u64>> = group.iter().cloned().collect();
            while let Some(h) = frontier.pop() {
                let next = self.model.add(&h, cand);
                if grown.insert(next.clone()) {
                    frontier.push(next);
                }
            }
            let size = grown.len();
            if size > self.index || self.index % size != 0 {
                continue;
            }
            gens.push(i);
            if size == self.index {
                if self.seen.insert(grown) {
                    let glue: Vec<RatVector> = gens
                        .iter()
                        .map(|&g| self.model.representative(&self.candidates[g]))
                        .collect();
                    if let Ok(over) = overlattice_of(self.base, &glue) {
                        if &over.lattice.invariants() == self.target {
                            self.found.push(glue);
                        }
                    }
                }
            } else {
                self.extend(&grown, gens, i + 1)?;
            }
            gens.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    fn half(v: &[i64]) -> RatVector {
        v.iter()
            .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(2)))
            .collect()
    }

    #[test]
    fn no_glue_is_identity() {
        let spec = GlueSpec {
            base: "U".parse().unwrap(),
            glue_vectors: Vec::new(),
        };
        let o = overlattice(&spec).unwrap();
        assert_eq!(o.index, BigInt::one());
        assert_eq!(o.lattice.gram(), &IntMatrix::from_i64(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn u2_extends_to_u() {
        // U(2) with ½(e+f) is not integral, with ½e it becomes U
        let base = Lattice::parse("U(2)").unwrap();
        let o = overlattice_of(&base, &[half(&[1, 0])]).unwrap();
        assert_eq!(o.index, BigInt::from(2));
        assert!(o.lattice.invariants().unimodular);
        let bad = overlattice_of(&Lattice::parse("U").unwrap(), &[half(&[1, 0])]);
        assert_eq!(bad.unwrap_err(), Error::NotInDual { index: 0 });
    }

    #[test]
    fn non_integral_glue_rejected() {
        // ¼ e in <4>: pairing 1 with e, norm ¼
        let base = Lattice::parse("<1>(4)").unwrap();
        let v = vec![BigRational::new(BigInt::one(), BigInt::from(4))];
        assert!(matches!(
            overlattice_of(&base, &[v]).unwrap_err(),
            Error::NonIntegralGlue(_)
        ));
    }

    #[test]
    fn e8_needs_no_glue() {
        let e8 = Lattice::parse("E8").unwrap();
        let found = glue_search(&e8, &e8.invariants(), 2).unwrap();
        assert_eq!(found, vec![Vec::<RatVector>::new()]);
    }

    #[test]
    fn minus_one_only_trivial() {
        let l = Lattice::parse("<-1>").unwrap();
        let found = glue_search(&l, &l.invariants(), 2).unwrap();
        assert_eq!(found, vec![Vec::<RatVector>::new()]);
    }

    #[test]
    fn bound_must_be_at_least_two() {
        let l = Lattice::parse("U").unwrap();
        assert!(glue_search(&l, &l.invariants(), 1).is_err());
    }
}
