//! Congruence diagonalization of symmetric rational matrices.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::matrix::RatMatrix;
use crate::error::{Error, Result};

/// `pᵀ · g · p = d`, `d` diagonal, `p` invertible.
#[derive(Debug, Clone)]
pub struct Congruence {
    pub p: RatMatrix,
    pub d: RatMatrix,
}

/// Sylvester inertia: counts of positive, negative and zero diagonal entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Congruence {
    pub fn inertia(&self) -> Inertia {
        let mut out = Inertia {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        for i in 0..self.d.rows() {
            let x = &self.d[(i, i)];
            if x.is_positive() {
                out.positive += 1;
            } else if x.is_negative() {
                out.negative += 1;
            } else {
                out.zero += 1;
            }
        }
        out
    }
}

// col j += c * col k and row j += c * row k
fn add_multiple(a: &mut RatMatrix, p: &mut RatMatrix, j: usize, k: usize, c: &BigRational) {
    let n = a.rows();
    for i in 0..n {
        let t = c * &a[(i, k)];
        a[(i, j)] += t;
    }
    for i in 0..n {
        let t = c * &a[(k, i)];
        a[(j, i)] += t;
    }
    for i in 0..p.rows() {
        let t = c * &p[(i, k)];
        p[(i, j)] += t;
    }
}

fn swap(a: &mut RatMatrix, p: &mut RatMatrix, i: usize, j: usize) {
    a.swap_rows(i, j);
    a.swap_cols(i, j);
    p.swap_cols(i, j);
}

pub fn congruence_diagonalize(g: &RatMatrix) -> Result<Congruence> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = g.rows();
    let mut a = g.clone();
    let mut p = RatMatrix::identity(n);
    let one = BigRational::from_integer(1.into());

    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                swap(&mut a, &mut p, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                // all remaining diagonal entries vanish: a[k][k] becomes 2·a[k][j]
                add_multiple(&mut a, &mut p, k, j, &one);
            } else {
                continue;
            }
        }
        let pivot = a[(k, k)].clone();
        for j in k + 1..n {
            if a[(k, j)].is_zero() {
                continue;
            }
            let f = -(&a[(k, j)] / &pivot);
            add_multiple(&mut a, &mut p, j, k, &f);
        }
    }
    debug_assert!(a.is_diagonal());
    Ok(Congruence { p, d: a })
}

pub fn inertia(g: &RatMatrix) -> Result<Inertia> {
    Ok(congruence_diagonalize(g)?.inertia())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::IntMatrix;

    fn check(g: &IntMatrix) -> Congruence {
        let g = g.to_rat();
        let c = congruence_diagonalize(&g).unwrap();
        assert!(c.d.is_diagonal());
        assert_eq!(&(&c.p.transpose() * &g) * &c.p, c.d);
        assert!(c.p.inverse().is_some());
        c
    }

    #[test]
    fn diagonal_input() {
        let c = check(&IntMatrix::from_i64(&[&[1, 0], &[0, -1]]));
        assert_eq!(c.d, IntMatrix::from_i64(&[&[1, 0], &[0, -1]]).to_rat());
    }

    #[test]
    fn hyperbolic_plane_needs_pivot_creation() {
        let c = check(&IntMatrix::from_i64(&[&[0, 1], &[1, 0]]));
        let i = c.inertia();
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
    }

    #[test]
    fn degenerate_block() {
        let c = check(&IntMatrix::from_i64(&[&[0, 0, 0], &[0, 0, 2], &[0, 2, 0]]));
        let i = c.inertia();
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 1));
    }

    #[test]
    fn rejects_asymmetric() {
        let g = IntMatrix::from_i64(&[&[0, 1], &[0, 0]]).to_rat();
        assert_eq!(congruence_diagonalize(&g).unwrap_err(), Error::NotSymmetric);
    }
}
