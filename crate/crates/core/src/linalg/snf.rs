//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `u · m · v = d` with `u`, `v` unimodular and `d` diagonal,
/// `d₁ | d₂ | …`, all entries nonnegative.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries of `d` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn row_axpy(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for j in 0..a.cols() {
        let t = q * &a[(src, j)];
        a[(dst, j)] -= t;
    }
}

fn col_axpy(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for i in 0..a.rows() {
        let t = q * &a[(i, src)];
        a[(i, dst)] -= t;
    }
}

fn negate_row(a: &mut IntMatrix, i: usize) {
    for j in 0..a.cols() {
        a[(i, j)] = -&a[(i, j)];
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, a, v);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold any offending row into the pivot row
            let p = a[(t, t)].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut u, t);
        }
    }
    finish(u, a, v)
}

fn finish(u: IntMatrix, d: IntMatrix, v: IntMatrix) -> Smith {
    Smith { u, d, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::int_vec;
    use num_traits::One;

    fn check(m: &IntMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.u.det().unwrap().abs().is_one());
        assert!(s.v.det().unwrap().abs().is_one());
        assert!(s.d.is_diagonal());
        let diag = s.diagonal();
        assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "{:?}", diag);
            } else if w[0].is_zero() {
                continue;
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert!(s.d.is_identity());
    }

    #[test]
    fn already_diagonal() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        assert_eq!(check(&m).d, m);
    }

    #[test]
    fn divisibility_is_enforced() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(check(&m).diagonal(), int_vec(&[1, 6]));
        let m = IntMatrix::from_i64(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]);
        assert_eq!(check(&m).diagonal(), int_vec(&[2, 2, 60]));
    }

    #[test]
    fn rectangular_and_zero() {
        let m = IntMatrix::from_i64(&[&[1, -1]]);
        let s = check(&m);
        assert_eq!(s.diagonal(), int_vec(&[1]));
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(check(&z).rank(), 0);
        let m = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        assert_eq!(check(&m).diagonal(), int_vec(&[2, 6, 12]));
    }

    #[test]
    fn empty_matrix() {
        let s = smith_normal_form(&IntMatrix::zeros(0, 0));
        assert_eq!(s.d.shape(), (0, 0));
    }
}
