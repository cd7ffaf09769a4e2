//! Row-style Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Debug, Clone)]
pub struct Hermite {
    /// `u · m`, in row echelon form with positive pivots and the entries
    /// above each pivot reduced into `[0, pivot)`. Zero rows sit at the bottom.
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Column index of each pivot, one per nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of `h`: a basis of the row lattice.
    pub fn basis(&self) -> IntMatrix {
        self.h.select_rows(0..self.rank())
    }
}

fn sub_row(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for j in 0..a.cols() {
        let t = q * &a[(src, j)];
        a[(dst, j)] -= t;
    }
}

fn neg_row(a: &mut IntMatrix, i: usize) {
    for j in 0..a.cols() {
        a[(i, j)] = -&a[(i, j)];
    }
}

pub fn hermite_normal_form(m: &IntMatrix) -> Hermite {
    let (rows, cols) = m.shape();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;

    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                sub_row(&mut h, i, r, &q);
                sub_row(&mut u, i, r, &q);
                done &= h[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            neg_row(&mut h, r);
            neg_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                sub_row(&mut h, i, r, &q);
                sub_row(&mut u, i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Hermite { h, u, pivots }
}
