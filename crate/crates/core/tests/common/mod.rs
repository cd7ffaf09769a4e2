#![allow(dead_code)]

use nielsen_core::lattice::{Base, FormExpr, Lattice, Summand};
use nielsen_core::linalg::IntMatrix;
use num_bigint::BigInt;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Twist,
    Reflection,
}

/// A lattice with `k` pairwise orthogonal classes, hidden behind a random
/// unimodular change of basis.
#[derive(Debug, Clone)]
pub struct Config {
    pub kind: Kind,
    pub lattice: Lattice,
    pub classes: Vec<Vec<BigInt>>,
    pub k_plus: usize,
    pub k_minus: usize,
}

fn summand(base: Base) -> Summand {
    Summand::new(base, 1, 1).unwrap()
}

/// Fill up to `room` more dimensions with random small summands.
fn padding(rng: &mut impl Rng, mut room: usize) -> Vec<Summand> {
    let mut out = Vec::new();
    if room >= 8 && rng.gen_bool(0.3) {
        out.push(summand(Base::E8));
        room -= 8;
    }
    let extra = rng.gen_range(0..=room);
    let mut used = 0;
    while used < extra {
        let b = match rng.gen_range(0..3) {
            0 if extra - used >= 2 => Base::U,
            1 => Base::One,
            _ => Base::MinusOne,
        };
        used += b.rank();
        out.push(summand(b));
    }
    out
}

/// Random unimodular `p` and its inverse, built from elementary moves.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n < 2 {
        return (p, inv);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
        // p ← E·p with E = I + c·e_ij; inv ← inv·E⁻¹
        for col in 0..n {
            let t = &c * &p[(j, col)];
            p[(i, col)] += t;
        }
        for row in 0..n {
            let t = &c * &inv[(row, i)];
            inv[(row, j)] -= t;
        }
    }
    (p, inv)
}

fn disguise(
    rng: &mut impl Rng,
    base: &Lattice,
    classes: Vec<Vec<BigInt>>,
) -> (Lattice, Vec<Vec<BigInt>>) {
    let n = base.rank();
    let (p, inv) = random_unimodular(rng, n);
    // new basis rows b'_i = Σ p_ij b_j: Gram p·G·pᵀ, coordinates x' = (pᵀ)⁻¹ x
    let gram = &(&p * base.gram()) * &p.transpose();
    let lat = Lattice::new(gram).unwrap();
    let inv_t = inv.transpose();
    let classes = classes.iter().map(|c| inv_t.mul_vec(c).unwrap()).collect();
    (lat, classes)
}

fn unit(n: usize, i: usize, j: Option<(usize, i64)>) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); n];
    v[i] = BigInt::from(1);
    if let Some((j, s)) = j {
        v[j] = BigInt::from(s);
    }
    v
}

pub fn random_twist(rng: &mut impl Rng) -> Config {
    let blocks = rng.gen_range(1..=3usize);
    let k = rng.gen_range(1..=blocks);
    let mut summands: Vec<Summand> = (0..blocks).map(|_| summand(Base::U)).collect();
    summands.extend(padding(rng, 10 - 2 * blocks));
    let base = FormExpr::new(summands).build();
    let n = base.rank();
    let mut classes = Vec::new();
    let (mut k_plus, mut k_minus) = (0, 0);
    for b in 0..k {
        // e - f has square -2, e + f has square +2
        if rng.gen_bool(0.5) {
            classes.push(unit(n, 2 * b, Some((2 * b + 1, -1))));
            k_minus += 1;
        } else {
            classes.push(unit(n, 2 * b, Some((2 * b + 1, 1))));
            k_plus += 1;
        }
    }
    let (lattice, classes) = disguise(rng, &base, classes);
    Config {
        kind: Kind::Twist,
        lattice,
        classes,
        k_plus,
        k_minus,
    }
}

pub fn random_reflection(rng: &mut impl Rng) -> Config {
    let k = rng.gen_range(1..=4usize);
    let mirror = rng.gen_bool(0.3);
    let b = if mirror { Base::One } else { Base::MinusOne };
    let mut summands: Vec<Summand> = (0..k).map(|_| summand(b)).collect();
    summands.extend(padding(rng, 10 - k));
    let base = FormExpr::new(summands).build();
    let n = base.rank();
    let classes = (0..k).map(|i| unit(n, i, None)).collect();
    let (lattice, classes) = disguise(rng, &base, classes);
    let (k_plus, k_minus) = if mirror { (k, 0) } else { (0, k) };
    Config {
        kind: Kind::Reflection,
        lattice,
        classes,
        k_plus,
        k_minus,
    }
}

/// Random indefinite unimodular form expression of rank at most 24.
pub fn random_unimodular_form(rng: &mut impl Rng) -> FormExpr {
    loop {
        let mut summands = Vec::new();
        let e8 = rng.gen_range(0..=2u32);
        if e8 > 0 {
            let scale = if rng.gen_bool(0.5) { 1 } else { -1 };
            summands.push(Summand::new(Base::E8, scale, e8).unwrap());
        }
        for (base, max) in [(Base::U, 4u32), (Base::One, 5), (Base::MinusOne, 5)] {
            let m = rng.gen_range(0..=max);
            if m > 0 {
                summands.push(Summand::new(base, 1, m).unwrap());
            }
        }
        let expr = FormExpr::new(summands);
        let rank = expr.rank();
        if rank == 0 || rank > 24 {
            continue;
        }
        let inv = expr.build().invariants();
        if inv.indefinite() {
            return expr;
        }
    }
}
