//! Form expressions: `expr := term ('+' term)*`,
//! `term := [mult '*'] base ['(' scale ')']`,
//! `base := E8 | U | H | D4 | <1> | <-1>`.
//!
//! A whole expression may be wrapped as `-( … )` to flip the orientation.
//! `H` is an alias for `U`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use super::Lattice;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    E8,
    U,
    D4,
    One,
    MinusOne,
}

impl Base {
    pub fn rank(self) -> usize {
        match self {
            Base::E8 => 8,
            Base::U => 2,
            Base::D4 => 4,
            Base::One | Base::MinusOne => 1,
        }
    }

    /// Gram of the unscaled block. Root lattices are negative definite.
    pub fn gram(self) -> IntMatrix {
        match self {
            Base::E8 => negative_root_gram(8, &E8_EDGES),
            Base::D4 => negative_root_gram(4, &D4_EDGES),
            Base::U => IntMatrix::from_i64(&[&[0, 1], &[1, 0]]),
            Base::One => IntMatrix::from_i64(&[&[1]]),
            Base::MinusOne => IntMatrix::from_i64(&[&[-1]]),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Base::E8 => "E8",
            Base::U => "U",
            Base::D4 => "D4",
            Base::One => "<1>",
            Base::MinusOne => "<-1>",
        }
    }
}

// E8: chain 0-1-2-3-4-5-6 with node 7 attached to node 4.
const E8_EDGES: [(usize, usize); 7] = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
// D4: node 0 is the trivalent center.
const D4_EDGES: [(usize, usize); 3] = [(0, 1), (0, 2), (0, 3)];

fn negative_root_gram(n: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = BigInt::from(-2);
    }
    for &(a, b) in edges {
        g[(a, b)] = BigInt::from(1);
        g[(b, a)] = BigInt::from(1);
    }
    g
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Summand {
    pub base: Base,
    pub scale: i64,
    pub multiplicity: u32,
}

impl Summand {
    pub fn new(base: Base, scale: i64, multiplicity: u32) -> Result<Self> {
        if scale == 0 {
            return Err(Error::ZeroScale(scale));
        }
        if multiplicity == 0 {
            return Err(Error::InvalidParams(
                "multiplicity must be at least 1".into(),
            ));
        }
        Ok(Self {
            base,
            scale,
            multiplicity,
        })
    }

    pub fn rank(&self) -> usize {
        self.base.rank() * self.multiplicity as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FormExpr {
    pub summands: Vec<Summand>,
    pub flipped: bool,
}

impl FormExpr {
    pub fn new(summands: Vec<Summand>) -> Self {
        Self {
            summands,
            flipped: false,
        }
    }

    pub fn single(base: Base, scale: i64, multiplicity: u32) -> Result<Self> {
        Ok(Self::new(vec![Summand::new(base, scale, multiplicity)?]))
    }

    pub fn flip(mut self) -> Self {
        self.flipped = !self.flipped;
        self
    }

    pub fn rank(&self) -> usize {
        self.summands.iter().map(Summand::rank).sum()
    }

    pub fn build(&self) -> Lattice {
        let mut gram = IntMatrix::zeros(0, 0);
        for s in &self.summands {
            let block = s.base.gram().scale(&BigInt::from(s.scale));
            for _ in 0..s.multiplicity {
                gram = gram.block_diag(&block);
            }
        }
        if self.flipped {
            gram = -&gram;
        }
        Lattice {
            gram,
            label: Some(self.to_string()),
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multiplicity != 1 {
            write!(f, "{}*", self.multiplicity)?;
        }
        f.write_str(self.base.name())?;
        if self.scale != 1 {
            write!(f, "({})", self.scale)?;
        }
        Ok(())
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.summands.is_empty() {
            "0".to_string()
        } else {
            self.summands
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" + ")
        };
        if self.flipped {
            write!(f, "-({body})")
        } else {
            f.write_str(&body)
        }
    }
}

impl Serialize for FormExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn starts_with(&self, lit: &str) -> bool {
        self.src[self.pos..]
            .iter()
            .zip(lit.bytes())
            .filter(|(a, b)| a.eq_ignore_ascii_case(b))
            .count()
            == lit.len()
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        let digits_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(Error::parse(start, "expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse()
            .map_err(|_| Error::parse(start, format!("integer `{text}` out of range")))
    }

    fn base(&mut self) -> Result<Base> {
        for (lit, base) in [
            ("E8", Base::E8),
            ("D4", Base::D4),
            ("U", Base::U),
            ("H", Base::U),
            ("<1>", Base::One),
            ("<+1>", Base::One),
            ("<-1>", Base::MinusOne),
        ] {
            if self.starts_with(lit) {
                self.pos += lit.len();
                return Ok(base);
            }
        }
        let rest: String = self.src[self.pos..]
            .iter()
            .take_while(|c| c.is_ascii_alphanumeric() || matches!(c, b'<' | b'>' | b'-'))
            .map(|&c| c as char)
            .collect();
        if rest.is_empty() {
            Err(Error::parse(self.pos, "expected a lattice base"))
        } else {
            Err(Error::UnknownBase(rest))
        }
    }

    fn term(&mut self) -> Result<Summand> {
        let start = self.pos;
        let multiplicity = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let m = self.integer()?;
            self.eat(b'*');
            u32::try_from(m)
                .ok()
                .filter(|&m| m > 0)
                .ok_or_else(|| Error::parse(start, "multiplicity must be a positive integer"))?
        } else {
            1
        };
        let base = self.base()?;
        let scale = if self.eat(b'(') {
            let at = self.pos;
            let s = self.integer()?;
            self.expect(b')')?;
            if s == 0 {
                return Err(Error::parse(at, "scale must be nonzero"));
            }
            s
        } else {
            1
        };
        Summand::new(base, scale, multiplicity)
    }

    fn sum(&mut self) -> Result<Vec<Summand>> {
        let mut out = vec![self.term()?];
        while self.eat(b'+') {
            out.push(self.term()?);
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<FormExpr> {
        let flipped = self.peek() == Some(b'-') && self.src.get(self.pos + 1) == Some(&b'(');
        let summands = if flipped {
            self.pos += 2;
            let s = self.sum()?;
            self.expect(b')')?;
            s
        } else {
            self.sum()?
        };
        if self.pos != self.src.len() {
            return Err(Error::parse(self.pos, "unexpected trailing input"));
        }
        Ok(FormExpr { summands, flipped })
    }
}

impl FromStr for FormExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: Vec<u8> = s.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::parse(0, "empty lattice expression"));
        }
        Parser {
            src: &compact,
            pos: 0,
        }
        .expr()
    }
}
