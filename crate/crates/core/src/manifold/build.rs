//! Build expressions:
//!
//! ```text
//! expr  := atom ('#' count)*
//! atom  := block | block '(' key '=' int (',' key '=' int)* ')'
//!        | 'csum' '(' expr (',' expr)+ ')'
//!        | 'sumW' '(' 'g' '=' int (',' expr)+ ')'
//!        | 'rev' '(' expr ')' | 'cover' '(' expr ')'
//! ```
//!
//! `A#n` is the connected sum of `n` copies of `A`. Names are case-insensitive.

use std::fmt;
use std::str::FromStr;

use super::{
    building_block, connected_sum, reverse_orientation, sum_along_wedge, universal_cover, Block,
    Manifold,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BuildExpr {
    Block(Block),
    Csum(Vec<BuildExpr>),
    SumW { g: u32, parts: Vec<BuildExpr> },
    Rev(Box<BuildExpr>),
    Cover(Box<BuildExpr>),
    Repeat(Box<BuildExpr>, u32),
}

impl BuildExpr {
    pub fn build(&self) -> Result<Manifold> {
        let m = match self {
            BuildExpr::Block(b) => building_block(*b)?,
            BuildExpr::Csum(parts) => {
                let built = parts
                    .iter()
                    .map(BuildExpr::build)
                    .collect::<Result<Vec<_>>>()?;
                built[1..]
                    .iter()
                    .fold(built[0].clone(), |acc, m| connected_sum(&acc, m))
            }
            BuildExpr::SumW { g, parts } => {
                let built = parts
                    .iter()
                    .map(BuildExpr::build)
                    .collect::<Result<Vec<_>>>()?;
                built[1..]
                    .iter()
                    .try_fold(built[0].clone(), |acc, m| sum_along_wedge(&acc, m, *g))?
            }
            BuildExpr::Rev(x) => reverse_orientation(&x.build()?),
            BuildExpr::Cover(x) => universal_cover(&x.build()?)?,
            BuildExpr::Repeat(x, n) => {
                let one = x.build()?;
                (1..*n).fold(one.clone(), |acc, _| connected_sum(&acc, &one))
            }
        };
        m.check_invariants()?;
        Ok(m.with_name(self.to_string()))
    }
}

fn join(parts: &[BuildExpr]) -> String {
    parts
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for BuildExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildExpr::Block(b) => f.write_str(&b.name()),
            BuildExpr::Csum(parts) => write!(f, "csum({})", join(parts)),
            BuildExpr::SumW { g, parts } => write!(f, "sumW(g={g}, {})", join(parts)),
            BuildExpr::Rev(x) => write!(f, "rev({x})"),
            BuildExpr::Cover(x) => write!(f, "cover({x})"),
            BuildExpr::Repeat(x, n) => write!(f, "{x}#{n}"),
        }
    }
}

enum Arg {
    Param(String, i64),
    Expr(BuildExpr),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += self.src[self.pos..]
                .chars()
                .next()
                .map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.src.len() - start);
        if len == 0 || self.src[start..].starts_with(|c: char| c.is_ascii_digit()) {
            return Err(Error::parse(start, "expected a name"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let body = self.src[start..]
            .strip_prefix('-')
            .map_or(&self.src[start..], |s| s);
        let sign_len = self.src.len() - start - body.len();
        let digits = body
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(body.len());
        if digits == 0 {
            return Err(Error::parse(start, "expected an integer"));
        }
        self.pos += sign_len + digits;
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::parse(start, "integer out of range"))
    }

    fn count(&mut self) -> Result<u32> {
        let at = self.pos;
        let n = self.int()?;
        u32::try_from(n)
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::parse(at, format!("count {n} must be a positive integer")))
    }

    fn arg(&mut self) -> Result<Arg> {
        self.skip_ws();
        let save = self.pos;
        if let Ok(name) = self.ident() {
            if self.eat('=') {
                return Ok(Arg::Param(name.to_string(), self.int()?));
            }
        }
        self.pos = save;
        Ok(Arg::Expr(self.expr()?))
    }

    fn args(&mut self) -> Result<Vec<Arg>> {
        let mut out = vec![self.arg()?];
        while self.eat(',') {
            out.push(self.arg()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<BuildExpr> {
        self.skip_ws();
        let at = self.pos;
        let name = self.ident()?;
        let args = if self.eat('(') {
            self.args()?
        } else {
            Vec::new()
        };
        let mut params = Vec::new();
        let mut exprs = Vec::new();
        for a in args {
            match a {
                Arg::Param(k, v) => params.push((k, v)),
                Arg::Expr(e) => exprs.push(e),
            }
        }
        let lower = name.to_ascii_lowercase();
        let combinator = matches!(lower.as_str(), "csum" | "sumw" | "rev" | "cover");
        if !combinator && !exprs.is_empty() {
            return Err(Error::parse(
                at,
                format!("{name} takes only key=value parameters"),
            ));
        }
        let no_params = |what: &str| {
            if params.is_empty() {
                Ok(())
            } else {
                Err(Error::parse(
                    at,
                    format!("{what} takes no key=value parameters"),
                ))
            }
        };
        match lower.as_str() {
            "csum" => {
                no_params("csum")?;
                if exprs.len() < 2 {
                    return Err(Error::parse(at, "csum needs at least two summands"));
                }
                Ok(BuildExpr::Csum(exprs))
            }
            "sumw" => {
                let g = match params.as_slice() {
                    [(k, g)] if k.eq_ignore_ascii_case("g") => u32::try_from(*g)
                        .ok()
                        .filter(|&g| g >= 1)
                        .ok_or_else(|| Error::parse(at, "g must be a positive integer"))?,
                    _ => return Err(Error::parse(at, "sumW needs exactly one parameter g")),
                };
                if exprs.len() < 2 {
                    return Err(Error::parse(at, "sumW needs at least two summands"));
                }
                Ok(BuildExpr::SumW { g, parts: exprs })
            }
            "rev" | "cover" => {
                no_params(name)?;
                let [x] = <[BuildExpr; 1]>::try_from(exprs)
                    .map_err(|_| Error::parse(at, format!("{name} takes one argument")))?;
                Ok(if lower == "rev" {
                    BuildExpr::Rev(Box::new(x))
                } else {
                    BuildExpr::Cover(Box::new(x))
                })
            }
            _ => {
                let ps: Vec<(&str, i64)> = params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
                Ok(BuildExpr::Block(Block::from_name(name, &ps)?))
            }
        }
    }

    fn expr(&mut self) -> Result<BuildExpr> {
        let mut e = self.atom()?;
        while self.eat('#') {
            e = BuildExpr::Repeat(Box::new(e), self.count()?);
        }
        Ok(e)
    }
}

impl FromStr for BuildExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(Error::parse(p.pos, "unexpected trailing input"));
        }
        Ok(e)
    }
}
