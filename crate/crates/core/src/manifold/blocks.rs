use serde::Serialize;

use super::{Capacities, Manifold, Pi1};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "block")]
pub enum Block {
    S2xS2,
    CP2,
    CP2bar,
    K3,
    Enriques,
    Hitchin,
    Teichner { b2: u64 },
    Elliptic { n: u64, p: u64, t: u64 },
}

impl Block {
    /// Looks up a block by name, accepting any case.
    pub fn from_name(name: &str, params: &[(&str, i64)]) -> Result<Block> {
        let get = |key: &str| {
            params
                .iter()
                .find(|(k, _)| k.eq_ignore_ascii_case(key))
                .map(|p| p.1)
        };
        let need = |key: &str| {
            get(key).ok_or_else(|| Error::InvalidParams(format!("{name} needs parameter `{key}`")))
        };
        let unsigned = |key: &str, v: i64| {
            u64::try_from(v)
                .map_err(|_| Error::InvalidParams(format!("{key} = {v} must be nonnegative")))
        };
        let allowed: &[&str] = match name.to_ascii_lowercase().as_str() {
            "teichner" => &["b2"],
            "elliptic" => &["n", "p", "t"],
            _ => &[],
        };
        if let Some((k, _)) = params
            .iter()
            .find(|(k, _)| !allowed.iter().any(|a| a.eq_ignore_ascii_case(k)))
        {
            return Err(Error::InvalidParams(format!(
                "{name} has no parameter `{k}`"
            )));
        }
        Ok(match name.to_ascii_lowercase().as_str() {
            "s2xs2" => Block::S2xS2,
            "cp2" => Block::CP2,
            "cp2bar" => Block::CP2bar,
            "k3" => Block::K3,
            "enriques" => Block::Enriques,
            "hitchin" => Block::Hitchin,
            "teichner" => Block::Teichner {
                b2: unsigned("b2", need("b2")?)?,
            },
            "elliptic" => Block::Elliptic {
                n: unsigned("n", need("n")?)?,
                p: unsigned("p", need("p")?)?,
                t: unsigned("t", get("t").unwrap_or(0))?,
            },
            _ => return Err(Error::UnknownBlock(name.to_string())),
        })
    }

    pub fn name(&self) -> String {
        match self {
            Block::S2xS2 => "S2xS2".into(),
            Block::CP2 => "CP2".into(),
            Block::CP2bar => "CP2bar".into(),
            Block::K3 => "K3".into(),
            Block::Enriques => "Enriques".into(),
            Block::Hitchin => "Hitchin".into(),
            Block::Teichner { b2 } => format!("Teichner(b2={b2})"),
            Block::Elliptic { n, p, t } => format!("Elliptic(n={n},p={p},t={t})"),
        }
    }
}

fn lat(expr: &str) -> Option<Lattice> {
    Some(Lattice::parse(expr).expect("static lattice expression"))
}

pub fn building_block(block: Block) -> Result<Manifold> {
    let name = block.name();
    let base = Manifold {
        name,
        chi: 0,
        sigma: 0,
        b1: 0,
        parity: Parity::Odd,
        pi1: Pi1::Trivial,
        spin: false,
        cover_spin: false,
        lattice: None,
        capacities: Capacities::default(),
        chi_h: None,
    };
    let m = match block {
        Block::S2xS2 => Manifold {
            chi: 4,
            parity: Parity::Even,
            spin: true,
            cover_spin: true,
            lattice: lat("U"),
            // diagonal and anti-diagonal
            capacities: Capacities {
                spheres_minus2: 1,
                spheres_plus2: 1,
                ..Default::default()
            },
            ..base
        },
        Block::CP2 => Manifold {
            chi: 3,
            sigma: 1,
            lattice: lat("<1>"),
            capacities: Capacities {
                spheres_plus1: 1,
                ..Default::default()
            },
            ..base
        },
        Block::CP2bar => Manifold {
            chi: 3,
            sigma: -1,
            lattice: lat("<-1>"),
            capacities: Capacities {
                spheres_minus1: 1,
                ..Default::default()
            },
            ..base
        },
        Block::K3 => Manifold {
            chi: 24,
            sigma: -16,
            parity: Parity::Even,
            spin: true,
            cover_spin: true,
            lattice: lat("2*E8 + 3*U"),
            // sixteen nodal curves of a Kummer surface
            capacities: Capacities {
                spheres_minus2: 16,
                ..Default::default()
            },
            ..base
        },
        Block::Enriques => Manifold {
            chi: 12,
            sigma: -8,
            parity: Parity::Even,
            pi1: Pi1::finite(2, "Z2"),
            cover_spin: true,
            lattice: lat("E8 + U"),
            capacities: Capacities {
                spheres_minus2: 8,
                planes_minus1: 1,
                ..Default::default()
            },
            ..base
        },
        Block::Hitchin => Manifold {
            chi: 6,
            sigma: -4,
            pi1: Pi1::finite(4, "Z2⊕Z2"),
            cover_spin: true,
            lattice: lat("4*<-1>"),
            capacities: Capacities {
                planes_minus1: 1,
                ..Default::default()
            },
            ..base
        },
        Block::Teichner { b2 } => {
            if b2 == 0 {
                return Err(Error::InvalidParams("Teichner needs b2 >= 1".into()));
            }
            Manifold {
                chi: b2 as i64 + 2,
                sigma: -1,
                pi1: Pi1::finite(128, "Z16⋊Z8"),
                cover_spin: true,
                ..base
            }
        }
        Block::Elliptic { n, p, t } => {
            if n == 0 {
                return Err(Error::InvalidParams("Elliptic needs n >= 1".into()));
            }
            if p <= 1 {
                return Err(Error::InvalidParams("Elliptic needs p >= 2".into()));
            }
            let (ni, even) = (n as i64, n % 2 == 0 && p % 2 == 1);
            Manifold {
                chi: 12 * ni,
                sigma: -8 * ni,
                parity: if even { Parity::Even } else { Parity::Odd },
                pi1: Pi1::finite(p, format!("Z{p}")),
                // H1 = Z/p with p odd carries no obstruction once the form is even
                spin: even,
                cover_spin: (p * n) % 2 == 0,
                capacities: Capacities {
                    spheres_minus2: t,
                    ..Default::default()
                },
                chi_h: Some(ni),
                ..base
            }
        }
    };
    m.check_invariants()?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        let e = building_block(Block::Enriques).unwrap();
        assert_eq!(
            (e.chi, e.sigma, e.parity, e.pi1.order()),
            (12, -8, Parity::Even, Some(2))
        );
        assert!(e.cover_spin && !e.spin);

        let h = building_block(Block::Hitchin).unwrap();
        assert_eq!(
            (h.chi, h.sigma, h.parity, h.pi1.order()),
            (6, -4, Parity::Odd, Some(4))
        );
        assert!(num_traits::Zero::is_zero(&h.b_plus()));

        let x = building_block(Block::Elliptic { n: 2, p: 3, t: 1 }).unwrap();
        assert_eq!((x.sigma, x.parity, x.chi_h), (-16, Parity::Even, Some(2)));
        assert!(x.cover_spin);

        let t = building_block(Block::Teichner { b2: 10 }).unwrap();
        assert_eq!((t.chi, t.sigma, t.pi1.order()), (12, -1, Some(128)));
    }

    #[test]
    fn all_blocks_are_consistent() {
        for b in [
            Block::S2xS2,
            Block::CP2,
            Block::CP2bar,
            Block::K3,
            Block::Enriques,
            Block::Hitchin,
            Block::Teichner { b2: 46 },
            Block::Elliptic { n: 3, p: 5, t: 2 },
        ] {
            building_block(b).unwrap().check_invariants().unwrap();
        }
    }

    #[test]
    fn bad_params() {
        assert!(building_block(Block::Elliptic { n: 0, p: 3, t: 0 }).is_err());
        assert!(building_block(Block::Elliptic { n: 1, p: 1, t: 0 }).is_err());
        assert!(building_block(Block::Teichner { b2: 0 }).is_err());
        assert!(matches!(
            Block::from_name("Dolgachev", &[]),
            Err(Error::UnknownBlock(_))
        ));
        assert!(Block::from_name("Teichner", &[]).is_err());
        assert!(Block::from_name("K3", &[("n", 1)]).is_err());
        assert!(Block::from_name("Elliptic", &[("n", -1), ("p", 3)]).is_err());
    }
}
