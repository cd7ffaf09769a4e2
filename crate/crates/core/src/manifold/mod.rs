//! Invariant-level model of closed oriented 4-manifolds and the
//! constructions used to assemble them.

mod blocks;
mod build;
mod config;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::classify::classify_indefinite;
use crate::error::{Error, Result};
use crate::lattice::{unwrap_call, Lattice, LatticeInvariants, Parity};

pub use blocks::{building_block, Block};
pub use build::BuildExpr;
pub use config::{lift_surface_config, validate_config, Component, SurfaceConfig, SurfaceKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pi1 {
    Trivial,
    Finite {
        order: u64,
        tag: String,
    },
    /// Infinite or not tracked.
    Unknown,
}

impl Pi1 {
    pub fn finite(order: u64, tag: impl Into<String>) -> Self {
        if order == 1 {
            Pi1::Trivial
        } else {
            Pi1::Finite {
                order,
                tag: tag.into(),
            }
        }
    }

    /// Group order, when finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            Pi1::Trivial => Some(1),
            Pi1::Finite { order, .. } => Some(*order),
            Pi1::Unknown => None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        *self == Pi1::Trivial
    }
}

impl fmt::Display for Pi1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pi1::Trivial => f.write_str("1"),
            Pi1::Finite { order, tag } => write!(f, "{tag} (order {order})"),
            Pi1::Unknown => f.write_str("unknown"),
        }
    }
}

/// Numbers of disjointly embedded surfaces available for configurations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Capacities {
    pub spheres_minus2: u64,
    pub spheres_plus2: u64,
    pub spheres_minus1: u64,
    pub spheres_plus1: u64,
    /// Essential projective planes of normal Euler number −1 and +1.
    pub planes_minus1: u64,
    pub planes_plus1: u64,
}

impl Capacities {
    pub fn get(&self, kind: SurfaceKind, euler: i64, essential: bool) -> u64 {
        match (kind, euler) {
            (SurfaceKind::Sphere, -2) => self.spheres_minus2,
            (SurfaceKind::Sphere, 2) => self.spheres_plus2,
            (SurfaceKind::Sphere, -1) => self.spheres_minus1,
            (SurfaceKind::Sphere, 1) => self.spheres_plus1,
            (SurfaceKind::ProjectivePlane, -1) if essential => self.planes_minus1,
            (SurfaceKind::ProjectivePlane, 1) if essential => self.planes_plus1,
            _ => 0,
        }
    }

    fn add(&self, o: &Capacities) -> Capacities {
        Capacities {
            spheres_minus2: self.spheres_minus2 + o.spheres_minus2,
            spheres_plus2: self.spheres_plus2 + o.spheres_plus2,
            spheres_minus1: self.spheres_minus1 + o.spheres_minus1,
            spheres_plus1: self.spheres_plus1 + o.spheres_plus1,
            planes_minus1: self.planes_minus1 + o.planes_minus1,
            planes_plus1: self.planes_plus1 + o.planes_plus1,
        }
    }

    fn mirror(&self) -> Capacities {
        Capacities {
            spheres_minus2: self.spheres_plus2,
            spheres_plus2: self.spheres_minus2,
            spheres_minus1: self.spheres_plus1,
            spheres_plus1: self.spheres_minus1,
            planes_minus1: self.planes_plus1,
            planes_plus1: self.planes_minus1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Manifold {
    pub name: String,
    pub chi: i64,
    pub sigma: i64,
    pub b1: i64,
    pub parity: Parity,
    pub pi1: Pi1,
    pub spin: bool,
    /// Whether the universal cover is spin.
    pub cover_spin: bool,
    #[serde(skip)]
    pub lattice: Option<Lattice>,
    pub capacities: Capacities,
    /// Holomorphic Euler characteristic, for elliptic blocks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_h: Option<i64>,
}

/// Numeric summary used in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifoldSummary {
    pub name: String,
    pub chi: i64,
    pub b2: i64,
    pub sigma: i64,
    pub parity: Parity,
    pub pi1: Pi1,
    pub spin: bool,
    pub cover_spin: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeInvariants>,
}

impl Manifold {
    pub fn b2(&self) -> i64 {
        self.chi - 2 + 2 * self.b1
    }

    /// `(b₂ + σ)/2`; a half-integer flags an inconsistent parameter choice.
    pub fn b_plus(&self) -> BigRational {
        BigRational::new(BigInt::from(self.b2() + self.sigma), BigInt::from(2))
    }

    pub fn b_minus(&self) -> BigRational {
        BigRational::new(BigInt::from(self.b2() - self.sigma), BigInt::from(2))
    }

    /// Derived `H₁` condition: no 2-torsion and no free part.
    pub fn h1_ok_derived(&self) -> bool {
        self.b1 == 0 && self.pi1.order().is_some_and(|m| m % 2 == 1)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn summary(&self) -> ManifoldSummary {
        ManifoldSummary {
            name: self.name.clone(),
            chi: self.chi,
            b2: self.b2(),
            sigma: self.sigma,
            parity: self.parity,
            pi1: self.pi1.clone(),
            spin: self.spin,
            cover_spin: self.cover_spin,
            lattice: self.lattice.as_ref().map(Lattice::invariants),
        }
    }

    /// Checks the record's internal consistency.
    pub fn check_invariants(&self) -> Result<()> {
        let b2 = self.b2();
        let fail = |m: String| Err(Error::Invariant(format!("{}: {m}", self.name)));
        if b2 < 0 {
            return fail(format!("b2 = {b2} < 0"));
        }
        if self.sigma.abs() > b2 {
            return fail(format!("|sigma| = {} exceeds b2 = {b2}", self.sigma.abs()));
        }
        if self.spin && self.parity != Parity::Even {
            return fail("spin with odd intersection form".into());
        }
        if let Some(l) = &self.lattice {
            let inv = l.invariants();
            if inv.rank as i64 != b2 || inv.signature != self.sigma || inv.parity != self.parity {
                return fail(format!("lattice ({inv}) does not match the record"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: chi {}, b2 {}, sigma {}, {}, pi1 {}, spin {}, cover spin {}",
            self.name,
            self.chi,
            self.b2(),
            self.sigma,
            self.parity,
            self.pi1,
            self.spin,
            self.cover_spin
        )
    }
}

pub fn connected_sum(x: &Manifold, y: &Manifold) -> Manifold {
    // The cover of X # Y with π₁(X) = 1 is Ỹ # m·X.
    let (pi1, cover_spin) = match (x.pi1.is_trivial(), y.pi1.is_trivial()) {
        (true, _) => (y.pi1.clone(), y.cover_spin && x.spin),
        (false, true) => (x.pi1.clone(), x.cover_spin && y.spin),
        (false, false) => (Pi1::Unknown, false),
    };
    let lattice = match (&x.lattice, &y.lattice) {
        (Some(a), Some(b)) => Some(a.direct_sum(b)),
        _ => None,
    };
    Manifold {
        name: format!("csum({}, {})", x.name, y.name),
        chi: x.chi + y.chi - 2,
        sigma: x.sigma + y.sigma,
        b1: x.b1 + y.b1,
        parity: x.parity.combine(y.parity),
        pi1,
        spin: x.spin && y.spin,
        cover_spin,
        lattice,
        capacities: x.capacities.add(&y.capacities),
        chi_h: None,
    }
}

/// Sum along a wedge of `g` circles carrying `π₁`.
pub fn sum_along_wedge(x: &Manifold, y: &Manifold, g: u32) -> Result<Manifold> {
    if g == 0 {
        return Err(Error::InvalidParams(
            "wedge needs at least one circle".into(),
        ));
    }
    if x.b1 != 0 || y.b1 != 0 {
        return Err(Error::Precondition(
            "wedge sums need b1 = 0 on both sides".into(),
        ));
    }
    if x.pi1 != y.pi1 {
        return Err(Error::FundamentalGroup(format!("{} vs {}", x.pi1, y.pi1)));
    }
    Ok(Manifold {
        name: format!("sumW(g={g}, {}, {})", x.name, y.name),
        // χ(νW) = 1 − g and χ(∂νW) = 0
        chi: x.chi + y.chi + 2 * (g as i64 - 1),
        sigma: x.sigma + y.sigma,
        b1: 0,
        parity: x.parity.combine(y.parity),
        pi1: x.pi1.clone(),
        spin: x.spin && y.spin,
        cover_spin: x.cover_spin && y.cover_spin,
        lattice: None,
        capacities: x.capacities.add(&y.capacities),
        chi_h: None,
    })
}

pub fn reverse_orientation(x: &Manifold) -> Manifold {
    let name = match unwrap_call(&x.name, "rev") {
        Some(inner) => inner.to_string(),
        None => format!("rev({})", x.name),
    };
    Manifold {
        name,
        sigma: -x.sigma,
        lattice: x.lattice.as_ref().map(Lattice::negate),
        capacities: x.capacities.mirror(),
        ..x.clone()
    }
}

pub fn universal_cover(x: &Manifold) -> Result<Manifold> {
    let m = x.pi1.order().ok_or_else(|| {
        Error::FundamentalGroup(format!("{}: pi1 is not known to be finite", x.name))
    })?;
    if x.b1 != 0 {
        return Err(Error::Precondition(format!("{}: b1 must vanish", x.name)));
    }
    if m == 1 {
        return Ok(x.clone());
    }
    let mi = m as i64;
    let chi = mi * x.chi;
    let sigma = mi * x.sigma;
    let parity = if x.cover_spin {
        Parity::Even
    } else {
        Parity::Odd
    };
    // Simply connected, so the form is determined when indefinite.
    let lattice = x.lattice.as_ref().and_then(|_| {
        classify_indefinite((chi - 2) as usize, sigma, parity)
            .ok()
            .map(|c| c.normal_form.build())
    });
    let c = &x.capacities;
    let half = if m % 2 == 0 { m / 2 } else { 0 };
    // An essential plane lifts to m/2 spheres of twice its Euler number.
    let capacities = Capacities {
        spheres_minus2: m * c.spheres_minus2 + half * c.planes_minus1,
        spheres_plus2: m * c.spheres_plus2 + half * c.planes_plus1,
        spheres_minus1: m * c.spheres_minus1,
        spheres_plus1: m * c.spheres_plus1,
        planes_minus1: 0,
        planes_plus1: 0,
    };
    Ok(Manifold {
        name: format!("cover({})", x.name),
        chi,
        sigma,
        b1: 0,
        parity,
        pi1: Pi1::Trivial,
        spin: x.cover_spin,
        cover_spin: x.cover_spin,
        lattice,
        capacities,
        chi_h: x.chi_h.map(|h| mi * h),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(s: &str) -> Manifold {
        s.parse::<BuildExpr>().unwrap().build().unwrap()
    }

    #[test]
    fn k3_plus_three_exceptional() {
        let m = block("csum(K3, CP2bar#3)");
        assert_eq!(
            (m.chi, m.b2(), m.sigma, m.parity),
            (27, 25, -19, Parity::Odd)
        );
        assert!(!m.spin);
        assert_eq!(m.capacities.spheres_minus1, 3);
        m.check_invariants().unwrap();
        assert_eq!(m.lattice.unwrap().rank(), 25);
    }

    #[test]
    fn adding_s2xs2() {
        let e = block("Enriques");
        let m = connected_sum(&e, &block("S2xS2"));
        assert_eq!((m.chi - e.chi, m.sigma - e.sigma), (2, 0));
        assert_eq!(m.pi1, e.pi1);
        assert!(m.cover_spin);
        assert_eq!(m.capacities.spheres_plus2, 1);
    }

    #[test]
    fn sum_of_two_nontrivial_groups_is_unknown() {
        let m = connected_sum(&block("Enriques"), &block("Enriques"));
        assert_eq!(m.pi1, Pi1::Unknown);
        assert!(universal_cover(&m).is_err());
    }

    #[test]
    fn cover_spin_needs_spin_summand() {
        let m = connected_sum(&block("Enriques"), &block("CP2bar"));
        assert!(!m.cover_spin);
    }

    #[test]
    fn wedge_sums() {
        let t = block("Teichner(b2=10)");
        let x2 = sum_along_wedge(&t, &t, 2).unwrap();
        assert_eq!(x2.b2(), 2 * 10 + 4);
        assert_eq!(x2.sigma, -2);
        assert_eq!(x2.parity, Parity::Odd);
        assert!(x2.cover_spin);

        let e = block("Enriques");
        let y2 = sum_along_wedge(&e, &e, 1).unwrap();
        assert_eq!((y2.chi, y2.b2()), (24, 22));
        assert_eq!(y2.parity, Parity::Even);

        assert!(matches!(
            sum_along_wedge(&t, &e, 2),
            Err(Error::FundamentalGroup(_))
        ));
        assert!(sum_along_wedge(&t, &t, 0).is_err());
    }

    #[test]
    fn reversal() {
        let h = reverse_orientation(&block("Hitchin"));
        assert_eq!(h.sigma, 4);
        assert_eq!(
            (h.capacities.planes_plus1, h.capacities.planes_minus1),
            (1, 0)
        );
        assert_eq!(h.lattice.as_ref().unwrap().invariants().signature, 4);
        h.check_invariants().unwrap();

        let k = block("K3");
        assert_eq!(reverse_orientation(&reverse_orientation(&k)), k);

        let s = block("S2xS2");
        let r = reverse_orientation(&s);
        assert_eq!(r.summary().lattice, s.summary().lattice);
        assert_eq!(
            (r.chi, r.sigma, r.capacities),
            (s.chi, s.sigma, s.capacities)
        );
    }

    #[test]
    fn covers() {
        let k3 = universal_cover(&block("Enriques")).unwrap();
        assert_eq!((k3.chi, k3.sigma, k3.spin), (24, -16, true));
        assert_eq!(
            k3.lattice.as_ref().unwrap().invariants(),
            block("K3").lattice.unwrap().invariants()
        );
        assert_eq!(k3.capacities.spheres_minus2, 17);
        k3.check_invariants().unwrap();

        let h = universal_cover(&block("Hitchin")).unwrap();
        assert_eq!((h.chi, h.sigma, h.spin), (24, -16, true));
        assert_eq!(h.capacities.spheres_minus2, 2);

        let e = universal_cover(&block("Elliptic(n=2,p=3,t=1)")).unwrap();
        assert_eq!((e.chi, e.sigma, e.chi_h), (72, -48, Some(6)));
        assert!(e.spin);

        let k = block("K3");
        assert_eq!(universal_cover(&k).unwrap(), k);
    }

    #[test]
    fn cover_commutes_with_reversal() {
        for s in [
            "Enriques",
            "Hitchin",
            "Teichner(b2=10)",
            "Elliptic(n=1,p=2,t=3)",
        ] {
            let x = block(s);
            let a = universal_cover(&reverse_orientation(&x)).unwrap();
            let b = reverse_orientation(&universal_cover(&x).unwrap());
            assert_eq!(a.summary().lattice, b.summary().lattice, "{s}");
            assert_eq!(
                (a.chi, a.sigma, a.spin, a.capacities),
                (b.chi, b.sigma, b.spin, b.capacities)
            );
        }
    }

    #[test]
    fn derived_h1_flag() {
        assert!(block("K3").h1_ok_derived());
        assert!(block("Elliptic(n=2,p=3,t=0)").h1_ok_derived());
        assert!(!block("Hitchin").h1_ok_derived());
    }
}
