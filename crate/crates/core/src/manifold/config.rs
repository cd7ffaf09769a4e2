use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::Manifold;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Sphere,
    ProjectivePlane,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub kind: SurfaceKind,
    pub euler: i64,
    pub count: u64,
    /// Only meaningful for projective planes.
    #[serde(default)]
    pub essential: bool,
}

/// A disjoint union of embedded spheres and projective planes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SurfaceConfig {
    pub components: Vec<Component>,
    /// One class per surface, in the manifold's lattice basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<i64>>>,
}

impl SurfaceConfig {
    pub fn spheres(euler: i64, count: u64) -> Self {
        Self {
            components: vec![Component {
                kind: SurfaceKind::Sphere,
                euler,
                count,
                essential: false,
            }],
            classes: None,
        }
    }

    pub fn essential_planes(euler: i64, count: u64) -> Self {
        Self {
            components: vec![Component {
                kind: SurfaceKind::ProjectivePlane,
                euler,
                count,
                essential: true,
            }],
            classes: None,
        }
    }

    pub fn with(mut self, other: SurfaceConfig) -> Self {
        self.components.extend(other.components);
        self
    }

    pub fn k(&self) -> u64 {
        self.components.iter().map(|c| c.count).sum()
    }

    pub fn k_plus(&self) -> u64 {
        self.components
            .iter()
            .filter(|c| c.euler > 0)
            .map(|c| c.count)
            .sum()
    }

    pub fn k_minus(&self) -> u64 {
        self.components
            .iter()
            .filter(|c| c.euler < 0)
            .map(|c| c.count)
            .sum()
    }

    pub fn has_planes(&self) -> bool {
        self.components
            .iter()
            .any(|c| c.kind == SurfaceKind::ProjectivePlane)
    }

    /// Distinct Euler numbers occurring in the configuration.
    pub fn eulers(&self) -> Vec<i64> {
        let mut e: Vec<i64> = self.components.iter().map(|c| c.euler).collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    pub fn classes_big(&self) -> Option<Vec<Vec<BigInt>>> {
        self.classes.as_ref().map(|cs| {
            cs.iter()
                .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                .collect()
        })
    }

    /// Shape errors: Euler numbers out of range, empty components, wrong class count.
    pub fn shape_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            let allowed: &[i64] = match c.kind {
                SurfaceKind::Sphere => &[-2, 2, -1, 1],
                SurfaceKind::ProjectivePlane => &[-1, 1],
            };
            if !allowed.contains(&c.euler) {
                out.push(format!(
                    "component {i}: Euler number {} not allowed for {:?}",
                    c.euler, c.kind
                ));
            }
            if c.count == 0 {
                out.push(format!("component {i}: count must be positive"));
            }
            if c.kind == SurfaceKind::Sphere && c.essential {
                out.push(format!(
                    "component {i}: only projective planes can be essential"
                ));
            }
        }
        if let Some(cs) = &self.classes {
            if cs.len() as u64 != self.k() {
                out.push(format!(
                    "{} classes given for {} surfaces",
                    cs.len(),
                    self.k()
                ));
            }
        }
        out
    }

    pub fn validate_shape(&self) -> Result<()> {
        match self.shape_violations().into_iter().next() {
            Some(v) => Err(Error::InvalidParams(v)),
            None => Ok(()),
        }
    }

    /// The same configuration in the reversed orientation.
    pub fn mirror(&self) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|c| Component {
                    euler: -c.euler,
                    ..c.clone()
                })
                .collect(),
            classes: self.classes.clone(),
        }
    }
}

/// Preimage of a sphere configuration in an `m`-fold cover.
pub fn lift_surface_config(c: &SurfaceConfig, m: u64) -> Result<SurfaceConfig> {
    if m == 0 {
        return Err(Error::InvalidParams("cover degree must be positive".into()));
    }
    if c.has_planes() {
        return Err(Error::Precondition(
            "projective planes do not lift componentwise; reduce them to spheres first".into(),
        ));
    }
    Ok(SurfaceConfig {
        components: c
            .components
            .iter()
            .map(|comp| Component {
                count: comp.count * m,
                ..comp.clone()
            })
            .collect(),
        classes: None,
    })
}

/// Capacity and class checks; an empty list means the configuration fits.
pub fn validate_config(x: &Manifold, c: &SurfaceConfig) -> Vec<String> {
    let mut out = c.shape_violations();
    let mut demand: BTreeMap<(SurfaceKind, i64, bool), u64> = BTreeMap::new();
    for comp in &c.components {
        let essential = comp.kind == SurfaceKind::ProjectivePlane && comp.essential;
        *demand
            .entry((comp.kind, comp.euler, essential))
            .or_default() += comp.count;
    }
    for ((kind, euler, essential), want) in demand {
        let have = x.capacities.get(kind, euler, essential);
        if want > have {
            let what = match kind {
                SurfaceKind::Sphere => "spheres".to_string(),
                SurfaceKind::ProjectivePlane if essential => "essential projective planes".into(),
                SurfaceKind::ProjectivePlane => "non-essential projective planes".into(),
            };
            out.push(format!(
                "{} has room for {have} disjoint {what} of Euler number {euler}, {want} requested",
                x.name
            ));
        }
    }
    if let Some(classes) = c.classes_big() {
        let Some(lat) = &x.lattice else {
            out.push(format!(
                "{} has no explicit lattice for the given classes",
                x.name
            ));
            return out;
        };
        let eulers: Vec<i64> = c
            .components
            .iter()
            .flat_map(|comp| std::iter::repeat(comp.euler).take(comp.count as usize))
            .collect();
        for (i, cl) in classes.iter().enumerate() {
            match lat.norm(cl) {
                Err(e) => out.push(format!("class {i}: {e}")),
                Ok(n) => {
                    if let Some(&e) = eulers.get(i) {
                        if n != BigInt::from(e) {
                            out.push(format!("class {i} has square {n}, expected {e}"));
                        }
                    }
                }
            }
        }
        for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                if let Ok(p) = lat.pair(&classes[i], &classes[j]) {
                    if !p.is_zero() {
                        out.push(format!("classes {i} and {j} pair to {p}"));
                    }
                }
            }
        }
    }
    out
}
