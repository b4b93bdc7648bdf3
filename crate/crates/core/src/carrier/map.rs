use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{CarrierError, Elem, FiniteStructure, Kind};

/// Preservation law declared on a [`StructureMap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapLaw {
    SrcTgt,
    Involution,
    Product,
}

impl fmt::Display for MapLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapLaw::SrcTgt => "src_tgt",
            MapLaw::Involution => "involution",
            MapLaw::Product => "product",
        })
    }
}

impl MapLaw {
    /// The laws a map between structures of `kind` is expected to satisfy.
    pub fn for_kind(kind: Kind) -> BTreeSet<MapLaw> {
        match kind {
            Kind::Digraph => [MapLaw::SrcTgt].into(),
            Kind::Graph => [MapLaw::SrcTgt, MapLaw::Involution].into(),
            Kind::Groupoid => [MapLaw::SrcTgt, MapLaw::Involution, MapLaw::Product].into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapViolation {
    pub law: MapLaw,
    pub witness: String,
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.law, self.witness)
    }
}

/// A total function between two carriers together with the preservation
/// laws it is known to satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureMap {
    domain: Arc<FiniteStructure>,
    codomain: Arc<FiniteStructure>,
    table: Vec<Elem>,
    laws: BTreeSet<MapLaw>,
}

impl StructureMap {
    /// Builds a map and checks every declared law pointwise.
    pub fn new(
        domain: Arc<FiniteStructure>,
        codomain: Arc<FiniteStructure>,
        table: Vec<Elem>,
        laws: BTreeSet<MapLaw>,
    ) -> Result<Self, CarrierError> {
        let map = Self::unchecked(domain, codomain, table, laws)?;
        if let Some(v) = map.violations().into_iter().next() {
            return Err(CarrierError::MapLawViolated {
                law: v.law,
                witness: v.witness,
            });
        }
        Ok(map)
    }

    /// Builds a map checking only arity and range.
    pub fn unchecked(
        domain: Arc<FiniteStructure>,
        codomain: Arc<FiniteStructure>,
        table: Vec<Elem>,
        laws: BTreeSet<MapLaw>,
    ) -> Result<Self, CarrierError> {
        if table.len() != domain.len() {
            return Err(CarrierError::MapArity {
                expected: domain.len(),
                found: table.len(),
            });
        }
        if let Some(x) = table.iter().position(|&y| y >= codomain.len()) {
            return Err(CarrierError::MapOutOfRange {
                element: domain.name(x).to_string(),
            });
        }
        Ok(StructureMap {
            domain,
            codomain,
            table,
            laws,
        })
    }

    pub fn identity(s: Arc<FiniteStructure>) -> Self {
        let laws = MapLaw::for_kind(s.kind());
        let table = s.elements().collect();
        StructureMap {
            domain: s.clone(),
            codomain: s,
            table,
            laws,
        }
    }

    pub fn domain(&self) -> &Arc<FiniteStructure> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteStructure> {
        &self.codomain
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn laws(&self) -> &BTreeSet<MapLaw> {
        &self.laws
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.table[x]
    }

    /// Every pointwise failure of the declared laws.
    pub fn violations(&self) -> Vec<MapViolation> {
        let (d, c, f) = (&*self.domain, &*self.codomain, &self.table);
        let mut out = Vec::new();
        if self.laws.contains(&MapLaw::SrcTgt) {
            for x in d.elements() {
                if f[d.src(x)] != c.src(f[x]) || f[d.tgt(x)] != c.tgt(f[x]) {
                    out.push(MapViolation {
                        law: MapLaw::SrcTgt,
                        witness: d.name(x).into(),
                    });
                }
            }
        }
        if self.laws.contains(&MapLaw::Involution) {
            for x in d.elements() {
                let ok = match (d.inv(x), c.inv(f[x])) {
                    (Some(xi), Some(yi)) => f[xi] == yi,
                    _ => false,
                };
                if !ok {
                    out.push(MapViolation {
                        law: MapLaw::Involution,
                        witness: d.name(x).into(),
                    });
                }
            }
        }
        if self.laws.contains(&MapLaw::Product) {
            for (g, h, gh) in d.products() {
                let ok = c.composable(f[g], f[h]) && c.mul(f[g], f[h]) == Some(f[gh]);
                if !ok {
                    out.push(MapViolation {
                        law: MapLaw::Product,
                        witness: format!("({},{})", d.name(g), d.name(h)),
                    });
                }
            }
        }
        out
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        self.table
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        for &y in &self.table {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// A map of directed graphs is rigid when it sends edges to edges.
    pub fn is_rigid(&self) -> bool {
        self.domain
            .edges()
            .all(|e| !self.codomain.is_vertex(self.table[e]))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &StructureMap) -> Result<StructureMap, CarrierError> {
        if other.domain.len() != self.codomain.len() {
            return Err(CarrierError::MapArity {
                expected: other.domain.len(),
                found: self.codomain.len(),
            });
        }
        let table = self.table.iter().map(|&y| other.table[y]).collect();
        let laws = self.laws.intersection(&other.laws).copied().collect();
        Ok(StructureMap {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            table,
            laws,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_satisfies_all_laws() {
        let g = Arc::new(fixtures::cyclic(4));
        assert!(StructureMap::identity(g).violations().is_empty());
    }

    #[test]
    fn constant_map_is_not_a_homomorphism_into_a_nontrivial_target() {
        let g = Arc::new(fixtures::cyclic(2));
        let one = g.element("1").unwrap();
        let err = StructureMap::new(
            g.clone(),
            g.clone(),
            vec![one, one],
            MapLaw::for_kind(Kind::Groupoid),
        );
        assert!(matches!(err, Err(CarrierError::MapLawViolated { .. })));
    }

    #[test]
    fn collapsing_an_edge_is_not_rigid() {
        let p = Arc::new(fixtures::path(1));
        let point = Arc::new(fixtures::discrete_space(1));
        let f =
            StructureMap::new(p, point, vec![0, 0, 0], MapLaw::for_kind(Kind::Digraph)).unwrap();
        assert!(!f.is_rigid());
        assert!(f.is_surjective());
        assert!(!f.is_injective());
    }
}
