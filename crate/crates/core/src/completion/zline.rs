//! The ℤ-line: vertices `v{i}` for `i ∈ ℤ` and edges `e{i}: v{i} → v{i+1}`,
//! with its arc retractions `[-n, n]` and circle quotients `Γ_n`.

use std::sync::Arc;

use super::{Base, InverseSystem, SymbolicBase};
use crate::carrier::{Builder, Elem, FiniteStructure, Kind, MapLaw, StructureMap};
use crate::partition::{quotient, Law, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Z {
    V(i64),
    E(i64),
}

impl Z {
    pub fn parse(id: &str) -> Option<Z> {
        let (tag, rest) = id.split_at_checked(1)?;
        let i: i64 = rest.parse().ok()?;
        if rest.starts_with('+')
            || (rest.len() > 1 && rest.trim_start_matches('-').starts_with('0'))
        {
            return None;
        }
        match tag {
            "v" => Some(Z::V(i)),
            "e" => Some(Z::E(i)),
            _ => None,
        }
    }

    pub fn id(self) -> String {
        match self {
            Z::V(i) => format!("v{i}"),
            Z::E(i) => format!("e{i}"),
        }
    }

    pub fn src(self) -> Z {
        match self {
            Z::V(i) | Z::E(i) => Z::V(i),
        }
    }

    pub fn tgt(self) -> Z {
        match self {
            Z::V(i) => Z::V(i),
            Z::E(i) => Z::V(i + 1),
        }
    }
}

/// The retraction `θ_n: Γ → [-n, n]`; edges outside the arc collapse to
/// the nearer end.
pub fn theta(n: usize, z: Z) -> Z {
    let n = n as i64;
    match z {
        Z::V(i) => Z::V(i.clamp(-n, n)),
        Z::E(i) if (-n..n).contains(&i) => Z::E(i),
        Z::E(i) if i >= n => Z::V(n),
        Z::E(_) => Z::V(-n),
    }
}

/// `Γ_n` names the glued vertex `v-n`, the smaller of the two ids.
fn glue(n: usize, z: Z) -> Z {
    if n >= 1 && z == Z::V(n as i64) {
        Z::V(-(n as i64))
    } else {
        z
    }
}

/// The arc `[-n, n]`.
pub fn arc(n: usize) -> FiniteStructure {
    let n = n as i64;
    let mut b = Builder::new(Kind::Digraph);
    for i in -n..=n {
        b.vertex(Z::V(i).id()).expect("fresh id");
    }
    for i in -n..n {
        let (s, t) = (
            b.id(&Z::V(i).id()).unwrap(),
            b.id(&Z::V(i + 1).id()).unwrap(),
        );
        b.edge(Z::E(i).id(), s, t).expect("fresh id");
    }
    b.build().expect("arc is well formed")
}

/// `Γ_n = [-n, n]/(-n = n)` for `n ≥ 1`.
pub fn circle(n: usize) -> FiniteStructure {
    assert!(n >= 1);
    let a = Arc::new(arc(n));
    let ends = vec![vec![Z::V(-(n as i64)).id(), Z::V(n as i64).id()]];
    let r = Partition::from_named_classes(&a, &ends).expect("arc vertices");
    let q = quotient(&a, &r, Law::Compatible).expect("gluing two vertices is compatible");
    Arc::try_unwrap(q.structure).unwrap_or_else(|s| (*s).clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Circles,
    Arcs,
}

/// The ℤ-line as a symbolic base for one of the two systems.
#[derive(Debug, Clone, Copy)]
pub struct ZLine {
    pub shape: Shape,
}

impl ZLine {
    fn image(&self, level: usize, z: Z) -> Z {
        match self.shape {
            Shape::Arcs => theta(level, z),
            Shape::Circles => glue(level, theta(level, z)),
        }
    }
}

impl SymbolicBase for ZLine {
    fn describe(&self) -> String {
        match self.shape {
            Shape::Circles => "zline-circles".into(),
            Shape::Arcs => "zline-arcs".into(),
        }
    }

    fn kind(&self) -> Kind {
        Kind::Digraph
    }

    fn window(&self, w: usize) -> Vec<String> {
        let w = w as i64;
        (-w..=w)
            .map(|i| Z::V(i).id())
            .chain((-w..w).map(|i| Z::E(i).id()))
            .collect()
    }

    fn contains(&self, id: &str, w: usize) -> bool {
        let w = w as i64;
        match Z::parse(id) {
            Some(Z::V(i)) => (-w..=w).contains(&i),
            Some(Z::E(i)) => (-w..w).contains(&i),
            None => false,
        }
    }

    fn is_vertex(&self, id: &str) -> bool {
        matches!(Z::parse(id), Some(Z::V(_)))
    }

    fn src(&self, id: &str) -> String {
        Z::parse(id).map(|z| z.src().id()).unwrap_or_default()
    }

    fn tgt(&self, id: &str) -> String {
        Z::parse(id).map(|z| z.tgt().id()).unwrap_or_default()
    }

    fn project(&self, level: usize, id: &str) -> String {
        Z::parse(id)
            .map(|z| self.image(level, z).id())
            .unwrap_or_default()
    }

    /// The glued vertex for circles; both ends of the arc (the single
    /// vertex `v0` at level 0).
    fn declared_unbounded(&self, level: usize) -> Option<Vec<String>> {
        let n = level as i64;
        Some(match (self.shape, level) {
            (_, 0) => vec![Z::V(0).id()],
            (Shape::Circles, _) => vec![Z::V(-n).id()],
            (Shape::Arcs, _) => vec![Z::V(-n).id(), Z::V(n).id()],
        })
    }
}

fn build(shape: Shape, first: usize, max_level: usize) -> InverseSystem {
    let base = ZLine { shape };
    let levels: Vec<Arc<FiniteStructure>> = (first..=max_level)
        .map(|n| {
            Arc::new(match shape {
                Shape::Arcs => arc(n),
                Shape::Circles => circle(n),
            })
        })
        .collect();
    let bondings = levels
        .windows(2)
        .enumerate()
        .map(|(i, pair)| {
            let n = first + i;
            let table: Vec<Elem> = pair[1]
                .names()
                .iter()
                .map(|id| {
                    let z = Z::parse(id).expect("ℤ-line id");
                    pair[0]
                        .id(&base.image(n, z).id())
                        .expect("image lies in the level")
                })
                .collect();
            StructureMap::new(
                pair[1].clone(),
                pair[0].clone(),
                table,
                MapLaw::for_kind(Kind::Digraph),
            )
            .expect("ℤ-line bondings are maps of directed graphs")
        })
        .collect();
    InverseSystem::new(
        first,
        levels,
        bondings,
        Some(Base::Symbolic(Arc::new(base))),
    )
    .expect("consistent level count")
}

/// `(Γ_n, φ_mn)` for `n = 1..=max_level`.
pub fn circles(max_level: usize) -> InverseSystem {
    build(Shape::Circles, 1, max_level.max(1))
}

/// `([-n, n], θ_mn)` for `n = 0..=max_level`.
pub fn arcs(max_level: usize) -> InverseSystem {
    build(Shape::Arcs, 0, max_level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::{level_embed, CompletionError};

    #[test]
    fn ids_round_trip() {
        for z in [Z::V(0), Z::V(-3), Z::E(5), Z::E(-1)] {
            assert_eq!(Z::parse(&z.id()), Some(z));
        }
        assert_eq!(Z::parse("v+1"), None);
        assert_eq!(Z::parse("v01"), None);
        assert_eq!(Z::parse("x1"), None);
    }

    #[test]
    fn level_shapes() {
        for n in 1..=4 {
            let c = circle(n);
            assert_eq!((c.vertex_count(), c.edges().count()), (2 * n, 2 * n));
            let a = arc(n);
            assert_eq!((a.vertex_count(), a.edges().count()), (2 * n + 1, 2 * n));
            assert!(c.is_valid() && a.is_valid());
        }
        assert_eq!(arc(0).len(), 1);
    }

    #[test]
    fn circle_is_a_cycle() {
        let c = circle(3);
        for v in c.vertices() {
            assert_eq!(c.edges().filter(|&e| c.src(e) == v).count(), 1);
            assert_eq!(c.edges().filter(|&e| c.tgt(e) == v).count(), 1);
        }
        assert!(c.id("v-3").is_some() && c.id("v3").is_none());
    }

    #[test]
    fn systems_validate() {
        for sys in [circles(4), arcs(4)] {
            let r = sys.validate(10);
            assert!(r.passed, "{:?}", r.failures);
        }
    }

    #[test]
    fn embeddings() {
        let c = circles(4);
        for n in 1..=4 {
            assert_eq!(level_embed(&c, "v0", n).unwrap(), "v0");
        }
        let a = arcs(4);
        assert_eq!(level_embed(&a, "v7", 3).unwrap(), "v3");
        assert_eq!(level_embed(&a, "e5", 3).unwrap(), "v3");
        assert_eq!(level_embed(&a, "e-5", 3).unwrap(), "v-3");
        assert_eq!(level_embed(&c, "v-9", 2).unwrap(), "v-2");
        assert!(matches!(
            level_embed(&a, "v99", 3),
            Err(CompletionError::OutOfWindow { .. })
        ));
    }

    #[test]
    fn corrupted_bonding_is_caught() {
        let mut sys = circles(4);
        let b = sys.bonding(2).unwrap();
        let mut table = b.table().to_vec();
        let dom = b.domain().clone();
        let cod = b.codomain().clone();
        let x = dom.id("e0").unwrap();
        table[x] = cod.id("e1").unwrap();
        sys.replace_bonding(2, table).unwrap();
        let r = sys.validate(10);
        assert!(!r.passed);
        assert!(r.failures.iter().any(|f| f.to_string().contains("e0")));
    }
}
