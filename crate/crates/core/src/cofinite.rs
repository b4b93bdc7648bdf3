//! Finite filter bases of finite-index relations, Hausdorff and
//! discreteness certificates, separating congruences and the compatible
//! interior of an arbitrary equivalence.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::carrier::{Elem, FiniteStructure, MapLaw, StructureMap};
use crate::fixtures;
use crate::partition::{check, kernel, Law, LawFailure, Partition, PartitionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CofiniteError {
    #[error("member {index} covers {found} elements but the carrier has {expected}")]
    CarrierMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("member {index} fails the {law} law: {failure}")]
    MemberFailsLaw {
        index: usize,
        law: Law,
        failure: LawFailure,
    },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// A finite family of relations on one carrier, each passing `law`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterBase {
    carrier: Arc<FiniteStructure>,
    law: Law,
    members: Vec<Partition>,
}

impl FilterBase {
    pub fn new(
        carrier: Arc<FiniteStructure>,
        law: Law,
        members: Vec<Partition>,
    ) -> Result<Self, CofiniteError> {
        for (index, r) in members.iter().enumerate() {
            if r.len() != carrier.len() {
                return Err(CofiniteError::CarrierMismatch {
                    index,
                    expected: carrier.len(),
                    found: r.len(),
                });
            }
            let report = check(law, &carrier, r)?;
            if let Some(failure) = report.failures.into_iter().next() {
                return Err(CofiniteError::MemberFailsLaw {
                    index,
                    law,
                    failure,
                });
            }
        }
        Ok(FilterBase {
            carrier,
            law,
            members,
        })
    }

    pub fn carrier(&self) -> &Arc<FiniteStructure> {
        &self.carrier
    }

    pub fn law(&self) -> Law {
        self.law
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    /// `∩ I`; the full relation when there are no members.
    pub fn meet(&self) -> Partition {
        self.members
            .iter()
            .fold(Partition::full(self.carrier.len()), |acc, r| {
                acc.intersect(r).expect("members share the carrier")
            })
    }

    /// The family closed under pairwise meets, without duplicates.
    pub fn meet_closure(&self) -> FilterBase {
        let mut members: Vec<Partition> = Vec::new();
        let mut todo = self.members.clone();
        while let Some(r) = todo.pop() {
            if members.contains(&r) {
                continue;
            }
            for m in &members {
                let both = m.intersect(&r).expect("members share the carrier");
                if !members.contains(&both) && !todo.contains(&both) {
                    todo.push(both);
                }
            }
            members.push(r);
        }
        FilterBase {
            carrier: self.carrier.clone(),
            law: self.law,
            members,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterBaseReport {
    pub passed: bool,
    /// Indices of two members with no member below their meet.
    pub witness: Option<(usize, usize)>,
}

/// Whether every pair of members has a member refining their meet.
pub fn is_filter_base(i: &FilterBase) -> FilterBaseReport {
    let m = &i.members;
    for a in 0..m.len() {
        for b in a + 1..m.len() {
            let both = m[a].intersect(&m[b]).expect("members share the carrier");
            if !m.iter().any(|r| r.refines(&both)) {
                return FilterBaseReport {
                    passed: false,
                    witness: Some((a, b)),
                };
            }
        }
    }
    FilterBaseReport {
        passed: true,
        witness: None,
    }
}

/// `∩ I = δ`.
pub fn is_hausdorff(i: &FilterBase) -> bool {
    i.meet().is_discrete()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementSeparation {
    pub element: String,
    /// Index of the first member with a singleton class at this element.
    pub member: Option<usize>,
}

/// For each element, whether some member isolates it.
pub fn discreteness_certificate(i: &FilterBase) -> Vec<ElementSeparation> {
    i.carrier
        .elements()
        .map(|x| ElementSeparation {
            element: i.carrier.name(x).to_string(),
            member: i.members.iter().position(|r| r.class_members(x).len() == 1),
        })
        .collect()
}

/// The map `φ: Γ → Δ` with `φ⁻¹(φ(y)) = {y}`.
///
/// For a vertex `y` the codomain is the graph Δ of
/// [`fixtures::delta_graph`]: `y ↦ a`, other vertices `↦ b`, and an edge
/// goes to the unique edge of Δ between the images of its ends. For an edge
/// `y` the codomain is a single loop `e` at `a`, with `y ↦ e` and all else
/// `↦ a`. Only sources and targets are used, so any kind is accepted.
pub fn separating_map(s: &Arc<FiniteStructure>, y: Elem) -> Result<StructureMap, CofiniteError> {
    if y >= s.len() {
        return Err(CofiniteError::UnknownElement(y.to_string()));
    }
    let (delta, table): (FiniteStructure, Vec<Elem>) = if s.is_vertex(y) {
        let delta = fixtures::delta_graph();
        let id = |n: &str| delta.id(n).expect("Δ element");
        let (a, b) = (id("a"), id("b"));
        let (e, f, g, gbar) = (id("e"), id("f"), id("g"), id("gbar"));
        let table = s
            .elements()
            .map(|x| {
                if s.is_vertex(x) {
                    return if x == y { a } else { b };
                }
                match (s.src(x) == y, s.tgt(x) == y) {
                    (true, true) => e,
                    (false, false) => f,
                    (true, false) => g,
                    (false, true) => gbar,
                }
            })
            .collect();
        (delta, table)
    } else {
        let delta = fixtures::loop_graph();
        let (a, e) = (delta.id("a").expect("a"), delta.id("e").expect("e"));
        (
            delta,
            s.elements().map(|x| if x == y { e } else { a }).collect(),
        )
    };
    StructureMap::new(s.clone(), Arc::new(delta), table, [MapLaw::SrcTgt].into())
        .map_err(|e| PartitionError::from(e).into())
}

/// `ker φ` for the map of [`separating_map`]: compatible, with `R[y] = {y}`.
pub fn separating_congruence(
    s: &Arc<FiniteStructure>,
    y: Elem,
) -> Result<Partition, CofiniteError> {
    Ok(kernel(&separating_map(s, y)?))
}

/// The separating relations of every element.
pub fn separating_family(s: &Arc<FiniteStructure>) -> FilterBase {
    let members = s
        .elements()
        .map(|y| separating_congruence(s, y).expect("element of the carrier"))
        .collect();
    FilterBase {
        carrier: s.clone(),
        law: Law::Compatible,
        members,
    }
}

/// `S = R ∩ (s×s)⁻¹[R] ∩ (t×t)⁻¹[R]`, the largest compatible relation
/// inside `R`. One step suffices because `s` and `t` fix vertices.
pub fn compatible_interior(s: &FiniteStructure, r: &Partition) -> Result<Partition, CofiniteError> {
    if r.len() != s.len() {
        return Err(PartitionError::CarrierMismatch {
            expected: s.len(),
            found: r.len(),
        }
        .into());
    }
    Ok(Partition::from_labels(s.elements().map(|x| {
        (r.class_of(x), r.class_of(s.src(x)), r.class_of(s.tgt(x)))
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Arc<FiniteStructure> {
        Arc::new(fixtures::path(2))
    }

    fn classes(s: &FiniteStructure, cs: &[&[&str]]) -> Partition {
        let owned: Vec<Vec<&str>> = cs.iter().map(|c| c.to_vec()).collect();
        Partition::from_named_classes(s, &owned).unwrap()
    }

    #[test]
    fn separating_at_a_vertex() {
        let g = p2();
        let r = separating_congruence(&g, g.element("1").unwrap()).unwrap();
        assert_eq!(
            r.named_classes(&g),
            vec![vec!["0", "2"], vec!["1"], vec!["e01"], vec!["e12"]]
        );
        assert!(check(Law::Compatible, &g, &r).unwrap().passed);
    }

    #[test]
    fn separating_at_an_edge() {
        let g = p2();
        let r = separating_congruence(&g, g.element("e01").unwrap()).unwrap();
        assert_eq!(
            r.named_classes(&g),
            vec![vec!["0", "1", "2", "e12"], vec!["e01"]]
        );
    }

    #[test]
    fn separating_the_only_point() {
        let g = Arc::new(fixtures::discrete_space(1));
        assert!(separating_congruence(&g, 0).unwrap().is_discrete());
    }

    #[test]
    fn vertex_separating_map_misses_two_loops() {
        let g = p2();
        let f = separating_map(&g, g.element("1").unwrap()).unwrap();
        let iso = crate::partition::first_isomorphism(&f).unwrap();
        assert!(iso.injective);
        assert!(!iso.surjective);
        let hit: Vec<&str> = f.table().iter().map(|&x| f.codomain().name(x)).collect();
        assert!(!hit.contains(&"e") && !hit.contains(&"f"));
    }

    #[test]
    fn two_vertex_kernels_meet_in_the_diagonal() {
        let g = p2();
        let r0 = separating_congruence(&g, 0).unwrap();
        let r1 = separating_congruence(&g, 1).unwrap();
        assert!(r0.intersect(&r1).unwrap().is_discrete());
    }

    #[test]
    fn filter_base_examples() {
        let g = p2();
        let n = g.len();
        let delta =
            FilterBase::new(g.clone(), Law::Compatible, vec![Partition::discrete(n)]).unwrap();
        assert!(is_filter_base(&delta).passed);
        assert!(is_hausdorff(&delta));
        let r = classes(&g, &[&["0", "1"]]);
        let with_delta = FilterBase::new(
            g.clone(),
            Law::Compatible,
            vec![r.clone(), Partition::discrete(n)],
        )
        .unwrap();
        assert!(is_filter_base(&with_delta).passed);

        let other = classes(&g, &[&["1", "2"]]);
        let apart = FilterBase::new(g.clone(), Law::Compatible, vec![r, other]).unwrap();
        assert_eq!(is_filter_base(&apart).witness, Some((0, 1)));
    }

    #[test]
    fn full_relation_is_not_hausdorff() {
        let g = Arc::new(fixtures::discrete_space(2));
        let fb = FilterBase::new(g, Law::Compatible, vec![Partition::full(2)]).unwrap();
        assert!(!is_hausdorff(&fb));
        assert!(discreteness_certificate(&fb)
            .iter()
            .all(|e| e.member.is_none()));
    }

    #[test]
    fn separating_family_is_hausdorff_and_discrete() {
        let fb = separating_family(&p2());
        assert!(is_hausdorff(&fb));
        assert!(discreteness_certificate(&fb)
            .iter()
            .all(|e| e.member.is_some()));
    }

    #[test]
    fn members_must_pass_the_law() {
        let g = p2();
        let bad = classes(&g, &[&["e01", "e12"]]);
        assert!(matches!(
            FilterBase::new(g, Law::Compatible, vec![bad]),
            Err(CofiniteError::MemberFailsLaw { index: 0, .. })
        ));
    }

    #[test]
    fn interior_examples() {
        let g = p2();
        let compatible = classes(&g, &[&["0", "1"]]);
        assert_eq!(compatible_interior(&g, &compatible).unwrap(), compatible);
        let edges = classes(&g, &[&["e01", "e12"]]);
        assert!(compatible_interior(&g, &edges).unwrap().is_discrete());
        let full = Partition::full(g.len());
        assert_eq!(compatible_interior(&g, &full).unwrap(), full);
    }
}
