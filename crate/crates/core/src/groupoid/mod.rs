//! Congruences on finite groupoids: Condition 3, rigid congruences and
//! coherent families of normal vertex subgroups.

mod subgroups;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::carrier::{hom_set, CarrierError, Elem, FiniteStructure, Kind};
use crate::cofinite::FilterBase;
use crate::completion::{system_from_chain, CompletionError, InverseSystem};
use crate::partition::Law;
use crate::partition::{check, LawFailure, Partition, PartitionError};

pub use subgroups::{is_normal, is_subgroup, normal_subgroups, subgroups, vertex_group};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("expected a groupoid, found a {0}")]
    NotAGroupoid(Kind),
    #[error("relation is not a congruence: {0}")]
    NotACongruence(LawFailure),
    #[error("congruence relates the distinct vertices `{x}` and `{y}`")]
    NotRigid { x: String, y: String },
    #[error("no arrow from `{x}` to `{y}`")]
    NotConnected { x: String, y: String },
    #[error("the set given at `{x}` is not a subgroup of its vertex group")]
    NotSubgroup { x: String },
    #[error("the subgroup at `{x}` is not normal")]
    NotNormal { x: String },
    #[error(
        "conjugation by `{g}` does not carry the subgroup at its source onto the one at its target"
    )]
    NotCoherent { g: String },
    #[error("vertices `{x}` and `{y}` are bases in the same component")]
    ConflictingBases { x: String, y: String },
    #[error("no member separates vertex `{x}` from vertex `{y}`")]
    VerticesInseparable { x: String, y: String },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error(transparent)]
    Completion(#[from] Box<CompletionError>),
}

fn ensure_groupoid(g: &FiniteStructure) -> Result<(), GroupoidError> {
    if g.kind() == Kind::Groupoid {
        Ok(())
    } else {
        Err(GroupoidError::NotAGroupoid(g.kind()))
    }
}

fn ensure_congruence(g: &FiniteStructure, rho: &Partition) -> Result<(), GroupoidError> {
    ensure_groupoid(g)?;
    let report = check(Law::Congruence, g, rho)?;
    match report.failures.into_iter().next() {
        Some(w) => Err(GroupoidError::NotACongruence(w)),
        None => Ok(()),
    }
}

/// Whether no two distinct vertices are related.
pub fn is_rigid(g: &FiniteStructure, rho: &Partition) -> Result<bool, GroupoidError> {
    ensure_congruence(g, rho)?;
    Ok(vertex_collision(g, rho).is_none())
}

fn vertex_collision(g: &FiniteStructure, rho: &Partition) -> Option<(Elem, Elem)> {
    let mut seen: HashMap<usize, Elem> = HashMap::new();
    for v in g.vertices() {
        if let Some(&u) = seen.get(&rho.class_of(v)) {
            return Some((u, v));
        }
        seen.insert(rho.class_of(v), v);
    }
    None
}

/// Outcome of [`condition3_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition3Report {
    pub holds: bool,
    /// Composable triples of the quotient with no composable lift, named
    /// by class representatives. Triples of non-identity classes come first.
    pub unlifted: Vec<(String, String, String)>,
}

impl Condition3Report {
    pub fn witness(&self) -> Option<(String, String, String)> {
        self.unlifted.first().cloned()
    }
}

/// Composable triples `(X, Y, Z)` of `G/ρ` (as class indices) that are not
/// the image of a composable triple of `G`.
pub(crate) fn unlifted_triples(g: &FiniteStructure, rho: &Partition) -> Vec<(usize, usize, usize)> {
    let c = |x: Elem| rho.class_of(x);
    let mut lifted: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut from: Vec<Vec<Elem>> = vec![Vec::new(); g.len()];
    for h in g.elements() {
        from[g.src(h)].push(h);
    }
    for x in g.elements() {
        for &y in &from[g.tgt(x)] {
            for &z in &from[g.tgt(y)] {
                lifted.insert((c(x), c(y), c(z)));
            }
        }
    }
    // Ends of a class are those of any member.
    let heads: Vec<Elem> = rho.classes().iter().map(|cl| cl[0]).collect();
    let mut class_from: Vec<Vec<usize>> = vec![Vec::new(); rho.index()];
    for (k, &h) in heads.iter().enumerate() {
        class_from[c(g.src(h))].push(k);
    }
    let mut out = Vec::new();
    for (x, &hx) in heads.iter().enumerate() {
        for &y in &class_from[c(g.tgt(hx))] {
            for &z in &class_from[c(g.tgt(heads[y]))] {
                if !lifted.contains(&(x, y, z)) {
                    out.push((x, y, z));
                }
            }
        }
    }
    out
}

/// Whether every composable triple of `G/ρ` lifts to a composable triple
/// of `G`. All failing triples are reported.
pub fn condition3_check(
    g: &FiniteStructure,
    rho: &Partition,
) -> Result<Condition3Report, PartitionError> {
    if g.kind() != Kind::Groupoid {
        return Err(PartitionError::LawKindMismatch {
            law: Law::Congruence,
            kind: g.kind(),
        });
    }
    let report = check(Law::Congruence, g, rho)?;
    if let Some(w) = report.failures.into_iter().next() {
        return Err(PartitionError::LawCheckFailed {
            law: Law::Congruence,
            witness: w,
        });
    }
    let reps = rho.representatives(g);
    let name = |k: usize| g.name(reps[k]).to_string();
    let mut triples = unlifted_triples(g, rho);
    // Arrows before identities, then triples using more distinct classes.
    let rank = |&(x, y, z): &(usize, usize, usize)| {
        let identities = [x, y, z].iter().filter(|&&k| g.is_vertex(reps[k])).count();
        let distinct = [x, y, z].iter().collect::<HashSet<_>>().len();
        (identities, 3 - distinct, name(x), name(y), name(z))
    };
    triples.sort_by_cached_key(rank);
    let unlifted: Vec<_> = triples
        .into_iter()
        .map(|(x, y, z)| (name(x), name(y), name(z)))
        .collect();
    Ok(Condition3Report {
        holds: unlifted.is_empty(),
        unlifted,
    })
}

/// Per-vertex subgroups `N_x ⊆ G(x,x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentFamily {
    groupoid: Arc<FiniteStructure>,
    subgroups: BTreeMap<Elem, BTreeSet<Elem>>,
}

impl CoherentFamily {
    /// Checks subgroup, normality and coherence conditions. Vertices with no
    /// entry get the trivial subgroup.
    pub fn new(
        groupoid: Arc<FiniteStructure>,
        mut subgroups: BTreeMap<Elem, BTreeSet<Elem>>,
    ) -> Result<Self, GroupoidError> {
        ensure_groupoid(&groupoid)?;
        for &x in subgroups.keys() {
            if x >= groupoid.len() || !groupoid.is_vertex(x) {
                return Err(CarrierError::UnknownVertex(x.to_string()).into());
            }
        }
        for v in groupoid.vertices() {
            subgroups.entry(v).or_insert_with(|| [v].into());
        }
        let fam = CoherentFamily {
            groupoid,
            subgroups,
        };
        fam.verify()?;
        Ok(fam)
    }

    pub fn trivial(groupoid: Arc<FiniteStructure>) -> Result<Self, GroupoidError> {
        Self::new(groupoid, BTreeMap::new())
    }

    pub fn groupoid(&self) -> &Arc<FiniteStructure> {
        &self.groupoid
    }

    pub fn subgroups(&self) -> &BTreeMap<Elem, BTreeSet<Elem>> {
        &self.subgroups
    }

    pub fn at(&self, x: Elem) -> &BTreeSet<Elem> {
        &self.subgroups[&x]
    }

    fn verify(&self) -> Result<(), GroupoidError> {
        let g = &*self.groupoid;
        let vname = |x: Elem| g.name(x).to_string();
        for (&x, n) in &self.subgroups {
            if !is_subgroup(g, x, n) {
                return Err(GroupoidError::NotSubgroup { x: vname(x) });
            }
            if !is_normal(g, x, n) {
                return Err(GroupoidError::NotNormal { x: vname(x) });
            }
        }
        for a in g.elements() {
            if conjugate(g, &self.subgroups[&g.src(a)], a) != self.subgroups[&g.tgt(a)] {
                return Err(GroupoidError::NotCoherent { g: vname(a) });
            }
        }
        Ok(())
    }
}

/// `N^a = a⁻¹Na` for `N ⊆ G(s(a), s(a))`; lands in `G(t(a), t(a))`.
pub fn conjugate(g: &FiniteStructure, n: &BTreeSet<Elem>, a: Elem) -> BTreeSet<Elem> {
    let ai = g.inverse(a);
    n.iter()
        .map(|&m| {
            let ma = g.mul(m, a).expect("composable");
            g.mul(ai, ma).expect("composable")
        })
        .collect()
}

/// `(g, h) ∈ ρ` iff `s(g) = s(h)`, `t(g) = t(h)` and `gh⁻¹ ∈ N_{s(g)}`.
pub fn rigid_from_coherent(fam: &CoherentFamily) -> Partition {
    let g = &*fam.groupoid;
    // h ~ a iff h ∈ N_{s(a)}·a; label each arrow by its smallest coset member.
    Partition::from_labels(g.elements().map(|a| {
        let coset_min = fam.subgroups[&g.src(a)]
            .iter()
            .map(|&m| g.mul(m, a).expect("composable"))
            .min()
            .expect("subgroup contains the identity");
        (g.src(a), g.tgt(a), coset_min)
    }))
}

/// `N_x = ρ[x]` for a rigid congruence `ρ`.
pub fn coherent_from_rigid(
    g: &Arc<FiniteStructure>,
    rho: &Partition,
) -> Result<CoherentFamily, GroupoidError> {
    ensure_congruence(g, rho)?;
    if let Some((x, y)) = vertex_collision(g, rho) {
        return Err(GroupoidError::NotRigid {
            x: g.name(x).into(),
            y: g.name(y).into(),
        });
    }
    let subgroups = g
        .vertices()
        .map(|x| (x, rho.class_members(x).iter().copied().collect()))
        .collect();
    CoherentFamily::new(g.clone(), subgroups)
}

/// Vertex sets of the connected components, each sorted, ordered by their
/// smallest vertex.
pub fn components(g: &FiniteStructure) -> Vec<Vec<Elem>> {
    let labels = {
        let mut uf = crate::partition::UnionFind::new(g.len());
        for a in g.elements() {
            uf.union(g.src(a), g.tgt(a));
        }
        uf.labels()
    };
    let vertex_labels: Vec<(Elem, usize)> = g.vertices().map(|v| (v, labels[v])).collect();
    let p = Partition::from_labels(vertex_labels.iter().map(|&(_, l)| l));
    p.classes()
        .iter()
        .map(|c| c.iter().map(|&i| vertex_labels[i].0).collect())
        .collect()
}

fn family_from_base(
    g: &FiniteStructure,
    component: &[Elem],
    x: Elem,
    n: &BTreeSet<Elem>,
    out: &mut BTreeMap<Elem, BTreeSet<Elem>>,
) -> Result<(), GroupoidError> {
    if !is_subgroup(g, x, n) {
        return Err(GroupoidError::NotSubgroup {
            x: g.name(x).into(),
        });
    }
    if !is_normal(g, x, n) {
        return Err(GroupoidError::NotNormal {
            x: g.name(x).into(),
        });
    }
    for &y in component {
        let arrows = hom_set(g, x, y)?;
        let Some(&a) = arrows.first() else {
            return Err(GroupoidError::NotConnected {
                x: g.name(x).into(),
                y: g.name(y).into(),
            });
        };
        out.insert(y, conjugate(g, n, a));
    }
    Ok(())
}

/// The rigid congruence `ρ_N` on a connected groupoid with `ρ_N[x] = N`.
pub fn rho_from_subgroup(
    g: &Arc<FiniteStructure>,
    x: Elem,
    n: &BTreeSet<Elem>,
) -> Result<Partition, GroupoidError> {
    ensure_groupoid(g)?;
    if x >= g.len() || !g.is_vertex(x) {
        return Err(CarrierError::UnknownVertex(x.to_string()).into());
    }
    let all: Vec<Elem> = g.vertices().collect();
    let mut subgroups = BTreeMap::new();
    family_from_base(g, &all, x, n, &mut subgroups)?;
    Ok(rigid_from_coherent(&CoherentFamily::new(
        g.clone(),
        subgroups,
    )?))
}

/// [`rho_from_subgroup`] applied to each connected component, with one
/// base vertex per listed component. Components without a base get the
/// trivial subgroup.
pub fn rho_from_subgroups(
    g: &Arc<FiniteStructure>,
    bases: &BTreeMap<Elem, BTreeSet<Elem>>,
) -> Result<Partition, GroupoidError> {
    ensure_groupoid(g)?;
    if let Some(&v) = bases.keys().find(|&&v| v >= g.len() || !g.is_vertex(v)) {
        return Err(CarrierError::UnknownVertex(v.to_string()).into());
    }
    let mut subgroups = BTreeMap::new();
    for component in components(g) {
        let chosen: Vec<Elem> = component
            .iter()
            .copied()
            .filter(|v| bases.contains_key(v))
            .collect();
        match chosen.as_slice() {
            [] => {}
            [x] => family_from_base(g, &component, *x, &bases[x], &mut subgroups)?,
            [x, y, ..] => {
                return Err(GroupoidError::ConflictingBases {
                    x: g.name(*x).into(),
                    y: g.name(*y).into(),
                })
            }
        }
    }
    Ok(rigid_from_coherent(&CoherentFamily::new(
        g.clone(),
        subgroups,
    )?))
}

/// `{ρ ∩ σ | ρ ∈ I}` where `σ` meets one vertex-separating member per
/// vertex.
pub fn rigid_base(i: &FilterBase) -> Result<FilterBase, GroupoidError> {
    let g = i.carrier();
    for rho in i.members() {
        ensure_congruence(g, rho)?;
    }
    let mut sigma = Partition::discrete(g.len());
    let mut first = true;
    for x in g.vertices() {
        let vertex_class = |rho: &Partition| -> Vec<Elem> {
            rho.class_members(x)
                .iter()
                .copied()
                .filter(|&v| g.is_vertex(v))
                .collect()
        };
        let best = i.members().iter().min_by_key(|rho| vertex_class(rho).len());
        match best {
            Some(rho) if vertex_class(rho).len() == 1 => {
                sigma = if first {
                    rho.clone()
                } else {
                    sigma.intersect(rho)?
                };
                first = false;
            }
            Some(rho) => {
                let y = vertex_class(rho)
                    .into_iter()
                    .find(|&v| v != x)
                    .expect("class has two vertices");
                return Err(GroupoidError::VerticesInseparable {
                    x: g.name(x).into(),
                    y: g.name(y).into(),
                });
            }
            None => {
                let y = g.vertices().find(|&v| v != x);
                if let Some(y) = y {
                    return Err(GroupoidError::VerticesInseparable {
                        x: g.name(x).into(),
                        y: g.name(y).into(),
                    });
                }
            }
        }
    }
    let members = i
        .members()
        .iter()
        .map(|rho| rho.intersect(&sigma))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FilterBase::new(g.clone(), Law::Congruence, members)
        .expect("meets of congruences are congruences"))
}

/// Whether each hom-set `G(x,y)` is a union of classes of some member.
pub fn openness_shadow(i: &FilterBase) -> bool {
    let g = i.carrier();
    g.vertices().all(|x| {
        g.vertices().all(|y| {
            let homs: Vec<Elem> = hom_set(g, x, y).unwrap_or_default();
            homs.is_empty()
                || i.members().iter().any(|rho| {
                    homs.iter().all(|&a| {
                        rho.class_members(a)
                            .iter()
                            .all(|&b| g.src(b) == x && g.tgt(b) == y)
                    })
                })
        })
    })
}

/// Inverse system of quotient groupoids along a chain of rigid congruences.
pub fn profinite_groupoid_system(
    g: &Arc<FiniteStructure>,
    chain: &[Partition],
) -> Result<InverseSystem, GroupoidError> {
    for rho in chain {
        ensure_congruence(g, rho)?;
        if let Some((x, y)) = vertex_collision(g, rho) {
            return Err(GroupoidError::NotRigid {
                x: g.name(x).into(),
                y: g.name(y).into(),
            });
        }
    }
    system_from_chain(g, Law::Congruence, chain).map_err(|e| GroupoidError::Completion(Box::new(e)))
}
