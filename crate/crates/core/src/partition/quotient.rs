use std::sync::Arc;

use serde::Serialize;

use super::law::{ensure_carrier, ensure_supported};
use super::{check, Law, Partition, PartitionError};
use crate::carrier::{Builder, Elem, FiniteStructure, Kind, MapLaw, StructureMap};
use crate::groupoid::condition3_check;

/// `Γ/R` together with the natural map `ν: Γ → Γ/R`.
///
/// Element `i` of the quotient is class `i` of the partition and carries the
/// lexicographically smallest id of that class.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub structure: Arc<FiniteStructure>,
    pub map: StructureMap,
}

fn quotient_kind(law: Law) -> Kind {
    match law {
        Law::Compatible => Kind::Digraph,
        Law::GraphEquivalence => Kind::Graph,
        Law::Congruence => Kind::Groupoid,
    }
}

/// Builds `Γ/R` after checking `law`; for congruences the quotient is only
/// built when every composable triple of the quotient lifts.
pub fn quotient(
    s: &Arc<FiniteStructure>,
    r: &Partition,
    law: Law,
) -> Result<Quotient, PartitionError> {
    let report = check(law, s, r)?;
    if let Some(w) = report.failures.into_iter().next() {
        return Err(PartitionError::LawCheckFailed { law, witness: w });
    }
    if law == Law::Congruence {
        let c3 = condition3_check(s, r)?;
        if let Some((a, b, c)) = c3.witness() {
            return Err(PartitionError::QuotientProductUndefined(a, b, c));
        }
    }
    quotient_unchecked(s, r, law)
}

/// Builds the quotient tables without checking the law.
///
/// For `Congruence` the product of two classes is taken from any composable
/// pair of representatives; pairs without such a lift are left undefined, so
/// the result fails validation exactly when the construction breaks down.
pub fn quotient_unchecked(
    s: &Arc<FiniteStructure>,
    r: &Partition,
    law: Law,
) -> Result<Quotient, PartitionError> {
    ensure_supported(law, s)?;
    ensure_carrier(s, r)?;
    let kind = quotient_kind(law);
    let reps = r.representatives(s);
    let mut b = Builder::new(kind);
    for (c, class) in r.classes().iter().enumerate() {
        let is_vertex = class.iter().any(|&x| s.is_vertex(x));
        b.element(s.name(reps[c]), is_vertex)?;
    }
    for x in s.elements() {
        let c = r.class_of(x);
        b.set_ends(c, r.class_of(s.src(x)), r.class_of(s.tgt(x)));
        if kind != Kind::Digraph {
            b.set_inv(c, r.class_of(s.inverse(x)));
        }
    }
    // Vertex classes take their own ends even if a compatible relation put
    // an edge into the class first.
    for v in s.vertices() {
        let c = r.class_of(v);
        b.set_ends(c, c, c);
    }
    if kind == Kind::Groupoid {
        let mut seen = vec![false; r.index() * r.index()];
        for (g, h, gh) in s.products() {
            let (cg, ch) = (r.class_of(g), r.class_of(h));
            if !std::mem::replace(&mut seen[cg * r.index() + ch], true) {
                b.set_mul(cg, ch, r.class_of(gh));
            }
        }
    }
    let structure = Arc::new(b.build()?);
    let map = StructureMap::unchecked(
        s.clone(),
        structure.clone(),
        r.class_labels().to_vec(),
        MapLaw::for_kind(kind),
    )?;
    Ok(Quotient { structure, map })
}

/// `ker f = {(x, y) | f(x) = f(y)}`.
pub fn kernel(f: &StructureMap) -> Partition {
    Partition::from_labels(f.table().iter().copied())
}

/// First isomorphism theorem for a map of directed graphs.
#[derive(Debug, Clone)]
pub struct IsoReport {
    pub kernel: Partition,
    pub quotient: Arc<FiniteStructure>,
    /// `f'(K[x]) = f(x)`.
    pub induced: StructureMap,
    pub injective: bool,
    pub surjective: bool,
    pub isomorphism: bool,
    /// `f = f' ∘ ν` tablewise.
    pub triangle_commutes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoSummary {
    pub kernel_index: usize,
    pub injective: bool,
    pub surjective: bool,
    pub isomorphism: bool,
    pub triangle_commutes: bool,
}

impl IsoReport {
    pub fn summary(&self) -> IsoSummary {
        IsoSummary {
            kernel_index: self.kernel.index(),
            injective: self.injective,
            surjective: self.surjective,
            isomorphism: self.isomorphism,
            triangle_commutes: self.triangle_commutes,
        }
    }
}

pub fn first_isomorphism(f: &StructureMap) -> Result<IsoReport, PartitionError> {
    let k = kernel(f);
    let q = quotient(f.domain(), &k, Law::Compatible)?;
    let table: Vec<Elem> = k.classes().iter().map(|c| f.apply(c[0])).collect();
    let induced = StructureMap::new(
        q.structure.clone(),
        f.codomain().clone(),
        table,
        [MapLaw::SrcTgt].into(),
    )?;
    let triangle_commutes = f
        .domain()
        .elements()
        .all(|x| induced.apply(q.map.apply(x)) == f.apply(x));
    let injective = induced.is_injective();
    let surjective = induced.is_surjective();
    Ok(IsoReport {
        kernel: k,
        quotient: q.structure,
        injective,
        surjective,
        isomorphism: injective && surjective,
        triangle_commutes,
        induced,
    })
}

fn refinement_table(coarse: &Partition, fine: &Partition) -> Result<Vec<usize>, PartitionError> {
    if coarse.len() != fine.len() {
        return Err(PartitionError::CarrierMismatch {
            expected: coarse.len(),
            found: fine.len(),
        });
    }
    Ok(fine
        .classes()
        .iter()
        .map(|c| coarse.class_of(c[0]))
        .collect())
}

fn spanning_class<'a>(coarse: &Partition, fine: &'a Partition) -> Option<&'a Vec<Elem>> {
    fine.classes()
        .iter()
        .find(|c| c.iter().any(|&x| !coarse.related(x, c[0])))
}

/// Table of `φ: Γ/fine → Γ/coarse`, `S[x] ↦ R[x]`, in class indices.
pub fn refinement_map(coarse: &Partition, fine: &Partition) -> Result<Vec<usize>, PartitionError> {
    let table = refinement_table(coarse, fine)?;
    if let Some(c) = spanning_class(coarse, fine) {
        return Err(PartitionError::NotARefinement(
            c.iter().map(|x| x.to_string()).collect(),
        ));
    }
    Ok(table)
}

/// The bonding map `Γ/fine → Γ/coarse` between two quotients of `s`.
pub fn induced_bonding(
    s: &Arc<FiniteStructure>,
    law: Law,
    coarse: &Partition,
    fine: &Partition,
) -> Result<StructureMap, PartitionError> {
    let table = refinement_table(coarse, fine)?;
    if let Some(c) = spanning_class(coarse, fine) {
        let mut ids: Vec<String> = c.iter().map(|&x| s.name(x).to_string()).collect();
        ids.sort();
        return Err(PartitionError::NotARefinement(ids));
    }
    let qc = quotient(s, coarse, law)?;
    let qf = quotient(s, fine, law)?;
    let laws = MapLaw::for_kind(qf.structure.kind());
    Ok(StructureMap::new(qf.structure, qc.structure, table, laws)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn classes(s: &FiniteStructure, cs: &[&[&str]]) -> Partition {
        let owned: Vec<Vec<&str>> = cs.iter().map(|c| c.to_vec()).collect();
        Partition::from_named_classes(s, &owned).unwrap()
    }

    #[test]
    fn quotient_by_the_diagonal_is_a_copy() {
        let p2 = Arc::new(fixtures::path(2));
        let q = quotient(&p2, &Partition::discrete(p2.len()), Law::Compatible).unwrap();
        assert_eq!(q.structure.names(), p2.names());
        assert!(q.map.is_injective() && q.map.is_surjective());
    }

    #[test]
    fn folding_a_path_gives_a_two_cycle() {
        let p2 = Arc::new(fixtures::path(2));
        let r = classes(&p2, &[&["0", "2"]]);
        let q = quotient(&p2, &r, Law::Compatible).unwrap();
        let g = &q.structure;
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges().count(), 2);
        let (v02, v1) = (g.element("0").unwrap(), g.element("1").unwrap());
        let (e01, e12) = (g.element("e01").unwrap(), g.element("e12").unwrap());
        assert_eq!((g.src(e01), g.tgt(e01)), (v02, v1));
        assert_eq!((g.src(e12), g.tgt(e12)), (v1, v02));
        assert!(g.is_valid());
    }

    #[test]
    fn z4_modulo_two_is_z2() {
        let z4 = Arc::new(fixtures::cyclic(4));
        let r = classes(&z4, &[&["0", "2"], &["1", "3"]]);
        let q = quotient(&z4, &r, Law::Congruence).unwrap();
        assert!(q.structure.is_valid());
        assert_eq!(q.structure.len(), 2);
        let one = q.structure.element("1").unwrap();
        assert_eq!(q.structure.mul(one, one), q.structure.id("0"));
    }

    #[test]
    fn incompatible_relation_is_refused() {
        let p2 = Arc::new(fixtures::path(2));
        let r = classes(&p2, &[&["e01", "e12"]]);
        assert!(matches!(
            quotient(&p2, &r, Law::Compatible),
            Err(PartitionError::LawCheckFailed {
                law: Law::Compatible,
                ..
            })
        ));
    }

    #[test]
    fn kernel_of_natural_map_is_the_relation() {
        let p2 = Arc::new(fixtures::path(2));
        let r = classes(&p2, &[&["0", "2"]]);
        let q = quotient(&p2, &r, Law::Compatible).unwrap();
        assert_eq!(kernel(&q.map), r);
        assert_eq!(
            kernel(&StructureMap::identity(p2.clone())),
            Partition::discrete(p2.len())
        );
    }

    #[test]
    fn merging_vertices_of_pair_groupoid_has_no_quotient() {
        let g = Arc::new(fixtures::pair_groupoid(2));
        let r = classes(&g, &[&["a", "b"]]);
        assert!(check(Law::Congruence, &g, &r).unwrap().passed);
        assert!(matches!(
            quotient(&g, &r, Law::Congruence),
            Err(PartitionError::QuotientProductUndefined(..))
        ));
        let attempt = quotient_unchecked(&g, &r, Law::Congruence).unwrap();
        assert!(!attempt.structure.is_valid());
    }

    #[test]
    fn first_isomorphism_of_a_surjection() {
        let p2 = Arc::new(fixtures::path(2));
        let r = classes(&p2, &[&["0", "2"]]);
        let q = quotient(&p2, &r, Law::Compatible).unwrap();
        let iso = first_isomorphism(&q.map).unwrap();
        assert!(iso.isomorphism && iso.triangle_commutes);
        assert_eq!(iso.kernel, r);
    }

    #[test]
    fn constant_map_to_a_point() {
        let two = Arc::new(fixtures::discrete_space(2));
        let point = Arc::new(fixtures::discrete_space(1));
        let f = StructureMap::new(two, point, vec![0, 0], [MapLaw::SrcTgt].into()).unwrap();
        let iso = first_isomorphism(&f).unwrap();
        assert_eq!(iso.quotient.len(), 1);
        assert!(iso.isomorphism);
    }

    #[test]
    fn bonding_between_quotients_of_z4() {
        let z4 = Arc::new(fixtures::cyclic(4));
        let coarse = classes(&z4, &[&["0", "2"], &["1", "3"]]);
        let fine = Partition::discrete(4);
        let phi = induced_bonding(&z4, Law::Congruence, &coarse, &fine).unwrap();
        let names: Vec<&str> = phi
            .table()
            .iter()
            .map(|&c| phi.codomain().name(c))
            .collect();
        assert_eq!(names, ["0", "1", "0", "1"]);

        let id = induced_bonding(&z4, Law::Congruence, &coarse, &coarse).unwrap();
        assert_eq!(id.table(), &[0, 1]);

        assert_eq!(
            induced_bonding(&z4, Law::Congruence, &fine, &coarse).unwrap_err(),
            PartitionError::NotARefinement(vec!["0".into(), "2".into()])
        );
    }
}
