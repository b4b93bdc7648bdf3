use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Builder, CarrierError, Elem, FiniteStructure, Kind, MapLaw, StructureMap};

/// Coordinate-wise product of two structures of the same kind.
///
/// The element `(x, y)` sits at index `x * b.len() + y` and is named `(x,y)`
/// after the original ids.
pub fn product(a: &FiniteStructure, b: &FiniteStructure) -> Result<FiniteStructure, CarrierError> {
    if a.kind() != b.kind() {
        return Err(CarrierError::KindMismatch(format!(
            "product of a {} and a {}",
            a.kind(),
            b.kind()
        )));
    }
    let nb = b.len();
    let at = |x: Elem, y: Elem| x * nb + y;
    let mut builder = Builder::new(a.kind());
    for x in a.elements() {
        for y in b.elements() {
            builder.element(
                format!("({},{})", a.name(x), b.name(y)),
                a.is_vertex(x) && b.is_vertex(y),
            )?;
        }
    }
    for x in a.elements() {
        for y in b.elements() {
            let p = at(x, y);
            builder.set_ends(p, at(a.src(x), b.src(y)), at(a.tgt(x), b.tgt(y)));
            if let (Some(xi), Some(yi)) = (a.inv(x), b.inv(y)) {
                builder.set_inv(p, at(xi, yi));
            }
        }
    }
    if a.kind() == Kind::Groupoid {
        for (g1, h1, p1) in a.products() {
            for (g2, h2, p2) in b.products() {
                builder.set_mul(at(g1, g2), at(h1, h2), at(p1, p2));
            }
        }
    }
    builder.build()
}

/// The two coordinate projections out of `product(a, b)`.
pub fn product_projections(
    a: &Arc<FiniteStructure>,
    b: &Arc<FiniteStructure>,
) -> Result<(Arc<FiniteStructure>, StructureMap, StructureMap), CarrierError> {
    let p = Arc::new(product(a, b)?);
    let nb = b.len();
    let laws = MapLaw::for_kind(a.kind());
    let first = StructureMap::new(
        p.clone(),
        a.clone(),
        p.elements().map(|i| i / nb).collect(),
        laws.clone(),
    )?;
    let second = StructureMap::new(
        p.clone(),
        b.clone(),
        p.elements().map(|i| i % nb).collect(),
        laws,
    )?;
    Ok((p, first, second))
}

/// The smallest subset containing `seed` and closed under sources and
/// targets, and additionally under the involution (graphs) or under products
/// and inverses (groupoids).
pub fn generated_elements(s: &FiniteStructure, seed: &[Elem]) -> BTreeSet<Elem> {
    let mut inside = vec![false; s.len()];
    let mut stack: Vec<Elem> = seed.to_vec();
    let mut members: Vec<Elem> = Vec::new();
    loop {
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut inside[x], true) {
                continue;
            }
            members.push(x);
            stack.push(s.src(x));
            stack.push(s.tgt(x));
            if s.kind() != Kind::Digraph {
                if let Some(y) = s.inv(x) {
                    stack.push(y);
                }
            }
        }
        if s.kind() != Kind::Groupoid {
            break;
        }
        for i in 0..members.len() {
            for j in 0..members.len() {
                let (g, h) = (members[i], members[j]);
                if let Some(gh) = s.mul(g, h) {
                    if !inside[gh] {
                        stack.push(gh);
                    }
                }
            }
        }
        if stack.is_empty() {
            break;
        }
    }
    members.into_iter().collect()
}

/// Restricts all tables of `s` to `keep`, which must be closed for the kind.
pub fn induced_substructure(
    s: &FiniteStructure,
    keep: &BTreeSet<Elem>,
) -> Result<FiniteStructure, CarrierError> {
    let mut index = vec![None; s.len()];
    let mut builder = Builder::new(s.kind());
    for &x in keep {
        index[x] = Some(builder.element(s.name(x), s.is_vertex(x))?);
    }
    let local = |x: Elem, table: &'static str| {
        index[x].ok_or_else(|| CarrierError::DanglingReference {
            table,
            id: s.name(x).into(),
        })
    };
    for &x in keep {
        let lx = local(x, "elements")?;
        builder.set_ends(lx, local(s.src(x), "src")?, local(s.tgt(x), "tgt")?);
        if s.kind() == Kind::Graph {
            builder.set_inv(lx, local(s.inverse(x), "inv")?);
        }
    }
    if s.kind() == Kind::Groupoid {
        for &g in keep {
            for &h in keep {
                if let Some(gh) = s.mul(g, h) {
                    builder.set_mul(local(g, "mul")?, local(h, "mul")?, local(gh, "mul")?);
                }
            }
        }
    }
    builder.build()
}

pub fn generated_substructure(s: &FiniteStructure, seed: &[Elem]) -> FiniteStructure {
    let keep = generated_elements(s, seed);
    induced_substructure(s, &keep).expect("generated subsets are closed")
}

/// The arrows `G(x, y)` of a groupoid.
pub fn hom_set(g: &FiniteStructure, x: Elem, y: Elem) -> Result<Vec<Elem>, CarrierError> {
    if g.kind() != Kind::Groupoid {
        return Err(CarrierError::KindMismatch(format!(
            "hom_set on a {}",
            g.kind()
        )));
    }
    for v in [x, y] {
        if v >= g.len() || !g.is_vertex(v) {
            let id = if v < g.len() {
                g.name(v).to_string()
            } else {
                v.to_string()
            };
            return Err(CarrierError::UnknownVertex(id));
        }
    }
    Ok(g.elements()
        .filter(|&a| g.src(a) == x && g.tgt(a) == y)
        .collect())
}

/// Disjoint union; ids are prefixed with `0.` and `1.` respectively.
pub fn disjoint_union(
    a: &FiniteStructure,
    b: &FiniteStructure,
) -> Result<FiniteStructure, CarrierError> {
    if a.kind() != b.kind() {
        return Err(CarrierError::KindMismatch(format!(
            "disjoint union of a {} and a {}",
            a.kind(),
            b.kind()
        )));
    }
    let mut builder = Builder::new(a.kind());
    for (tag, part) in [(0, a), (1, b)] {
        for x in part.elements() {
            builder.element(format!("{tag}.{}", part.name(x)), part.is_vertex(x))?;
        }
    }
    for (offset, part) in [(0, a), (a.len(), b)] {
        for x in part.elements() {
            builder.set_ends(offset + x, offset + part.src(x), offset + part.tgt(x));
            if let Some(y) = part.inv(x) {
                if part.kind() != Kind::Digraph {
                    builder.set_inv(offset + x, offset + y);
                }
            }
        }
        for (g, h, gh) in part.products() {
            builder.set_mul(offset + g, offset + h, offset + gh);
        }
    }
    builder.build()
}

/// Turns a digraph into a Serre graph by adding a reversed partner `e^-1`
/// for every edge `e`.
pub fn serre_double(d: &FiniteStructure) -> Result<FiniteStructure, CarrierError> {
    if d.kind() != Kind::Digraph {
        return Err(CarrierError::KindMismatch(format!(
            "serre_double of a {}",
            d.kind()
        )));
    }
    let mut builder = Builder::new(Kind::Graph);
    for x in d.elements() {
        builder.element(d.name(x), d.is_vertex(x))?;
    }
    for x in d.elements() {
        builder.set_ends(x, d.src(x), d.tgt(x));
        if d.is_vertex(x) {
            builder.set_inv(x, x);
        }
    }
    for e in d.edges() {
        let r = builder.edge(format!("{}^-1", d.name(e)), d.tgt(e), d.src(e))?;
        builder.pair_inverse(e, r);
    }
    builder.build()
}
