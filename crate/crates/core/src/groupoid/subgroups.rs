use std::collections::BTreeSet;

use crate::carrier::{Elem, FiniteStructure};

/// The vertex group `G(x, x)`.
pub fn vertex_group(g: &FiniteStructure, x: Elem) -> Vec<Elem> {
    g.elements()
        .filter(|&a| g.src(a) == x && g.tgt(a) == x)
        .collect()
}

pub fn is_subgroup(g: &FiniteStructure, x: Elem, n: &BTreeSet<Elem>) -> bool {
    n.contains(&x)
        && n.iter().all(|&a| g.src(a) == x && g.tgt(a) == x)
        && n.iter().all(|&a| n.contains(&g.inverse(a)))
        && n.iter().all(|&a| {
            n.iter()
                .all(|&b| g.mul(a, b).is_some_and(|ab| n.contains(&ab)))
        })
}

/// Assumes `n` is a subgroup of `G(x, x)`.
pub fn is_normal(g: &FiniteStructure, x: Elem, n: &BTreeSet<Elem>) -> bool {
    vertex_group(g, x).into_iter().all(|a| {
        let ai = g.inverse(a);
        n.iter().all(|&m| {
            let conj = g
                .mul(ai, g.mul(m, a).expect("vertex group"))
                .expect("vertex group");
            n.contains(&conj)
        })
    })
}

fn generated(g: &FiniteStructure, start: &BTreeSet<Elem>, extra: Elem) -> BTreeSet<Elem> {
    let mut out = start.clone();
    let mut frontier = vec![extra];
    while let Some(a) = frontier.pop() {
        if !out.insert(a) {
            continue;
        }
        let members: Vec<Elem> = out.iter().copied().collect();
        for b in members {
            for p in [g.mul(a, b), g.mul(b, a)].into_iter().flatten() {
                if !out.contains(&p) {
                    frontier.push(p);
                }
            }
        }
    }
    out
}

/// Every subgroup of `G(x, x)`, smallest first.
///
/// Each subgroup arises from a smaller one by adjoining one element, so
/// closing the trivial group under that step reaches all of them.
pub fn subgroups(g: &FiniteStructure, x: Elem) -> Vec<BTreeSet<Elem>> {
    let group = vertex_group(g, x);
    let mut found: BTreeSet<BTreeSet<Elem>> = BTreeSet::new();
    let mut todo = vec![BTreeSet::from([x])];
    while let Some(h) = todo.pop() {
        if !found.insert(h.clone()) {
            continue;
        }
        for &a in &group {
            if !h.contains(&a) {
                let bigger = generated(g, &h, a);
                if !found.contains(&bigger) {
                    todo.push(bigger);
                }
            }
        }
    }
    let mut out: Vec<_> = found.into_iter().collect();
    out.sort_by_key(|h| h.len());
    out
}

pub fn normal_subgroups(g: &FiniteStructure, x: Elem) -> Vec<BTreeSet<Elem>> {
    subgroups(g, x)
        .into_iter()
        .filter(|n| is_normal(g, x, n))
        .collect()
}
