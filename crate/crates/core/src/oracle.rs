//! Brute-force reference implementations.
//!
//! Everything here works straight from the definitions, by exhaustive
//! enumeration, and shares no code with the algorithms it is used to test
//! beyond the carrier tables themselves.

use std::collections::BTreeSet;

use crate::carrier::{Elem, FiniteStructure, Kind};
use crate::partition::{Law, Partition};

/// All set partitions of `0..n`, as restricted growth strings.
pub fn partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == labels.len() {
            out.push(Partition::from_labels(labels.iter().copied()));
            return;
        }
        for l in 0..=max + 1 {
            labels[i] = l;
            rec(i + 1, max.max(l), labels, out);
        }
    }
    if n == 0 {
        out.push(Partition::from_labels(std::iter::empty::<usize>()));
    } else {
        rec(1, 0, &mut labels, &mut out);
    }
    out
}

fn rel(r: &Partition, x: Elem, y: Elem) -> bool {
    r.class_of(x) == r.class_of(y)
}

/// The law as a statement about all pairs (and pairs of pairs) in `R`.
pub fn satisfies(law: Law, s: &FiniteStructure, r: &Partition) -> bool {
    let n = s.len();
    let pairs: Vec<(Elem, Elem)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| rel(r, x, y))
        .collect();
    let endpoints = pairs
        .iter()
        .all(|&(x, y)| rel(r, s.src(x), s.src(y)) && rel(r, s.tgt(x), s.tgt(y)));
    if !endpoints {
        return false;
    }
    match law {
        Law::Compatible => true,
        Law::GraphEquivalence => {
            pairs
                .iter()
                .all(|&(x, y)| rel(r, s.inverse(x), s.inverse(y)))
                && (0..n).all(|x| {
                    !rel(r, x, s.inverse(x)) || (0..n).any(|v| s.is_vertex(v) && rel(r, x, v))
                })
        }
        Law::Congruence => {
            pairs
                .iter()
                .all(|&(x, y)| rel(r, s.inverse(x), s.inverse(y)))
                && pairs.iter().all(|&(g1, g2)| {
                    pairs
                        .iter()
                        .all(|&(h1, h2)| match (s.mul(g1, h1), s.mul(g2, h2)) {
                            (Some(a), Some(b))
                                if s.tgt(g1) == s.src(h1) && s.tgt(g2) == s.src(h2) =>
                            {
                                rel(r, a, b)
                            }
                            _ => true,
                        })
                })
        }
    }
}

/// The least partition containing `seed` and satisfying `law`, if the
/// family of such partitions has a least element.
pub fn minimal_containing(
    law: Law,
    s: &FiniteStructure,
    seed: &[(Elem, Elem)],
) -> Option<Partition> {
    minimal_among(&all_satisfying(law, s), seed)
}

/// The least member of `family` containing `seed`, if there is one.
pub fn minimal_among(family: &[Partition], seed: &[(Elem, Elem)]) -> Option<Partition> {
    let candidates: Vec<&Partition> = family
        .iter()
        .filter(|r| seed.iter().all(|&(x, y)| rel(r, x, y)))
        .collect();
    candidates
        .iter()
        .find(|r| candidates.iter().all(|other| r.refines(other)))
        .map(|r| (*r).clone())
}

/// Every partition of the carrier that satisfies `law`.
pub fn all_satisfying(law: Law, s: &FiniteStructure) -> Vec<Partition> {
    partitions(s.len())
        .into_iter()
        .filter(|r| satisfies(law, s, r))
        .collect()
}

/// Whether each composable triple of classes has a composable lift,
/// searched member by member.
pub fn condition3(s: &FiniteStructure, r: &Partition) -> bool {
    let classes = r.classes();
    let src_class = |c: &Vec<Elem>| r.class_of(s.src(c[0]));
    let tgt_class = |c: &Vec<Elem>| r.class_of(s.tgt(c[0]));
    for x in classes {
        for y in classes {
            if tgt_class(x) != src_class(y) {
                continue;
            }
            for z in classes {
                if tgt_class(y) != src_class(z) {
                    continue;
                }
                let lifts = x.iter().any(|&a| {
                    y.iter()
                        .any(|&b| s.tgt(a) == s.src(b) && z.iter().any(|&c| s.tgt(b) == s.src(c)))
                });
                if !lifts {
                    return false;
                }
            }
        }
    }
    true
}

/// The axioms of the declared kind, checked directly.
pub fn axioms_hold(s: &FiniteStructure) -> bool {
    let els: Vec<Elem> = s.elements().collect();
    let digraph = els.iter().all(|&x| {
        s.is_vertex(s.src(x))
            && s.is_vertex(s.tgt(x))
            && (!s.is_vertex(x) || (s.src(x) == x && s.tgt(x) == x))
    });
    if !digraph {
        return false;
    }
    match s.kind() {
        Kind::Digraph => true,
        Kind::Graph => {
            s.has_inv()
                && els.iter().all(|&x| {
                    let xi = s.inverse(x);
                    s.inverse(xi) == x
                        && s.src(xi) == s.tgt(x)
                        && s.tgt(xi) == s.src(x)
                        && ((xi == x) == s.is_vertex(x))
                })
        }
        Kind::Groupoid => {
            let domain = els.iter().all(|&g| {
                els.iter()
                    .all(|&h| (s.mul(g, h).is_some()) == (s.tgt(g) == s.src(h)))
            });
            if !domain {
                return false;
            }
            let m = |g: Elem, h: Elem| s.mul(g, h).expect("composable");
            let ends = els.iter().all(|&g| {
                els.iter().all(|&h| {
                    s.tgt(g) != s.src(h)
                        || (s.src(m(g, h)) == s.src(g) && s.tgt(m(g, h)) == s.tgt(h))
                })
            });
            let assoc = ends
                && els.iter().all(|&g| {
                    els.iter().all(|&h| {
                        els.iter().all(|&k| {
                            s.tgt(g) != s.src(h)
                                || s.tgt(h) != s.src(k)
                                || m(m(g, h), k) == m(g, m(h, k))
                        })
                    })
                });
            let units = assoc
                && els
                    .iter()
                    .all(|&g| m(s.src(g), g) == g && m(g, s.tgt(g)) == g);
            // A stored inverse table has to name the inverse found by search.
            let stored = !s.has_inv()
                || els.iter().all(|&g| {
                    let h = s.inverse(g);
                    s.tgt(g) == s.src(h)
                        && s.tgt(h) == s.src(g)
                        && m(g, h) == s.src(g)
                        && m(h, g) == s.tgt(g)
                });
            units
                && stored
                && els.iter().all(|&g| {
                    els.iter().any(|&h| {
                        s.tgt(g) == s.src(h)
                            && s.tgt(h) == s.src(g)
                            && m(g, h) == s.src(g)
                            && m(h, g) == s.tgt(g)
                    })
                })
        }
    }
}

/// Subsets of `G(x, x)` closed under products and inverses, by trying every
/// subset. Meant for vertex groups of order at most 12 or so.
pub fn subgroups(s: &FiniteStructure, x: Elem) -> Vec<BTreeSet<Elem>> {
    let group: Vec<Elem> = s
        .elements()
        .filter(|&a| s.src(a) == x && s.tgt(a) == x)
        .collect();
    assert!(
        group.len() <= 16,
        "vertex group too large for subset enumeration"
    );
    let mut out = Vec::new();
    for mask in 0u32..(1 << group.len()) {
        let n: BTreeSet<Elem> = group
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        let closed = n.contains(&x)
            && n.iter().all(|&a| {
                n.iter()
                    .all(|&b| s.mul(a, b).is_some_and(|ab| n.contains(&ab)))
            });
        if closed {
            out.push(n);
        }
    }
    out
}

pub fn normal_subgroups(s: &FiniteStructure, x: Elem) -> Vec<BTreeSet<Elem>> {
    let group: Vec<Elem> = s
        .elements()
        .filter(|&a| s.src(a) == x && s.tgt(a) == x)
        .collect();
    subgroups(s, x)
        .into_iter()
        .filter(|n| {
            group.iter().all(|&a| {
                n.iter().all(|&m| {
                    // a·m·a⁻¹ where a⁻¹ is found by search
                    let ai = group
                        .iter()
                        .copied()
                        .find(|&b| s.mul(a, b) == Some(x))
                        .expect("inverse");
                    let am = s.mul(a, m).expect("vertex group");
                    n.contains(&s.mul(am, ai).expect("vertex group"))
                })
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..=6).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn congruences_of_z4_are_subgroup_cosets() {
        let z4 = fixtures::cyclic(4);
        // Subgroups {0}, {0,2}, ℤ/4.
        assert_eq!(all_satisfying(Law::Congruence, &z4).len(), 3);
        assert_eq!(subgroups(&z4, 0).len(), 3);
    }

    #[test]
    fn documented_closures() {
        let p2 = fixtures::path(2);
        let (e01, e12) = (p2.element("e01").unwrap(), p2.element("e12").unwrap());
        let r = minimal_containing(Law::Compatible, &p2, &[(e01, e12)]).unwrap();
        assert_eq!(
            r.named_classes(&p2),
            vec![vec!["0", "1", "2"], vec!["e01", "e12"]]
        );
        let z4 = fixtures::cyclic(4);
        let r = minimal_containing(Law::Congruence, &z4, &[(1, 3)]).unwrap();
        assert_eq!(r.named_classes(&z4), vec![vec!["0", "2"], vec!["1", "3"]]);
    }

    #[test]
    fn axioms_agree_with_validation_on_fixtures() {
        for (name, s) in fixtures::catalogue(32) {
            assert!(axioms_hold(&s), "{name}");
        }
    }

    #[test]
    fn condition3_example() {
        let g = fixtures::pair_groupoid(2);
        let r = Partition::from_named_classes(&g, &[vec!["a", "b"]]).unwrap();
        assert!(!condition3(&g, &r));
        assert!(condition3(&g, &Partition::discrete(4)));
    }
}
