use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use cofinex::carrier::{Elem, FiniteStructure};
use cofinex::cofinite::compatible_interior;
use cofinex::completion::zline::{theta, Z};
use cofinex::fixtures::{self, GroupTable};
use cofinex::format;
use cofinex::groupoid::{is_rigid, rho_from_subgroup};
use cofinex::partition::{check, close, Law, Partition};

fn catalogue() -> &'static [(String, Arc<FiniteStructure>)] {
    static CAT: OnceLock<Vec<(String, Arc<FiniteStructure>)>> = OnceLock::new();
    CAT.get_or_init(|| {
        fixtures::catalogue(24)
            .into_iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(n, s)| (n, Arc::new(s)))
            .collect()
    })
}

fn pick(i: usize) -> &'static (String, Arc<FiniteStructure>) {
    let c = catalogue();
    &c[i % c.len()]
}

fn seed_of(s: &FiniteStructure, raw: &[(usize, usize)]) -> Vec<(Elem, Elem)> {
    raw.iter()
        .map(|&(x, y)| (x % s.len(), y % s.len()))
        .collect()
}

fn partition_of(s: &FiniteStructure, labels: &[usize]) -> Partition {
    Partition::from_labels((0..s.len()).map(|i| labels[i % labels.len()]))
}

fn seeds() -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((0usize..64, 0usize..64), 0..5)
}

fn labels() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..4, 1..24)
}

proptest! {
    #[test]
    fn closure_is_extensive_idempotent_and_lawful(i in 0usize..1000, raw in seeds()) {
        let (_, s) = pick(i);
        let seed = seed_of(s, &raw);
        let law = Law::for_kind(s.kind());
        let r = close(law, s, &seed).unwrap();
        prop_assert!(seed.iter().all(|&(x, y)| r.partition.related(x, y)));
        let pairs: Vec<_> = r.partition.pairs().collect();
        prop_assert_eq!(&close(law, s, &pairs).unwrap().partition, &r.partition);
        if r.valid {
            prop_assert!(check(law, s, &r.partition).unwrap().passed);
        }
    }

    #[test]
    fn closure_is_monotone(i in 0usize..1000, a in seeds(), b in seeds()) {
        let (_, s) = pick(i);
        let small = seed_of(s, &a);
        let mut big = small.clone();
        big.extend(seed_of(s, &b));
        let law = Law::Compatible;
        let rs = close(law, s, &small).unwrap().partition;
        let rb = close(law, s, &big).unwrap().partition;
        prop_assert!(rs.refines(&rb));
    }

    #[test]
    fn meet_is_the_greatest_lower_bound(i in 0usize..1000, la in labels(), lb in labels()) {
        let (_, s) = pick(i);
        let (a, b) = (partition_of(s, &la), partition_of(s, &lb));
        let m = a.intersect(&b).unwrap();
        prop_assert!(m.refines(&a) && m.refines(&b));
        prop_assert_eq!(&m, &b.intersect(&a).unwrap());
        for x in s.elements() {
            for y in s.elements() {
                prop_assert_eq!(m.related(x, y), a.related(x, y) && b.related(x, y));
            }
        }
    }

    #[test]
    fn interior_is_a_compatible_fixpoint_below(i in 0usize..1000, l in labels()) {
        let (_, s) = pick(i);
        let r = partition_of(s, &l);
        let int = compatible_interior(s, &r).unwrap();
        prop_assert!(int.refines(&r));
        prop_assert!(check(Law::Compatible, s, &int).unwrap().passed);
        prop_assert_eq!(compatible_interior(s, &int).unwrap(), int);
    }

    #[test]
    fn structures_and_relations_round_trip(i in 0usize..1000, l in labels()) {
        let (_, s) = pick(i);
        let text = format::structure_to_json(s);
        let back = format::parse_structure(&text).unwrap();
        prop_assert_eq!(format::structure_to_json(&back), text);
        let r = partition_of(s, &l);
        let v = format::partition_to_value(s, &r);
        prop_assert_eq!(format::partition_from_value(s, &v).unwrap(), r);
    }

    #[test]
    fn line_ids_round_trip(i in any::<i32>(), edge in any::<bool>()) {
        let z = if edge { Z::E(i64::from(i)) } else { Z::V(i64::from(i)) };
        prop_assert_eq!(Z::parse(&z.id()), Some(z));
    }

    #[test]
    fn retractions_compose(i in -200i64..200, edge in any::<bool>(), m in 0usize..20, extra in 0usize..20) {
        let z = if edge { Z::E(i) } else { Z::V(i) };
        let n = m + extra;
        prop_assert_eq!(theta(m, theta(n, z)), theta(m, z));
        let t = theta(n, z);
        prop_assert_eq!(theta(n, t.src()), t.src());
        prop_assert_eq!(theta(n, z.src()), t.src());
        prop_assert_eq!(theta(n, z.tgt()), t.tgt());
    }

    #[test]
    fn cyclic_index_formula(k in 1usize..4, m in 1usize..13, d in 1usize..13) {
        prop_assume!(m % d == 0);
        let g = Arc::new(fixtures::connected_groupoid(k, &GroupTable::cyclic(m)));
        let x = g.vertices().next().unwrap();
        // The subgroup of order d in ℤ/m: multiples of m/d.
        let step = m / d;
        let n: BTreeSet<Elem> = g
            .elements()
            .filter(|&a| g.src(a) == x && g.tgt(a) == x)
            .filter(|&a| {
                let name = g.name(a);
                let h = if a == x { 0 } else { name.split(',').nth(1).unwrap().parse::<usize>().unwrap() };
                h % step == 0
            })
            .collect();
        prop_assert_eq!(n.len(), d);
        let rho = rho_from_subgroup(&g, x, &n).unwrap();
        prop_assert!(is_rigid(&g, &rho).unwrap());
        prop_assert_eq!(rho.index(), k * k * (m / d));
    }
}
