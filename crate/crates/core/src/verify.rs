//! Property suites over the fixture catalogue and seeded random instances,
//! checked against the brute-force oracles.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::carrier::{generated_elements, product_projections, Elem, FiniteStructure, Kind};
use crate::cofinite::{
    compatible_interior, discreteness_certificate, is_filter_base, is_hausdorff,
    separating_congruence, FilterBase,
};
use crate::completion::{
    count_new_points, discrete_quotient_check, level_embed, system_from_chain, window_separation,
    zline, EndStatus,
};
use crate::groupoid::{
    coherent_from_rigid, components, condition3_check, is_rigid, normal_subgroups, openness_shadow,
    rho_from_subgroups, rigid_base, vertex_group,
};
use crate::partition::{
    check, close, close_with, kernel, quotient, Law, Partition, SaturationRules,
};
use crate::{fixtures, format, oracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Core,
    Cofinite,
    Completion,
    Groupoid,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "core" => Some(Suite::Core),
            "cofinite" => Some(Suite::Cofinite),
            "completion" => Some(Suite::Completion),
            "groupoid" => Some(Suite::Groupoid),
            "all" => Some(Suite::All),
            _ => None,
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Core => "core",
            Suite::Cofinite => "cofinite",
            Suite::Completion => "completion",
            Suite::Groupoid => "groupoid",
            Suite::All => "all",
        })
    }
}

/// Deliberate defects, to show that the suite notices them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    pub skip_product_closure: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub max_size: usize,
    pub seed: u64,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

#[derive(Default)]
struct Prop {
    checked: usize,
    witness: Option<String>,
}

impl Prop {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }
}

struct Ctx {
    max_size: usize,
    faults: Faults,
    rng: ChaCha8Rng,
}

type PropFn = fn(&mut Ctx, &mut Prop);

const PROPERTIES: &[(Suite, &str, PropFn)] = &[
    (
        Suite::Core,
        "validate agrees with the axioms on fixtures and mutants",
        validate_matches_axioms,
    ),
    (
        Suite::Core,
        "product projections are structure maps",
        product_projections_are_maps,
    ),
    (
        Suite::Core,
        "generated substructures are extensive, monotone and idempotent",
        generated_closure,
    ),
    (
        Suite::Core,
        "groupoid arrows compose with their inverses to identities",
        inverse_axiom,
    ),
    (
        Suite::Core,
        "compatible closure is the least compatible relation",
        compatible_minimality,
    ),
    (
        Suite::Core,
        "graph closure is least when its side condition holds",
        graph_minimality,
    ),
    (
        Suite::Core,
        "congruence closure is the least congruence",
        congruence_minimality,
    ),
    (
        Suite::Core,
        "kernel of the natural map is the relation",
        kernel_of_quotient,
    ),
    (
        Suite::Core,
        "meets preserve laws and bound the index",
        meets_preserve_laws,
    ),
    (
        Suite::Core,
        "condition 3 decides groupoid quotients",
        congruence_quotients,
    ),
    (
        Suite::Cofinite,
        "compatible interior is the largest compatible subrelation",
        interior_properties,
    ),
    (
        Suite::Cofinite,
        "separating relations isolate their element",
        separating_relations,
    ),
    (
        Suite::Cofinite,
        "Hausdorff iff every element is isolated under meets",
        hausdorff_iff_isolation,
    ),
    (
        Suite::Completion,
        "line systems satisfy their identities",
        zline_systems_validate,
    ),
    (
        Suite::Completion,
        "level embeddings commute with bondings",
        embeddings_commute,
    ),
    (
        Suite::Completion,
        "end counts are stable in depth",
        end_counts_stable,
    ),
    (
        Suite::Completion,
        "both line systems separate a window but differ in ends",
        uniformities_differ,
    ),
    (
        Suite::Completion,
        "discrete quotients reproduce each level",
        discrete_quotients,
    ),
    (
        Suite::Completion,
        "finite Hausdorff towers add no points",
        finite_towers,
    ),
    (
        Suite::Completion,
        "corrupted bondings are reported",
        corrupted_bonding,
    ),
    (
        Suite::Groupoid,
        "rigid congruences and coherent families correspond",
        rigid_coherent_bijection,
    ),
    (
        Suite::Groupoid,
        "index of rho_N is |V|^2 [G(x,x):N]",
        index_formula,
    ),
    (
        Suite::Groupoid,
        "rigid quotients keep the vertex set",
        rigid_vertex_bijection,
    ),
    (
        Suite::Groupoid,
        "vertex classes are normal subgroups",
        vertex_group_shadow,
    ),
    (
        Suite::Groupoid,
        "rigid bases are rigid filter bases refining the input",
        rigid_bases,
    ),
    (
        Suite::Groupoid,
        "families with a rigid member pass the openness shadow",
        openness,
    ),
];

pub fn run_verify(suite: Suite, max_size: usize, seed: u64) -> SuiteReport {
    run_verify_with(suite, max_size, seed, Faults::default())
}

/// Runs every property of `suite` in a fixed order. Each property draws
/// from its own generator seeded by `seed` and its position, so results do
/// not depend on which other properties ran.
pub fn run_verify_with(suite: Suite, max_size: usize, seed: u64, faults: Faults) -> SuiteReport {
    let mut properties = Vec::new();
    for (i, &(s, name, f)) in PROPERTIES.iter().enumerate() {
        if !suite.includes(s) {
            continue;
        }
        let mut ctx = Ctx {
            max_size,
            faults,
            rng: ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1000).wrapping_add(i as u64)),
        };
        let mut p = Prop::default();
        f(&mut ctx, &mut p);
        properties.push(PropertyResult {
            suite: s,
            name,
            passed: p.witness.is_none(),
            checked: p.checked,
            witness: p.witness,
        });
    }
    SuiteReport {
        suite,
        max_size,
        seed,
        passed: properties.iter().all(|p| p.passed),
        properties,
    }
}

fn fixtures_up_to(n: usize) -> Vec<(String, Arc<FiniteStructure>)> {
    fixtures::catalogue(n)
        .into_iter()
        .map(|(k, s)| (k, Arc::new(s)))
        .collect()
}

fn groupoids_up_to(n: usize) -> Vec<(String, Arc<FiniteStructure>)> {
    fixtures::groupoid_catalogue(n)
        .into_iter()
        .map(|(k, s)| (k, Arc::new(s)))
        .collect()
}

fn random_pairs(rng: &mut ChaCha8Rng, n: usize, max: usize) -> Vec<(Elem, Elem)> {
    let k = rng.gen_range(0..=max);
    (0..k)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect()
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Partition {
    let k = rng.gen_range(1..=n.max(1));
    Partition::from_labels((0..n).map(|_| rng.gen_range(0..k)))
}

fn names(s: &FiniteStructure, seed: &[(Elem, Elem)]) -> String {
    let v: Vec<String> = seed
        .iter()
        .map(|&(x, y)| format!("({},{})", s.name(x), s.name(y)))
        .collect();
    format!("{{{}}}", v.join(","))
}

fn validate_matches_axioms(ctx: &mut Ctx, p: &mut Prop) {
    for (name, s) in fixtures_up_to(ctx.max_size.max(16)) {
        p.check(s.is_valid() && oracle::axioms_hold(&s), || {
            format!("{name} rejected")
        });
        for _ in 0..20 {
            let mutant = mutate(&mut ctx.rng, &s);
            let Ok(m) = format::structure_from_value(&mutant) else {
                continue;
            };
            p.check(m.is_valid() == oracle::axioms_hold(&m), || {
                format!(
                    "{name} mutant: validate={} axioms={}",
                    m.is_valid(),
                    oracle::axioms_hold(&m)
                )
            });
        }
    }
}

/// Redirects one table entry of the JSON document at random.
fn mutate(rng: &mut ChaCha8Rng, s: &FiniteStructure) -> Value {
    let mut v = format::structure_to_value(s);
    let pick = |rng: &mut ChaCha8Rng| s.name(rng.gen_range(0..s.len())).to_string();
    let (x, y) = (pick(rng), pick(rng));
    let mut tables = vec!["src", "tgt"];
    if s.kind() != Kind::Digraph {
        tables.push("inv");
    }
    if s.kind() == Kind::Groupoid {
        tables.push("mul");
    }
    match *tables.choose(rng).expect("nonempty") {
        "mul" => {
            let m = v["mul"].as_array_mut().expect("mul table");
            if !m.is_empty() {
                let i = rng.gen_range(0..m.len());
                if rng.gen_bool(0.5) {
                    m.remove(i);
                } else {
                    m[i][2] = Value::String(y);
                }
            }
        }
        t => {
            v[t][x] = Value::String(y);
        }
    }
    v
}

fn product_projections_are_maps(ctx: &mut Ctx, p: &mut Prop) {
    let all = fixtures_up_to(ctx.max_size.min(8));
    for (a_name, a) in &all {
        for (b_name, b) in &all {
            if a.kind() != b.kind() || a.len() * b.len() > 64 {
                continue;
            }
            let (prod, pa, pb) = product_projections(a, b).expect("same kind");
            p.check(prod.is_valid(), || format!("{a_name}×{b_name} invalid"));
            p.check(
                pa.violations().is_empty() && pb.violations().is_empty(),
                || format!("{a_name}×{b_name} projection breaks a law"),
            );
        }
    }
}

fn generated_closure(ctx: &mut Ctx, p: &mut Prop) {
    for (name, s) in fixtures_up_to(ctx.max_size.max(16)) {
        if s.is_empty() {
            continue;
        }
        for _ in 0..10 {
            let a: Vec<Elem> = (0..ctx.rng.gen_range(0..3))
                .map(|_| ctx.rng.gen_range(0..s.len()))
                .collect();
            let mut b = a.clone();
            b.push(ctx.rng.gen_range(0..s.len()));
            let ga = generated_elements(&s, &a);
            let gb = generated_elements(&s, &b);
            let gga = generated_elements(&s, &ga.iter().copied().collect::<Vec<_>>());
            p.check(
                a.iter().all(|x| ga.contains(x)) && ga.is_subset(&gb) && gga == ga,
                || format!("{name} seed {a:?}"),
            );
        }
    }
}

fn inverse_axiom(ctx: &mut Ctx, p: &mut Prop) {
    for (name, g) in groupoids_up_to(ctx.max_size.max(16)) {
        for a in g.elements() {
            let ai = g.inverse(a);
            p.check(
                g.mul(a, ai) == Some(g.src(a)) && g.mul(ai, a) == Some(g.tgt(a)),
                || format!("{name} at {}", g.name(a)),
            );
        }
    }
}

fn compatible_minimality(ctx: &mut Ctx, p: &mut Prop) {
    for (name, s) in fixtures_up_to(ctx.max_size.min(6)) {
        let family = oracle::all_satisfying(Law::Compatible, &s);
        for _ in 0..25 {
            let seed = random_pairs(&mut ctx.rng, s.len().max(1), 3);
            if s.is_empty() {
                continue;
            }
            let got = close(Law::Compatible, &s, &seed)
                .expect("compatible applies")
                .partition;
            let want = oracle::minimal_among(&family, &seed);
            p.check(want.as_ref() == Some(&got), || {
                format!("{name} seed {}", names(&s, &seed))
            });
        }
    }
}

fn graph_minimality(ctx: &mut Ctx, p: &mut Prop) {
    for (name, s) in fixtures_up_to(ctx.max_size.min(6)) {
        if s.kind() != Kind::Graph {
            continue;
        }
        let family = oracle::all_satisfying(Law::GraphEquivalence, &s);
        for _ in 0..25 {
            let seed = random_pairs(&mut ctx.rng, s.len(), 2);
            let got = close(Law::GraphEquivalence, &s, &seed).expect("graph law applies");
            let want = oracle::minimal_among(&family, &seed);
            let ok = if got.valid {
                want.as_ref() == Some(&got.partition)
            } else {
                want.is_none_or(|w| got.partition.refines(&w) && w != got.partition)
            };
            p.check(ok, || format!("{name} seed {}", names(&s, &seed)));
        }
    }
}

type Case = (String, Arc<FiniteStructure>, Vec<(Elem, Elem)>);

fn congruence_minimality(ctx: &mut Ctx, p: &mut Prop) {
    let rules = SaturationRules {
        products: !ctx.faults.skip_product_closure,
        ..SaturationRules::for_law(Law::Congruence)
    };
    let mut cases: Vec<Case> = Vec::new();
    let z4 = Arc::new(fixtures::cyclic(4));
    cases.push(("cyclic(4)".into(), z4, vec![(1, 3)]));
    for (name, g) in groupoids_up_to(ctx.max_size.min(8)) {
        for x in g.elements() {
            for y in x + 1..g.len() {
                cases.push((name.clone(), g.clone(), vec![(x, y)]));
            }
        }
    }
    let mut families: std::collections::HashMap<String, Vec<Partition>> = Default::default();
    for (name, g, seed) in cases {
        let family = families
            .entry(name.clone())
            .or_insert_with(|| oracle::all_satisfying(Law::Congruence, &g));
        let got = close_with(Law::Congruence, &g, &seed, rules)
            .expect("groupoid")
            .partition;
        let want = oracle::minimal_among(family, &seed);
        p.check(want.as_ref() == Some(&got), || {
            format!(
                "{name} seed {}: closure {:?}, least congruence {}",
                names(&g, &seed),
                got.named_classes(&g),
                want.map_or("none".into(), |w| format!("{:?}", w.named_classes(&g)))
            )
        });
    }
}

fn random_law_partition(rng: &mut ChaCha8Rng, s: &FiniteStructure, law: Law) -> Option<Partition> {
    let seed = random_pairs(rng, s.len(), 2);
    let r = close(law, s, &seed).ok()?;
    r.valid.then_some(r.partition)
}

fn kernel_of_quotient(ctx: &mut Ctx, p: &mut Prop) {
    for (name, s) in fixtures_up_to(ctx.max_size.max(16)) {
        if s.is_empty() {
            continue;
        }
        for _ in 0..20 {
            let Some(r) = random_law_partition(&mut ctx.rng, &s, Law::Compatible) else {
                continue;
            };
            let q = quotient(&s, &r, Law::Compatible).expect("compatible relation");
            p.check(kernel(&q.map) == r && q.structure.is_valid(), || {
                format!("{name} relation {:?}", r.named_classes(&s))
            });
        }
    }
}

fn meets_preserve_laws(ctx: &mut Ctx, p: &mut Prop) {
    for (name, s) in fixtures_up_to(ctx.max_size.max(16)) {
        if s.is_empty() {
            continue;
        }
        let law = Law::for_kind(s.kind());
        for _ in 0..10 {
            let (Some(a), Some(b)) = (
                random_law_partition(&mut ctx.rng, &s, law),
                random_law_partition(&mut ctx.rng, &s, law),
            ) else {
                continue;
            };
            let m = a.intersect(&b).expect("same carrier");
            p.check(check(law, &s, &m).expect("law applies").passed, || {
                format!("{name} {law} meet")
            });
            p.check(m.index() <= a.index() * b.index(), || {
                format!("{name} index bound")
            });
        }
    }
}

fn congruence_quotients(ctx: &mut Ctx, p: &mut Prop) {
    for (name, g) in groupoids_up_to(ctx.max_size.min(8)) {
        for rho in oracle::all_satisfying(Law::Congruence, &g) {
            let c3 = condition3_check(&g, &rho).expect("congruence");
            p.check(c3.holds == oracle::condition3(&g, &rho), || {
                format!(
                    "{name} {:?}: condition 3 disagrees with search",
                    rho.named_classes(&g)
                )
            });
            if c3.holds {
                let ok = quotient(&g, &rho, Law::Congruence).is_ok_and(|q| q.structure.is_valid());
                p.check(ok, || {
                    format!("{name} {:?}: quotient invalid", rho.named_classes(&g))
                });
            }
        }
    }
}

fn interior_properties(ctx: &mut Ctx, p: &mut Prop) {
    for (name, s) in fixtures_up_to(ctx.max_size.max(16)) {
        if s.is_empty() {
            continue;
        }
        for _ in 0..20 {
            let r = random_partition(&mut ctx.rng, s.len());
            let finer = r
                .intersect(&random_partition(&mut ctx.rng, s.len()))
                .expect("same carrier");
            let i = compatible_interior(&s, &r).expect("same carrier");
            let ii = compatible_interior(&s, &i).expect("same carrier");
            let fi = compatible_interior(&s, &finer).expect("same carrier");
            let ok = i.refines(&r)
                && check(Law::Compatible, &s, &i).expect("applies").passed
                && ii == i
                && fi.refines(&i);
            p.check(ok, || format!("{name} relation {:?}", r.named_classes(&s)));
        }
        if let Some(c) = random_law_partition(&mut ctx.rng, &s, Law::Compatible) {
            p.check(
                compatible_interior(&s, &c).expect("same carrier") == c,
                || format!("{name} moved a fixpoint"),
            );
        }
    }
}

fn separating_relations(ctx: &mut Ctx, p: &mut Prop) {
    for (name, s) in fixtures_up_to(ctx.max_size.max(16)) {
        for y in s.elements() {
            let r = separating_congruence(&s, y).expect("element of the carrier");
            let bound = if s.is_vertex(y) {
                r.index() <= 6
            } else {
                s.len() == 1 || r.index() == 2
            };
            let ok = check(Law::Compatible, &s, &r).expect("applies").passed
                && r.class_members(y) == [y]
                && bound;
            p.check(ok, || format!("{name} at {}", s.name(y)));
        }
    }
}

fn hausdorff_iff_isolation(ctx: &mut Ctx, p: &mut Prop) {
    for (name, s) in fixtures_up_to(ctx.max_size.min(5)) {
        let family = oracle::all_satisfying(Law::Compatible, &s);
        for _ in 0..20 {
            let k = ctx.rng.gen_range(1..=4.min(family.len()));
            let members: Vec<Partition> =
                family.choose_multiple(&mut ctx.rng, k).cloned().collect();
            let fb =
                FilterBase::new(s.clone(), Law::Compatible, members).expect("compatible members");
            let closed = fb.meet_closure();
            let isolated = discreteness_certificate(&closed)
                .iter()
                .all(|e| e.member.is_some());
            p.check(
                is_filter_base(&closed).passed && is_hausdorff(&closed) == isolated,
                || format!("{name} with {k} members"),
            );
        }
    }
}

fn levels(ctx: &Ctx) -> usize {
    ctx.max_size.clamp(4, 12)
}

fn zline_systems_validate(ctx: &mut Ctx, p: &mut Prop) {
    let n = levels(ctx);
    for (label, sys) in [("circles", zline::circles(n)), ("arcs", zline::arcs(n))] {
        let r = sys.validate(2 * n + 2);
        p.check(r.passed, || format!("{label}: {}", r.failures[0]));
    }
}

fn embeddings_commute(ctx: &mut Ctx, p: &mut Prop) {
    let n = levels(ctx);
    for (label, sys) in [("circles", zline::circles(n)), ("arcs", zline::arcs(n))] {
        let ids = sys.base_elements(n + 2).expect("symbolic base");
        for _ in 0..30 {
            let a = ids.choose(&mut ctx.rng).expect("nonempty window");
            let hi = ctx.rng.gen_range(sys.first_level()..=sys.last_level());
            let lo = ctx.rng.gen_range(sys.first_level()..=hi);
            let top = sys
                .level(hi)
                .unwrap()
                .id(&level_embed(&sys, a, hi).unwrap())
                .unwrap();
            let down = sys.bonding_table(lo, hi).unwrap()[top];
            let want = level_embed(&sys, a, lo).unwrap();
            p.check(sys.level(lo).unwrap().name(down) == want, || {
                format!("{label} {a} levels {lo}<{hi}")
            });
        }
    }
}

fn end_counts_stable(ctx: &mut Ctx, p: &mut Prop) {
    let n = levels(ctx);
    for (label, sys, k) in [
        ("circles", zline::circles(n), 1),
        ("arcs", zline::arcs(n), 2),
    ] {
        for depth in 2..=n {
            let r = count_new_points(&sys, depth).expect("depth in range");
            p.check(r.status == EndStatus::Exact(k), || {
                format!("{label} depth {depth}: {}", r.status)
            });
        }
    }
}

fn uniformities_differ(_ctx: &mut Ctx, p: &mut Prop) {
    let (c, a) = (zline::circles(7), zline::arcs(7));
    for (label, sys) in [("circles", &c), ("arcs", &a)] {
        let r = window_separation(sys, 6, 7).expect("symbolic base");
        p.check(r.all_separated, || {
            format!("{label}: {:?} not separated", r.unseparated.first())
        });
    }
    let kc = count_new_points(&c, 4).expect("depth").status;
    let ka = count_new_points(&a, 4).expect("depth").status;
    p.check(kc != ka, || format!("both report {kc}"));
}

fn discrete_quotients(_ctx: &mut Ctx, p: &mut Prop) {
    for (label, sys, size) in [
        (
            "circles",
            zline::circles(4),
            (|n: usize| 4 * n) as fn(usize) -> usize,
        ),
        ("arcs", zline::arcs(4), |n: usize| 4 * n + 1),
    ] {
        for n in 1..=4 {
            let r = discrete_quotient_check(&sys, n, 4).expect("exact ends");
            p.check(r.holds && r.classes == size(n), || {
                format!("{label} level {n}: {} classes", r.classes)
            });
        }
    }
}

fn finite_towers(ctx: &mut Ctx, p: &mut Prop) {
    for (name, s) in fixtures_up_to(ctx.max_size.max(16)) {
        if s.is_empty() {
            continue;
        }
        let law = Law::Compatible;
        let mut chain = vec![Partition::full(s.len()), Partition::discrete(s.len())];
        if let Some(mid) = random_law_partition(&mut ctx.rng, &s, law) {
            chain.push(mid);
        }
        let sys = system_from_chain(&s, law, &chain).expect("chain");
        let depth = sys.last_level();
        let ends = count_new_points(&sys, depth).expect("depth");
        let deepest = sys.level(depth).expect("level");
        let same = format::structure_to_json(deepest)
            == format::structure_to_json(
                &crate::partition::quotient(&s, &Partition::discrete(s.len()), law)
                    .unwrap()
                    .structure,
            );
        p.check(
            ends.status == EndStatus::Exact(0) && same && sys.validate(0).passed,
            || name.clone(),
        );
    }
}

fn corrupted_bonding(_ctx: &mut Ctx, p: &mut Prop) {
    let mut sys = zline::circles(4);
    let b = sys.bonding(2).expect("level");
    let mut table = b.table().to_vec();
    let x = b.domain().id("e0").expect("edge");
    table[x] = b.codomain().id("e1").expect("edge");
    sys.replace_bonding(2, table).expect("level");
    let r = sys.validate(10);
    p.check(!r.passed, || "corruption went unnoticed".into());
}

fn coherent_families(g: &Arc<FiniteStructure>) -> Vec<Partition> {
    let mut out = vec![std::collections::BTreeMap::new()];
    for comp in components(g) {
        let x = comp[0];
        let mut next = Vec::new();
        for base in &out {
            for n in normal_subgroups(g, x) {
                let mut b = base.clone();
                b.insert(x, n);
                next.push(b);
            }
        }
        out = next;
    }
    out.iter()
        .map(|b| rho_from_subgroups(g, b).expect("normal subgroups"))
        .collect()
}

fn rigid_coherent_bijection(ctx: &mut Ctx, p: &mut Prop) {
    for (name, g) in groupoids_up_to(ctx.max_size.max(16)) {
        let built = coherent_families(&g);
        for rho in &built {
            let fam = coherent_from_rigid(&g, rho);
            let ok = fam.is_ok_and(|f| crate::groupoid::rigid_from_coherent(&f) == *rho);
            p.check(ok, || format!("{name} {:?}", rho.named_classes(&g)));
        }
        if g.len() <= ctx.max_size.min(8) {
            let rigid: BTreeSet<Vec<Vec<String>>> = oracle::all_satisfying(Law::Congruence, &g)
                .into_iter()
                .filter(|r| is_rigid(&g, r).unwrap_or(false))
                .map(|r| r.named_classes(&g))
                .collect();
            let ours: BTreeSet<Vec<Vec<String>>> =
                built.iter().map(|r| r.named_classes(&g)).collect();
            p.check(rigid == ours, || {
                format!(
                    "{name}: {} rigid congruences, {} families",
                    rigid.len(),
                    ours.len()
                )
            });
        }
    }
}

fn index_formula(_ctx: &mut Ctx, p: &mut Prop) {
    for k in 1..=3 {
        for h in ["z2", "z4", "z6", "s3"] {
            let table = fixtures::GroupTable::by_name(h).expect("known group");
            let g = Arc::new(fixtures::connected_groupoid(k, &table));
            let x = g.vertices().next().expect("vertex");
            for n in oracle::normal_subgroups(&g, x) {
                let rho = crate::groupoid::rho_from_subgroup(&g, x, &n).expect("normal");
                let want = k * k * (vertex_group(&g, x).len() / n.len());
                p.check(rho.index() == want, || {
                    format!("C({k},{h}) |N|={}: {} vs {want}", n.len(), rho.index())
                });
            }
        }
    }
}

fn rigid_vertex_bijection(ctx: &mut Ctx, p: &mut Prop) {
    for (name, g) in groupoids_up_to(ctx.max_size.max(16)) {
        for rho in coherent_families(&g) {
            let ok = quotient(&g, &rho, Law::Congruence).is_ok_and(|q| {
                q.structure.vertex_count() == g.vertex_count() && q.structure.is_valid()
            });
            p.check(ok, || format!("{name} {:?}", rho.named_classes(&g)));
        }
    }
}

fn vertex_group_shadow(ctx: &mut Ctx, p: &mut Prop) {
    for (name, g) in groupoids_up_to(ctx.max_size.min(8)) {
        for rho in oracle::all_satisfying(Law::Congruence, &g) {
            for x in g.vertices() {
                let n: BTreeSet<Elem> = rho
                    .class_members(x)
                    .iter()
                    .copied()
                    .filter(|&a| g.src(a) == x && g.tgt(a) == x)
                    .collect();
                let normals = oracle::normal_subgroups(&g, x);
                p.check(normals.contains(&n), || format!("{name} at {}", g.name(x)));
            }
        }
    }
}

fn rigid_bases(ctx: &mut Ctx, p: &mut Prop) {
    for (name, g) in groupoids_up_to(ctx.max_size.min(8)) {
        let congruences = oracle::all_satisfying(Law::Congruence, &g);
        for _ in 0..10 {
            let k = ctx.rng.gen_range(1..=3.min(congruences.len()));
            let members: Vec<Partition> = congruences
                .choose_multiple(&mut ctx.rng, k)
                .cloned()
                .collect();
            let fb = FilterBase::new(g.clone(), Law::Congruence, members)
                .expect("congruences")
                .meet_closure();
            let separable = g.vertices().all(|x| {
                fb.members().iter().any(|r| {
                    r.class_members(x)
                        .iter()
                        .filter(|&&v| g.is_vertex(v))
                        .count()
                        == 1
                })
            });
            match rigid_base(&fb) {
                Ok(out) => {
                    let ok = separable
                        && out
                            .members()
                            .iter()
                            .all(|r| is_rigid(&g, r).unwrap_or(false))
                        && is_filter_base(&out).passed
                        && out
                            .members()
                            .iter()
                            .zip(fb.members())
                            .all(|(a, b)| a.refines(b));
                    p.check(ok, || format!("{name} with {k} members"));
                }
                Err(e) => p.check(!separable, || format!("{name}: {e}")),
            }
        }
    }
}

fn openness(ctx: &mut Ctx, p: &mut Prop) {
    for (name, g) in groupoids_up_to(ctx.max_size.max(16)) {
        let rigid = coherent_families(&g);
        let Some(r) = rigid.choose(&mut ctx.rng) else {
            continue;
        };
        let merge = close(Law::Congruence, &g, &random_pairs(&mut ctx.rng, g.len(), 2))
            .expect("groupoid")
            .partition;
        let fb = FilterBase::new(g.clone(), Law::Congruence, vec![merge, r.clone()])
            .expect("congruences");
        p.check(openness_shadow(&fb), || name.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let r = run_verify(Suite::All, 5, 1);
        let failed: Vec<_> = r.properties.iter().filter(|p| !p.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn missing_product_rule_is_caught_on_z4() {
        let faults = Faults {
            skip_product_closure: true,
        };
        let r = run_verify_with(Suite::Core, 6, 7, faults);
        let p = r
            .properties
            .iter()
            .find(|p| p.name.starts_with("congruence closure"))
            .unwrap();
        assert!(!p.passed);
        assert!(p
            .witness
            .as_deref()
            .unwrap()
            .starts_with("cyclic(4) seed {(1,3)}"));
    }

    #[test]
    fn reports_are_deterministic() {
        assert_eq!(
            run_verify(Suite::Cofinite, 5, 9),
            run_verify(Suite::Cofinite, 5, 9)
        );
    }
}
