//! The ten acceptance criteria. Runs without the test harness so that every
//! criterion prints one line; exits non-zero if any fails.

use std::collections::HashSet;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cofinex::carrier::{Elem, FiniteStructure};
use cofinex::cofinite::{discreteness_certificate, is_filter_base, is_hausdorff, FilterBase};
use cofinex::completion::{
    count_new_points, discrete_quotient_check, window_separation, zline, EndStatus,
};
use cofinex::fixtures::{self, GroupTable};
use cofinex::groupoid::{condition3_check, is_rigid, rho_from_subgroup, rigid_base};
use cofinex::oracle;
use cofinex::partition::{close, kernel, quotient, quotient_unchecked, Law, Partition};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn shared(v: Vec<(String, FiniteStructure)>) -> Vec<(String, Arc<FiniteStructure>)> {
    v.into_iter().map(|(n, s)| (n, Arc::new(s))).collect()
}

fn names(s: &FiniteStructure, seed: &[(Elem, Elem)]) -> String {
    let v: Vec<String> = seed
        .iter()
        .map(|&(x, y)| format!("({},{})", s.name(x), s.name(y)))
        .collect();
    v.join(",")
}

fn criterion_1() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_cofinex");
    for (system, status, counts) in [
        ("zline-circles", "Exact(1)", "(1,1,1,1)"),
        ("zline-arcs", "Exact(2)", "(2,2,2,2)"),
    ] {
        let start = Instant::now();
        let out = Command::new(bin)
            .args([
                "complete", "--system", system, "--depth", "4", "--report", "ends",
            ])
            .output()
            .map_err(|e| e.to_string())?;
        within(Duration::from_secs(1), start)?;
        let text = String::from_utf8_lossy(&out.stdout);
        let lines: Vec<&str> = text.lines().collect();
        ensure(out.status.success(), || {
            format!("{system}: exit {:?}", out.status.code())
        })?;
        ensure(lines.first() == Some(&status), || {
            format!("{system}: printed {:?}", lines.first())
        })?;
        let want = format!("unbounded classes per level: {counts}");
        ensure(lines.get(1) == Some(&want.as_str()), || {
            format!("{system}: printed {:?}", lines.get(1))
        })?;
    }
    Ok("circles Exact(1) (1,1,1,1), arcs Exact(2) (2,2,2,2)".into())
}

fn criterion_2() -> Outcome {
    let (c, a) = (zline::circles(7), zline::arcs(7));
    for (label, sys) in [("circles", &c), ("arcs", &a)] {
        let r = window_separation(sys, 6, 7).map_err(|e| e.to_string())?;
        ensure(r.all_separated, || {
            format!("{label}: {:?} unseparated", r.unseparated.first())
        })?;
        ensure(r.isolated_at.iter().all(|(_, at)| at.is_some()), || {
            format!("{label}: element never isolated")
        })?;
    }
    let kc = count_new_points(&c, 4).map_err(|e| e.to_string())?.status;
    let ka = count_new_points(&a, 4).map_err(|e| e.to_string())?.status;
    ensure(
        kc == EndStatus::Exact(1) && ka == EndStatus::Exact(2),
        || format!("ends {kc} and {ka}"),
    )?;
    Ok("window 6 separated by level 7 in both systems; ends 1 and 2".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for (name, s) in fixtures::catalogue(6) {
        if s.is_empty() {
            continue;
        }
        let family = oracle::all_satisfying(Law::Compatible, &s);
        for _ in 0..200 {
            let k = rng.gen_range(1..=4);
            let seed: Vec<(Elem, Elem)> = (0..k)
                .map(|_| (rng.gen_range(0..s.len()), rng.gen_range(0..s.len())))
                .collect();
            let got = close(Law::Compatible, &s, &seed)
                .map_err(|e| e.to_string())?
                .partition;
            let want = oracle::minimal_among(&family, &seed);
            ensure(want.as_ref() == Some(&got), || {
                format!("{name} seed {}", names(&s, &seed))
            })?;
            checked += 1;
        }
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("{checked} seeds agree with exhaustive search"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (name, g) in fixtures::groupoid_catalogue(8) {
        let family = oracle::all_satisfying(Law::Congruence, &g);
        for x in g.elements() {
            for y in x..g.len() {
                let seed = [(x, y)];
                let got = close(Law::Congruence, &g, &seed)
                    .map_err(|e| e.to_string())?
                    .partition;
                let want = oracle::minimal_among(&family, &seed);
                ensure(want.as_ref() == Some(&got), || {
                    format!("{name} seed {}", names(&g, &seed))
                })?;
                checked += 1;
            }
        }
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("{checked} seed pairs agree with exhaustive search"))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for k in 1..=3 {
        for h in ["z2", "z4", "z6", "s3"] {
            let table = GroupTable::by_name(h).ok_or("missing group")?;
            let g = Arc::new(fixtures::connected_groupoid(k, &table));
            let x = g.vertices().next().ok_or("no vertex")?;
            for n in oracle::normal_subgroups(&g, x) {
                let rho = rho_from_subgroup(&g, x, &n).map_err(|e| e.to_string())?;
                let want = k * k * (table.order() / n.len());
                ensure(rho.index() == want, || {
                    format!(
                        "C({k},{h}) with |N| = {}: index {} not {want}",
                        n.len(),
                        rho.index()
                    )
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} normal subgroups"))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut held = 0;
    for (name, g) in shared(fixtures::groupoid_catalogue(8)) {
        for rho in oracle::all_satisfying(Law::Congruence, &g) {
            let c3 = condition3_check(&g, &rho).map_err(|e| e.to_string())?;
            let q = quotient_unchecked(&g, &rho, Law::Congruence).map_err(|e| e.to_string())?;
            let valid = q.structure.is_valid();
            ensure(c3.holds == valid, || {
                format!(
                    "{name} {:?}: condition 3 {} but quotient valid {valid}",
                    rho.named_classes(&g),
                    c3.holds
                )
            })?;
            held += usize::from(c3.holds);
            checked += 1;
        }
    }
    let g = fixtures::pair_groupoid(2);
    let r = Partition::from_named_classes(&g, &[vec!["a", "b"]]).map_err(|e| e.to_string())?;
    let report = condition3_check(&g, &r).map_err(|e| e.to_string())?;
    let w = ("ab".to_string(), "ab".to_string(), "ba".to_string());
    ensure(!report.holds && report.witness() == Some(w), || {
        format!("a~b: {:?}", report.witness())
    })?;
    Ok(format!(
        "{checked} congruences ({held} pass the check); a~b refused with (ab,ab,ba)"
    ))
}

fn separates_vertices(g: &FiniteStructure, fb: &FilterBase) -> bool {
    let vs: Vec<Elem> = g.vertices().collect();
    vs.iter().all(|&x| {
        vs.iter()
            .all(|&y| x == y || fb.members().iter().any(|r| !r.related(x, y)))
    })
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for (name, g) in shared(fixtures::groupoid_catalogue(8)) {
        let congruences = oracle::all_satisfying(Law::Congruence, &g);
        let mut seen = HashSet::new();
        for i in 0..congruences.len() {
            for j in i..congruences.len() {
                let members = vec![congruences[i].clone(), congruences[j].clone()];
                let fb = FilterBase::new(g.clone(), Law::Congruence, members)
                    .map_err(|e| e.to_string())?
                    .meet_closure();
                if !separates_vertices(&g, &fb) || !seen.insert(fb.members().to_vec()) {
                    continue;
                }
                let out = rigid_base(&fb).map_err(|e| format!("{name}: {e}"))?;
                let rigid = out
                    .members()
                    .iter()
                    .all(|r| is_rigid(&g, r).unwrap_or(false));
                let refines = out.members().len() == fb.members().len()
                    && out
                        .members()
                        .iter()
                        .zip(fb.members())
                        .all(|(a, b)| a.refines(b));
                ensure(rigid && refines && is_filter_base(&out).passed, || {
                    format!("{name}: members {i} and {j}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} vertex-separating filter bases"))
}

fn criterion_8() -> Outcome {
    for (label, sys, size) in [
        (
            "arcs",
            zline::arcs(4),
            (|n: usize| 4 * n + 1) as fn(usize) -> usize,
        ),
        ("circles", zline::circles(4), |n: usize| 4 * n),
    ] {
        for n in 1..=4 {
            let r = discrete_quotient_check(&sys, n, 4).map_err(|e| e.to_string())?;
            ensure(
                r.holds && r.classes == size(n) && r.level_size == size(n),
                || {
                    format!(
                        "{label} level {n}: {} classes of {}",
                        r.classes, r.level_size
                    )
                },
            )?;
        }
    }
    Ok("arcs 5,9,13,17 and circles 4,8,12,16 classes".into())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    for (name, s) in shared(fixtures::catalogue(fixtures::MAX_PARAMETER)) {
        if s.is_empty() {
            continue;
        }
        for _ in 0..200 {
            let k = rng.gen_range(0..=3);
            let seed: Vec<(Elem, Elem)> = (0..k)
                .map(|_| (rng.gen_range(0..s.len()), rng.gen_range(0..s.len())))
                .collect();
            let r = close(Law::Compatible, &s, &seed)
                .map_err(|e| e.to_string())?
                .partition;
            let q = quotient(&s, &r, Law::Compatible).map_err(|e| e.to_string())?;
            ensure(kernel(&q.map) == r, || {
                format!("{name} relation {:?}", r.named_classes(&s))
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} compatible relations"))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut checked = 0;
    let mut hausdorff = 0;
    for (name, s) in shared(fixtures::catalogue(5)) {
        let family = oracle::all_satisfying(Law::Compatible, &s);
        for _ in 0..100 {
            let k = rng.gen_range(1..=4.min(family.len()));
            let members: Vec<Partition> = family.choose_multiple(&mut rng, k).cloned().collect();
            let fb =
                FilterBase::new(s.clone(), Law::Compatible, members).map_err(|e| e.to_string())?;
            let closed = fb.meet_closure();
            let certified = discreteness_certificate(&closed)
                .iter()
                .all(|c| c.member.is_some());
            ensure(is_filter_base(&closed).passed, || {
                format!("{name}: meet closure is not a filter base")
            })?;
            ensure(
                is_hausdorff(&fb) == certified && is_hausdorff(&closed) == certified,
                || format!("{name} with {k} members"),
            )?;
            hausdorff += usize::from(certified);
            checked += 1;
        }
    }
    Ok(format!("{checked} sampled bases, {hausdorff} Hausdorff"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("ends of the two line systems", criterion_1),
        ("separation without equal ends", criterion_2),
        ("compatible closure minimality", criterion_3),
        ("congruence closure against search", criterion_4),
        ("index of rigid congruences", criterion_5),
        ("condition 3 gates quotients", criterion_6),
        ("rigid bases", criterion_7),
        ("discrete quotients", criterion_8),
        ("kernel of the quotient map", criterion_9),
        ("Hausdorff criterion", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match f() {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {title}: {detail} [{:.2?}]",
                i + 1,
                start.elapsed()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {title}: {why} [{:.2?}]",
                    i + 1,
                    start.elapsed()
                );
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
