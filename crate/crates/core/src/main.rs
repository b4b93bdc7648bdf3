use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cofinex::carrier::{FiniteStructure, Kind};
use cofinex::cofinite::{discreteness_certificate, is_filter_base, is_hausdorff, separating_map};
use cofinex::completion::{
    count_new_points, discrete_quotient_check, fiber_census, EndStatus, InverseSystem,
};
use cofinex::fixtures::{generate, FixtureSpec, Generated};
use cofinex::format::{self, FormatError};
use cofinex::groupoid::{rho_from_subgroup, GroupoidError};
use cofinex::partition::{close, quotient, Law, PartitionError};
use cofinex::verify::{run_verify_with, Faults, Suite};

#[derive(Parser)]
#[command(
    name = "cofinex",
    version,
    about = "Finite quotients, closures and completions of graphs and groupoids"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum LawArg {
    Compatible,
    GraphEquivalence,
    Congruence,
}

impl From<LawArg> for Law {
    fn from(l: LawArg) -> Law {
        match l {
            LawArg::Compatible => Law::Compatible,
            LawArg::GraphEquivalence => Law::GraphEquivalence,
            LawArg::Congruence => Law::Congruence,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Ends,
    Census,
    QuotientCheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    SkipProductClosure,
}

#[derive(Subcommand)]
enum Command {
    /// Check a structure against the axioms of its kind.
    Validate { file: PathBuf },
    /// Smallest relation satisfying a law and containing the given pairs.
    Close {
        #[arg(long, value_enum)]
        law: LawArg,
        #[arg(long)]
        pairs: PathBuf,
        structure: PathBuf,
    },
    /// Quotient of a structure by a relation.
    Quotient {
        structure: PathBuf,
        relation: PathBuf,
        /// Defaults to the law matching the structure's kind.
        #[arg(long, value_enum)]
        law: Option<LawArg>,
    },
    /// Whether a filter base has trivial intersection.
    Hausdorff { filterbase: PathBuf },
    /// A map isolating one element.
    Separate {
        structure: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Ends, fibre census or discrete quotient checks of an inverse system.
    Complete {
        /// `zline-circles`, `zline-arcs` (optionally with a level, as in
        /// `zline-arcs(6)`) or a system file.
        #[arg(long)]
        system: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Report::Ends)]
        report: Report,
    },
    /// Rigid congruence determined by a normal subgroup of one vertex group.
    Rigid {
        #[arg(long)]
        normal: PathBuf,
        #[arg(long)]
        at: String,
        groupoid: PathBuf,
    },
    /// Print a fixture: `gen path 3` or `gen 'path(3)'`.
    Gen {
        fixture: String,
        params: Vec<String>,
    },
    /// Run the property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
}

/// Success, or a property that came out false.
enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Verdict::Holds) => ExitCode::SUCCESS,
        Ok(Verdict::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(fmt: Format, value: &Value, table: impl FnOnce() -> String) {
    match fmt {
        Format::Json => print!("{}", format::canonical(value)),
        Format::Table => print!("{}", table()),
    }
}

fn run(cli: &Cli) -> Result<Verdict> {
    let fmt = cli.format;
    match &cli.command {
        Command::Validate { file } => {
            let s = format::read_structure(file)?;
            let report = s.validate();
            let violations: Vec<String> =
                report.violations.iter().map(ToString::to_string).collect();
            let v =
                json!({ "kind": s.kind(), "valid": report.is_valid(), "violations": violations });
            emit(fmt, &v, || {
                let mut out = format!("{} with {} elements: ", s.kind(), s.len());
                out += if report.is_valid() {
                    "valid\n"
                } else {
                    "invalid\n"
                };
                for line in &violations {
                    out += &format!("  {line}\n");
                }
                out
            });
            Ok(Verdict::from_bool(report.is_valid()))
        }
        Command::Close {
            law,
            pairs,
            structure,
        } => {
            let s = format::read_structure(structure)?;
            let seed = format::pairs_from_value(&s, &read_json(pairs)?)?;
            let law = Law::from(*law);
            let r = close(law, &s, &seed)?;
            let side = r.side_condition.as_ref().map(ToString::to_string);
            let v = json!({
                "law": law,
                "valid": r.valid,
                "index": r.partition.index(),
                "relation": format::partition_to_value(&s, &r.partition),
                "side_condition": side,
            });
            emit(fmt, &v, || {
                let mut out = format!("{law} closure, index {}\n", r.partition.index());
                out += &classes_table(&s, &r.partition.named_classes(&s));
                if let Some(w) = &side {
                    out += &format!("side condition fails: {w}\n");
                }
                out
            });
            Ok(Verdict::from_bool(r.valid))
        }
        Command::Quotient {
            structure,
            relation,
            law,
        } => {
            let s = Arc::new(format::read_structure(structure)?);
            let r = format::read_partition(&s, relation)?;
            let law = law
                .map(Law::from)
                .unwrap_or_else(|| Law::for_kind(s.kind()));
            match quotient(&s, &r, law) {
                Ok(q) => {
                    let v = json!({
                        "quotient": format::structure_to_value(&q.structure),
                        "map": format::map_to_value(&q.map),
                    });
                    emit(fmt, &v, || structure_table(&q.structure));
                    Ok(Verdict::Holds)
                }
                Err(
                    e @ (PartitionError::LawCheckFailed { .. }
                    | PartitionError::QuotientProductUndefined(..)),
                ) => {
                    refusal(fmt, &e.to_string());
                    Ok(Verdict::Fails)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Hausdorff { filterbase } => {
            let fb = format::read_filterbase(filterbase)?;
            let base = is_filter_base(&fb);
            let hausdorff = is_hausdorff(&fb);
            let cert = discreteness_certificate(&fb.meet_closure());
            let v = json!({
                "filter_base": base,
                "hausdorff": hausdorff,
                "certificate": cert,
            });
            emit(fmt, &v, || {
                let mut out = String::new();
                match base.witness {
                    None => out += "filter base: yes\n",
                    Some((a, b)) => out += &format!("filter base: no (members {a} and {b})\n"),
                }
                out += &format!("hausdorff: {}\n", yes_no(hausdorff));
                for c in &cert {
                    let at = c.member.map_or("-".to_string(), |m| m.to_string());
                    out += &format!("  {:<12} isolated by {at}\n", c.element);
                }
                out
            });
            Ok(Verdict::from_bool(base.passed && hausdorff))
        }
        Command::Separate { structure, at } => {
            let s = Arc::new(format::read_structure(structure)?);
            let y = s.element(at)?;
            let f = separating_map(&s, y)?;
            let r = cofinex::partition::kernel(&f);
            let v = json!({
                "codomain": format::structure_to_value(f.codomain()),
                "map": format::map_to_value(&f),
                "relation": format::partition_to_value(&s, &r),
                "index": r.index(),
            });
            emit(fmt, &v, || {
                let mut out = format!("separating {at}: index {}\n", r.index());
                for x in s.elements() {
                    out += &format!("  {:<12} -> {}\n", s.name(x), f.codomain().name(f.apply(x)));
                }
                out
            });
            Ok(Verdict::Holds)
        }
        Command::Complete {
            system,
            depth,
            report,
        } => complete(fmt, system, *depth, *report),
        Command::Rigid {
            normal,
            at,
            groupoid,
        } => {
            let g = Arc::new(format::read_structure(groupoid)?);
            let x = g.element(at)?;
            let n = format::ids_from_value(&g, &read_json(normal)?)?;
            match rho_from_subgroup(&g, x, &n) {
                Ok(rho) => {
                    let c3 = cofinex::groupoid::condition3_check(&g, &rho)?;
                    let v = json!({
                        "relation": format::partition_to_value(&g, &rho),
                        "index": rho.index(),
                        "rigid": true,
                        "condition3": c3.holds,
                    });
                    emit(fmt, &v, || {
                        let mut out = format!("rigid congruence, index {}\n", rho.index());
                        out += &classes_table(&g, &rho.named_classes(&g));
                        out
                    });
                    Ok(Verdict::Holds)
                }
                Err(
                    e @ (GroupoidError::NotSubgroup { .. }
                    | GroupoidError::NotNormal { .. }
                    | GroupoidError::NotConnected { .. }),
                ) => {
                    refusal(fmt, &e.to_string());
                    Ok(Verdict::Fails)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Gen { fixture, params } => {
            let (name, params) = split_fixture(fixture, params)?;
            let spec = FixtureSpec::parse(&name, &params)?;
            match generate(&spec)? {
                Generated::Structure(s) => {
                    emit(fmt, &format::structure_to_value(&s), || structure_table(&s));
                }
                Generated::System(sys) => {
                    emit(fmt, &format::system_to_value(&sys), || {
                        let mut out = format!(
                            "{spec}: levels {}..={}\n",
                            sys.first_level(),
                            sys.last_level()
                        );
                        for (n, l) in (sys.first_level()..).zip(sys.levels()) {
                            out += &format!(
                                "  level {n}: {} vertices, {} edges\n",
                                l.vertex_count(),
                                l.len() - l.vertex_count()
                            );
                        }
                        out
                    });
                }
            }
            Ok(Verdict::Holds)
        }
        Command::Verify {
            suite,
            max_size,
            seed,
            inject_fault,
        } => {
            let s = Suite::parse(suite).ok_or_else(|| anyhow!("unknown suite `{suite}`"))?;
            let faults = Faults {
                skip_product_closure: matches!(inject_fault, Some(Fault::SkipProductClosure)),
            };
            let r = run_verify_with(s, *max_size, *seed, faults);
            emit(fmt, &serde_json::to_value(&r)?, || {
                let mut out = String::new();
                for p in &r.properties {
                    let mark = if p.passed { "ok  " } else { "FAIL" };
                    out += &format!(
                        "{mark} {:<10} {} ({} checks)\n",
                        p.suite.to_string(),
                        p.name,
                        p.checked
                    );
                    if let Some(w) = &p.witness {
                        out += &format!("     witness: {w}\n");
                    }
                }
                out += &format!(
                    "{}: suite {} max-size {} seed {}\n",
                    pass_fail(r.passed),
                    r.suite,
                    r.max_size,
                    r.seed
                );
                out
            });
            Ok(Verdict::from_bool(r.passed))
        }
    }
}

fn complete(fmt: Format, system: &str, depth: usize, report: Report) -> Result<Verdict> {
    let sys = load_system(system, depth)?;
    if depth > sys.last_level() {
        bail!("depth {depth} exceeds the last level {}", sys.last_level());
    }
    match report {
        Report::Ends => {
            let r = count_new_points(&sys, depth)?;
            emit(fmt, &serde_json::to_value(&r)?, || {
                let counts: Vec<String> =
                    r.census.iter().map(|c| c.unbounded.to_string()).collect();
                let mut out = format!("{}\n", r.status);
                out += &format!("unbounded classes per level: ({})\n", counts.join(","));
                if let Some(k) = r.stabilization {
                    out += &format!("stable from level {k}\n");
                }
                for t in &r.ends {
                    out += &format!("  {}: {}\n", t.name, t.classes.join(" <- "));
                }
                out
            });
            Ok(Verdict::from_bool(r.status != EndStatus::Unknown))
        }
        Report::Census => {
            let start = sys.first_level().max(1);
            let census = (start..=depth)
                .map(|n| fiber_census(&sys, n, sys.window()))
                .collect::<Result<Vec<_>, _>>()?;
            emit(fmt, &serde_json::to_value(&census)?, || {
                let mut out = String::new();
                for c in &census {
                    out += &format!(
                        "level {} ({:?}): unbounded {:?}\n",
                        c.level,
                        c.source,
                        c.unbounded()
                    );
                }
                out
            });
            Ok(Verdict::Holds)
        }
        Report::QuotientCheck => {
            let start = sys.first_level().max(1);
            let checks = (start..=depth)
                .map(|n| discrete_quotient_check(&sys, n, depth))
                .collect::<Result<Vec<_>, _>>()?;
            let all = checks.iter().all(|c| c.holds);
            emit(fmt, &serde_json::to_value(&checks)?, || {
                let mut out = String::new();
                for c in &checks {
                    out += &format!(
                        "level {}: {} ({} of {} classes)\n",
                        c.level,
                        pass_fail(c.holds),
                        c.classes,
                        c.level_size
                    );
                }
                out
            });
            Ok(Verdict::from_bool(all))
        }
    }
}

/// A generator name, `name(N)`, or a system file.
fn load_system(spec: &str, depth: usize) -> Result<InverseSystem> {
    let (name, level) = match spec.split_once('(') {
        Some((n, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| anyhow!("unbalanced `{spec}`"))?;
            (
                n,
                Some(
                    inner
                        .trim()
                        .parse::<usize>()
                        .with_context(|| format!("bad level in `{spec}`"))?,
                ),
            )
        }
        None => (spec, None),
    };
    if name.starts_with("zline-") {
        return Ok(format::generated_system(name, level.unwrap_or(depth))?);
    }
    let path = Path::new(spec);
    let v = read_json(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    Ok(format::system_from_value(&v, dir)?)
}

fn split_fixture(fixture: &str, params: &[String]) -> Result<(String, Vec<String>)> {
    match fixture.split_once('(') {
        Some((name, rest)) => {
            if !params.is_empty() {
                bail!("give parameters either in parentheses or as arguments");
            }
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| anyhow!("unbalanced `{fixture}`"))?;
            let ps = inner
                .split(',')
                .map(|p| p.trim().to_string())
                .filter(|p| !p.is_empty())
                .collect();
            Ok((name.to_string(), ps))
        }
        None => Ok((fixture.to_string(), params.to_vec())),
    }
}

fn read_json(path: &Path) -> Result<Value, FormatError> {
    Ok(serde_json::from_str(&format::read_text(path)?)?)
}

fn refusal(fmt: Format, reason: &str) {
    emit(fmt, &json!({ "refused": reason }), || {
        format!("refused: {reason}\n")
    });
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn classes_table(s: &FiniteStructure, classes: &[Vec<String>]) -> String {
    let mut out = String::new();
    for c in classes {
        let tag = if c.iter().any(|x| s.id(x).is_some_and(|i| s.is_vertex(i))) {
            "v"
        } else {
            "e"
        };
        out += &format!("  [{tag}] {}\n", c.join(" "));
    }
    out
}

fn structure_table(s: &FiniteStructure) -> String {
    let mut out = format!(
        "{} with {} vertices, {} elements\n",
        s.kind(),
        s.vertex_count(),
        s.len()
    );
    for x in s.elements() {
        if s.is_vertex(x) {
            out += &format!("  {:<12} vertex\n", s.name(x));
            continue;
        }
        out += &format!(
            "  {:<12} {} -> {}",
            s.name(x),
            s.name(s.src(x)),
            s.name(s.tgt(x))
        );
        if s.kind() != Kind::Digraph && s.has_inv() {
            out += &format!("  inverse {}", s.name(s.inverse(x)));
        }
        out.push('\n');
    }
    out
}
