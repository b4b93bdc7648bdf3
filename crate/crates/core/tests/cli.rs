use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cofinex::format;
use serde_json::Value;

fn cofinex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cofinex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn gen_json(dir: &Path, fixture: &str) -> PathBuf {
    let out = cofinex(&["gen", fixture, "--format", "json"]);
    assert_eq!(code(&out), 0);
    write(dir, &format!("{fixture}.json"), &stdout(&out))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generated_fixtures_round_trip_bit_exactly() {
    for fixture in [
        "path(3)",
        "delta-graph",
        "cyclic(4)",
        "pair-groupoid(2)",
        "connected-groupoid(2,s3)",
        "discrete-space(3)",
    ] {
        let text = stdout(&cofinex(&["gen", fixture, "--format", "json"]));
        let parsed = format::parse_structure(&text).unwrap();
        assert_eq!(format::structure_to_json(&parsed), text, "{fixture}");
    }
}

#[test]
fn both_parameter_spellings_agree() {
    assert_eq!(
        stdout(&cofinex(&["gen", "path", "2"])),
        stdout(&cofinex(&["gen", "path(2)"]))
    );
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = gen_json(dir.path(), "cyclic(3)");
    assert_eq!(code(&cofinex(&["validate", s(&good)])), 0);

    // The product table of ℤ/2 with a wrong entry is no longer a groupoid.
    let broken = r#"{"elements":["0","1"],"kind":"groupoid","mul":[["0","0","0"],["0","1","1"],["1","0","1"],["1","1","1"]],"vertices":["0"],"src":{"1":"0"},"tgt":{"1":"0"}}"#;
    let bad = write(dir.path(), "bad.json", broken);
    let out = cofinex(&["validate", s(&bad), "--format", "json"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], false);

    let garbage = write(dir.path(), "garbage.json", "{ not json");
    assert_eq!(code(&cofinex(&["validate", s(&garbage)])), 2);
    assert_eq!(
        code(&cofinex(&["validate", "/nonexistent/structure.json"])),
        2
    );
    assert_eq!(code(&cofinex(&["validate"])), 2);
    assert_eq!(code(&cofinex(&["no-such-command"])), 2);
}

#[test]
fn close_folds_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let p2 = gen_json(dir.path(), "path(2)");
    let pairs = write(dir.path(), "pairs.json", r#"[["e01","e12"]]"#);
    let out = cofinex(&[
        "close",
        "--law",
        "compatible",
        "--pairs",
        s(&pairs),
        s(&p2),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        v["relation"]["classes"],
        serde_json::json!([["0", "1", "2"], ["e01", "e12"]])
    );
    assert_eq!(v["index"], 2);
}

#[test]
fn close_reports_graph_side_condition() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "edge.json",
        r#"{"kind":"graph","elements":["a","b","g","h"],"vertices":["a","b"],
            "src":{"g":"a","h":"b"},"tgt":{"g":"b","h":"a"},"inv":{"g":"h","h":"g"}}"#,
    );
    let pairs = write(dir.path(), "pairs.json", r#"{"pairs":[["g","h"]]}"#);
    let out = cofinex(&[
        "close",
        "--law",
        "graph-equivalence",
        "--pairs",
        s(&pairs),
        s(&g),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("side condition fails"));
}

#[test]
fn quotient_by_a_subgroup_and_refusal_of_condition_three() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = gen_json(dir.path(), "cyclic(4)");
    let rel = write(
        dir.path(),
        "rel.json",
        r#"{"classes":[["0","2"],["1","3"]]}"#,
    );
    let out = cofinex(&["quotient", s(&z4), s(&rel), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let q = format::structure_from_value(&v["quotient"]).unwrap();
    assert_eq!(q.len(), 2);
    assert!(q.is_valid());

    let pair = gen_json(dir.path(), "pair-groupoid(2)");
    let ab = write(dir.path(), "ab.json", r#"{"classes":[["a","b"]]}"#);
    let out = cofinex(&["quotient", s(&pair), s(&ab)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("composable triple (ab, ab, ba) has no lift"));

    let odd = write(dir.path(), "odd.json", r#"{"classes":[["0","1"]]}"#);
    assert_eq!(code(&cofinex(&["quotient", s(&z4), s(&odd)])), 1);
    let unknown = write(dir.path(), "unknown.json", r#"{"classes":[["0","x"]]}"#);
    assert_eq!(code(&cofinex(&["quotient", s(&z4), s(&unknown)])), 2);
}

#[test]
fn hausdorff_and_separate() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = gen_json(dir.path(), "path(1)");
    let fb = write(
        dir.path(),
        "fb.json",
        r#"{"carrier":"path(1).json","members":[{"classes":[["0","1"]]},{"classes":[]}]}"#,
    );
    assert_eq!(code(&cofinex(&["hausdorff", s(&fb)])), 0);
    let coarse = write(
        dir.path(),
        "coarse.json",
        r#"{"carrier":"path(1).json","members":[{"classes":[["0","1"]]}]}"#,
    );
    assert_eq!(code(&cofinex(&["hausdorff", s(&coarse)])), 1);

    let out = cofinex(&["separate", s(&p1), "--at", "e01", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["index"], 2);
    assert_eq!(code(&cofinex(&["separate", s(&p1), "--at", "nope"])), 2);
}

#[test]
fn complete_reports_ends() {
    let out = cofinex(&[
        "complete",
        "--system",
        "zline-circles",
        "--depth",
        "4",
        "--report",
        "ends",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "Exact(1)\nunbounded classes per level: (1,1,1,1)\nstable from level 1\n  end:v-4: v-1 <- v-2 <- v-3 <- v-4\n"
    );
    let out = cofinex(&[
        "complete",
        "--system",
        "zline-arcs",
        "--depth",
        "4",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "Exact(2)");
    let counts: Vec<u64> = v["census"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["unbounded"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [2, 2, 2, 2]);

    let out = cofinex(&[
        "complete",
        "--system",
        "zline-arcs",
        "--depth",
        "3",
        "--report",
        "quotient-check",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        code(&cofinex(&[
            "complete",
            "--system",
            "zline-circles(1)",
            "--depth",
            "1"
        ])),
        1
    );
    assert_eq!(
        code(&cofinex(&[
            "complete",
            "--system",
            "zline-spirals",
            "--depth",
            "2"
        ])),
        2
    );
}

#[test]
fn complete_reads_a_system_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "sys.json",
        r#"{"generator":"zline-arcs","max_level":5}"#,
    );
    let out = cofinex(&["complete", "--system", s(&spec), "--depth", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("Exact(2)\n"));

    let sys = stdout(&cofinex(&["gen", "zline-circles(2)", "--format", "json"]));
    let file = write(dir.path(), "circles.json", &sys);
    // No base, so there is nothing to count.
    assert_eq!(
        code(&cofinex(&[
            "complete",
            "--system",
            s(&file),
            "--depth",
            "2"
        ])),
        2
    );
}

#[test]
fn rigid_congruence_from_a_subgroup() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_json(dir.path(), "connected-groupoid(2,z4)");
    let n = write(dir.path(), "n.json", r#"["v0","(0,2,0)"]"#);
    let out = cofinex(&[
        "rigid",
        "--normal",
        s(&n),
        "--at",
        "v0",
        s(&g),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["index"], 8);

    let not_sub = write(dir.path(), "m.json", r#"{"subgroup":["v0","(0,1,0)"]}"#);
    assert_eq!(
        code(&cofinex(&[
            "rigid",
            "--normal",
            s(&not_sub),
            "--at",
            "v0",
            s(&g)
        ])),
        1
    );
}

#[test]
fn verify_exit_codes() {
    let out = cofinex(&[
        "verify",
        "--suite",
        "groupoid",
        "--max-size",
        "6",
        "--seed",
        "3",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = cofinex(&[
        "verify",
        "--suite",
        "core",
        "--max-size",
        "6",
        "--seed",
        "7",
        "--inject-fault",
        "skip-product-closure",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("witness: cyclic(4) seed {(1,3)}"));
    assert_eq!(code(&cofinex(&["verify", "--suite", "everything"])), 2);
}

#[test]
fn verify_json_is_deterministic() {
    let a = stdout(&cofinex(&[
        "verify",
        "--suite",
        "cofinite",
        "--max-size",
        "5",
        "--seed",
        "11",
        "--format",
        "json",
    ]));
    let b = stdout(&cofinex(&[
        "verify",
        "--suite",
        "cofinite",
        "--max-size",
        "5",
        "--seed",
        "11",
        "--format",
        "json",
    ]));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["passed"], true);
}
