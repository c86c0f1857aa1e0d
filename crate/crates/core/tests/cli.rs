use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use toricfan::doc;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_toricfan")).args(args).output().expect("binary runs");
    Outcome {
        code: out.status.code().expect("exited"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    (o.code, serde_json::from_str(&o.stdout).expect("json report"))
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_owned()
}

#[test]
fn validate_exit_codes() {
    assert_eq!(run(&["validate", &path("p2.fan")]).code, 0);
    let overlap = run(&["validate", &path("overlap.fan")]);
    assert_eq!(overlap.code, 1);
    assert!(overlap.stdout.contains("<(-1,2),(1,1)>") && overlap.stdout.contains("<(0,1),(1,0)>"));
    let missing = run(&["validate", "missing.fan"]);
    assert_eq!(missing.code, 2);
    assert!(missing.stdout.is_empty() && !missing.stderr.is_empty());
    assert_eq!(run(&["validate", &path("truncated.fan")]).code, 2);
}

#[test]
fn validate_cobordisms() {
    assert_eq!(run(&["validate", "--kind", "cobordism", &path("karu.cob")]).code, 0);
    assert_eq!(run(&["validate", "--kind", "cobordism", &path("cycle.cob")]).code, 0);
    assert_eq!(run(&["validate", "--kind", "cobordism", &path("vertical.cob")]).code, 1);
    // the wrong expected bottom
    let p = run(&["validate", "--kind", "cobordism", &path("karu.cob"), "--bottom", &path("p2.fan")]);
    assert_eq!(p.code, 1);
}

#[test]
fn nonprimitive_rays_warn() {
    let o = run(&["validate", &path("nonprimitive.fan")]);
    assert_eq!(o.code, 0);
    assert!(o.stderr.contains("warning"));
}

#[test]
fn circuits_tables() {
    let (code, v) = run_json(&["circuits", &path("karu.cob")]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["class"] == "Up"));

    let (_, v) = run_json(&["circuits", &path("cycle.cob")]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["class"] == "UpDown"));

    let (code, v) = run_json(&["circuits", &path("empty.cob")]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn collapse_verdicts() {
    let (code, v) = run_json(&["collapse", &path("cycle.cob")]);
    assert_eq!(code, 1);
    let cycle: Vec<Value> = serde_json::from_str("[[[-1,-1,0],[-1,-1,1]],[[1,0,0],[1,0,1]],[[0,1,0],[0,1,1]]]").unwrap();
    assert_eq!(v["cycle"].as_array().unwrap(), &cycle);

    let (code, v) = run_json(&["collapse", &path("karu.cob")]);
    assert_eq!(code, 0);
    let order: Vec<Value> = serde_json::from_str(
        "[[[0,1,0,0],[1,0,0,0],[1,1,0,1]],[[0,0,1,0],[0,1,0,0],[0,1,1,2]],[[0,0,1,0],[1,1,0,1],[1,1,1,3]]]",
    )
    .unwrap();
    assert_eq!(v["order"].as_array().unwrap(), &order);
}

#[test]
fn collapse_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.dot");
    let o = run(&["collapse", &path("karu.cob"), "--dot", g.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    let dot = std::fs::read_to_string(&g).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 3);
    assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 3);

    let c = dir.path().join("c.dot");
    assert_eq!(run(&["collapse", &path("cycle.cob"), "--dot", c.to_str().unwrap()]).code, 1);
    let dot = std::fs::read_to_string(&c).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains("->") && l.contains("red")).count(), 3);
}

#[test]
fn factorize_transcripts() {
    let (code, v) = run_json(&["factorize", &path("karu.cob")]);
    assert_eq!(code, 0);
    let steps = v["steps"].as_array().unwrap();
    let centers: Vec<&Value> = steps.iter().map(|s| &s["center"]).collect();
    assert!(steps.iter().all(|s| s["kind"] == "blowup"));
    assert_eq!(serde_json::to_string(&centers).unwrap(), "[[1,1,0],[0,1,1],[1,1,1]]");

    let o = run(&["factorize", &path("cycle.cob")]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("not collapsible"), "{}", o.stdout);

    let (code, v) = run_json(&["factorize", &path("empty.cob")]);
    assert_eq!(code, 0);
    assert_eq!(v["steps"].as_array().unwrap().len(), 0);
}

#[test]
fn factorize_transcript_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    assert_eq!(run(&["factorize", &path("karu.cob"), "--out", t.to_str().unwrap()]).code, 0);
    let text = std::fs::read_to_string(&t).unwrap();
    let parsed: doc::TranscriptDoc = serde_json::from_str(&text).unwrap();
    assert_eq!(doc::to_json(&parsed).unwrap(), text);
}

#[test]
fn build_documents() {
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("k.cob");
    let o = run(&["build", &path("cone3.fan"), "--centers", "(1,1,0);(0,1,1);(1,1,1)", "--out", k.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("4 maximal cones"));
    assert_eq!(std::fs::read(&k).unwrap(), std::fs::read(fixture("karu.cob")).unwrap());

    let (code, v) = run_json(&["build", &path("cone3.fan"), "--centers", ""]);
    assert_eq!(code, 0);
    assert!(v["census"].as_array().unwrap().iter().all(|c| c["class"] == "Independent"));

    assert_eq!(run(&["build", &path("cone3.fan"), "--centers", "(5,5,5,5)"]).code, 2);
    assert_eq!(run(&["build", &path("cone3.fan"), "--centers", "(1,-1,0)"]).code, 1);
    assert_eq!(run(&["build", &path("cone3.fan"), "--centers", "(1,1"]).code, 2);
}

#[test]
fn built_document_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("k.cob");
    run(&["build", &path("cone3.fan"), "--centers", "(1,1,0);(0,1,1);(1,1,1)", "--out", k.to_str().unwrap()]);
    let loaded = doc::read_cobordism(&k).unwrap();
    assert!(loaded.warnings.is_empty());
    let reparsed = doc::parse_cobordism(&std::fs::read_to_string(&k).unwrap()).unwrap();
    assert_eq!(loaded.value.fan, reparsed.value.fan);
    let cob = toricfan::cobordism::Cobordism::new(loaded.value.fan).unwrap();
    let again = doc::to_json(&doc::CobordismDoc::from_cobordism(&cob)).unwrap();
    assert_eq!(again, std::fs::read_to_string(&k).unwrap());
}

#[test]
fn demos() {
    let (code, v) = run_json(&["demo", "karu"]);
    assert_eq!(code, 0);
    assert_eq!(v["mixed_pos"].as_array().unwrap().len(), 2);
    assert_eq!(v["mixed_neg"].as_array().unwrap().len(), 2);
    assert!(run(&["demo", "karu"]).stdout.contains("Mixed"));
    let (code, v) = run_json(&["demo", "noncollapsible"]);
    assert_eq!(code, 0);
    assert_eq!(v["pi_nonsingular"], true);
    assert_eq!(v["collapsible"], false);
    assert_eq!(run(&["demo", "unknown"]).code, 2);
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        vec!["demo", "karu"],
        vec!["--json", "demo", "noncollapsible"],
        vec!["--json", "circuits", "karu.cob"],
        vec!["collapse", "cycle.cob"],
        vec!["--json", "factorize", "karu.cob"],
    ] {
        let args: Vec<String> =
            args.iter().map(|a| if a.ends_with(".cob") { path(a) } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn in_process_runner_matches_binary() {
    let args = ["toricfan", "collapse", &path("cycle.cob")];
    let (code, stdout, _) = toricfan::cli::run(args);
    let o = run(&args[1..]);
    assert_eq!((code, stdout), (o.code, o.stdout));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}
