use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toric-roots"))
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, text) = run(args);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

fn pairs(v: &Value) -> Vec<(i64, i64)> {
    v.as_array().unwrap().iter().map(|p| (p[0].as_i64().unwrap(), p[1].as_i64().unwrap())).collect()
}

#[test]
fn analyze_generated_fixture() {
    let (code, v) = json(&["analyze", &fixture("s1")]);
    assert_eq!(code, 0);
    assert_eq!(pairs(&v["dual_rays"]), vec![(0, 1), (2, -1)]);
    assert_eq!(v["saturated"], Value::Bool(true));
}

#[test]
fn analyze_lists_the_six_holes() {
    let (code, v) = json(&["analyze", &fixture("fig4"), "--box", "0..6,0..8"]);
    assert_eq!(code, 0);
    let six = vec![(1, 0), (1, 1), (3, 2), (3, 3), (3, 4), (5, 6)];
    assert_eq!(pairs(&v["finite_holes"]), six);
    assert_eq!(pairs(&v["holes_in_box"]["points"]), six);
}

#[test]
fn malformed_input_exits_2() {
    let mut child = bin().args(["analyze", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(b"{\"rank\": 2,").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "malformed_json");
    let (code, v) = json(&["analyze", "/nonexistent/spec.json"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "io");
    let (code, _) = run(&["roots", &fixture("s1"), "--box", "0..3"]);
    assert_eq!(code, 2);
}

#[test]
fn roots_of_the_non_normal_fixtures() {
    let (code, v) = json(&["roots", &fixture("s1prime"), "--box=-1..8,-2..1"]);
    assert_eq!(code, 0);
    let alphas: Vec<(i64, i64)> = v["roots"].as_array().unwrap().iter().map(|r| (r["alpha"][0].as_i64().unwrap(), r["alpha"][1].as_i64().unwrap())).collect();
    assert_eq!(alphas, (0..=8).map(|k| (k, -1)).collect::<Vec<_>>());
    assert_eq!(v["certification"], "exact");

    let (_, v) = json(&["roots", &fixture("fig3"), "--box=-3..8,-3..8", "--bound", "8"]);
    let alphas: Vec<(i64, i64)> = v["roots"].as_array().unwrap().iter().map(|r| (r["alpha"][0].as_i64().unwrap(), r["alpha"][1].as_i64().unwrap())).collect();
    assert!(alphas.contains(&(2, 3)) && alphas.contains(&(5, 7)));
    assert_eq!(alphas.len(), 11);
    assert!(v["bounded_check"]["violations"].as_array().unwrap().is_empty());

    let (code, v) = json(&["roots", &fixture("torus")]);
    assert_eq!(code, 0);
    assert!(v["roots"].as_array().unwrap().is_empty());
    assert_eq!(v["note"], "S^* = {0}");
}

#[test]
fn off_ray_families_are_a_certification_shortfall() {
    let spec = r#"{"rank":3,"representation":{"kind":"hole_patched","cone_generators":[[1,0,0],[0,1,0],[0,0,1]],
        "hole_rays":[{"base":[1,0,0],"step":[2,0,0]}]}}"#;
    let mut child = bin().args(["roots", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(spec.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(v["certification"], "partial");
}

#[test]
fn verify_suites_pass_and_the_corrupted_derivation_fails() {
    let (code, v) = json(&["verify", "prop36", "--seed", "7", "--instances", "200"]);
    assert_eq!((code, v["passed"].clone()), (0, Value::Bool(true)));
    let (code, _) = json(&["verify", "subset-lemma", "--seed", "7"]);
    assert_eq!(code, 0);
    let (code, v) = json(&["verify", "algebra", "--corrupt-derivation"]);
    assert_eq!(code, 1);
    assert!(v["counterexample"]["message"].as_str().unwrap().starts_with("Leibniz"));
    let (code, _) = run(&["verify", "no-such-suite"]);
    assert_eq!(code, 2);
}

#[test]
fn figures() {
    let (code, text) = run(&["figure", &fixture("s1prime"), "--box=-1..7,-1..7"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = text.lines().collect();
    // rows run from y = 7 down to y = -1; column of x is 5 + 2(x + 1)
    let at = |x: usize, y: usize| rows[7 - y].as_bytes()[5 + 2 * (x + 1)] as char;
    assert_eq!(at(1, 2), 'o');
    assert_eq!(at(3, 6), 'o');
    assert_eq!(at(2, 4), '#');
    assert_eq!(text.matches('o').count(), 2);

    let (code, svg) = run(&["figure", &fixture("fig4"), "--box=-1..7,-2..8", "--render", "svg"]);
    assert_eq!(code, 0);
    assert_eq!(svg.matches(r#"class="hole""#).count(), 6);
    for (x, y) in [(1, 0), (1, 1), (3, 2), (3, 3), (3, 4), (5, 6)] {
        assert!(svg.contains(&format!(r#"class="hole" cx="{}" cy="{}" r="3" data-x="{x}" data-y="{y}""#, (x + 2) * 10, (8 - y + 1) * 10)));
    }
    let (code, _) = run(&["figure", &fixture("fig4"), "--box=0..200,0..200"]);
    assert_eq!(code, 2);
}

#[test]
fn classify_and_emit() {
    let (code, v) = json(&["classify", &fixture("quadrant")]);
    assert_eq!(code, 0);
    assert_eq!(v["classification"]["case"], "splits_off_affine_line");

    let (code, v) = json(&["classify", &fixture("s1"), "--emit-sl", "2"]);
    assert_eq!(code, 0);
    let members = v["family"]["members"].as_array().unwrap();
    assert_eq!(members.len(), 2);
    let dir = std::env::temp_dir().join(format!("toric-roots-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (i, m) in members.iter().enumerate() {
        assert_eq!(m["spec"]["representation"]["kind"], "hole_patched");
        let path = dir.join(format!("member{i}.json"));
        std::fs::write(&path, m["spec"].to_string()).unwrap();
        let (code, a) = json(&["analyze", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(pairs(&a["cone_rays"]), vec![(1, 0), (1, 2)]);
        assert_eq!(a["saturated"], Value::Bool(false));
        assert_eq!(a["spec"], m["spec"]);
    }
    std::fs::remove_dir_all(&dir).unwrap();

    let (code, v) = json(&["classify", &fixture("quadrant"), "--emit-sl", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["details"]["classification"]["case"], "splits_off_affine_line");
    let (code, v) = json(&["classify", &fixture("s1prime")]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "not_saturated");
}

#[test]
fn explore_finds_the_six_hole_set() {
    let (code, v) = json(&["explore", &fixture("fig3"), "--budget", "default"]);
    assert_eq!(code, 0);
    assert_eq!(v["label"], "found within budget");
    let six = vec![(1, 0), (1, 1), (3, 2), (3, 3), (3, 4), (5, 6)];
    assert!(v["hole_sets"].as_array().unwrap().iter().any(|h| pairs(h) == six));
    let (_, v) = json(&["explore", &fixture("quadrant")]);
    assert_eq!(v["hole_sets"].as_array().unwrap().len(), 1);
    let (_, v) = json(&["explore", &fixture("fig3"), "--budget", "0"]);
    assert_eq!(v["hole_sets"], serde_json::json!([[]]));
}

#[test]
fn text_format() {
    let (code, text) = run(&["analyze", &fixture("s1"), "--format", "text"]);
    assert_eq!(code, 0);
    assert!(text.contains("dual_rays:\n  - (0,1)\n  - (2,-1)\n"), "{text}");
}

#[test]
fn thread_count_does_not_change_reports() {
    let outs: Vec<String> = ["1", "3"]
        .iter()
        .map(|t| {
            let out = bin().args(["verify", "famous-remark", "--seed", "5", "--instances", "30"]).env("TORIC_ROOTS_THREADS", t).output().unwrap();
            String::from_utf8(out.stdout).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}
