use std::path::Path;
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ballotope"));
    c.env_remove("BALLOTOPE_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/envelope.schema.json");
        let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        jsonschema::validator_for(&schema).expect("schema compiles")
    })
}

/// Runs a JSON command, checks the exit code, and validates the envelope.
fn envelope(args: &[&str], code: i32) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1, "exactly one envelope line");
    let v: Value = serde_json::from_str(&text).unwrap();
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} envelope invalid: {errors:?}");
    v
}

fn result(args: &[&str]) -> Value {
    envelope(args, 0)["result"].clone()
}

#[test]
fn count_examples() {
    assert_eq!(result(&["count", "--n", "7"])["count"], "5");
    assert_eq!(result(&["count", "--n", "1"])["count"], "1");
    let r = result(&["count", "--n", "7", "--method", "brute"]);
    assert_eq!(r["count"], "5");
    let both = result(&["count", "--n", "16", "--method", "both"]);
    assert_eq!(both["agree"], true);
    assert_eq!(both["dp"], both["brute"]);
    // exact beyond 64 bits
    let big = result(&["count", "--n", "150"]);
    assert!(big["count"].as_str().unwrap().len() > 40);
}

#[test]
fn envelope_shape() {
    let v = envelope(&["count", "--n", "7"], 0);
    assert_eq!(v["schema_version"], "1.0");
    assert_eq!(v["command"], "count");
    assert_eq!(v["params"]["n"], 7);
    assert_eq!(v["timing_ms"], 0.0);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["schema_version", "command", "params", "result", "timing_ms"]);

    let mut bad = v.clone();
    bad["result"]["count"] = serde_json::json!(5);
    assert!(!validator().is_valid(&bad), "counts must be decimal strings");
    let mut bad = v;
    bad.as_object_mut().unwrap().remove("timing_ms");
    assert!(!validator().is_valid(&bad));
}

#[test]
fn every_command_emits_a_valid_envelope() {
    let plot = std::env::temp_dir().join(format!("ballotope-cli-{}.svg", std::process::id()));
    let plot = plot.to_str().unwrap();
    let cases: &[&[&str]] = &[
        &["enumerate", "--n", "9"],
        &["check", "--bits", "11011"],
        &["sumset", "--bits", "1101011"],
        &["ratio", "--from", "10", "--to", "12"],
        &["member", "--vector", "3/4,1/3,1/2,2/3,1"],
        &["intervals", "--vector", "3/4,1/3,1/2,2/3,1"],
        &["gaps", "--endpoints", "0,3/4,13/12,19/12,9/4,13/4"],
        &["gerrymander", "--endpoints", "0,3/4,13/12,19/12,9/4,13/4"],
        &["rotate", "--vector", "1,2,3", "--k", "1"],
        &["cut", "--necklace", "1,0,0"],
        &["classify", "--vector", "1/2,1/2,1/2"],
        &["volume", "--n", "2", "--samples", "1000"],
        &["vertices", "--n", "3", "--bbs"],
        &["bounds", "--max-l", "15"],
        &["slope", "--vector", "1,0,1"],
        &["pad", "--vector", "1"],
        &["to-bbs", "--vertex", "0,0,1,0,0"],
        &["from-bbs", "--bits", "111", "--interior"],
        &["constraints", "--n", "3"],
        &["eliminate", "--example"],
        &["eliminate", "--matrix", "1,-1;1,-1"],
        &["unimodular", "--n", "2"],
        &["bfs", "--n", "2"],
        &["plot", "--bbs", "11011001111", "--guides", "--out", plot],
    ];
    for args in cases {
        let v = envelope(args, 0);
        assert_eq!(v["command"], args[0]);
    }
    std::fs::remove_file(plot).ok();
}

#[test]
fn geometry_examples() {
    let cut = result(&["cut", "--necklace", "1.78,1.55,0.76,2.06,3.21"]);
    assert_eq!(cut["canonical_rotation"], serde_json::json!(["321/100", "89/50", "31/20", "19/25", "103/50"]));
    assert_eq!(cut["unique"], true);

    let m = result(&["member", "--vector", "0,1,0"]);
    assert_eq!(m["in_cone"], false);
    assert!(m["violated"].as_array().unwrap().contains(&serde_json::json!([1, -1, 0])));

    let m = result(&["member", "--vector", "3/4,1/3,1/2,2/3,1"]);
    assert_eq!(m["in_cone"], true);
    assert_eq!(m["vector"][0], "3/4");

    let one = result(&["member", "--vector", "5"]);
    assert_eq!(one["in_cone"], true);
    assert_eq!(one["min_ballot_dot"], Value::Null);

    let g = result(&["gaps", "--endpoints", "0,3/4,13/12,19/12,9/4,13/4"]);
    assert_eq!(g["vector"], serde_json::json!(["3/4", "1/3", "1/2", "2/3", "1/1"]));
}

#[test]
fn vertex_examples() {
    let r = result(&["vertices", "--n", "2", "--bbs"]);
    let rows = r["vertices"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|row| row["bbs"].as_str().unwrap().len() == 7));
    assert_eq!(rows[3]["vertex"], serde_json::json!([1, 0, 1]));
    assert_eq!(rows[3]["bbs"], "1111111");

    let r = result(&["vertices", "--n", "3", "--interior", "--bbs"]);
    let words: Vec<&str> = r["vertices"].as_array().unwrap().iter().map(|v| v["bbs"].as_str().unwrap()).collect();
    assert_eq!(words, ["11011", "11111"]);

    assert_eq!(result(&["to-bbs", "--vertex", "0,0,1,0,0"])["bbs"], "110111011");
    assert_eq!(result(&["from-bbs", "--bits", "110111011"])["vertex"], serde_json::json!([0, 0, 1, 0, 0]));
}

#[test]
fn tsv_tables() {
    let out = run(&["--format", "tsv", "vertices", "--n", "2", "--bbs"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "vertex\tinterior\tbbs");
    assert_eq!(lines[4], "[1,0,1]\ttrue\t1111111");
    assert_eq!(lines.len(), 6);

    let out = run(&["bounds", "--max-l", "9", "--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(2), Some("7\t5\t8/3\t128/7\ttrue\ttrue"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        &["volume", "--n", "3", "--samples", "200000", "--seed", "11"][..],
        &["cut", "--necklace", "1.78,1.55,0.76,2.06,3.21"],
        &["vertices", "--n", "4", "--bbs"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn volume_is_independent_of_thread_count() {
    let args = ["volume", "--n", "3", "--samples", "300000", "--seed", "5"];
    let one = run(&[&["--threads", "1"][..], &args].concat());
    let four = run(&[&["--threads", "4"][..], &args].concat());
    assert!(one.status.success() && four.status.success());
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["result"].take()
    };
    assert_eq!(strip(&one), strip(&four));
}

#[test]
fn seed_defaults_to_environment() {
    let with_env = bin()
        .args(["volume", "--n", "2", "--samples", "5000"])
        .env("BALLOTOPE_SEED", "77")
        .output()
        .unwrap();
    let explicit = run(&["volume", "--n", "2", "--samples", "5000", "--seed", "77"]);
    assert_eq!(with_env.stdout, explicit.stdout);
    let other = run(&["volume", "--n", "2", "--samples", "5000", "--seed", "78"]);
    assert_ne!(other.stdout, explicit.stdout);
}

#[test]
fn timing_is_opt_in() {
    let v: Value = serde_json::from_slice(&run(&["--timing", "count", "--n", "300"]).stdout).unwrap();
    assert!(v["timing_ms"].as_f64().unwrap() > 0.0);
}

#[test]
fn exit_codes() {
    // usage and parse errors
    for args in [
        &["check", "--bits", "1102"][..],
        &["count"],
        &["member", "--vector", "1,2"],
        &["member", "--vector", "1/0"],
        &["vertices", "--n", "11"],
        &["unimodular", "--n", "5"],
        &["cut", "--necklace", "1,-1,1"],
        &["nonsense"],
        &["verify", "--level", "medium"],
        &["verify", "--corrupt-fixture", "no_such_suite"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?} printed to stdout");
        assert!(!out.stderr.is_empty());
    }
    // query answers are not failures
    assert_eq!(result(&["check", "--bits", "1001"])["is_bbs"], false);
    assert_eq!(result(&["member", "--vector", "0,1,0"])["in_cone"], false);
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_quick_passes() {
    let v = envelope(&["verify", "--level", "quick", "--seed", "3"], 0);
    assert_eq!(v["result"]["passed"], true);
    assert_eq!(v["result"]["suites"].as_array().unwrap().len(), 19);
}

#[test]
fn corrupted_fixture_names_the_suite() {
    let out = run(&["verify", "--corrupt-fixture", "round_trips"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["failed"], serde_json::json!(["round_trips"]));
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed suites: round_trips"));
}

#[test]
fn plot_writes_deterministic_svg() {
    let dir = std::env::temp_dir().join(format!("ballotope-plot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.svg");
    let b = dir.join("b.svg");
    for path in [&a, &b] {
        let r = result(&["plot", "--vector", "3/4,1/3,1/2,2/3,1", "--out", path.to_str().unwrap()]);
        assert_eq!(r["nodes"], serde_json::json!(["0", "1/2", "5/6", "5/6", "1/2", "3/2"]));
    }
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    assert!(svg.contains(r#"viewBox="0 0 800 500""#));
    assert!(!svg.contains("href"), "self-contained");

    let seg = dir.join("seg.svg");
    let r = result(&["plot", "--bbs", "1", "--out", seg.to_str().unwrap()]);
    assert_eq!(r["nodes"], serde_json::json!(["0", "1"]));
    std::fs::remove_dir_all(dir).ok();
}
