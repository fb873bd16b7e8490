use std::process::Command;

use serde_json::Value;

const FG: &str = r#"{"kind":"fg-puiseux","generators":["2","3"]}"#;
const GRAMS: &str = r#"{"kind":"family","rule":"grams"}"#;
const DYADIC: &str = r#"{"kind":"family","rule":"dyadic"}"#;
const QUADRANT: &str = r#"{"kind":"quadrant-union"}"#;
const ZERO_RAY: &str = r#"{"kind":"threshold-union","base":{"kind":"fg-puiseux","generators":[]},"theta":"1"}"#;
const PS_RAY: &str = r#"{"kind":"threshold-union","base":{"kind":"family","rule":"primes-squared"},"theta":"1"}"#;

fn uff(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_uff")).args(args).output().expect("spawn uff");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf8"))
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out) = uff(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: not one JSON document ({e}): {out}")))
}

fn schema() -> jsonschema::JSONSchema {
    let text = include_str!("../schemas/uff-v1.schema.json");
    let v: Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::compile(&v).expect("schema compiles")
}

fn assert_valid(s: &jsonschema::JSONSchema, args: &[&str], doc: &Value) {
    if let Err(errors) = s.validate(doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("{args:?} violates the schema: {msgs:?}\n{doc:#}");
    }
}

#[test]
fn factor_fg_example() {
    let (code, doc) = json(&["factor", "--monoid", FG, "--element", "6"]);
    assert_eq!(code, 0);
    let items = doc["listing"]["items"].as_array().unwrap();
    let want: Value = serde_json::json!([[{"atom": "2", "mult": 3}], [{"atom": "3", "mult": 2}]]);
    assert_eq!(items, want.as_array().unwrap());
    assert_eq!(doc["listing"]["exact"], true);
}

#[test]
fn verify_quadrant_example() {
    let (code, doc) = json(&["verify-paper", "--fixture", "quadrant-union"]);
    assert_eq!(code, 0);
    assert_eq!(doc["passed"], true);
}

#[test]
fn grams_bf_example() {
    let (code, doc) =
        json(&["probe", "--monoid", GRAMS, "--property", "BF", "--sample", "1", "--truncate", "3", "--limit", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["report"]["verdict"], "no");
    let lengths = doc["report"]["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .find(|w| w["type"] == "lengths")
        .expect("length witness");
    assert_eq!(lengths["lengths"], serde_json::json!([6, 20, 56]));
}

/// (args, expected exit code)
fn matrix() -> Vec<(Vec<&'static str>, i32)> {
    vec![
        (vec!["factor", "--monoid", FG, "--element", "6"], 0),
        (vec!["verify-paper", "--fixture", "quadrant-union"], 0),
        (vec!["probe", "--monoid", GRAMS, "--property", "BF", "--sample", "1", "--truncate", "3", "--limit", "3"], 0),
        (vec!["member", "--monoid", FG, "--element", "7"], 0),
        (vec!["member", "--monoid", FG, "--element", "1"], 1),
        (vec!["member", "--monoid", QUADRANT, "--element", "(-3,2)"], 0),
        (vec!["divides", "--monoid", ZERO_RAY, "--divisor", "3/2", "--element", "2"], 1),
        (vec!["divides", "--monoid", ZERO_RAY, "--divisor", "1", "--element", "5/2"], 0),
        (vec!["atoms", "--monoid", QUADRANT], 0),
        (vec!["lengths", "--monoid", FG, "--element", "12"], 0),
        (vec!["mcd", "--monoid", ZERO_RAY, "--set", "3,7/2"], 0),
        (vec!["probe", "--monoid", GRAMS, "--property", "MCDFinite"], 2),
        (vec!["probe", "--monoid", PS_RAY, "--property", "UFF", "--sample", "2,43/36"], 0),
        (vec!["probe", "--monoid", DYADIC, "--property", "Antimatter"], 0),
        (vec!["dplusm-cosets", "--field", "GF(4)", "--subfield", "GF(2)"], 0),
        (vec!["dplusm-twist", "--field", "GF(4)", "--subfield", "GF(2)"], 0),
        (vec!["algebra", "--monoid", DYADIC, "--op", "split", "--left", "x^(3/2) + x^2"], 0),
        (vec!["algebra", "--monoid", FG, "--field", "GF(5)", "--op", "primitive", "--left", "5*x^2"], 1),
        (vec!["member", "--monoid", FG, "--element", "not-a-number"], 64),
        (vec!["probe", "--monoid", FG, "--property", "nonsense"], 64),
    ]
}

#[test]
fn exit_code_matrix() {
    let s = schema();
    let cases = matrix();
    assert_eq!(cases.len(), 20);
    for (args, want) in cases {
        let (code, doc) = json(&args);
        assert_eq!(code, want, "{args:?}\n{doc:#}");
        assert_valid(&s, &args, &doc);
    }
}

#[test]
fn usage_errors() {
    for args in [vec!["bogus"], vec!["member", "--element", "1"], vec!["factor", "--monoid", FG, "--element", "6", "--output", "xml"]] {
        assert_eq!(uff(&args).0, 64, "{args:?}");
    }
    assert_eq!(uff(&["--help"]).0, 0);
}

#[test]
fn text_and_json_verdicts_agree() {
    for (args, _) in matrix() {
        let (code, doc) = json(&args);
        let mut text_args = args.clone();
        text_args.extend(["--output", "text"]);
        let (text_code, text) = uff(&text_args);
        assert_eq!(code, text_code, "{args:?}");
        if let Some(v) = doc["report"]["verdict"].as_str() {
            let first = text.lines().next().unwrap();
            assert!(first.contains(&format!(": {v} (")), "{args:?}: {first}");
        }
    }
}

#[test]
fn all_fixtures_pass() {
    let (code, doc) = json(&["verify-paper"]);
    assert_eq!(code, 0, "{doc:#}");
    assert_valid(&schema(), &["verify-paper"], &doc);
    let ids: Vec<&str> = doc["fixtures"].as_array().unwrap().iter().map(|f| f["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    assert_eq!(ids, sorted);
}

#[test]
fn monoid_from_file() {
    let dir = std::env::temp_dir().join(format!("uff-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fg.json");
    std::fs::write(&path, FG).unwrap();
    let (code, doc) = json(&["lengths", "--monoid", path.to_str().unwrap(), "--element", "6"]);
    assert_eq!(code, 0);
    assert_eq!(doc["listing"]["items"], serde_json::json!([2, 3]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn deterministic_output() {
    let args = ["mcd", "--monoid", ZERO_RAY, "--set", "3", "--set", "7/2"];
    assert_eq!(uff(&args), uff(&args));
}
