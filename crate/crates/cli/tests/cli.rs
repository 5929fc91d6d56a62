use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn hgls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgls")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("stdout is JSON")
}

fn batch_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn validator() -> jsonschema::Validator {
    let text = include_str!("../schema/report.schema.json");
    let schema: Value = serde_json::from_str(text).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(v: &Value) {
    let val = validator();
    let errors: Vec<String> = val.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn analyze_curve_minimal_operator() {
    let o = hgls(&["analyze", "--gamma", "-5,-2,3,4", "--minimal-op", "1;1,1", "--json"]);
    assert!(o.status.success());
    let v = json_of(&o);
    assert_valid(&v);
    let op = &v["minimal_operators"][0];
    assert_eq!(op["order"], 4);
    assert_eq!(strings(&op["hypergeometric"]["alpha"]), ["2/5", "3/5", "4/5", "6/5"]);
    assert_eq!(strings(&op["hypergeometric"]["beta"]), ["2/3", "3/4", "5/4", "4/3"]);
}

#[test]
fn analyze_trivial_system_exits_with_three() {
    let o = hgls(&["analyze", "--gamma", "1,-1", "--json"]);
    assert_eq!(o.status.code(), Some(3));
    let v = json_of(&o);
    assert_valid(&v);
    assert_eq!(v["error"]["code"], "TrivialSystem");
}

#[test]
fn analyze_invalid_input_exits_with_two() {
    let o = hgls(&["analyze", "--gamma", "-5,-2,x,4", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_valid(&json_of(&o));
    let o = hgls(&["analyze", "--gamma", "-5,-2,3,3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn analyze_chebyshev_hodge() {
    let o = hgls(&["analyze", "--gamma", "-30,-1,6,10,15", "--hodge", "--json"]);
    assert!(o.status.success());
    let v = json_of(&o);
    assert_valid(&v);
    assert_eq!(v["hodge"]["polynomial"], "8*T^2");
    let h11: Vec<&Value> =
        v["hodge"]["numbers"].as_array().unwrap().iter().filter(|x| x["p"] == 1 && x["q"] == 1).collect();
    assert_eq!(h11.len(), 1);
    assert_eq!(h11[0]["h"], 8);
}

#[test]
fn full_report_validates() {
    let o = hgls(&[
        "analyze",
        "--gamma",
        "-5,-2,3,4",
        "--hodge",
        "--model",
        "--cone",
        "--minimal-op",
        "1;1,1",
        "--gkz-op",
        "1;1,1",
        "--gkz-op",
        "2;2,4",
        "--monodromy",
        "--series",
        "12",
        "--covering",
        "--validate",
        "--json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_of(&o);
    assert_valid(&v);
    assert_eq!(v["validation"]["all_pass"], true);
    assert_eq!(v["cone"]["quotient_dimension"], 9);
    assert_eq!(v["gkz_operators"][0]["right_divisible_by_minimal_operator"], true);
    assert_eq!(v["gkz_operators"][1]["right_divisible_by_minimal_operator"], Value::Null);
    assert_eq!(v["series"]["kind"], "hypergeometric");
    assert_eq!(v["series"]["annihilation"]["annihilated"], false);
    assert_eq!(v["series"]["annihilation"]["first_nonzero"], 0);
    assert_eq!(v["covering"]["quadrilateral"]["conditions"]["c_integral"], true);
}

#[test]
fn section_errors_stay_inline() {
    let o = hgls(&["analyze", "--gamma", "-5,-2,3,4", "--minimal-op", "1;1", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json_of(&o);
    assert_valid(&v);
    assert_eq!(v["rank"], 4);
    assert!(v["minimal_operators"][0]["error"]["code"].is_string());
}

#[test]
fn plain_output_carries_json_values() {
    let args = ["analyze", "--gamma", "-6,-1,2,5", "--hodge", "--covering", "--monodromy"];
    let plain = stdout(&hgls(&args));
    let v = json_of(&hgls(&[&args[..], &["--json"]].concat()));
    fn leaves(v: &Value, out: &mut Vec<String>) {
        match v {
            Value::Object(m) => m.values().for_each(|x| leaves(x, out)),
            Value::Array(a) => a.iter().for_each(|x| leaves(x, out)),
            Value::String(s) => out.push(s.clone()),
            Value::Null => {}
            other => out.push(other.to_string()),
        }
    }
    let mut all = Vec::new();
    leaves(&v, &mut all);
    for leaf in all {
        assert!(plain.contains(&leaf), "missing {leaf}");
    }
    if let Value::Object(m) = &v {
        for k in m.keys() {
            assert!(plain.contains(&format!("{k}:")), "missing key {k}");
        }
    }
}

#[test]
fn model_file_and_matrix_import() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{{\"A\": [[1,1,1,1],[2,0,2,1],[0,3,2,0],[0,1,1,0]]}}").unwrap();
    let path = f.path().to_str().unwrap();
    let v = json_of(&hgls(&["analyze", "--gamma", "-5,-2,3,4", "--model-file", path, "--model", "--json"]));
    assert_valid(&v);
    assert_eq!(v["model_source"], "imported");
    assert_eq!(v["model"]["m"][0], serde_json::json!([2, 0]));
    let o = hgls(&["analyze", "--gamma", "-5,-2,3,4", "--matrix", "1,1,1,1;1,0,0,0;0,1,0,0;0,0,1,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn built_model_is_selectable() {
    let v = json_of(&hgls(&["analyze", "--gamma", "-5,-2,3,4", "--built-model", "--validate", "--json"]));
    assert_valid(&v);
    assert_eq!(v["model_source"], "built");
    assert_eq!(v["validation"]["all_pass"], true);
}

#[test]
fn batch_of_featured_vectors() {
    let f = batch_file("# featured\n-5,-2,3,4\n-30,-1,6,10,15\n-2,-2,1,1,1,1\n");
    let o = hgls(&["batch", "--file", f.path().to_str().unwrap(), "--hodge", "--jobs", "3"]);
    assert!(o.status.success());
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    for r in &lines {
        assert_valid(r);
    }
    assert_eq!(lines.iter().map(|r| r["line"].as_u64().unwrap()).collect::<Vec<_>>(), [2, 3, 4]);
    assert_eq!(lines.iter().map(|r| r["rank"].as_u64().unwrap()).collect::<Vec<_>>(), [4, 8, 2]);
    assert_eq!(lines[0]["hodge"]["polynomial"], "2*T^2 + 2*T");
    assert_eq!(lines[1]["hodge"]["polynomial"], "8*T^2");
}

#[test]
fn empty_batch_is_silent() {
    let f = batch_file("");
    let o = hgls(&["batch", "--file", f.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_line_is_isolated() {
    let f = batch_file("-5,-2,3,4\n-5,-2,three,4\n-2,1,1\n");
    let o = hgls(&["batch", "--file", f.path().to_str().unwrap()]);
    assert!(o.status.success());
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    lines.iter().for_each(assert_valid);
    assert_eq!(lines[1]["line"], 2);
    assert_eq!(lines[1]["input"], "-5,-2,three,4");
    assert_eq!(lines[1]["error"]["code"], "Parse");
    assert!(lines[0].get("error").is_none() && lines[2].get("error").is_none());
}

#[test]
fn missing_batch_file_is_fatal() {
    let o = hgls(&["batch", "--file", "/nonexistent/gammas.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn batch_output_is_deterministic() {
    let f = batch_file("-5,-2,3,4\n-30,-1,6,10,15\n-2,-2,1,1,1,1\n-6,-1,2,5\n1,-1\n");
    let path = f.path().to_str().unwrap();
    let args = ["batch", "--file", path, "--hodge", "--cone", "--monodromy", "--covering", "--series", "10"];
    let a = hgls(&[&args[..], &["--jobs", "1"]].concat());
    let b = hgls(&[&args[..], &["--jobs", "4"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn series_subcommand() {
    let o = hgls(&["series", "--gamma", "-2,1,1", "--terms", "8", "--check-annihilation", "--json"]);
    assert!(o.status.success());
    let v = json_of(&o);
    assert_valid(&serde_json::json!({"gamma": [-2, 1, 1], "reduced": true, "prime": true, "kappa": 0,
        "parameters": {"alpha": v["alpha"], "beta": v["beta"]},
        "family_parameter": {"numerator": {}, "denominator": {}, "q_inf": "", "q_zero": ""},
        "rank": 1, "volume": 2, "irreducible": true, "model_source": "built", "series": v.clone()}));
    assert_eq!(v["kind"], "constant_term");
    assert_eq!(strings(&v["coefficients"])[..4], ["1", "1/2", "3/8", "5/16"]);
    assert_eq!(v["annihilation"]["annihilated"], true);
    let o = hgls(&["series", "--gamma", "-5,-2,3,4", "--terms", "3", "--check-annihilation", "--json"]);
    assert!(o.status.success());
    assert_eq!(json_of(&o)["annihilation"]["error"]["code"], "InsufficientTruncation");
}
