use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_conifold-kit"));
    c.env_remove("CONIFOLD_KIT_THREADS").env("RUST_LOG", "off");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

/// Dense coefficient list of a univariate polynomial in the series JSON schema.
fn univariate(rhs: &Value) -> Vec<i64> {
    let mut out = Vec::new();
    for t in rhs["terms"].as_array().unwrap() {
        let e = t["e"][0].as_u64().unwrap() as usize;
        assert_eq!(t["den"], "1");
        out.resize(out.len().max(e + 1), 0);
        out[e] = t["num"].as_str().unwrap().parse().unwrap();
    }
    out
}

#[test]
fn resolved_g_two_relations() {
    let o = run(&["mirror", "resolved-G", "--k", "2", "--l", "1"]);
    assert!(o.status.success());
    let v = json_of(&o);
    let rel = v["relations"].as_array().unwrap();
    assert_eq!(rel.len(), 2);
    assert_eq!(rel[0]["lhs"], "U1*V1");
    assert_eq!(rel[1]["lhs"], "U2*V2");
    let names: Vec<&str> = v["variables"].as_array().unwrap().iter().map(|x| x["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["U1", "V1", "U2", "V2", "Z"]);
}

#[test]
fn resolved_g_numeric_params() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.json", r#"{"q1": "2", "q0": 3}"#);
    let o = run(&["mirror", "resolved-G", "--k", "2", "--l", "1", "--params", &params, "--expanded"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_of(&o);
    // (1 + Z)(1 + q1 Z) and 1 + q1 q0 Z
    assert_eq!(univariate(&v["relations"][0]["rhs"]), [1, 3, 2]);
    assert_eq!(univariate(&v["relations"][1]["rhs"]), [1, 6]);

    let bad = write(dir.path(), "bad.json", r#"{"c": 2}"#);
    assert_eq!(run(&["mirror", "resolved-G", "--k", "2", "--l", "1", "--params", &bad]).status.code(), Some(2));
    let neg = write(dir.path(), "neg.json", r#"{"q1": "-1/2"}"#);
    assert_eq!(run(&["mirror", "resolved-G", "--k", "2", "--l", "1", "--params", &neg]).status.code(), Some(2));
    let missing = dir.path().join("none.json");
    let o = run(&["mirror", "resolved-G", "--k", "2", "--l", "1", "--params", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn triangulations_of_a1_trapezoid() {
    let v = json_of(&run(&["lattice", "triangulations", "--k", "2", "--l", "1"]));
    assert_eq!(v["count"], 3);
    assert_eq!(v["formula"], "3");
    assert_eq!(v["triangulations"].as_array().unwrap().len(), 3);
    // the guard is enforced
    let o = run(&["lattice", "triangulations", "--k", "5", "--l", "5", "--guard", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lattice_bookkeeping() {
    let v = json_of(&run(&["lattice", "dims", "--family", "O", "--k", "3", "--l", "2"]));
    assert_eq!((v["complex_dim"].as_u64(), v["kahler_dim"].as_u64()), (Some(4), Some(9)));
    let v = json_of(&run(&["lattice", "minkowski", "--k", "3", "--l", "2"]));
    assert_eq!(v["equal"], true);
    let v = json_of(&run(&["lattice", "trapezoid", "--k", "4", "--l", "2"]));
    assert_eq!(v["interior_points"], 0);
    assert_eq!(v["lattice_points"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_all_passes() {
    for (k, l, n) in [("1", "1", "4"), ("3", "2", "5")] {
        let o = run(&["verify-all", "--k", k, "--l", l, "--order", n]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let v = json_of(&o);
        assert_eq!(v["ok"], true);
        let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
        for needed in [
            "triangulation_count",
            "intersection_rules",
            "open_mirror",
            "chamber_product_invariance",
            "transition_consistency",
            "minkowski_identity",
        ] {
            assert!(names.contains(&needed), "{needed}");
        }
    }
}

#[test]
fn verify_all_fault_is_located() {
    let o = run(&["verify-all", "--k", "2", "--l", "1", "--order", "3", "--inject-fault", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["ok"], false);
    let om = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "open_mirror").unwrap();
    assert_eq!(om["ok"], false);
    let bad: Vec<&Value> = om["detail"]["divisors"].as_array().unwrap().iter().filter(|d| d["ok"] == false).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0]["p"], 1);
    let m = &bad[0]["mismatches"][0];
    assert_eq!(m["exponent"], serde_json::json!([2, 0]));
    assert_eq!((m["lhs"].as_str(), m["rhs"].as_str()), (Some("0"), Some("1/7")));
}

#[test]
fn gw_verify_report_shape() {
    let o = run(&["gw", "verify", "--k", "2", "--l", "1", "--order", "3"]);
    assert!(o.status.success());
    let v = json_of(&o);
    assert_eq!(v["ok"], true);
    assert_eq!(v["order"], 3);
    assert!(v["mismatches"].as_array().unwrap().is_empty());
    let o = run(&["gw", "verify", "--k", "2", "--l", "1", "--order", "3", "--p", "1", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!json_of(&o)["mismatches"].as_array().unwrap().is_empty());
}

#[test]
fn g_function_a1() {
    let v = json_of(&run(&["gw", "g-function", "--k", "2", "--l", "1", "--p", "1", "--order", "3"]));
    // sum_{d>=1} (2d-1)!/(d!)^2 x^d
    assert_eq!(v["display"], "C1 + 3/2*C1^2 + 10/3*C1^3 + O(4)");
    assert_eq!(run(&["gw", "g-function", "--k", "2", "--l", "1", "--point", "1,0"]).status.code(), Some(2));
}

#[test]
fn amoeba_csv_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{"f": [[0.5, 0], [-2, 0.1]], "g": [3]}"#);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let o = run(&["fib", "amoeba", "--coeffs", &c, "--grid", "8,16", "--output", a.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = bin()
        .env("CONIFOLD_KIT_THREADS", "1")
        .args(["fib", "amoeba", "--coeffs", &c, "--grid", "8,16", "--output", b.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("b1,b2"));
    // g has a single root, so one point per sample
    assert_eq!(lines.count(), 8 * 16);
    let first = text.lines().nth(1).unwrap();
    assert!(first.starts_with("-3.000000000000e+00,"), "{first}");
}

#[test]
fn fib_walls_and_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let r = write(dir.path(), "r.json", r#"{"f": [[0.5, 0], [-2, 0.1], 4], "g": [[3, 0], [0, 0.25]]}"#);
    let v = json_of(&run(&["fib", "walls", "--family", "G", "--k", "3", "--l", "2", "--roots", &r]));
    assert_eq!(v["chamber_count"], 12);
    let v = json_of(&run(&["fib", "walls", "--k", "3", "--l", "2"]));
    assert_eq!(v["chamber_count"], 4);
    assert_eq!(run(&["fib", "walls", "--family", "O", "--k", "3", "--l", "2"]).status.code(), Some(2));
    let v = json_of(&run(&["fib", "cycles", "--family", "O", "--k", "3", "--l", "2"]));
    assert_eq!(v["vanishing_cycles"]["S1xS2"], 3);
    assert_eq!(v["vanishing_cycles"]["S3"], 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify-all", "--k", "1", "--l", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify-all", "--k", "0", "--l", "0"]).status.code(), Some(2));
    assert_eq!(run(&["gw", "verify", "--k", "2", "--l", "1", "--order", "0"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    let o = bin().env("CONIFOLD_KIT_THREADS", "0").args(["lattice", "trapezoid", "--k", "1", "--l", "1"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{"f": [1]}"#);
    assert_eq!(run(&["fib", "amoeba", "--coeffs", &c]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_3() {
    let o = run(&["lattice", "trapezoid", "--k", "2", "--l", "1", "--output", "/nonexistent-dir/x.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(run(&["fib", "amoeba", "--coeffs", "/nonexistent-dir/c.json"]).status.code(), Some(3));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["mirror", "resolved-O", "--k", "2", "--l", "2", "--order", "3"][..],
        &["toric", "fan", "--family", "O", "--k", "3", "--l", "2"],
        &["verify-all", "--k", "2", "--l", "2", "--order", "3", "--seed", "11"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}
