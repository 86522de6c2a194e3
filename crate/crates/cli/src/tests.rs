use std::sync::RwLock;

use serde_json::Value;

/// Guards the process environment: `run` reads `OPCHAR_MAX_WEIGHT`.
static ENV: RwLock<()> = RwLock::new(());

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["opchar"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = {
        let _guard = ENV.read().unwrap_or_else(|e| e.into_inner());
        crate::run(argv, &mut out, &mut err)
    };
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn temp_file(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("opchar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn terms(v: &Value) -> Vec<(Vec<u64>, String, String)> {
    v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let p = t["partition"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
            (p, t["num"].as_str().unwrap().to_string(), t["den"].as_str().unwrap().to_string())
        })
        .collect()
}

fn s(x: &str) -> String {
    x.to_string()
}

#[test]
fn genus_one_one_leg_has_two_classes() {
    let v = json(&["graphs", "enumerate", "--genus", "1", "--legs", "1", "--format", "json"]);
    assert_eq!(v["count"], 2);
    let mut auts: Vec<u64> = v["classes"].as_array().unwrap().iter().map(|c| c["aut"].as_u64().unwrap()).collect();
    auts.sort();
    assert_eq!(auts, [1, 2]);
}

#[test]
fn psi_table_lists_eight_coefficients() {
    let (code, out, _) = run(&["moduli", "psi", "--order", "8", "--format", "table"]);
    assert_eq!(code, 0);
    let values: Vec<&str> = out.lines().skip(2).map(|l| l.split_whitespace().last().unwrap()).collect();
    assert_eq!(values, ["2", "2", "4", "2", "6", "6", "6", "1"]);
    assert!(out.lines().nth(2).unwrap().starts_with("hbar^1"));
}

#[test]
fn lie_weight_three_is_the_sign_character() {
    let v = json(&["char", "lie", "--max-weight", "3", "--format", "json"]);
    assert_eq!(v["max_weight"], 3);
    assert_eq!(
        terms(&v),
        [(vec![1, 1, 1], s("1"), s("6")), (vec![2, 1], s("-1"), s("2")), (vec![3], s("1"), s("3"))]
    );
}

#[test]
fn usage_errors_exit_two() {
    let (code, out, err) = run(&["bogus"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("unrecognized subcommand"));
    let (code, _, err) = run(&["legendre"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, err) = run(&["verify", "nonsense"]);
    assert_eq!((code, err.contains("unknown suite")), (2, true));
    let (code, _, _) = run(&["char", "com", "--format", "xml"]);
    assert_eq!(code, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn malformed_partition_is_rejected_with_path() {
    let path = temp_file(
        "bad.json",
        r#"{"max_weight": 4, "terms": [{"partition": [2, 2], "num": "1", "den": "2"}, {"partition": [1, 3], "num": "1", "den": "1"}]}"#,
    );
    let (code, out, err) = run(&["legendre", "--input", &path]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("$.terms[1].partition"), "{err}");
}

#[test]
fn legendre_of_h2_from_file_is_e2() {
    let path = temp_file(
        "h2.json",
        r#"{"max_weight": 6, "terms": [{"partition": [2], "num": "1", "den": "2"}, {"partition": [1, 1], "num": "1", "den": "2"}]}"#,
    );
    let v = json(&["legendre", "--input", &path, "--max-weight", "6"]);
    assert_eq!(terms(&v), [(vec![1, 1], s("1"), s("2")), (vec![2], s("-1"), s("2"))]);
}

#[test]
fn outputs_are_canonical_and_round_trip() {
    let (_, out, _) = run(&["char", "ass", "--max-weight", "6"]);
    let path = temp_file("ass.json", &out);
    let value = opchar::json::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let f = opchar::json::symfunc_from_json(&value).unwrap();
    assert_eq!(opchar::json::to_string(&opchar::json::symfunc_to_json(&f)), out);
}

#[test]
fn cobar_of_com_is_lie() {
    let (_, lie, _) = run(&["char", "lie"]);
    let (code, cobar, _) = run(&["cobar", "--operad", "com"]);
    assert_eq!(code, 0);
    assert_eq!(cobar, lie);
}

#[test]
fn free_modular_micro_instance() {
    let v = json(&["free-modular", "--trivial", "1,1", "--max-weight", "4"]);
    let got: Vec<(i64, String)> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["hexp_x2"].as_i64().unwrap(), t["num"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(got, [(0, s("1")), (2, s("1"))]);
}

#[test]
fn table_file_feeds_cch_and_feynman() {
    let path = temp_file(
        "table.json",
        r#"{"entries": [{"genus": 0, "legs": 3, "character": {"n": 3, "values": [
            {"cycle_type": [1, 1, 1], "num": "1", "den": "1"},
            {"cycle_type": [2, 1], "num": "1", "den": "1"},
            {"cycle_type": [3], "num": "1", "den": "1"}]}}]}"#,
    );
    let v = json(&["cch", "--table", &path, "--max-weight", "3"]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
    let (code, out, err) = run(&["feynman", "--table", &path, "--max-weight", "4", "--format", "table"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("weight"));
}

#[test]
fn wick_sum_of_a_cubic_vertex() {
    let v = json(&["graphs", "wick", "--genus", "1", "--legs", "1", "--coeff", "0,3=1", "--coeff", "1,1=1/3"]);
    assert_eq!((v["num"].as_str(), v["den"].as_str()), (Some("5"), Some("6")));
}

#[test]
fn harer_zagier_warns_on_the_error_stream() {
    let (code, out, err) = run(&["moduli", "hz", "--order", "3"]);
    assert_eq!(code, 0);
    assert!(err.contains("warning"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn euler_sums_from_both_sources_agree() {
    let a = json(&["moduli", "euler", "--order", "3"]);
    let b = json(&["moduli", "euler", "--source", "fdet", "--max-weight", "6"]);
    assert_eq!(a["sums"], b["sums"]);
    assert_eq!(a["sums"][0]["chi"], -3);
}

#[test]
fn stirling_and_verify_succeed() {
    let v = json(&["integral", "stirling", "--order", "6"]);
    assert_eq!(v["equal"], true);
    let v = json(&["verify", "psi"]);
    assert_eq!(v["passed"], true);
    let (code, out, _) = run(&["verify", "legendre", "--format", "table"]);
    assert_eq!(code, 0);
    assert!(out.lines().skip(2).all(|l| l.ends_with("pass")));
}

#[test]
fn runs_are_deterministic_and_read_the_environment() {
    assert_eq!(run(&["verify", "legendre"]), run(&["verify", "legendre"]));
    assert_eq!(run(&["char", "ass", "--format", "table"]), run(&["char", "ass", "--format", "table"]));
    let weights = {
        let _guard = ENV.write().unwrap_or_else(|e| e.into_inner());
        let max_weight = |(mut out, mut err): (Vec<u8>, Vec<u8>)| {
            assert_eq!(crate::run(["opchar", "char", "ass"], &mut out, &mut err), 0);
            serde_json::from_slice::<Value>(&out).unwrap()["max_weight"].as_u64()
        };
        std::env::set_var("OPCHAR_MAX_WEIGHT", "4");
        let small = max_weight((Vec::new(), Vec::new()));
        std::env::remove_var("OPCHAR_MAX_WEIGHT");
        (small, max_weight((Vec::new(), Vec::new())))
    };
    assert_eq!(weights, (Some(4), Some(8)));
}
