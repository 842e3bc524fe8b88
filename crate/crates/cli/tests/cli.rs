use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn netfuncap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netfuncap"))
        .args(args)
        .env_remove("NETFUNCAP_BUDGET_STATES")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = netfuncap(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn structured(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    serde_json::from_str(&ok(&all)).unwrap()
}

#[test]
fn bounds_n2_certified() {
    let text = ok(&["bounds", "--example", "N2", "--function", "arithmetic_sum"]);
    assert!(text.contains("upper:    1.261860  2/log2(3)"), "{text}");
    assert!(text.contains("certified:  true"));

    let data = structured(&["bounds", "--example", "N2", "--function", "arithmetic_sum"]);
    assert_eq!(data["schema"], "v1");
    assert_eq!(data["result"]["certified"], true);
    assert!((data["result"]["upper"].as_f64().unwrap() - 2.0 / 3f64.log2()).abs() < 1e-12);
}

#[test]
fn structured_output_is_byte_stable() {
    let args = ["bounds", "--example", "diamond", "--format", "structured"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    // keys come out sorted
    let first_keys: Vec<&str> = a
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    assert_eq!(first_keys, ["command", "problem", "result", "schema"]);
}

#[test]
fn diamond_bounds_show_strict_gap() {
    let data = structured(&["bounds", "--example", "diamond"]);
    let r = &data["result"];
    assert_eq!(r["upper"], 1.0);
    assert_eq!(r["certified"], false);
    assert_eq!(r["best_tag"], "construction");
    let best = r["best_lower"].as_f64().unwrap();
    assert!((best - 2.0 / (1.0 + 3f64.log2())).abs() < 1e-12);
}

#[test]
fn gap_row() {
    let data = structured(&["gap", "--M", "3", "--L", "2"]);
    let row = &data["result"]["rows"][0];
    assert_eq!(row["min_cut"], 2.5);
    assert_eq!(row["m_star"], 3);
    assert_eq!(row["enumerated"], 2.5);
}

#[test]
fn diamond_code_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("diamond_k2.code");
    let p = path.to_str().unwrap();
    ok(&["diamond-code", "--k", "2", "--out", p]);
    let text = ok(&["verify-code", "--example", "diamond", "--code", p]);
    assert!(text.contains("verify:   pass over 64 generators"), "{text}");

    // same code, wrong function
    let out = netfuncap(&[
        "verify-code",
        "--example",
        "diamond",
        "--function",
        "maximum",
        "--code",
        p,
    ]);
    assert!(!out.status.success());
}

#[test]
fn corrupted_code_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("xor.code");
    let p = path.to_str().unwrap();
    ok(&["xor-code", "--out", p]);
    let text = fs::read_to_string(&path).unwrap();
    // flip the decoder so the receiver reports the wrong sum
    let doc: Value = serde_json::from_str(&text).unwrap();
    let mut bad = doc.clone();
    bad["decoder"]["table"][0] = serde_json::json!([1, 1]);
    fs::write(&path, bad.to_string()).unwrap();
    let out = netfuncap(&[
        "verify-code",
        "--example",
        "N2",
        "--function",
        "mod_sum(2)",
        "--code",
        p,
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));

    fs::write(&path, "{ not json").unwrap();
    let out = netfuncap(&[
        "verify-code",
        "--example",
        "N2",
        "--function",
        "mod_sum(2)",
        "--code",
        p,
    ]);
    assert!(!out.status.success());
}

#[test]
fn xor_and_tree_codes() {
    let text = ok(&["xor-code"]);
    assert!(text.contains("k=2 n=1 rate 2.000000"));
    assert!(text.contains("pass over 16 generators"));

    let data = structured(&["tree-code", "--example", "N3"]);
    assert_eq!(data["result"]["rate"], 0.5);
    assert_eq!(data["result"]["verification"]["pass"], true);

    let out = netfuncap(&["tree-code", "--example", "N3", "--k", "2", "--n", "3"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible at node `s3`"));
}

#[test]
fn search_diamond_rate_one_is_infeasible() {
    let data = structured(&[
        "search-code",
        "--example",
        "diamond",
        "--k",
        "1",
        "--n",
        "1",
    ]);
    assert_eq!(data["result"]["outcome"], "infeasible");
}

#[test]
fn network_and_function_documents() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("diamond.json");
    ok(&[
        "export",
        "--example",
        "diamond",
        "--out",
        net.to_str().unwrap(),
    ]);
    let func = dir.path().join("f.json");
    fs::write(&func, r#"{"kind":"maximum"}"#).unwrap();
    let data = structured(&[
        "bounds",
        "--network",
        net.to_str().unwrap(),
        "--function",
        func.to_str().unwrap(),
    ]);
    assert_eq!(data["problem"]["function"], "maximum");
    assert_eq!(data["problem"]["sources"], 3);
    assert_eq!(data["result"]["upper"], 1.0);

    fs::write(
        &net,
        r#"{"nodes":["s1","r"],"edges":[["s1","r"]],"sources":["s1"],"alphabet":2}"#,
    )
    .unwrap();
    let out = netfuncap(&["bounds", "--network", net.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("`receiver`"));
}

#[test]
fn footprint_table() {
    let data = structured(&["footprint", "--example", "N3", "--function", "maximum"]);
    let rows = data["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["footprint"] == 2));
}

#[test]
fn steiner_n2() {
    let data = structured(&["steiner", "--example", "N2"]);
    assert!((data["result"]["value"].as_f64().unwrap() - 1.5).abs() < 1e-9);
}

#[test]
fn appendix_check_replays() {
    let a = ok(&["appendix-check", "--seed", "5", "--families", "30"]);
    assert!(a.contains("all hold: true"));
    assert_eq!(
        a,
        ok(&["appendix-check", "--seed", "5", "--families", "30"])
    );
}

#[test]
fn errors_exit_nonzero_without_output() {
    for args in [
        vec!["bounds", "--example", "N9"],
        vec!["bounds"],
        vec!["bounds", "--example", "N2", "--tol", "0.5"],
        vec!["diamond-code", "--k", "3"],
        vec![
            "bounds",
            "--example",
            "N2",
            "--function",
            "linear(1,1)",
            "--q",
            "4",
        ],
    ] {
        let out = netfuncap(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn state_budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_netfuncap"))
        .args(["bounds", "--example", "line", "--s", "4"])
        .env("NETFUNCAP_BUDGET_STATES", "8")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}
