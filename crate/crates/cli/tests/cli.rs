use std::process::Command;

use dtc_core::presentations::from_name;
use serde_json::{json, Value};

fn dtc(args: &[&str]) -> (i32, Value) {
    dtc_env(args, &[])
}

fn dtc_env(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dtc"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8 output");
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    assert_eq!(v["schema"], dtc_cli::SCHEMA);
    (out.status.code().expect("exit code"), v)
}

#[test]
fn value_fn_example() {
    let (code, v) = dtc(&["value", "fn", "--d", "3", "--m", "2", "--n", "1", "--r", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["exact"], 3);
    assert_eq!(v["result"]["provenance"][0]["kind"], "certificate");
    assert_eq!(v["result"]["provenance"][0]["certificate"]["bound"], 3);
}

#[test]
fn bound_fn_example() {
    let (code, v) = dtc(&["bound", "fn", "--d", "2", "--m", "2", "--n", "1", "--r", "2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["certificate"]["bound"], 2);
    assert_eq!(v["result"]["certificate"]["ref_tag"], "witness:fn:even");
    assert_eq!(v["result"]["verified"], true);
}

#[test]
fn cite_lists_tags() {
    let (_, v) = dtc(&["value", "so3", "--r", "2", "--cite"]);
    let tags = v["citations"].as_array().unwrap();
    assert!(!tags.is_empty());
    assert_eq!(v["result"]["exact"], 1);
    assert_eq!(v["result"]["comparisons"]["tc_r"], 3);
    let (_, v) = dtc(&["value", "so3", "--r", "2"]);
    assert!(v.get("citations").is_none());
}

#[test]
fn every_answer_carries_provenance() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["value", "fn", "--d", "2", "--m", "3", "--n", "2", "--r", "3"],
        vec!["value", "so3", "--r", "7"],
        vec!["value", "spheres", "--dims", "2,4", "--r", "2"],
        vec!["value", "spheres", "--dims", "2,2", "--r", "2", "--p", "2,2"],
        vec!["value", "associate", "--dtc", "1"],
        vec!["value", "threshold", "--r", "4"],
        vec!["value", "hopf", "--n", "1", "--r", "2"],
        vec!["bound", "sphere-bundle", "--base", "cp2", "--r", "2"],
        vec!["bound", "cup-length", "--d", "2", "--m", "2", "--n", "1", "--r", "2", "--budget", "4"],
        vec!["nav", "circle", "--angles", "0,2"],
        vec!["ring", "poincare", "--ring", "cp:n=2"],
    ];
    for args in cases {
        let mut with_cite = args.clone();
        with_cite.push("--cite");
        let (code, v) = dtc(&with_cite);
        assert_eq!(code, 0, "{args:?}: {v}");
        assert!(!v["citations"].as_array().unwrap().is_empty(), "{args:?}");
    }
}

#[test]
fn value_examples() {
    let (_, v) = dtc(&["value", "spheres", "--dims", "1,1,1", "--r", "3"]);
    assert_eq!(v["result"]["exact"], 6);
    let (_, v) = dtc(&["value", "spheres", "--dims", "2,2", "--r", "2", "--p", "2,2"]);
    assert_eq!((v["result"]["lower"].clone(), v["result"]["upper"].clone(), v["result"]["exact"].clone()), (json!(4), json!(4), json!(4)));
    let (_, v) = dtc(&["value", "associate", "--dtc", "2"]);
    assert_eq!(v["result"]["upper"], 8);
    let (_, v) = dtc(&["value", "threshold", "--r", "2"]);
    assert_eq!(v["result"]["threshold"], "3/1");
    let (_, v) = dtc(&["value", "hopf", "--n", "2", "--r", "5"]);
    assert_eq!(v["result"]["exact"], 4);
    let (_, v) = dtc(&["value", "hopf", "--n", "1", "--r", "2"]);
    assert!(v["result"]["demonstration"]["support_size"].as_u64().unwrap() <= 2);
    assert!(v["result"]["demonstration"]["fiber_deviation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn sphere_bundle_bound() {
    let (code, v) = dtc(&["bound", "sphere-bundle", "--base", "cp3", "--r", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["euler_height"], 3);
    assert_eq!(v["result"]["bound"], 5);
    let (code, v) = dtc(&["bound", "sphere-bundle", "--base", "cp3", "--r", "3", "--partition", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["bound"], 5);
    let (code, _) = dtc(&["bound", "sphere-bundle", "--base", "cp3", "--r", "3", "--partition", "1,1"]);
    assert_eq!(code, 2);
}

#[test]
fn cup_length_search() {
    let (code, v) = dtc(&["bound", "cup-length", "--d", "2", "--m", "2", "--n", "1", "--r", "2", "--budget", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["length"], 2);
    assert_eq!(v["result"]["certificate"]["bound"], 2);
    let (code, _) = dtc(&["bound", "cup-length", "--d", "2", "--m", "2", "--n", "1", "--r", "2", "--budget", "40"]);
    assert_eq!(code, 2);
}

#[test]
fn ring_commands() {
    let (code, v) = dtc(&["ring", "normal-form", "--ring", "conf:d=2,k=3", "--expr", "w_1_3*w_2_3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["terms"].as_array().unwrap().len(), 2);
    let (_, v) = dtc(&["ring", "normal-form", "--ring", "conf:d=2,k=3", "--expr", "w_1_2*w_1_2"]);
    assert_eq!(v["result"]["is_zero"], true);
    let (_, v) = dtc(&["ring", "poincare", "--ring", "conf:d=2,k=4"]);
    assert_eq!(v["result"]["series"], json!([1, 6, 11, 6]));
    let (code, v) = dtc(&["ring", "confluence", "--ring", "fn:d=3,m=2,n=1,r=2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["confluent"], true);
    let (code, _) = dtc(&["ring", "poincare", "--ring", "nonsense"]);
    assert_eq!(code, 2);
    let (code, _) = dtc(&["ring", "normal-form", "--ring", "cp:n=2", "--expr", "zz"]);
    assert_eq!(code, 2);
}

fn corrupted_conf() -> String {
    let p = from_name("conf:d=2,k=4").unwrap();
    let mut doc: Value = serde_json::from_str(&p.to_json()).unwrap();
    let rules = doc["rules"].as_array_mut().unwrap();
    let last = rules.last_mut().unwrap();
    let coeff = last["rhs"][0]["coeff"].as_str().unwrap().to_string();
    let flipped = coeff.strip_prefix('-').map(str::to_string).unwrap_or(format!("-{coeff}"));
    last["rhs"][0]["coeff"] = json!(flipped);
    doc.to_string()
}

#[test]
fn catalog_directory_and_validation_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.json"), corrupted_conf()).unwrap();
    let good = from_name("cp:n=3").unwrap().to_json();
    std::fs::write(dir.path().join("mycp.json"), good).unwrap();
    let env = [(dtc_cli::commands::CATALOG_ENV, dir.path().to_str().unwrap())];

    let (code, v) = dtc_env(&["ring", "poincare", "--ring", "mycp"], &env);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["series"], json!([1, 0, 1, 0, 1, 0, 1]));

    let (code, v) = dtc_env(&["ring", "confluence", "--ring", "broken"], &env);
    assert_eq!(code, 3, "{v}");
    assert_eq!(v["result"]["confluent"], false);
    let (code, v) = dtc_env(&["ring", "poincare", "--ring", "broken"], &env);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "validation");

    let path = dir.path().join("mycp.json");
    let (code, _) = dtc(&["ring", "poincare", "--ring", path.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn argument_errors_exit_2() {
    for args in [
        vec!["value", "fn", "--d", "1", "--m", "2", "--n", "1", "--r", "2"],
        vec!["value", "fn", "--d", "2", "--m", "2", "--n", "1"],
        vec!["value", "so3", "--r", "1"],
        vec!["value", "spheres", "--dims", "2", "--r", "2", "--p", "1"],
        vec!["nav", "rpn", "--x", "1,0", "--y", "1,0,0"],
        vec!["nav", "hopf", "--point", "1,0,0,0", "--point", "0,0,1,0"],
        vec!["bogus"],
    ] {
        let (code, v) = dtc(&args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(v["error"]["kind"], "argument");
    }
}

#[test]
fn nav_commands() {
    let (code, v) = dtc(&["nav", "rpn", "--x", "1,0,0", "--y", "-1,1,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["support_size"], 2);
    let w: f64 = v["result"]["weights"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
    assert!((w - 1.0).abs() <= 1e-12);

    let (_, v) = dtc(&["nav", "circle", "--angles", "0,3.141592653589793"]);
    assert_eq!(v["result"]["weights"], json!([0.5, 0.5]));
    let (_, v) = dtc(&["nav", "circle", "--angles", "0,1,2,3"]);
    assert!(v["result"]["support_size"].as_u64().unwrap() <= 8);

    let (code, v) = dtc(&["nav", "hopf", "--random", "3", "--seed", "7"]);
    assert_eq!(code, 0);
    assert!(v["result"]["fiber_deviation"].as_f64().unwrap() <= 1e-9);
    let (code, _) = dtc(&["nav", "hopf", "--point", "1,0,0,0", "--point", "0,1,0,0"]);
    assert_eq!(code, 0);

    let (code, v) = dtc(&["nav", "equivariance", "--n", "3", "--pairs", "20", "--seed", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["passed"], true);
    let (code, v) = dtc(&["nav", "continuity", "--n", "2", "--bases", "3", "--samples", "3"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["report"]["samples"], 9);
}

#[test]
fn measure_commands() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    let e = dir.path().join("e.json");
    std::fs::write(&a, r#"[{"point": [0.0, 0.0], "weight": 0.5}, {"point": [1.0, 0.0], "weight": 0.5}]"#).unwrap();
    std::fs::write(&b, r#"[{"point": [0.0, 0.0], "weight": 0.5}, {"point": [1.0, 0.0], "weight": 0.5}]"#).unwrap();
    std::fs::write(&c, r#"[{"point": [0.0, 0.3], "weight": 1.0}]"#).unwrap();
    std::fs::write(&e, r#"[{"point": 0, "weight": "1/3"}, {"point": 2, "weight": "2/3"}]"#).unwrap();
    let s = |p: &std::path::Path| p.to_str().unwrap().to_string();

    let (code, v) = dtc(&["measure", "lp", &s(&a), &s(&b)]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["distance"], 0.0);

    let (_, v) = dtc(&["measure", "lp", &s(&c), &s(&c)]);
    assert_eq!(v["result"]["distance"], 0.0);
    let (_, v) = dtc(&["measure", "lp", &s(&a), &s(&c)]);
    let d = v["result"]["distance"].as_f64().unwrap();
    assert!(d > 0.0 && d <= 0.5 + 1e-6);

    let (code, v) = dtc(&["measure", "product", &s(&e), &s(&e)]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["support_size"], 4);
    assert_eq!(v["result"]["measure"][0]["weight"], "1/9");

    let (code, _) = dtc(&["measure", "lp", &s(&a), &s(&e)]);
    assert_eq!(code, 2);
    std::fs::write(&c, r#"[{"point": 0, "weight": 0.7}]"#).unwrap();
    let (code, v) = dtc(&["measure", "lp", &s(&c), &s(&c)]);
    assert_eq!(code, 2, "{v}");
}

#[test]
fn output_is_deterministic() {
    let args = ["bound", "cup-length", "--d", "3", "--m", "2", "--n", "1", "--r", "2", "--budget", "5"];
    assert_eq!(dtc(&args), dtc(&args));
    let args = ["nav", "equivariance", "--n", "2", "--pairs", "10", "--seed", "3"];
    assert_eq!(dtc(&args), dtc(&args));
}

#[test]
fn library_entry_point_matches_binary() {
    let (code, text) = dtc_cli::run(["dtc", "value", "associate", "--dtc", "1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["result"]["upper"], 3);
    let (code, _) = dtc_cli::run(["dtc", "--help"]);
    assert_eq!(code, 0);
}
