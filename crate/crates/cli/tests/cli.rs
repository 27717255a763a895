use std::process::{Command, Output};

use serde_json::Value;

fn sbk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbk"))
        .args(args)
        .env_remove("SBK_SEED")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn eval_iota_on_torsion_element() {
    let out = sbk(&[
        "eval",
        "--hom",
        "iota",
        "--n",
        "4",
        "--word",
        "rho[4] rho[3] rho[2] rho[1]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "(1,1,1,1)");
}

#[test]
fn eval_other_homomorphisms() {
    let q = sbk(&["eval", "--hom", "q2", "--n", "3", "--word", "tau[1] tau[2]"]);
    assert_eq!(json(&q)["value"], "k");
    let hat = sbk(&[
        "eval",
        "--hom",
        "iota-hat",
        "--n",
        "5",
        "--word",
        "rho[3] rho[5]",
    ]);
    assert_eq!(json(&hat)["value"], "(1,0,1)");
    let f = sbk(&[
        "eval",
        "--hom",
        "forget",
        "--n",
        "4",
        "--to",
        "3",
        "--word",
        "A[1,4] rho[2]",
    ]);
    assert_eq!(json(&f)["value"], "rho[2]");
}

#[test]
fn normal_form_of_trivial_words() {
    let empty = json(&sbk(&["nf", "--m", "2", "--word", ""]));
    assert_eq!(empty["trivial"], true);
    assert_eq!(empty["normal_form"], serde_json::json!(["", ""]));
    let rel = json(&sbk(&[
        "nf",
        "--m",
        "1",
        "--word",
        "rho[3] A[1,3] rho[3]^-1 A[2,3]",
    ]));
    assert!(rel["normal_form"].is_array());
}

#[test]
fn abelianize_and_info() {
    let out = json(&sbk(&["abelianize", "--group", "gamma-rp2:m=2,p=2"]));
    assert_eq!(out["invariants"], "Z^4");
    let pn = json(&sbk(&["abelianize", "--group", "pn-rp2:n=3"]));
    assert_eq!(pn["invariants"], "Z/2 + Z/2 + Z/2");
    let ln = json(&sbk(&["abelianize", "--group", "ln:n=4"]));
    assert_eq!(ln["invariants"], "Z^8");
    let info = json(&sbk(&["info", "--group", "ln:n=4"]));
    assert_eq!(info["tower_ranks"], serde_json::json!([5, 3]));
}

#[test]
fn verify_counts_reports_cases() {
    let out = sbk(&["verify", "--suite", "counts", "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["pass"], true);
    let descriptions: Vec<&str> = report["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["description"].as_str().unwrap())
        .collect();
    assert!(descriptions.contains(&"n=4: exponent 8, count 256"));
}

#[test]
fn verify_vcd_passes() {
    let out = sbk(&["verify", "--suite", "vcd", "--max-n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["cases"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}

#[test]
fn injected_fault_is_detected() {
    let out = sbk(&[
        "verify",
        "--suite",
        "combing",
        "--max-n",
        "3",
        "--inject-fault",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn bad_input_exits_two_with_json_error() {
    for args in [
        vec!["nf", "--m", "2", "--word", "A[1,"],
        vec!["nf", "--m", "1", "--word", "A[1,9]"],
        vec!["verify", "--suite", "all", "--max-n", "2"],
        vec!["abelianize", "--group", "nonsense"],
        vec!["verify", "--suite", "bogus"],
    ] {
        let out = sbk(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(json(&out)["error"].is_string(), "{args:?}");
    }
}

#[test]
fn seed_is_read_from_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_sbk"))
            .args(["verify", "--suite", "combing", "--max-n", "3"])
            .env("SBK_SEED", seed)
            .output()
            .unwrap()
    };
    let a = run("7");
    assert_eq!(a.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&a.stderr).contains("seed 7"));
    assert_eq!(a.stdout, run("7").stdout);
    assert_eq!(run("x").status.code(), Some(2));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(sbk(&["--help"]).status.code(), Some(0));
    assert_eq!(sbk(&["--version"]).status.code(), Some(0));
}
