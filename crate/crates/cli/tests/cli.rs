use std::process::{Command, Output};

use serde_json::Value;

fn maasslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maasslab"))
        .args(args)
        .env_remove("MAASSLAB_TRUNC")
        .env_remove("MAASSLAB_PREC")
        .env_remove("MAASSLAB_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn expand_golden_eisenstein() {
    let o = maasslab(&["expand", "--family", "EisP", "--k2", "6", "--p", "5", "--n", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("781/126 + q + 33q^2 + 244q^3 + 1057q^4 + q^5"));
    let o = maasslab(&["expand", "--family", "EisP", "--k2", "10", "--p", "5", "--n", "5"]);
    assert_eq!(stdout(&o).trim(), "488281/66 + q + 513q^2 + 19684q^3 + 262657q^4 + q^5");
}

#[test]
fn expand_json_schema() {
    let v = json(&maasslab(&[
        "--format", "json", "expand", "--family", "G", "--k", "1", "--n", "3",
    ]));
    assert_eq!(v["family"], "G");
    assert_eq!(v["weight"]["num"], -2);
    assert_eq!(v["weight"]["den"], 1);
    assert_eq!(v["truncation"], 3);
    assert!(v["minus_zero"].is_string());
    assert_eq!(v["plus"].as_array().unwrap().len(), 4);
    assert_eq!(v["minus"].as_array().unwrap().len(), 3);
    for c in v["plus"].as_array().unwrap() {
        assert!(c["n"].is_i64() && c["coeff"].is_string());
    }
}

#[test]
fn expand_h_suppresses_vanishing_slots() {
    let v = json(&maasslab(&[
        "--format", "json", "expand", "--family", "H", "--r", "1", "--n", "8",
    ]));
    for part in ["plus", "minus"] {
        for c in v[part].as_array().unwrap() {
            let n = c["n"].as_i64().unwrap();
            // weight -1/2: coefficients live on -n = 0, 1 mod 4
            assert!(matches!((-n).rem_euclid(4), 0 | 1), "{part} slot {n}");
        }
    }
    let minus: Vec<i64> = v["minus"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["n"].as_i64().unwrap())
        .collect();
    assert_eq!(minus, vec![-8, -5, -4, -1]);
}

#[test]
fn expand_csv_and_env_truncation() {
    let o = Command::new(env!("CARGO_BIN_EXE_maasslab"))
        .args(["--format", "csv", "expand", "--family", "Eis", "--k2", "4"])
        .env("MAASSLAB_TRUNC", "3")
        .output()
        .unwrap();
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("part,n,coeff"));
    assert!(s.contains("plus,0,1/240"));
    assert!(s.contains("plus,3,28"));
    assert!(!s.contains("plus,4,"));
}

#[test]
fn verify_examples_pass() {
    for args in [
        &[
            "verify", "hecke", "--family", "G", "--k", "1", "--p", "2", "--range", "100",
        ][..],
        &["verify", "hecke", "--family", "H", "--r", "2", "--p", "3", "--n", "90"],
        &["verify", "zagier", "--n", "5", "--s", "2", "--M", "100"],
        &["verify", "zagier", "--n", "-4"],
        &["verify", "zagier", "--n", "7"],
        &[
            "verify",
            "congruence",
            "--p",
            "5",
            "--k1",
            "6",
            "--k2",
            "10",
            "--a",
            "1",
        ],
        &["verify", "kummer", "--p", "7", "--n", "2", "--m", "8", "--a", "0"],
        &[
            "verify", "kummer", "--p", "5", "--n", "3", "--m", "8", "--a", "1", "--d", "-4",
        ],
        &["verify", "stabilization", "--k", "2", "--p", "3", "--range", "60"],
        &["verify", "xi", "--family", "G", "--k", "2", "--n", "40"],
        &["verify", "intertwine", "--family", "G", "--k", "1", "--p", "2"],
        &["verify", "serre", "--p", "5", "--depth", "2", "--range", "12"],
        &[
            "verify",
            "laplacian",
            "--family",
            "G",
            "--k",
            "1",
            "--n",
            "40",
            "--z",
            "0.3,1.5",
            "--z",
            "-0.2,1.1",
        ],
        &[
            "verify",
            "modularity",
            "--family",
            "G",
            "--k",
            "2",
            "--n",
            "60",
            "--z",
            "0.1,1.2",
            "--matrix",
            "S",
        ],
        &[
            "verify",
            "modularity",
            "--family",
            "Eis",
            "--k2",
            "4",
            "--n",
            "60",
            "--z",
            "0.1,1.2",
            "--matrix",
            "1,1,0,1",
        ],
    ] {
        let o = maasslab(args);
        assert_eq!(
            code(&o),
            0,
            "{args:?}: {}{}",
            stdout(&o),
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(stdout(&o).starts_with("PASS"), "{args:?}");
    }
}

#[test]
fn verification_failure_exits_one() {
    let o = maasslab(&[
        "verify", "hecke", "--family", "G", "--k", "1", "--p", "2", "--lambda", "10/9",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("FAIL"));
    let v = json(&maasslab(&[
        "--format", "json", "verify", "hecke", "--family", "G", "--k", "1", "--p", "2", "--lambda", "10/9",
    ]));
    assert_eq!(v["first_failure"], 0);
    assert_eq!(v["pass"], false);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "nope"][..],
        &["expand"],
        &["expand", "--family", "G"],
        &["expand", "--family", "Q", "--k", "1"],
        &["verify", "kummer", "--p", "7", "--n", "2", "--m", "9", "--a", "0"],
        &["verify", "congruence", "--p", "5", "--k1", "4", "--k2", "8", "--a", "1"],
        &["verify", "modularity", "--family", "H", "--r", "1", "--z", "0.1,1.2"],
        &["verify", "laplacian", "--family", "G", "--k", "1", "--z", "0.1,-1"],
        &[
            "--format", "csv", "verify", "kummer", "--p", "7", "--n", "2", "--m", "8", "--a", "0",
        ],
    ] {
        let o = maasslab(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn resource_errors_exit_three() {
    let o = maasslab(&["verify", "hecke", "--family", "G", "--k", "1", "--p", "2", "--n", "1"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn reingested_dump_gives_identical_report() {
    let dir = tempfile::tempdir().unwrap();
    for (family, flag, p) in [("G", "--k", "2"), ("H", "--r", "3")] {
        let path = dir.path().join(format!("{family}.json"));
        let path_s = path.to_str().unwrap();
        let o = maasslab(&[
            "--format", "json", "--out", path_s, "expand", "--family", family, flag, "1", "--n", "60",
        ]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).is_empty());
        let direct = maasslab(&[
            "--format", "json", "verify", "hecke", "--family", family, flag, "1", "--n", "60", "--p", p,
        ]);
        let again = maasslab(&["--format", "json", "verify", "hecke", "--input", path_s, "--p", p]);
        assert_eq!(code(&direct), 0);
        assert_eq!(stdout(&direct), stdout(&again));
        let direct = maasslab(&[
            "--format", "json", "verify", "xi", "--family", family, flag, "1", "--n", "60",
        ]);
        let again = maasslab(&["--format", "json", "verify", "xi", "--input", path_s]);
        assert_eq!(stdout(&direct), stdout(&again));
    }
    let path = dir.path().join("gp.json");
    let path_s = path.to_str().unwrap();
    maasslab(&[
        "--format", "json", "--out", path_s, "expand", "--family", "Gp", "--k", "1", "--p", "5", "--n", "6",
    ]);
    let a = maasslab(&["--format", "json", "expand", "--input", path_s]);
    let b = maasslab(&[
        "--format", "json", "expand", "--family", "Gp", "--k", "1", "--p", "5", "--n", "6",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn limit_csv_table() {
    let o = maasslab(&[
        "--format", "csv", "verify", "limit", "--family", "G", "--k0", "1", "--p", "5", "--depth", "3", "--range", "4",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let s = stdout(&o);
    assert_eq!(
        s.lines().next(),
        Some("slot,v_k21,v_k101,v_k501,increasing,exceptional")
    );
    assert!(s.contains("plus(1),1,2,3,true,false"));
}

#[test]
fn eval_points() {
    let v = json(&maasslab(&[
        "--format", "json", "eval", "--family", "G", "--k", "1", "--n", "40", "--z", "0,1", "--z", "0.2,0.5",
    ]));
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 2);
    // weight -2 forces G(i) = 0
    assert!(pts[0]["value"][0].as_f64().unwrap().abs() < 1e-12);
    assert!(pts[0].get("warnings").is_none());
    assert!(pts[1]["warnings"][0].as_str().unwrap().contains("outside"));
}

#[test]
fn selftest_quick_json() {
    let o = maasslab(&["selftest", "--quick", "--json"]);
    let v = json(&o);
    let crit = v["criteria"].as_array().unwrap();
    assert_eq!(crit.len(), 12);
    let all = crit.iter().all(|c| c["pass"].as_bool().unwrap());
    assert_eq!(v["pass"].as_bool().unwrap(), all);
    assert_eq!(code(&o), if all { 0 } else { 1 });
    for id in [1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12] {
        assert_eq!(crit[id - 1]["pass"], true, "criterion {id}: {}", crit[id - 1]["detail"]);
    }
}
