use std::process::{Command, Output};

fn hnf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnf")).args(args).env_remove("HNF_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bnf_json_has_published_coefficient() {
    let o = hnf(&["bnf", "--degree", "18", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let js: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let eighth = js["coefficients"].as_array().unwrap().iter().find(|c| c[0] == serde_json::json!([8])).unwrap();
    assert_eq!(eighth[1], "-3592377");
}

#[test]
fn solve_reports_consistency() {
    let o = hnf(&["solve", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("consistency: PASS through degree 9"));
}

#[test]
fn poincare_tables() {
    let o = hnf(&["poincare", "--x0", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("b(x) = x + x^4 - 2x^5 + 2x^6 + 6x^7 - 35x^8 + 86x^9"));
    assert!(s.contains("0.562500") && s.contains("0.441406"));
    assert!(s.contains("0.366025") && s.contains("0.531243"));
    assert!(s.contains("-384y^5 - 800y^4 - 298y^3 + 163y^2 + 108y + 15"));
}

#[test]
fn hnf_and_gen_on_the_default_problem() {
    let o = hnf(&["hnf"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("6/(1 + w)^3 * t^3 - 9/(1 + w)^5 * t^4"));
    let o = hnf(&["gen", "--steps", "2"]);
    assert!(stdout(&o).contains("closure: w^2 + w + 6*t = 0"));
    let o = hnf(&["hnf-demo", "--tau0", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("w = 0.000000000000"));
}

#[test]
fn two_degrees_of_freedom_input() {
    let input = concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_dof.json");
    let o = hnf(&["solve", "--input", input]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("consistency: PASS through degree 5"));
}

#[test]
fn files_are_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = hnf(&["gen", "--steps", "2", "--format", "csv", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("gen.csv")).unwrap();
    assert!(csv.starts_with("tau,omega,branch\n"));
    let o = hnf(&["hnf", "--format", "json", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let js: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("hnf.json")).unwrap()).unwrap();
    assert_eq!(js.as_array().unwrap().len(), 4);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(hnf(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hnf(&["bnf", "--input", "/does/not/exist.json"]).status.code(), Some(1));
    assert_eq!(hnf(&["bnf", "--format", "yaml"]).status.code(), Some(1));
    assert_eq!(hnf(&["--help"]).status.code(), Some(0));
    assert_eq!(hnf(&["hnf", "--steps", "4", "--degree", "10"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"d":1,"alpha":["1"],"hamiltonian":[{"p":[1],"q":[1],"coef":"2"}]}"#).unwrap();
    assert_eq!(hnf(&["bnf", "--input", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn verify_respects_seed_override() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hnf"));
        c.args(args).env_remove("HNF_SEED");
        if let Some(s) = env {
            c.env("HNF_SEED", s);
        }
        c.output().unwrap()
    };
    let o = run(Some("7"), &["verify", "--seed", "3", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("seed 7\n"));
    let o = run(None, &["verify", "--seed", "3", "--trials", "2", "--format", "json"]);
    let js: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(js["seed"], 3);
    assert_eq!(run(Some("x"), &["verify", "--trials", "1"]).status.code(), Some(1));
}
