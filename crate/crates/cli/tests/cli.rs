use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fibra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibra"))
        .args(args)
        .env_remove("FIBRA_SEED")
        .output()
        .expect("run fibra")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn error_json(o: &Output) -> serde_json::Value {
    let line = stderr(o).lines().last().unwrap_or_default().to_string();
    serde_json::from_str(&line).unwrap_or_else(|_| panic!("stderr is not JSON: {line}"))
}

fn witness_bundle(dir: &Path) -> PathBuf {
    let out = dir.join("witness.json");
    let o = fibra(&[
        "synthesize",
        "--xi",
        "1",
        "--eta",
        "t^2",
        "--A",
        "-t^4+1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    out
}

#[test]
fn synthesize_reports_index_and_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let o = fibra(&["synthesize", "--xi", "1", "--eta", "t^2", "--A", "-t^4+1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("B = t^5 + t^4 - 2"));
    assert!(text.ends_with("m=0, criterion=pass\n"));
    let bundle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(witness_bundle(dir.path())).unwrap()).unwrap();
    assert_eq!(bundle["m"], 0);
    assert_eq!(bundle["P"]["y"]["num"][5], "1");
    assert_eq!(bundle["upstairs"]["k"], 2);
}

#[test]
fn synthesize_criterion_failure_exits_nonzero() {
    let o = fibra(&["synthesize", "--xi", "(1)/(t)", "--eta", "(1)/(t^2)", "--A", "t + t^4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("P(0)=O"));
    assert_eq!(error_json(&o)["error"], "check-failed");
}

#[test]
fn synthesize_rejects_non_polynomial_b() {
    let o = fibra(&["synthesize", "--xi", "(1)/(t)", "--eta", "1", "--A", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "not-polynomial");
}

#[test]
fn bisection_row() {
    let o = fibra(&["severi", "bisection", "-m", "1"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "class=12,-4,-4,-4,-4,-4,-4,-4,-4,-2 square=12 fiberdeg=2 genus=6"
    );
    let o = fibra(&["severi", "bisection", "-m", "-1"]);
    assert_eq!(error_json(&o)["error"], "out-of-range");
}

#[test]
fn severi_tables_are_golden() {
    let o = fibra(&["severi", "log-dim", "--p", "2", "--l", "3"]);
    assert_eq!(stdout(&o), include_str!("golden/log_dim_p2_l3.tsv"));
    let o = fibra(&["severi", "family", "--from-surface", "0", "7", "1"]);
    assert_eq!(stdout(&o), include_str!("golden/family_surface_0_7_1.tsv"));
}

#[test]
fn severi_family_json() {
    let o = fibra(&["severi", "family", "--from-enriques", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["genus"], 5);
    assert_eq!(v[0]["classification"], "special-nonregular");
    let text = stdout(&o);
    let order: Vec<usize> = ["\"label\"", "\"genus\"", "\"expected_dim\"", "\"notes\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));
    let o = fibra(&["severi", "family", "--from-surface", "1", "0", "1"]);
    assert_eq!(error_json(&o)["error"], "out-of-range");
}

#[test]
fn severi_witness() {
    let o = fibra(&["severi", "witness", "--genus", "6"]);
    assert_eq!(stdout(&o), "class=3,-2,0,0,0,0,0,0,0,0 p_a=0 fiberdeg=7 family-genus=6\n");
    assert!(!fibra(&["severi", "witness", "--genus", "5"]).status.success());
}

#[test]
fn surface_check_reports_generality() {
    let o = fibra(&["surface", "check", data("general_surface.json").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("general=true total_ord_delta=12 singular_places=12"));
    let o = fibra(&["surface", "check", data("witness_surface.json").to_str().unwrap()]);
    assert!(stdout(&o).contains("general=false"));
    assert!(stdout(&o).contains("additive(ord=2)"));
}

#[test]
fn malformed_and_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"k\": 1}").unwrap();
    let o = fibra(&["surface", "check", bad.to_str().unwrap()]);
    assert_eq!(error_json(&o)["error"], "malformed");
    let o = fibra(&["surface", "check", "/nonexistent/file.json"]);
    assert_eq!(error_json(&o)["error"], "io");
    let degenerate = dir.path().join("deg.json");
    std::fs::write(&degenerate, r#"{"k":1,"A":["-3"],"B":["2"]}"#).unwrap();
    let o = fibra(&["surface", "check", degenerate.to_str().unwrap()]);
    assert_eq!(error_json(&o)["error"], "degenerate-model");
}

#[test]
fn unknown_verb_is_a_usage_error() {
    let o = fibra(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "usage");
}

#[test]
fn help_documents_the_grammar() {
    let o = fibra(&["synthesize", "--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("mono    := var"));
}

#[test]
fn base_change_bundle_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bc.json");
    let o = fibra(&["base-change", data("witness_surface.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("B = s^10 + s^8 - 2"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v.get("P").is_none());
    // the generic fiber over 0 of y^2 = x^3 + t is cuspidal
    let cusp = dir.path().join("cusp.json");
    std::fs::write(&cusp, r#"{"k":1,"A":["0"],"B":["0","1"]}"#).unwrap();
    let o = fibra(&["base-change", cusp.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(error_json(&o)["error"], "singular-ramification-fiber");
}

#[test]
fn section_arithmetic_on_the_witness() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = witness_bundle(dir.path());
    let b = bundle.to_str().unwrap();
    let o = fibra(&["section", "intersect", "--bundle", b, "P", "-P"]);
    assert_eq!(stdout(&o), "6\n");
    let o = fibra(&["section", "intersect", "--bundle", b, "2P"]);
    assert_eq!(stdout(&o), "6\n");
    let o = fibra(&["section", "intersect", "--bundle", b, "P"]);
    assert_eq!(stdout(&o), "0\n");
    let o = fibra(&["section", "neg", "--bundle", b, "O"]);
    assert_eq!(stdout(&o), "{\"zero\":true}\n");

    let two_p = fibra(&["section", "mul", "--bundle", b, "P", "2"]);
    let sum = fibra(&["section", "add", "--bundle", b, "P", "P"]);
    assert_eq!(stdout(&two_p), stdout(&sum));
    let file = dir.path().join("2p.json");
    std::fs::write(&file, stdout(&two_p)).unwrap();
    let o = fibra(&["section", "add", "--bundle", b, file.to_str().unwrap(), "-2P"]);
    assert_eq!(stdout(&o), "{\"zero\":true}\n");

    let o = fibra(&["section", "intersect", "--bundle", b, "P", "P"]);
    assert_eq!(error_json(&o)["error"], "self-intersection");
}

#[test]
fn off_curve_section_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = witness_bundle(dir.path());
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"x":{"num":["2"],"den":["1"]},"y":{"num":["0"],"den":["1"]}}"#).unwrap();
    let o = fibra(&["section", "neg", "--bundle", bundle.to_str().unwrap(), file.to_str().unwrap()]);
    assert_eq!(error_json(&o)["error"], "not-on-curve");
}

#[test]
fn trace_runs_emit_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = witness_bundle(dir.path());
    let b = bundle.to_str().unwrap();
    let o = fibra(&["trace", "partenzares", "--bundle", b, "--k", "-2", "--samples", "2,3,1/2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|r| r["pass"] == true && r["k"] == -2));
    assert_eq!(lines[4]["s"], "1/2");

    let o = fibra(&["trace", "partenzaenr", "--bundle", b, "--k", "1", "--samples", "1,2"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("skipped s=1: singular fiber"));
    assert_eq!(stdout(&o).lines().count(), 4);

    // a bundle without P cannot drive the trace
    let plain = dir.path().join("plain.json");
    fibra(&["base-change", data("witness_surface.json").to_str().unwrap(), "--out", plain.to_str().unwrap()]);
    let o = fibra(&["trace", "partenzares", "--bundle", plain.to_str().unwrap(), "--k", "0"]);
    assert_eq!(error_json(&o)["error"], "malformed");
}

#[test]
fn verify_paper_small_grid() {
    let o = fibra(&["verify", "paper", "--grid", "1", "2", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().contains("bisection-sweep"));
    assert!(text.lines().skip(1).all(|l| l.ends_with("pass")));
    let o = fibra(&["verify", "paper", "--grid", "1", "0", "3"]);
    assert_eq!(error_json(&o)["error"], "out-of-range");
}

#[test]
fn selftest_honours_the_seed() {
    let run = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_fibra"));
        cmd.arg("selftest").env_remove("FIBRA_SEED");
        if let Some(s) = seed {
            cmd.env("FIBRA_SEED", s);
        }
        cmd.output().unwrap()
    };
    let default = run(None);
    assert!(default.status.success());
    assert!(stdout(&default).starts_with("seed=20240917\n"));
    let seeded = run(Some("7"));
    assert!(stdout(&seeded).starts_with("seed=7\n"));
    assert_eq!(stdout(&seeded), stdout(&run(Some("7"))));
    let bad = run(Some("seven"));
    assert_eq!(error_json(&bad)["error"], "usage");
}
