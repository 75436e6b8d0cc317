use std::path::{Path, PathBuf};

use corner_seu::cli::run;
use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name).display().to_string()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("corner-seu").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = cli(args);
    let value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, value)
}

#[test]
fn report_on_the_example() {
    let (code, v) = json(&["report", &data("example.json"), "--pi", "1/4,3/4"]);
    assert_eq!(code, 0);
    let regions = v["regions"].as_object().unwrap();
    let nonempty = regions.values().filter(|r| r["region"]["type"] != "empty").count();
    assert_eq!(nonempty, 6);
    assert_eq!(v["regions"]["crra"]["region"]["reason"], "infinite marginal utility at zero");
    assert!(v["certificates"].as_object().unwrap().values().all(|c| c["valid"] == true));
    assert_eq!(v["certificates"].as_object().unwrap().len(), 6);
}

#[test]
fn report_is_byte_identical() {
    let args = ["report", &data("example.json"), "--pi", "0.25,0.75"];
    let (_, first, _) = cli(&args);
    let (_, second, _) = cli(&args);
    assert_eq!(first, second);
}

#[test]
fn report_writes_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let (code, _, _) = cli(&["report", &data("example.json"), "--out-dir", &out]);
    assert_eq!(code, 0);
    for tag in ["cara", "hyperbolic", "linear"] {
        let svg = std::fs::read_to_string(dir.path().join(format!("{tag}.svg"))).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(dir.path().join(format!("{tag}.csv")).exists());
    }
}

#[test]
fn garp_and_sarseu_pass_on_the_example() {
    assert_eq!(json(&["garp", &data("example.json")]), (0, serde_json::json!({"verdict": "pass"})));
    let (code, v) = json(&["sarseu", &data("example.json"), "--lp-oracle"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["lp_oracle"]["found"], false);
}

#[test]
fn sarseu_failure_prints_a_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "a_price,b_price,a_demand,b_demand\n3,1,2,1\n1,1,1,2\n").unwrap();
    let (code, v) = json(&["sarseu", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["certificate"]["sequence"], serde_json::json!([[1, 1, 1, 2], [2, 2, 2, 1]]));
    assert_eq!(v["certificate"]["product"], "3/1");
    let (code, v) = json(&["garp", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["cycle"], serde_json::json!([1, 2]));
}

#[test]
fn conflicting_beliefs_exit_one_with_witness_pair() {
    let (code, v) = json(&["beliefs", &data("conflicting.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["infeasible"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn beliefs_on_the_example() {
    let (code, v) = json(&["beliefs", &data("example.json"), "--strict"]);
    assert_eq!(code, 0);
    assert_eq!(v["pi"], serde_json::json!(["1/2", "1/2"]));
}

#[test]
fn corners_accepts_csv() {
    let (code, v) = json(&["corners", &data("example.csv")]);
    assert_eq!(code, 0);
    let states: Vec<_> = v["observations"].as_array().unwrap().iter().map(|o| o["corner_state"].clone()).collect();
    assert_eq!(states, vec![1, 2, 2]);
}

#[test]
fn solve_and_verify() {
    let (code, v) = json(&["solve", &data("example.json"), "--pi", "1/4,3/4", "--family", "shifted-power", "--fix", "c=1"]);
    assert_eq!(code, 0);
    assert_eq!(v["region"]["lower"], "1+ln(3/4)/ln(101)");
    let (code, _) = json(&["solve", &data("example.json"), "--pi", "1/4,3/4", "--family", "crra"]);
    assert_eq!(code, 1);

    let verify = |params: &str| {
        json(&["verify", &data("example.json"), "--pi", "1/4,3/4", "--family", "cara", "--params", params]).0
    };
    assert_eq!(verify("beta=0.00285"), 0);
    assert_eq!(verify("beta=0.004"), 1);
}

#[test]
fn synth_output_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) =
        cli(&["synth", "--family", "linear", "--pi", "1/4,3/4", "--budgets", &data("budgets.json")]);
    assert_eq!(code, 0);
    let path: PathBuf = dir.path().join("synth.json");
    std::fs::write(&path, out).unwrap();
    let (code, v) = json(&["garp", path.to_str().unwrap()]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("pass")));
}

#[test]
fn plot_data_csv_and_files() {
    let (code, out, _) = cli(&["plot-data", &data("example.json"), "--pi", "1/4,3/4", "--family", "hyperbolic", "--params", "gamma=0.001"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("observation,curve,x1,x2\n"));
    assert_eq!(out.lines().filter(|l| l.contains(",chosen,")).count(), 3);

    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("fig");
    let (code, _, _) = cli(&[
        "plot-data", &data("example.json"), "--pi", "1/4,3/4", "--family", "cara", "--params", "beta=0.002",
        "--out", prefix.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(dir.path().join("fig.svg").exists() && dir.path().join("fig.csv").exists());
}

#[test]
fn input_and_usage_errors_exit_two() {
    assert_eq!(cli(&["garp", "/no/such/file.json"]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["solve", &data("example.json"), "--pi", "1/4,3/4", "--family", "bogus"]).0, 2);
    assert_eq!(cli(&["solve", &data("example.json"), "--pi", "1/2,1/3", "--family", "cara"]).0, 2);
    assert_eq!(cli(&["verify", &data("example.json"), "--pi", "1/4,3/4", "--family", "cara"]).0, 2);
    assert_eq!(cli(&["beliefs", &data("example.json"), "--strict", "--weak"]).0, 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ragged.json");
    std::fs::write(&path, r#"{"states":["a","b"],"observations":[{"prices":["1"],"demand":["1","0"]}]}"#).unwrap();
    let (code, _, err) = cli(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("observation 1"), "{err}");
}

#[test]
fn diversified_data_cannot_recover_beliefs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.csv");
    std::fs::write(&path, "a_price,b_price,a_demand,b_demand\n1,1,1,1\n").unwrap();
    assert_eq!(cli(&["beliefs", path.to_str().unwrap()]).0, 2);
    assert_eq!(cli(&["corners", path.to_str().unwrap()]).0, 1);
    assert_eq!(cli(&["report", path.to_str().unwrap()]).0, 1);
}

#[test]
fn help_and_version_exit_zero() {
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["validate", "garp", "sarseu", "corners", "beliefs", "solve", "verify", "synth", "report", "plot-data"] {
        assert!(out.contains(sub), "{sub} missing from help");
    }
    assert_eq!(cli(&["--version"]).0, 0);
}
