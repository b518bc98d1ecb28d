//! End-to-end tests of the `ccy` binary: flag surface, JSON shapes, exit
//! codes, determinism, and the solution-set cache.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ccy() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ccy"))
}

fn run(args: &[&str]) -> Output {
    ccy().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        !out.stdout.is_empty(),
        "no stdout; stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ccy-test-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_kin(dir: &Path, n: usize, seed: u64) -> PathBuf {
    let path = dir.join(format!("kin-{n}-{seed}.json"));
    let out = run(&[
        "kin",
        "random",
        "--n",
        &n.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn check_reports_compatibility_and_exit_codes() {
    let yes = run(&["check", "--graph", "(1 2)(3 4)", "--cycle", "1 3 2 4"]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(json_of(&yes)["compatible"], Value::Bool(true));

    let no = run(&["check", "--graph", "(1 2)(3 4)", "--cycle", "1 2 3 4"]);
    assert_eq!(no.status.code(), Some(2));
    assert_eq!(json_of(&no)["compatible"], Value::Bool(false));
}

#[test]
fn count_values() {
    let bubbles = run(&["count", "bubbles", "--n", "6"]);
    let v = json_of(&bubbles);
    assert_eq!(v["quantity"], "bubbles");
    assert_eq!(v["n_or_s"], 6);
    assert_eq!(v["value"], "16");

    assert_eq!(json_of(&run(&["count", "hultman", "--n", "4"]))["value"], "20");
    assert_eq!(json_of(&run(&["count", "super-catalan", "--n", "7"]))["value"], "197");
    assert_eq!(json_of(&run(&["count", "orthogonal", "--n", "6"]))["value"], "15");
}

#[test]
fn gen_verify_and_limit() {
    let out = run(&["gen", "--graph", "(1 2 3)(4 5)", "--verify", "--limit", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["graph"], "(1 2 3)(4 5)");
    assert_eq!(v["verified"], Value::Bool(true));
    assert!(v["count"].as_u64().unwrap() >= 2); // ceil((5-2)!/4)
    assert_eq!(v["cycles"].as_array().unwrap().len(), 2);
}

#[test]
fn enumerate_two_bubbles() {
    let out = run(&["enumerate", "--graph", "(1 2)(3 4)"]);
    let v = json_of(&out);
    assert_eq!(v["count"], 1);
    assert_eq!(v["cycles"][0], "1 3 2 4");
}

#[test]
fn amp_feyn_matches_amp_chy() {
    let dir = tmpdir("amp");
    let kin = write_kin(&dir, 5, 3);
    let feyn = json_of(&run(&[
        "amp",
        "feyn",
        "--alpha",
        "1 2 3 4 5",
        "--beta",
        "1 3 2 4 5",
        "--kin",
        kin.to_str().unwrap(),
    ]));
    let chy = json_of(&run(&[
        "amp",
        "chy",
        "--g1",
        "(1 2 3 4 5)",
        "--g2",
        "(1 3 2 4 5)",
        "--kin",
        kin.to_str().unwrap(),
    ]));
    let exact = feyn["decimal"].as_f64().unwrap().abs();
    let numeric = chy["abs"].as_f64().unwrap();
    assert!(
        (numeric - exact).abs() <= 1e-8 * exact.max(1.0),
        "feyn {exact} vs chy {numeric}"
    );
    assert_eq!(chy["solutions"], 2);
}

#[test]
fn monodromy_small_residuals() {
    let dir = tmpdir("mono");
    let kin = write_kin(&dir, 5, 7);
    let out = json_of(&run(&[
        "monodromy",
        "--kin",
        kin.to_str().unwrap(),
        "--set",
        "1,2",
        "--a",
        "1",
        "--b",
        "3",
    ]));
    assert!(out["max"].as_f64().unwrap() < 1e-9);
    assert_eq!(out["residuals"].as_array().unwrap().len(), 2);
}

#[test]
fn expand_round_trip_shape() {
    let dir = tmpdir("expand");
    let kin = write_kin(&dir, 5, 11);
    let out = json_of(&run(&[
        "expand",
        "--graph",
        "(1 2)(3 4 5)",
        "--kin",
        kin.to_str().unwrap(),
    ]));
    assert_eq!(out["basis"].as_array().unwrap().len(), 2);
    assert!(out["residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(out["coefficients"].as_array().unwrap().len(), 2);
}

#[test]
fn rank_all_and_kk() {
    let dir = tmpdir("rank");
    let kin = write_kin(&dir, 5, 13);
    let all = json_of(&run(&["rank", "--n", "5", "--items", "all", "--kin", kin.to_str().unwrap()]));
    assert_eq!(all["rank"], 2);
    assert_eq!(all["items"].as_array().unwrap().len(), 12);

    let kk = json_of(&run(&["rank", "--n", "5", "--items", "kk", "--kin", kin.to_str().unwrap()]));
    assert_eq!(kk["rank"], 2);

    let listing = dir.join("items.txt");
    std::fs::write(&listing, "(1 2)(3 4 5)\n1 3 2 4 5\n").unwrap();
    let filed = json_of(&run(&[
        "rank",
        "--n",
        "5",
        "--items",
        listing.to_str().unwrap(),
        "--kin",
        kin.to_str().unwrap(),
    ]));
    assert_eq!(filed["items"].as_array().unwrap().len(), 2);
}

#[test]
fn rank_with_basis_search() {
    let dir = tmpdir("basis");
    let kin = write_kin(&dir, 4, 17);
    let out = run(&[
        "rank",
        "--n",
        "4",
        "--items",
        "all",
        "--kin",
        kin.to_str().unwrap(),
        "--basis-for",
        "(1 2)(3 4)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["basis_search"]["Found"]["rank"], 1);
}

#[test]
fn deterministic_bytes_and_cache_reuse() {
    let dir = tmpdir("cache");
    let kin = write_kin(&dir, 5, 19);
    let cache = dir.join("cache");
    let args = [
        "amp",
        "chy",
        "--g1",
        "(1 2 3 4 5)",
        "--g2",
        "(1 2 3 4 5)",
        "--kin",
        kin.to_str().unwrap(),
        "--cache-dir",
        cache.to_str().unwrap(),
    ];
    let first = run(&args);
    assert!(first.status.success());
    let cached: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(cached.len(), 1, "one solution set cached");
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "identical bytes under a fixed config");
}

#[test]
fn formats_render() {
    let csv = run(&["count", "bubbles", "--n", "4", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text, "n_or_s,quantity,value\n4,bubbles,1\n");

    let plain = run(&["count", "bubbles", "--n", "4", "--format", "plain"]);
    let text = String::from_utf8(plain.stdout).unwrap();
    assert!(text.contains("\"value\": \"1\""));
}

#[test]
fn kin_random_prints_matrix_without_out() {
    let out = run(&["kin", "random", "--n", "4", "--seed", "5"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["n"], 4);
    let s = v["s"].as_array().unwrap();
    assert_eq!(s.len(), 4);
    assert_eq!(s[0][0], "0");
    let row0 = s[0].as_array().unwrap();
    assert_eq!(row0.len(), 4);
    assert!(row0.iter().all(|x| x.is_string()));
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["check", "--graph", "(1 2)(3", "--cycle", "1 2 3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["count", "hultman", "--n", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["amp", "feyn", "--alpha", "1 2 3 4", "--beta", "1 2 3 4", "--kin", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(1));
}
