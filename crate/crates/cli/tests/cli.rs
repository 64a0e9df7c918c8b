use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumprod")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_set(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_three_passes_with_many_reports() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_set(dir.path(), "three.txt", "1\n2\n3\n");
    let out = run(&["verify", "--input", s(&f), "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reports = v.as_array().unwrap();
    assert!(reports.len() >= 14, "{}", reports.len());
    assert!(reports.iter().all(|r| r["pass"] != serde_json::Value::Bool(false)));
}

#[test]
fn verify_subset_of_ids() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_set(dir.path(), "a.txt", "1\n2\n4\n8\n");
    let out = run(&["verify", "--input", s(&f), "--ids", "SOLY-PROD,cs-subs", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["CS-SUBS", "SOLY-PROD"]);
}

#[test]
fn unknown_id_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_set(dir.path(), "a.txt", "1\n2\n");
    assert_eq!(code(&run(&["verify", "--input", s(&f), "--ids", "NOPE"])), 1);
    assert_eq!(code(&run(&["explore", "--ineq", "NOPE", "--n", "3", "--mode", "exhaustive", "--budget", "5"])), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["stats"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_set(dir.path(), "bad.txt", "1\n2/0\n");
    let out = run(&["stats", "--input", s(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let empty = write_set(dir.path(), "empty.txt", "# nothing here\n\n");
    assert_eq!(code(&run(&["stats", "--input", s(&empty)])), 2);
    assert_eq!(code(&run(&["stats", "--input", s(&dir.path().join("missing.txt"))])), 2);
}

#[test]
fn stats_reports_sizes_and_warns_on_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_set(dir.path(), "a.txt", "1\n2\n3\n2\n");
    let out = run(&["stats", "--input", s(&f), "--json"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains(":4: duplicate"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["size"], 3);
    assert_eq!(v["sumset"], 5);
    assert_eq!(v["productset"], 6);
    assert_eq!(v["quotientset"], 7);
    assert_eq!(v["additive_energy"], 19);
    assert_eq!(v["multiplicative_energy"], 15);
}

#[test]
fn stats_with_zero_skips_multiplicative_parts() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_set(dir.path(), "z.txt", "0\n1\n2\n");
    let out = run(&["stats", "--input", s(&f), "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["quotientset"].is_null());
    assert_eq!(v["sumset"], 5);
}

#[test]
fn oracles_agree_on_small_sets() {
    let dir = tempfile::tempdir().unwrap();
    let text: String = [1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 4, 6, 9, 12, 18]
        .iter()
        .map(|x| format!("{x}\n"))
        .collect();
    let f = write_set(dir.path(), "small.txt", &text);
    assert_eq!(code(&run(&["oracle", "--input", s(&f), "--op", "energy-brute"])), 0);
    let g = write_set(dir.path(), "g.txt", "1\n2\n3\n1/2\n-4\n6\n");
    for op in ["energy-brute", "triples-brute", "sigma-max-sample"] {
        assert_eq!(code(&run(&["oracle", "--input", s(&g), "--op", op])), 0, "{op}");
    }
}

#[test]
fn oracle_guard_is_a_resource_error() {
    let dir = tempfile::tempdir().unwrap();
    let text: String = (1..=41).map(|x| format!("{x}\n")).collect();
    let f = write_set(dir.path(), "big.txt", &text);
    assert_eq!(code(&run(&["oracle", "--input", s(&f), "--op", "energy-brute"])), 5);
}

#[test]
fn explore_appends_to_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.jsonl");
    let ground = write_set(dir.path(), "ground.txt", "1\n2\n3\n4\n5\n6\n");
    let args = [
        "explore",
        "--ineq",
        "SOLY-PROD",
        "--n",
        "3",
        "--mode",
        "exhaustive",
        "--budget",
        "100",
        "--ground",
        s(&ground),
        "--corpus",
        s(&corpus),
        "--json",
    ];
    let out = run(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(record["inequality_id"], "SOLY-PROD");
    assert_eq!(record["set"].as_array().unwrap().len(), 3);
    assert_eq!(code(&run(&args)), 0);
    let loaded = sumprod_core::explore::corpus_load(&corpus).unwrap();
    assert_eq!(loaded.len(), 2);
    assert!(loaded.iter().all(|l| !l.drift));
    assert!(loaded[0].record.same_result(&loaded[1].record));
}

#[test]
fn explore_reads_corpus_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("env.jsonl");
    let out = Command::new(env!("CARGO_BIN_EXE_sumprod"))
        .args(["explore", "--ineq", "COR-SOL", "--n", "2", "--mode", "hillclimb", "--budget", "10", "--seed", "3"])
        .env("SUMPROD_CORPUS", &corpus)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&corpus).unwrap().lines().count(), 1);
}

#[test]
fn hillclimb_requires_seed() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let out = run(&[
        "explore",
        "--ineq",
        "COR-SOL",
        "--n",
        "3",
        "--mode",
        "hillclimb",
        "--budget",
        "5",
        "--corpus",
        s(&corpus),
    ]);
    assert_eq!(code(&out), 1);
    assert!(!corpus.exists());
}
