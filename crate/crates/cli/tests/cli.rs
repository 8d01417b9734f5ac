use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_asf-lab"))
}

fn run(cache: &Path, args: &[&str]) -> Output {
    bin().arg("--cache-dir").arg(cache).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn cache_files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for shard in fs::read_dir(dir).unwrap() {
        for f in fs::read_dir(shard.unwrap().path()).unwrap() {
            out.push(f.unwrap().path());
        }
    }
    out.sort();
    out
}

#[test]
fn gl2_count_interpolates_to_q_plus_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["count", "--d", "1", "--n", "1", "--q", "2,3,5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["polynomial"], "q + 1");
    let counts: Vec<u64> = v["records"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![3, 4, 6]);
}

#[test]
fn count_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--format", "csv", "count", "--d", "1", "--n", "2", "--q", "2,3,5,7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n1,q,value\n2,2,7\n2,3,13\n2,5,31\n2,7,57\n# F(q) = q^2 + q + 1\n");
}

#[test]
fn cached_results_are_reused_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["count", "--d", "2", "--n", "1,1", "--q", "3"];
    let first = run(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    let files = cache_files(dir.path());
    assert_eq!(files.len(), 1);
    let stored = fs::read(&files[0]).unwrap();
    let second = run(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::read(&files[0]).unwrap(), stored);
    assert!(!String::from_utf8_lossy(&second.stderr).contains("counting"));
    let uncached = bin().args(["--no-cache"]).args(args).output().unwrap();
    assert_eq!(uncached.stdout, first.stdout);
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = bin()
            .args(["--no-cache", "--out"])
            .arg(out)
            .args(["orbital", "--d", "1", "--n", "2", "--q", "3"])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["value"], "14/9");
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["bogus"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["count", "--d", "2", "--n", "1", "--q", "3"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["count", "--d", "1", "--n", "1", "--q", "4"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["orbital", "--d", "1", "--n", "1", "--q", "3", "--levi", "1|1"]).status.code(), Some(1));
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
    assert_eq!(bin().arg("--version").output().unwrap().status.code(), Some(0));
}

#[test]
fn unrealisable_datum_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["count", "--d", "2", "--n", "1,1", "--q", "2"]).status.code(), Some(1));
}

#[test]
fn transition_verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(dir.path(), &["transition", "verify", "--d", "1", "--n", "1", "--q", "2,3"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(dir.path(), &["transition", "verify", "--d", "2", "--n", "1,0", "--q", "3"]);
    assert_eq!(bad.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v[0]["count_formula"]["holds"], true);
    assert_eq!(v[0]["orbital_formula"]["holds"], false);
    assert_eq!(v[0]["orbital_formula_incidence"]["holds"], true);
    assert_eq!(v[0]["round_trip_incidence"], true);
}

#[test]
fn gl2_series_fit_is_certified() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["series", "--d", "1", "--max", "5", "--q", "2", "--holdout", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["fit"]["verdict"], "certified");
}

#[test]
fn gm_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let pos = fixture("gl2_positive.json");
    let pos = pos.to_str().unwrap();
    let o = run(dir.path(), &["gm", "validate", "--set", pos]);
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap()["verdict"], "positive");
    let o = run(dir.path(), &["gm", "volume", "--set", pos]);
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap()["lattice_volume"], "3");
    let o = run(dir.path(), &["--format", "csv", "gm", "count", "--set", pos]);
    assert_eq!(stdout(&o), "count\n4\n");

    let neg = fixture("gl2_not_positive.json");
    let neg = neg.to_str().unwrap();
    let o = run(dir.path(), &["gm", "validate", "--set", neg]);
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap()["verdict"], "orthogonal_not_positive");
    assert_eq!(run(dir.path(), &["gm", "count", "--set", neg]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["gm", "validate", "--set", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let o = bin().args(["--no-cache", "selftest"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|s| s["pass"] == true));
}
