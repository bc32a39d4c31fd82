use std::path::Path;
use std::process::{Command, Output};

use sumsetlab::search::{exact_c, CacheKey, ExactCache};
use sumsetlab::{GroupSpec, SearchOptions};
use sumsetlab_cli::cache::FileCache;

fn sumsetlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumsetlab"))
        .args(args)
        .env_remove("SUMSETLAB_CACHE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compute_z_with_exact_search() {
    let o = sumsetlab(&["compute", "Z", "--group", "Z2^3", "--h", "4", "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.contains("predicted 4 (source: 2-group theorem, exception h=n-4)"),
        "{text}"
    );
    assert!(text.contains("exact 4"), "{text}");
}

#[test]
fn compute_json_is_stable() {
    let args = [
        "compute",
        "C",
        "--group",
        "Z9",
        "--h",
        "4",
        "--exact",
        "--format",
        "json",
        "--deterministic",
        "--threads",
        "3",
    ];
    let a = stdout(&sumsetlab(&args));
    let b = stdout(&sumsetlab(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["predicted"], "5");
    assert_eq!(v["exact"]["value"], 5);
    assert_eq!(v["exact"]["witness"], serde_json::json!([0, 1, 2, 3, 4]));
}

#[test]
fn construct_zero_sum_in_z7() {
    let o = sumsetlab(&["construct", "zero-sum", "--group", "Z7", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("{1, 2, 4}\n"));
    let o = sumsetlab(&[
        "construct",
        "zero-sum",
        "--group",
        "Z7",
        "--m",
        "3",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["set"], serde_json::json!([1, 2, 4]));
    assert_eq!(v["verified"], true);
}

#[test]
fn construct_not_representable_exits_2() {
    let o = sumsetlab(&["construct", "avoid-sum", "--group", "Z3^2", "--m", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no sum-avoiding set"));
    // no exact prediction for C_3 of a cyclic group of order 9
    let o = sumsetlab(&["construct", "incomplete", "--group", "Z9", "--h", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_small_range_passes() {
    let o = sumsetlab(&["verify", "--max-order", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all claims pass"));
}

#[test]
fn verify_writes_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let jsonl = dir.path().join("report.jsonl");
    let o = sumsetlab(&[
        "verify",
        "--max-order",
        "6",
        "--format",
        "json",
        "--out",
        jsonl.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&jsonl).unwrap();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["status"], "pass");
    }
    let o = sumsetlab(&["verify", "--max-order", "6", "--format", "csv"]);
    assert!(stdout(&o).starts_with("group,order,claim,entries,pass,fail,aborted\n"));
}

#[test]
fn verify_reports_node_limit_aborts() {
    let o = sumsetlab(&["verify", "--max-order", "8", "--node-limit", "20"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn table_marks_bounds() {
    let o = sumsetlab(&[
        "table",
        "C",
        "--group",
        "Z9",
        "--h-range",
        "2..4",
        "--exact",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "group,h,predicted,source,exact,match\n\
         Z9,2,5,second_fold,5,true\n\
         Z9,3,4..9,bounds,6,true\n\
         Z9,4,5,large_fold,5,true\n"
    );
}

#[test]
fn groups_of_order_8() {
    let o = sumsetlab(&["groups", "--order", "8"]);
    assert_eq!(stdout(&o), "Z8\nZ2xZ4\nZ2^3\n");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(
        sumsetlab(&["compute", "C", "--group", "Z4xZ2", "--h", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        sumsetlab(&["compute", "C", "--group", "Z7", "--h", "9"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        sumsetlab(&["table", "C", "--group", "Z7", "--h-range", "5..2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(sumsetlab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(sumsetlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn unbounded_large_search_is_refused() {
    let o = sumsetlab(&["compute", "Z", "--group", "Z3^4", "--h", "3", "--exact"]);
    assert_eq!(o.status.code(), Some(4));
    let o = sumsetlab(&[
        "compute",
        "Z",
        "--group",
        "Z3^4",
        "--h",
        "3",
        "--exact",
        "--node-limit",
        "500",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("best found before node limit"));
}

fn key(claim: &str, param: usize) -> CacheKey {
    CacheKey {
        factors: vec![7],
        claim: claim.into(),
        param,
    }
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = FileCache::new(dir.path()).unwrap();
    let g = GroupSpec::cyclic(7).unwrap();
    let result = exact_c(&g, 3, &SearchOptions::default()).unwrap();
    cache.store(&key("C", 3), None, &result);
    assert_eq!(cache.load(&key("C", 3), None), Some(result));
    assert_eq!(cache.load(&key("c", 3), None), None);
}

#[test]
fn corrupt_cache_entry_is_recomputed_and_overwritten() {
    let dir = tempfile::tempdir().unwrap();
    let cache = FileCache::new(dir.path()).unwrap();
    let path = cache.path_for(&key("C", 3));
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(cache.load(&key("C", 3), None), None);

    let o = run_with_cache(
        dir.path(),
        &["compute", "C", "--group", "Z7", "--h", "3", "--exact"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("corrupt cache entry"));
    assert_eq!(cache.load(&key("C", 3), None).unwrap().value, 4);
}

#[test]
fn schema_change_forces_recompute() {
    let dir = tempfile::tempdir().unwrap();
    let cache = FileCache::new(dir.path()).unwrap();
    let g = GroupSpec::cyclic(7).unwrap();
    cache.store(
        &key("C", 3),
        None,
        &exact_c(&g, 3, &SearchOptions::default()).unwrap(),
    );
    let path = cache.path_for(&key("C", 3));
    let mut entry: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    entry["schema_version"] = serde_json::json!(0);
    std::fs::write(&path, entry.to_string()).unwrap();
    assert_eq!(cache.load(&key("C", 3), None), None);
}

#[test]
fn partial_results_respect_node_limit() {
    let dir = tempfile::tempdir().unwrap();
    let cache = FileCache::new(dir.path()).unwrap();
    let g = GroupSpec::cyclic(7).unwrap();
    let opts = SearchOptions {
        node_limit: Some(3),
        ..SearchOptions::default()
    };
    let partial = exact_c(&g, 3, &opts).unwrap();
    assert!(!partial.is_complete());
    cache.store(&key("C", 3), Some(3), &partial);
    assert!(cache.load(&key("C", 3), Some(3)).is_some());
    assert!(cache.load(&key("C", 3), Some(1000)).is_none());
    assert!(cache.load(&key("C", 3), None).is_none());
}

#[test]
fn cached_values_are_reused() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "compute", "Z", "--group", "Z6", "--h", "4", "--exact", "--format", "json",
    ];
    let first = run_with_cache(dir.path(), &args);
    // plant a different witness; a cache hit must return it verbatim
    let cache = FileCache::new(dir.path()).unwrap();
    let k = CacheKey {
        factors: vec![6],
        claim: "Z".into(),
        param: 4,
    };
    let mut stored = cache.load(&k, None).unwrap();
    stored.nodes_explored = 424242;
    cache.store(&k, None, &stored);
    let second = run_with_cache(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert!(stdout(&second).contains("424242"));
}

#[test]
fn env_var_overrides_cache_dir() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sumsetlab"))
        .args([
            "compute",
            "C",
            "--group",
            "Z5",
            "--h",
            "2",
            "--exact",
            "--cache-dir",
        ])
        .arg(flag_dir.path())
        .env("SUMSETLAB_CACHE", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 1);
    assert_eq!(std::fs::read_dir(flag_dir.path()).unwrap().count(), 0);
}

fn run_with_cache(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumsetlab"))
        .args(args)
        .arg("--cache-dir")
        .arg(dir)
        .env_remove("SUMSETLAB_CACHE")
        .output()
        .unwrap()
}
