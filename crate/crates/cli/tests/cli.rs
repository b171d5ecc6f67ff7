use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dp2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dp2")).args(args).env_remove("DP2_THREADS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&dp2(&["search", "--degree", "0"])), 64);
    assert_eq!(code(&dp2(&["search", "--degree", "9"])), 64);
    assert_eq!(code(&dp2(&["search", "--degree", "3", "--from", "4"])), 64);
    assert_eq!(code(&dp2(&["search", "--degree", "3", "--threads", "0"])), 64);
    assert_eq!(code(&dp2(&["frobnicate"])), 64);
    assert_eq!(code(&dp2(&["--help"])), 0);
}

#[test]
fn search_writes_zero_counts_up_to_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sols.txt");
    let o = dp2(&["search", "--degree", "4", "--threads", "1", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    for level in 1..=4 {
        assert!(text.contains(&format!("# level={level} ")));
    }
    assert!(text.lines().any(|l| l == "# solutions=0"));
    assert!(text.lines().filter(|l| l.starts_with("# level=")).all(|l| l.contains(" kept=0 ")));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("[level 4] scan:"));
}

#[test]
fn memory_budget_abort_exits_2() {
    let o = dp2(&["search", "--degree", "6", "--memory-budget", "1K"]);
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_dp2"))
        .args(["search", "--degree", "6"])
        .env("DP2_MEMORY_BUDGET", "1K")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    // flag wins over environment
    let o = Command::new(env!("CARGO_BIN_EXE_dp2"))
        .args(["search", "--degree", "2", "--memory-budget", "1G"])
        .env("DP2_MEMORY_BUDGET", "1K")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn rhs_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let o = dp2(&["search", "--degree", "3", "--cache-rhs", path_str(&cache), "--out", path_str(&a)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("built+cached"));
    let o = dp2(&["search", "--degree", "3", "--cache-rhs", path_str(&cache), "--out", path_str(&b)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("(cache)"));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(cache.join("rhs-d3-folded-purged.bin").exists());
}

#[test]
fn unfolded_search_gives_same_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    assert_eq!(code(&dp2(&["search", "--degree", "3", "--out", path_str(&a)])), 0);
    assert_eq!(code(&dp2(&["search", "--degree", "3", "--no-fold", "--out", path_str(&b)])), 0);
    let strip = |p: &Path| -> Vec<String> {
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# dp2") && !l.starts_with("# level="))
            .map(String::from)
            .collect()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn dedup_and_verify_on_empty_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.txt");
    fs::write(&input, "").unwrap();
    let o = dp2(&["dedup", "--in", path_str(&input), "--out", path_str(&dir.path().join("c.txt"))]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("orbits=0"));
    let o = dp2(&["verify", "--in", path_str(&input)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verified=0"));
}

#[test]
fn malformed_input_exits_65_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    fs::write(&input, "# header\nd=1; x=[0]; y=[1]; z=[2]; w=[0]\nd=1; x=[0]; y=[7]; z=[2]; w=[0]\n").unwrap();
    for cmd in ["dedup", "verify"] {
        let o = dp2(&[cmd, "--in", path_str(&input)]);
        assert_eq!(code(&o), 65);
        assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    }
    let o = dp2(&["verify", "--in", path_str(&dir.path().join("missing.txt"))]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_rejects_degenerate_and_false_lines() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("sols.txt");
    fs::write(&input, "d=1; x=[0]; y=[0,1]; z=[1]; w=[0,1]\n").unwrap();
    let o = dp2(&["verify", "--in", path_str(&input)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    fs::write(&input, "d=2; x=[0]; y=[1,0,1]; z=[2,0,2]; w=[0]\n").unwrap();
    let o = dp2(&["verify", "--in", path_str(&input)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("constant map"));
}

#[test]
fn geometry_report_is_deterministic() {
    let a = dp2(&["geometry"]);
    assert_eq!(code(&a), 0);
    let text = stdout(&a);
    for key in ["bitangents=28", "exceptional=56", "trace=-2", "points_F3=4", "h1=4,4", "aut_order=48"] {
        assert!(text.lines().any(|l| l == key), "{key}");
    }
    assert_eq!(a.stdout, dp2(&["geometry"]).stdout);
    let j = dp2(&["geometry", "--json"]);
    assert_eq!(code(&j), 0);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["trace"], -2);
    assert_eq!(v["exceptional"], 56);
    assert_eq!(v["h1"], serde_json::json!([4, 4]));
    assert_eq!(v["automorphisms"]["surface_order"], 48);
    assert_eq!(v["bitangents"].as_array().unwrap().len(), 28);
}

#[test]
fn selftest_passes() {
    let o = dp2(&["selftest"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
