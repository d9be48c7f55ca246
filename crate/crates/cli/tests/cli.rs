use std::process::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_symrank"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

/// Value of `key=` in a summary line.
fn field<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

#[test]
fn construct_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (args, rank) in [
        (vec!["--q", "4", "--n", "4", "--genus", "1"], "8"),
        (vec!["--q", "2", "--n", "3", "--genus", "0", "--allow-degree2"], "6"),
        (vec!["--q", "16", "--n", "5", "--genus", "0"], "9"),
        (vec!["--q", "5", "--n", "2", "--coeffs", "0,0,0,0,1"], "4"),
    ] {
        let path = dir.path().join(format!("f{rank}.json"));
        let path_s = path.to_str().unwrap();
        let mut full = vec!["construct"];
        full.extend(&args);
        full.extend(["--out", path_s]);
        let (code, out) = run(&full);
        assert_eq!(code, 0, "{out}");
        assert_eq!(field(&out, "rank"), Some(rank));
        assert_eq!(field(&out, "status"), Some("verified"));
        let (code, out) = run(&["verify", path_s]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(field(&out, "rank"), Some(rank));
        let (code, out) = run(&["verify", path_s, "--mode", "sampled", "--samples", "50", "--seed", "7"]);
        assert_eq!(code, 0);
        assert_eq!(field(&out, "seed"), Some("7"));
    }
}

#[test]
fn elliptic_construction_is_exhaustively_checked() {
    let (code, out) = run(&["construct", "--q", "4", "--n", "4", "--genus", "1"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "verification"), Some("exhaustive"));
    assert_eq!(field(&out, "pairs"), Some("65536"));
}

#[test]
fn sampled_reports_print_the_default_seed() {
    let (code, out) = run(&["construct", "--q", "16", "--n", "3", "--genus", "0"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "verification"), Some("sampled"));
    assert_eq!(field(&out, "seed"), Some("0"));
    assert_eq!(field(&out, "rank"), Some("5"));
}

#[test]
fn infeasible_construction_exits_two() {
    let (code, out) = run(&["construct", "--q", "2", "--n", "9"]);
    assert_eq!(code, 2);
    assert!(out.contains("hypotheses not satisfied"));
}

#[test]
fn malformed_input_exits_three() {
    assert_eq!(run(&["construct", "--q", "6", "--n", "2"]).0, 3);
    assert_eq!(run(&["construct", "--q", "2", "--n", "30"]).0, 3);
    assert_eq!(run(&["bound", "--q", "2", "--n", "4", "--depth", "9"]).0, 3);
    assert_eq!(run(&["construct", "--q"]).0, 3);
    assert_eq!(run(&["verify", "/nonexistent/formula.json"]).0, 3);
    assert_eq!(run(&["construct", "--q", "2", "--n", "2", "--coeffs", "0,0,0,0,0"]).0, 3);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"p\": 2}").unwrap();
    assert_eq!(run(&["verify", bad.to_str().unwrap()]).0, 3);
}

#[test]
fn tampered_formula_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let path_s = path.to_str().unwrap();
    assert_eq!(run(&["construct", "--q", "2", "--n", "2", "--out", path_s]).0, 0);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let c = &mut v["terms"][0]["c"][0];
    *c = serde_json::json!(1 - c.as_u64().unwrap());
    std::fs::write(&path, v.to_string()).unwrap();
    let (code, out) = run(&["verify", path_s]);
    assert_eq!(code, 1, "{out}");
    assert_eq!(field(&out, "status"), Some("failed"));
}

#[test]
fn bound_shows_the_composition_chain() {
    let (code, out) = run(&["bound", "--q", "2", "--n", "4"]);
    assert_eq!(code, 0);
    let summary = out.lines().last().unwrap();
    let value: u64 = field(summary, "value").unwrap().parse().unwrap();
    assert!(value <= 9);
    assert!(out.lines().next().unwrap().contains("method=composition"));
    assert_eq!(out.lines().filter(|l| l.starts_with("  q=")).count(), 2);
}

#[test]
fn brute_rank_of_a_quadratic_extension() {
    let (code, out) = run(&["brute-rank", "--q", "2", "--n", "2", "--max", "4"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "rank"), Some("3"));
    assert_eq!(field(&out, "exact"), Some("true"));
}

#[test]
fn subcommands_are_idempotent() {
    for args in [
        vec!["compare-table"],
        vec!["asym", "--q", "16", "--t", "1,2"],
        vec!["curves", "--q", "5", "--distinct"],
        vec!["bound", "--q", "3", "--n", "5", "--format", "json"],
        vec!["construct", "--q", "8", "--n", "3"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a, b, "{args:?}");
        assert_eq!(a.0, 0, "{args:?}");
    }
}

#[test]
fn table_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let (_, stdout) = run(&["compare-table"]);
    let (code, _) = run(&["compare-table", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
}

#[test]
fn curves_listing_is_csv() {
    let (code, out) = run(&["curves", "--q", "4", "--min-n1", "9"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("p,q,a1,a2,a3,a4,a6,genus,N1,N2"));
    assert!(lines.all(|l| l.split(',').nth(8) == Some("9")));
    let (_, out) = run(&["curves", "--q", "7", "--genus", "0"]);
    assert_eq!(out.lines().nth(1), Some("7,7,,,,,,0,8,21"));
}
