//! Golden-file tests: every case runs the binary on files from `fixtures/`
//! and compares standard output and the exit code with `golden/<case>.out`.
//! Set `UPDATE_GOLDEN=1` to rewrite the golden files after checking a
//! change by hand.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conpath"))
        .current_dir(root().join("fixtures"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Standard output followed by an `exit=<code>` line.
fn transcript(out: &Output) -> String {
    format!("{}exit={}\n", String::from_utf8_lossy(&out.stdout), out.status.code().unwrap_or(-1))
}

const CASES: &[(&str, &[&str])] = &[
    ("validate_path", &["validate", "path.gr", "path.pd"]),
    ("validate_grid", &["validate", "grid.gr", "grid.pd"]),
    ("validate_broken", &["validate", "path.gr", "broken.pd"]),
    ("derive_path", &["derive", "path.gr", "path.pd"]),
    ("derive_grid", &["derive", "grid.gr", "grid.pd"]),
    ("scp_path", &["scp", "path.gr", "path.pd"]),
    ("scp_grid_random", &["scp", "grid.gr", "grid.pd", "--chooser", "random", "--seed", "7"]),
    ("convert_path", &["convert", "path.gr", "path.pd"]),
    ("convert_path_homebase", &["convert", "path.gr", "path.pd", "--homebase", "c"]),
    ("convert_single_bag", &["convert", "path.gr", "single.pd"]),
    ("convert_grid_full", &["convert", "grid.gr", "grid.pd", "--verify", "full"]),
    ("convert_broken", &["convert", "path.gr", "broken.pd"]),
    ("convert_two_parts", &["convert", "two_parts.gr", "two_parts.pd"]),
    ("convert_malformed", &["convert", "malformed.gr", "path.pd"]),
    ("cph_grid", &["cph", "grid.gr", "grid.pd", "--homebase", "r1c2"]),
    ("strategy_node_grid", &["to-strategy", "grid.gr", "grid.pd", "--mode", "node"]),
    ("strategy_edge_disconnected", &["to-strategy", "grid.gr", "grid.pd"]),
    ("strategy_edge_single", &["to-strategy", "path.gr", "single.pd", "--homebase", "b"]),
    ("simulate_path", &["simulate", "path.gr", "path.strategy"]),
    ("simulate_leaky", &["simulate", "path.gr", "leaky.strategy"]),
    ("simulate_illformed", &["simulate", "path.gr", "illformed.strategy"]),
    ("oracle_pw_grid", &["oracle", "pw", "grid.gr"]),
    ("oracle_cpw_grid", &["oracle", "cpw", "grid.gr"]),
    ("oracle_budget", &["oracle", "pw", "grid.gr", "--budget", "2"]),
    ("oracle_two_parts", &["oracle", "cpw", "two_parts.gr"]),
    ("batch_files", &["batch", "path.gr", "grid.gr", "--random", "2", "--seed", "1", "--homebase-all"]),
    ("scp_seed_without_random", &["scp", "path.gr", "path.pd", "--seed", "1"]),
];

#[test]
fn outputs_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for (name, args) in CASES {
        let got = transcript(&run(args));
        let path = root().join("golden").join(format!("{name}.out"));
        if update {
            fs::write(&path, &got).unwrap();
            continue;
        }
        let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        if got != want {
            mismatches.push(format!("{name}:\n--- want\n{want}--- got\n{got}"));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn identical_inputs_give_identical_outputs() {
    for args in [
        &["convert", "grid.gr", "grid.pd", "--trace", "--dump-derived"][..],
        &["scp", "grid.gr", "grid.pd", "--chooser", "random", "--seed", "11", "--trace"],
        &["batch", "--corpus", "5", "--random", "1", "--seed", "3", "--jobs", "4"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn batch_output_does_not_depend_on_the_thread_count() {
    let one = run(&["batch", "--corpus", "5", "--random", "2", "--seed", "9", "--jobs", "1"]);
    let many = run(&["batch", "--corpus", "5", "--random", "2", "--seed", "9", "--jobs", "8"]);
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.status.code(), Some(0));
}

#[test]
fn artifacts_go_to_the_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.pd");
    let res = run(&["convert", "grid.gr", "grid.pd", "-o", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.lines().all(|l| l.contains('=')), "{stdout}");

    // The written decomposition is connected and feeds the edge strategy.
    let check = run(&["validate", "grid.gr", out.to_str().unwrap()]);
    assert!(String::from_utf8(check.stdout).unwrap().contains("connected=true"));
    let strategy = dir.path().join("s.txt");
    let res = run(&["to-strategy", "grid.gr", out.to_str().unwrap(), "-o", strategy.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let verdict = String::from_utf8(run(&["simulate", "grid.gr", strategy.to_str().unwrap()]).stdout).unwrap();
    for key in ["cleared_all=true", "monotone=true", "connected_throughout=true"] {
        assert!(verdict.contains(key), "{verdict}");
    }
}

#[test]
fn homebase_is_first_bag_member() {
    for h in ["r0c0", "r1c1", "r2c3", "r0c2"] {
        let res = run(&["cph", "grid.gr", "grid.pd", "--homebase", h]);
        assert_eq!(res.status.code(), Some(0));
        let text = String::from_utf8(res.stdout).unwrap();
        let first = text.lines().find(|l| l.starts_with("b 1 ")).unwrap();
        assert!(first.split_whitespace().skip(2).any(|l| l == h), "{h}: {first}");
    }
}
