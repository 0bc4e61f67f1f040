//! End-to-end tests of the binary: exit codes, wire outputs, and the
//! tower -> report -> verify pipeline.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU32, Ordering};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pltower"))
}

fn scratch_dir() -> PathBuf {
    static NEXT: AtomicU32 = AtomicU32::new(0);
    let dir = std::env::temp_dir().join(format!(
        "pltower-test-{}-{}",
        std::process::id(),
        NEXT.fetch_add(1, Ordering::Relaxed)
    ));
    fs::create_dir_all(&dir).unwrap();
    dir
}

const F_ENV: &str = "\
# standard dyadic pair
x0 = PL[(0,0),(1/2,1/4),(3/4,1/2),(1,1)]
x1 = PL[(0,0),(1/2,1/2),(3/4,5/8),(7/8,3/4),(1,1)]
";

fn write_env(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("gens.env");
    fs::write(&path, text).unwrap();
    path
}

fn stdout_str(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).to_string()
}

fn stderr_str(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

#[test]
fn eval_prints_exact_value() {
    let dir = scratch_dir();
    let env = write_env(&dir, F_ENV);
    let out = bin()
        .args(["eval", "x0", "1/2", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_str(&out));
    assert_eq!(stdout_str(&out).trim(), "1/4");

    // Inline expressions and words work too.
    let out = bin()
        .args(["eval", "[x0,x1]", "1/16", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_str(&out).trim(), "1/16");

    // Builtin projective constants need no environment.
    let out = bin().args(["eval", "pp_b", "1/2"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_str(&out).trim(), "1");
}

#[test]
fn compose_support_fixset_roundtrip() {
    let dir = scratch_dir();
    let env = write_env(&dir, F_ENV);
    let out = bin()
        .args(["compose", "x0", "x0^-1", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_str(&out).trim(), "PL[(0,0),(1,1)]");

    let out = bin()
        .args(["support", "x1", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert_eq!(stdout_str(&out).trim(), "(1/2,1)");

    let out = bin()
        .args(["fixset", "x1", "--input"])
        .arg(&env)
        .arg("--format")
        .arg("json")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(v, serde_json::json!(["[0,1/2]", "{1}"]));
}

#[test]
fn partition_output() {
    let dir = scratch_dir();
    let env = write_env(&dir, F_ENV);
    let out = bin()
        .args(["partition", "--format", "json", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(v["points"], serde_json::json!(["0", "1"]));
    assert_eq!(v["cells"][0]["kind"], "support");
}

#[test]
fn tower_then_verify_pipeline() {
    let dir = scratch_dir();
    let env = write_env(&dir, F_ENV);
    let report = dir.join("r.json");
    let out = bin()
        .args(["tower", "--input"])
        .arg(&env)
        .args(["--germ-depth", "auto", "--out"])
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_str(&out));
    let text = fs::read_to_string(&report).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["outcome"], "terminated-at-l");
    assert_eq!(json["terminal_level"], 0);
    assert_eq!(json["version"], 1);

    let out = bin()
        .args(["verify", "--input"])
        .arg(&env)
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_str(&out));
    assert!(stdout_str(&out).contains("verification passed"));

    // Tampering is detected, exit code 1, failure located.
    let mut tampered: serde_json::Value = serde_json::from_str(&text).unwrap();
    tampered["steps"][0]["displacement_word"] = serde_json::json!("x0^-1");
    fs::write(&report, serde_json::to_string_pretty(&tampered).unwrap()).unwrap();
    let out = bin()
        .args(["verify", "--input"])
        .arg(&env)
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("verification failed at"));

    // A report for a different environment fails as well.
    fs::write(&report, &text).unwrap();
    let other = write_env(&dir, "y0 = PL[(0,0),(1/2,1/4),(3/4,1/2),(1,1)]\n");
    let out = bin()
        .args(["verify", "--input"])
        .arg(&other)
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn projective_tower_pipeline() {
    let dir = scratch_dir();
    let env = write_env(
        &dir,
        "b = pp_b\nc = pp_c\nd = [pp_b, pp_c]\n",
    );
    let report = dir.join("pp.json");
    let out = bin()
        .args(["tower", "--input"])
        .arg(&env)
        .arg("--out")
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_str(&out));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["ambient"], "real-line");
    assert_eq!(json["germ_depth"], 2);
    let out = bin()
        .args(["verify", "--input"])
        .arg(&env)
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_str(&out));
}

#[test]
fn displace_command_and_exit_codes() {
    let dir = scratch_dir();
    let env = write_env(&dir, F_ENV);
    let out = bin()
        .args(["displace", "(1/4,1/2)", "[0,1]", "--format", "json", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_str(&out));
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(v["word"], "x0^2");
    assert_eq!(v["direction"], "left");

    // Precondition violation: the target must sit inside the cell interior.
    let out = bin()
        .args(["displace", "[0,1]", "[0,1]", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Exhausted search reports exit code 3.
    let out = bin()
        .args(["displace", "(1/4,1/2)", "[0,1]", "--max-steps", "1", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr_str(&out));
}

#[test]
fn bfs_strategy_finds_short_words() {
    let dir = scratch_dir();
    let env = write_env(&dir, F_ENV);
    let out = bin()
        .args([
            "displace", "(1/4,1/2)", "[0,1]", "--strategy", "bfs", "--format", "json",
            "--input",
        ])
        .arg(&env)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_str(&out));
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    // Greedy needs x0^2 here; the shortest word is no longer than that.
    let word = v["word"].as_str().unwrap();
    assert!(word == "x0^2" || word.len() <= "x0^2".len(), "{}", word);

    let out = bin()
        .args(["tower", "--strategy", "bfs", "--input"])
        .arg(&env)
        .arg("--out")
        .arg(dir.join("bfs.json"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_str(&out));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("bfs.json")).unwrap()).unwrap();
    assert_eq!(json["outcome"], "terminated-at-l");
}

#[test]
fn forced_depth_one_on_the_line_is_an_input_error() {
    let dir = scratch_dir();
    // The doubling map and the unit translation have a commutator supported
    // on the whole line; at depth 1 no displacement target is bounded.
    let env = write_env(
        &dir,
        "a = pp_a\nd = PP[ (-inf,inf : 2,0,0,1) ]\n",
    );
    let out = bin()
        .args(["tower", "--germ-depth", "1", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("unbounded"), "{}", stderr_str(&out));

    // Auto depth resolves to 2 and reports abelian-at-start instead.
    let out = bin()
        .args(["tower", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout_str(&out).contains("abelian-at-start"));
}

#[test]
fn exhausted_tower_writes_partial_report_and_exits_3() {
    let dir = scratch_dir();
    let env = write_env(&dir, F_ENV);
    let report = dir.join("partial.json");
    let out = bin()
        .args(["tower", "--max-steps", "1", "--input"])
        .arg(&env)
        .arg("--out")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr_str(&out));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["outcome"], "search-exhausted");
    // Partial reports never verify.
    let out = bin()
        .args(["verify", "--input"])
        .arg(&env)
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn input_errors_use_exit_code_2() {
    let dir = scratch_dir();
    // Missing file.
    let out = bin()
        .args(["partition", "--input"])
        .arg(dir.join("nope.env"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Grammar error carries the line number and names the problem.
    let env = write_env(&dir, "x0 = PL[(0,0),(1/2,1/4),(1/4,1/2),(1,1)]\n");
    let out = bin()
        .args(["partition", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_str(&out);
    assert!(err.contains("line 1"), "{}", err);
    assert!(err.contains("x-coordinates"), "{}", err);

    // Evaluating outside the domain is an input error.
    let env = write_env(&dir, F_ENV);
    let out = bin()
        .args(["eval", "x0", "3/2", "--input"])
        .arg(&env)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_csv_matches_independent_float_evaluation() {
    let dir = scratch_dir();
    let env = write_env(&dir, F_ENV);
    let csv_path = dir.join("x0.csv");
    let out = bin()
        .args(["sample", "x0", "--samples", "101", "--input"])
        .arg(&env)
        .arg("--out")
        .arg(&csv_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_str(&out));
    let csv = fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,fx"));

    // Independent float route: evaluate the published breakpoints of x0
    // by linear interpolation in f64.
    let breaks: [(f64, f64); 4] = [(0.0, 0.0), (0.5, 0.25), (0.75, 0.5), (1.0, 1.0)];
    let float_eval = |x: f64| -> f64 {
        for w in breaks.windows(2) {
            let (x0f, y0f) = w[0];
            let (x1f, y1f) = w[1];
            if x <= x1f {
                return y0f + (y1f - y0f) * (x - x0f) / (x1f - x0f);
            }
        }
        1.0
    };
    let parse_frac = |s: &str| -> f64 {
        match s.split_once('/') {
            Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
            None => s.parse::<f64>().unwrap(),
        }
    };
    let mut rows = 0;
    for line in lines {
        let (xs, ys) = line.split_once(',').unwrap();
        let x = parse_frac(xs);
        let y = parse_frac(ys);
        assert!((y - float_eval(x)).abs() < 1e-9, "row {line}");
        rows += 1;
    }
    assert_eq!(rows, 101);
}

#[test]
fn selftest_passes() {
    let out = bin().args(["selftest", "--seed", "7"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr_str(&out));
    let text = stdout_str(&out);
    assert_eq!(text.matches(": PASS").count(), 8, "{}", text);
}
