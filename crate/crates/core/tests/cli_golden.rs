//! Golden-file tests for every subcommand of the `ufourier` binary.
//!
//! Run with `UPDATE_GOLDEN=1` to rewrite the files under `tests/golden/`.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ufourier")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Run the binary and return (exit code, stdout).
fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(bin())
        .args(args)
        .env_remove("UFOURIER_FREQ_CAP")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

/// Run with `--out <tmp>/<golden name>`, check exit 0, compare with the golden
/// file, and check a second run is byte-identical.
fn check_golden(name: &str, args: &[&str]) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join(name);
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out.to_string_lossy().into_owned();
    full.extend(["--out", &out_str]);
    let (code, _) = run(&full);
    assert_eq!(code, 0, "{args:?}");
    let produced = std::fs::read_to_string(&out).unwrap();

    let (code, _) = run(&full);
    assert_eq!(code, 0);
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        produced,
        "{name}: repeated run differs"
    );

    let golden = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden.parent().unwrap()).unwrap();
        std::fs::write(&golden, &produced).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&golden).unwrap_or_else(|_| {
        panic!(
            "missing golden file {}; run with UPDATE_GOLDEN=1",
            golden.display()
        )
    });
    assert_eq!(produced, expected, "{name} differs from its golden file");
}

/// Build the small single-point series used by the series-consuming commands.
fn series(dir: &Path) -> String {
    let path = dir.join("series.json").to_string_lossy().into_owned();
    let (code, _) = run(&["build", "--spec", &data("single.json"), "--out", &path]);
    assert_eq!(code, 0);
    path
}

#[test]
fn fejer_table() {
    check_golden("fejer_5_3.json", &["fejer", "--N", "5", "--n", "3"]);
}

#[test]
fn build_single() {
    check_golden(
        "build_single.json",
        &["build", "--spec", &data("single.json")],
    );
}

#[test]
fn build_countable() {
    check_golden(
        "build_countable.json",
        &["build", "--spec", &data("countable.json")],
    );
}

#[test]
fn eval_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let s = series(dir.path());
    check_golden(
        "eval.csv",
        &[
            "eval",
            "--series",
            &s,
            "--t",
            "1.0,-0.5",
            "--n",
            "0,30",
            "--checkpoints",
        ],
    );
}

#[test]
fn usearch_single() {
    let dir = tempfile::tempdir().unwrap();
    let s = series(dir.path());
    check_golden(
        "usearch.json",
        &[
            "usearch",
            "--series",
            &s,
            "--targets",
            &data("finite_targets.json"),
            "--delta",
            "0.1",
        ],
    );
}

#[test]
fn divergence_scan() {
    let dir = tempfile::tempdir().unwrap();
    let s = series(dir.path());
    check_golden(
        "scan.csv",
        &[
            "divergence",
            "scan",
            "--series",
            &s,
            "--grid",
            "8",
            "--n-min",
            "61",
        ],
    );
}

#[test]
fn divergence_profile() {
    check_golden("profile.csv", &["divergence", "profile", "--depth", "20"]);
}

#[test]
fn divergence_premeasure() {
    check_golden(
        "premeasure.json",
        &["divergence", "premeasure", "--a", "0.5", "--depth", "5"],
    );
}

#[test]
fn divergence_rogosinski() {
    check_golden(
        "rogosinski.json",
        &[
            "divergence",
            "rogosinski",
            "--poly",
            &data("geometric_poly.json"),
            "--ns",
            "10,20,50,100",
            "--symmetric",
        ],
    );
}

#[test]
fn cantor_sweep() {
    check_golden(
        "sweep20.csv",
        &[
            "cantor", "sweep20", "--a", "2", "--b", "5", "--n-min", "15", "--n-max", "200",
        ],
    );
}

#[test]
fn cantor_construct() {
    check_golden(
        "construct21.json",
        &[
            "cantor",
            "construct21",
            "--digits",
            "0220",
            "--a",
            "1",
            "--b",
            "4",
            "--n",
            "100",
        ],
    );
}

#[test]
fn cantor_stage() {
    check_golden("stage3.csv", &["cantor", "stage", "--depth", "3"]);
}

#[test]
fn verify_series() {
    let dir = tempfile::tempdir().unwrap();
    let s = series(dir.path());
    check_golden("verify.json", &["verify", "--series", &s]);
}

#[test]
fn full_sweep_has_no_misses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let out = out.to_string_lossy();
    let args = [
        "cantor", "sweep20", "--a", "2", "--b", "5", "--n-min", "15", "--n-max", "10000", "--out",
        &out,
    ];
    let (code, _) = run(&args);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&*out).unwrap();
    assert_eq!(text.lines().count(), 1 + 9986);
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.ends_with(",true") && !l.contains(",,")));
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["eval", "--series", "missing.json", "--t", "0", "--n", "1"]).0,
        1
    );
    assert_eq!(run(&["nonsense"]).0, 1);
    assert_eq!(run(&["fejer", "--N", "2", "--n", "5"]).0, 1);
    // Unreachable target: exit 2, and the output file still exists.
    let dir = tempfile::tempdir().unwrap();
    let s = series(dir.path());
    let out = dir.path().join("hit.json").to_string_lossy().into_owned();
    let far = dir.path().join("far.json");
    std::fs::write(&far, r#"{"entries":[{"l":0,"value":[50.0,0.0]}]}"#).unwrap();
    let code = run(&[
        "usearch",
        "--series",
        &s,
        "--targets",
        &far.to_string_lossy(),
        "--out",
        &out,
    ])
    .0;
    assert_eq!(code, 2);
    assert!(Path::new(&out).exists());
}

#[test]
fn frequency_cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json").to_string_lossy().into_owned();
    let status = Command::new(bin())
        .args(["build", "--spec", &data("single.json"), "--out", &out])
        .env("UFOURIER_FREQ_CAP", "100")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    let status = Command::new(bin())
        .args(["build", "--spec", &data("single.json"), "--out", &out])
        .env("UFOURIER_FREQ_CAP", "not-a-number")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}
