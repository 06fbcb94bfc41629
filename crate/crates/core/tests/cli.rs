use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn eqcw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqcw")).args(args).output().expect("spawn eqcw")
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn path(rel: &str) -> String {
    root().join(rel).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn universal_check_on_su2_u1() {
    let o = eqcw(&["--scenario", &path("scenarios/su2_u1_core.txt"), "--command", "universal-check"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("structure_equation[su2,u1]: PASS (exact)"));
    assert!(out.contains("CHECK structure_equation[su2,u1] PASS exact"));
}

#[test]
fn jacobi_violation_exits_with_verify_core_bit() {
    let o = eqcw(&["--scenario", &path("crates/core/tests/fixtures/jacobi_violation.txt")]);
    assert_eq!(o.status.code(), Some(16 | 1));
    let out = stdout(&o);
    assert!(out.contains("jacobi(1,2,3)"));
    assert!(out.contains("CHECK lie_valid[symmetry] FAIL exact"));
}

#[test]
fn anomaly_report_has_exact_and_numeric_columns() {
    let o = eqcw(&["--scenario", &path("scenarios/monopole_k1.txt"), "--command", "anomaly"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("exact | symbolic | numeric | closed form"));
    assert!(out.contains("CHECK anomaly_ch_moment[k=1,e3,lambda=3/4] PASS"));
}

#[test]
fn series_prints_exact_coefficients() {
    let o = eqcw(&["--scenario", &path("scenarios/series_degree8.txt"), "--command", "series"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("* tau^"));
}

#[test]
fn schema_errors_exit_two_with_line_numbers() {
    let dir = std::env::temp_dir().join(format!("eqcw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "symmetry = su2\nstructure_grp = u1\ntruncation = 6\n").unwrap();
    let o = eqcw(&["--scenario", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("structure_grp"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn missing_file_exits_three() {
    let o = eqcw(&["--scenario", "/nonexistent/eqcw/scenario.txt"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_command_is_a_usage_error() {
    let o = eqcw(&["--scenario", &path("scenarios/su2_u1_core.txt"), "--command", "verify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn truncation_override_is_validated_and_embedded() {
    let s = path("scenarios/su2_u1_core.txt");
    let o = eqcw(&["--scenario", &s, "--command", "universal-check", "--truncation", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("truncation = 4\n"));
    let o = eqcw(&["--scenario", &path("scenarios/monopole_k1.txt"), "--truncation", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_file_matches_stdout() {
    let file = std::env::temp_dir().join(format!("eqcw-report-{}.txt", std::process::id()));
    let o = eqcw(&[
        "--scenario",
        &path("scenarios/so3_u2_closedness.txt"),
        "--report",
        file.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&file).unwrap(), stdout(&o));
    std::fs::remove_file(&file).unwrap();
}
