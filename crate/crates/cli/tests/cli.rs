use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gaugekit"))
}

fn model(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("models").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (serde_json::Value, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is a json report");
    (v, out.status.code().unwrap())
}

/// Compares against `tests/golden/<name>.json`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str]) {
    let (mut got, _) = json(args);
    // The version moves with releases; everything else is pinned.
    got["version"] = serde_json::Value::Null;
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
        return;
    }
    let want: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).expect("golden file exists")).unwrap();
    assert_eq!(got, want, "{name} differs from {}", path.display());
}

#[test]
fn golden_verify_higgs() {
    golden("verify_higgs", &["verify", model("higgs.toml").to_str().unwrap()]);
}

#[test]
fn golden_abelianize_so3() {
    golden(
        "abelianize_so3",
        &["abelianize", model("so3.toml").to_str().unwrap(), "--seed", "3"],
    );
}

#[test]
fn golden_fp_det_so3() {
    golden("fp_det_so3", &["fp-det", model("so3.toml").to_str().unwrap(), "--seed", "5"]);
}

#[test]
fn golden_residual_so4_point() {
    golden(
        "residual_so4",
        &[
            "residual",
            model("so4_zero.toml").to_str().unwrap(),
            "--point",
            "q1=2,q2=-3,q3=5,q4=7,q5=1,q6=-4,p1=0,p2=0,p3=0,p4=0,p5=0,p6=0",
        ],
    );
}

#[test]
fn golden_orbit_average() {
    golden("orbit_average", &["demo-gg", "orbit-average"]);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let so4 = model("so4.toml");
    let mut outputs = Vec::new();
    for (i, seed) in ["11", "11", "12"].iter().enumerate() {
        let out = dir.path().join(format!("r{i}.json"));
        let st = run(&[
            "abelianize",
            so4.to_str().unwrap(),
            "--seed",
            seed,
            "--format",
            "json",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(st.status.code(), Some(0));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_ne!(outputs[0], outputs[2]);
}

#[test]
fn random_initial_state_follows_the_seed() {
    let a = run(&["demo-gg", "--steps", "50", "--seed", "4"]);
    let b = run(&["demo-gg", "--steps", "50", "--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn zero_l_model_cannot_be_abelianized() {
    let (v, code) = json(&["abelianize", model("so3_zero.toml").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    assert!(v["checks"][0]["note"].as_str().unwrap().contains("residual"));
}

#[test]
fn invalid_algebra_fails_verify() {
    let (v, code) = json(&["verify", model("broken_jacobi.toml").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["checks"][0]["values"]["jacobi violation"], "(1, 2, 4, 5)");
}

#[test]
fn malformed_model_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "name = \"x\"\nbuilder = = 3\n").unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.toml:2:"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    let so3 = model("so3_zero.toml");
    let so3 = so3.to_str().unwrap();
    for args in [
        vec!["residual", so3, "--point", "q1=1"],
        vec!["residual", so3, "--point", "q1=x,q2=0,q3=0,p1=0,p2=0,p3=0"],
        vec!["residual", so3],
        vec!["fp-det", so3, "--gauge", "q1,q2"],
        vec!["demo-gg", "--dt", "0"],
        vec!["demo-gg", "--q", "1,2"],
        vec!["verify", "/nonexistent/model.toml"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn trajectory_csv_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out = run(&["demo-gg", "--steps", "10", "--trajectory", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 12);
}
