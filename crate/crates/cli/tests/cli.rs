use std::fs;
use std::process::Command;

fn qae() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qae"))
}

#[test]
fn sweep_writes_the_documented_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let status = qae()
        .args([
            "sweep",
            "--algorithm",
            "mlqae",
            "--qubits",
            "2",
            "--shots",
            "16,32",
            "--trials",
            "3",
            "--seed",
            "9",
        ])
        .arg("--out")
        .arg(&path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "algorithm,n,shots,trial,a_hat,rel_error,oracle_calls,converged,seed"
    );
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[1].starts_with("mlqae,2,16,0,"));
    assert!(text.ends_with('\n'));
}

#[test]
fn repeated_sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = qae()
            .args([
                "sweep",
                "--algorithm",
                "iqae",
                "--qubits",
                "3",
                "--shots",
                "64",
                "--trials",
                "1",
                "--seed",
                "5",
            ])
            .arg("--out")
            .arg(&path)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn estimate_prints_the_summary() {
    let out = qae()
        .args([
            "estimate",
            "--algorithm",
            "iqae",
            "--qubits",
            "2",
            "--shots",
            "1024",
            "--seed",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["a_hat", "interval", "oracle_calls", "converged    true"] {
        assert!(text.contains(key), "missing {key} in {text}");
    }
}

#[test]
fn unconverged_rows_exit_with_two_and_still_write() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.csv");
    // A single shot per round cannot reach epsilon = 0.001 within the round cap.
    let status = qae()
        .args([
            "sweep",
            "--algorithm",
            "iqae",
            "--shots",
            "1",
            "--trials",
            "2",
            "--epsilon",
            "0.001",
        ])
        .arg("--out")
        .arg(&path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains(",false,"));
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["sweep", "--algorithm", "qpe"],
        vec!["sweep", "--trials", "0"],
        vec!["sweep", "--shots", "16,x"],
        vec!["estimate", "--epsilon", "0.9", "--algorithm", "iqae"],
        vec!["frobnicate"],
    ] {
        let status = qae().args(&args).output().unwrap().status;
        assert_eq!(status.code(), Some(1), "{args:?}");
    }
    assert_eq!(qae().arg("--help").output().unwrap().status.code(), Some(0));
}

#[test]
fn exact_prints_reference_values() {
    let out = qae().args(["exact", "--qubits", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("true_a               0.181178"));
    assert!(text.contains("exact_integral       0.1426990816987"));
}
