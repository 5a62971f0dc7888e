//! End-to-end tests of the `ginv` binary: happy paths, exit codes, and
//! byte-determinism of emitted artifacts.

use std::path::Path;
use std::process::{Command, Output};

use ginv::io;
use ginv::problems;
use ginv::tensor::{DenseTensor, TensorShape};

fn ginv(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ginv"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn write_fixture(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("d.tns");
    io::write_tensor_file(&path, &problems::paper_fixture().tensor).unwrap();
    path
}

#[test]
fn compute_writes_inverse_and_reports_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = ginv(
        &["compute", "--in", input.to_str().unwrap(), "--kind", "mp"],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("max residual"), "{stdout}");
    assert!(dir.path().join("mp.tns").exists());

    // the emitted inverse passes verification against the operator
    let verify = ginv(
        &[
            "verify",
            "--in",
            input.to_str().unwrap(),
            "--rhs",
            dir.path().join("mp.tns").to_str().unwrap(),
            "--kind",
            "mp",
        ],
        dir.path(),
    );
    assert!(verify.status.success(), "{verify:?}");
}

#[test]
fn verify_accepts_named_systems_and_rejects_wrong_candidates() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    for kind in ["cmp", "dmp", "mpd", "mpcep", "cepmp"] {
        let out = ginv(
            &["compute", "--in", input.to_str().unwrap(), "--kind", kind],
            dir.path(),
        );
        assert!(out.status.success(), "compute {kind}: {out:?}");
        let z = dir.path().join(format!("{kind}.tns"));
        let ok = ginv(
            &[
                "verify",
                "--in",
                input.to_str().unwrap(),
                "--rhs",
                z.to_str().unwrap(),
                "--system",
                kind,
            ],
            dir.path(),
        );
        assert!(ok.status.success(), "verify {kind}: {ok:?}");
    }
    // a candidate from the wrong system fails with exit code 1
    let bad = ginv(
        &[
            "verify",
            "--in",
            input.to_str().unwrap(),
            "--rhs",
            dir.path().join("cmp.tns").to_str().unwrap(),
            "--system",
            "penrose-all",
        ],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(1), "{bad:?}");
}

#[test]
fn solve_general_and_constrained_paths() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let general = ginv(
        &[
            "solve",
            "--in",
            input.to_str().unwrap(),
            "--rhs",
            "from-range:seed=3",
            "--mode",
            "cmp_power",
            "--sample-q",
            "2",
        ],
        dir.path(),
    );
    assert!(general.status.success(), "{general:?}");
    assert!(dir.path().join("z0.tns").exists());
    assert!(dir.path().join("projector.tns").exists());

    let constrained = ginv(
        &[
            "solve",
            "--in",
            input.to_str().unwrap(),
            "--rhs",
            "from-range:seed=3",
            "--mode",
            "cmp_constrained",
        ],
        dir.path(),
    );
    assert!(constrained.status.success(), "{constrained:?}");
    assert!(dir.path().join("z.tns").exists());
}

#[test]
fn bench_emits_schema_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = ginv(
        &[
            "bench",
            "--problem",
            "fixture",
            "--repeats",
            "2",
            "--seed",
            "1",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(io::BENCH_CSV_HEADER));
    assert_eq!(lines.count(), 8); // one row per inverse kind
}

#[test]
fn exit_code_2_on_unparseable_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.tns");
    std::fs::write(&path, "not json").unwrap();
    let out = ginv(
        &["compute", "--in", path.to_str().unwrap(), "--kind", "mp"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn exit_code_3_on_non_square_operator_for_square_only_kind() {
    let dir = tempfile::tempdir().unwrap();
    let shape = TensorShape::new(vec![2], vec![3]).unwrap();
    let rect = DenseTensor::from_real(shape, &[1.0, 0.0, 2.0, 0.0, 1.0, 1.0]).unwrap();
    let path = dir.path().join("rect.tns");
    io::write_tensor_file(&path, &rect).unwrap();
    let out = ginv(
        &[
            "compute",
            "--in",
            path.to_str().unwrap(),
            "--kind",
            "drazin",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn exit_code_5_on_rhs_outside_range() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    // a generic dense rhs is not in R(D^3) for the index-3 operator
    let shape = TensorShape::new(vec![2, 3], vec![]).unwrap();
    let b = problems::random_tensor(shape, 9, problems::RandomKind::Dense).unwrap();
    let b_path = dir.path().join("b.tns");
    io::write_tensor_file(&b_path, &b).unwrap();
    let out = ginv(
        &[
            "solve",
            "--in",
            input.to_str().unwrap(),
            "--rhs",
            b_path.to_str().unwrap(),
            "--mode",
            "cmp_constrained",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(5), "{out:?}");
}

#[test]
fn artifacts_are_byte_deterministic() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let input = write_fixture(dir.path());
        let out = ginv(
            &[
                "compute",
                "--in",
                input.to_str().unwrap(),
                "--kind",
                "cepmp",
            ],
            dir.path(),
        );
        assert!(out.status.success(), "{out:?}");
        (
            std::fs::read(dir.path().join("cepmp.tns")).unwrap(),
            out.stdout,
        )
    };
    let (file_a, stdout_a) = run();
    let (file_b, stdout_b) = run();
    assert_eq!(file_a, file_b);
    assert_eq!(stdout_a, stdout_b);
}
