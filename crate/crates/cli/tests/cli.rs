//! End-to-end tests of the `eoplab` binary: exit codes, file handling,
//! determinism.

use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

use eoplab_cli::files::StateFile;

fn eoplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eoplab"))
        .args(args)
        .env_remove("EOPLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_fields(out: &Output) -> HashMap<String, String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn write_state(path: &Path, rho: &eoplab_core::DensityOperator) {
    let file = StateFile::from_density(rho);
    std::fs::write(path, serde_json::to_string_pretty(&file).unwrap()).unwrap();
}

fn singlet_density() -> eoplab_core::DensityOperator {
    eoplab_core::bell_state(0).unwrap().density()
}

#[test]
fn eop_on_singlet_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("singlet.json");
    write_state(&path, &singlet_density());
    let out = eoplab(&[
        "eop",
        path.to_str().unwrap(),
        "--restarts",
        "4",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let fields = stdout_fields(&out);
    let best: f64 = fields["best_value"].parse().unwrap();
    assert!((best - 1.0).abs() <= 1e-3, "best {best}");
    assert_eq!(fields["seed"], "7");
}

#[test]
fn eop_on_product_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("product.json");
    // |0><0| tensor maximally mixed qubit
    let m = eoplab_core::ComplexMatrix::diag(&[0.5, 0.5, 0.0, 0.0]);
    let rho = eoplab_core::DensityOperator::new(vec![2, 2], m).unwrap();
    write_state(&path, &rho);
    let out = eoplab(&["eop", path.to_str().unwrap(), "--restarts", "8", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let best: f64 = stdout_fields(&out)["best_value"].parse().unwrap();
    assert!(best <= 1e-3, "best {best}");
}

#[test]
fn eop_rejects_malformed_dims() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"dims": [2, 3], "matrix": [[[1.0, 0.0]]]}"#,
    )
    .unwrap();
    let out = eoplab(&["eop", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("matrix must be"), "stderr: {err}");
}

#[test]
fn eop_rejects_invalid_invariants_with_named_reason() {
    let dir = tempfile::tempdir().unwrap();

    let path = dir.path().join("nonpsd.json");
    std::fs::write(
        &path,
        r#"{"dims": [2], "matrix": [[[1.2, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.2, 0.0]]]}"#,
    )
    .unwrap();
    let out = eoplab(&["eop", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("positive semidefinite"));

    let path = dir.path().join("trace.json");
    std::fs::write(
        &path,
        r#"{"dims": [2], "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}"#,
    )
    .unwrap();
    let out = eoplab(&["eop", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace"));

    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "not json at all").unwrap();
    let out = eoplab(&["eop", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eop_requires_exactly_one_input() {
    let out = eoplab(&["eop"]);
    assert_eq!(out.status.code(), Some(2));
    let out = eoplab(&["eop", "some.json", "--werner", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_is_bitwise_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = eoplab(&[
            "werner-sweep",
            "0.2",
            "0.3",
            "3",
            "--restarts",
            "6",
            "--seed",
            "11",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.starts_with("f,eop_upper,entropy,delta,n_restarts,n_distinct_minima,seed\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn sweep_rejects_bad_ranges_and_paths() {
    let out = eoplab(&["werner-sweep", "1", "1", "5", "--out", "/tmp/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = eoplab(&["werner-sweep", "0.5", "0.2", "5", "--out", "/tmp/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = eoplab(&["werner-sweep", "0", "0.01", "1", "--out", "/tmp/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = eoplab(&[
        "werner-sweep",
        "0.2",
        "0.3",
        "2",
        "--restarts",
        "2",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_echoes_single_component_and_rejects_bad_weights() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("single.json");
    std::fs::write(
        &path,
        r#"{"components": [{"weight": 1.0, "state": "werner:0.3", "u": 0.77, "provenance": "external"}]}"#,
    )
    .unwrap();
    let out = eoplab(&["bound", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let fields = stdout_fields(&out);
    let bound: f64 = fields["bound"].parse().unwrap();
    assert!((bound - 0.77).abs() < 1e-11);
    let chi: f64 = fields["chi"].parse().unwrap();
    assert!(chi.abs() < 1e-11);
    let frac: f64 = fields["werner_fraction"].parse().unwrap();
    assert!((frac - 0.3).abs() < 1e-11);

    let path = dir.path().join("badweights.json");
    std::fs::write(
        &path,
        r#"{"components": [{"weight": 0.6, "state": "werner:0.3", "u": 1.0, "provenance": "exact"},
                           {"weight": 0.6, "state": "werner:0.1", "u": 1.0, "provenance": "exact"}]}"#,
    )
    .unwrap();
    let out = eoplab(&["bound", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weights sum"));
}

#[test]
fn bound_on_product_state_decomposition_is_chi() {
    // Two orthogonal classical product states with u = 0: the certificate
    // collapses to the shared-randomness rate chi = 1.
    let dir = tempfile::tempdir().unwrap();
    let up = eoplab_core::DensityOperator::new(
        vec![2, 2],
        eoplab_core::ComplexMatrix::diag(&[1.0, 0.0, 0.0, 0.0]),
    )
    .unwrap();
    let down = eoplab_core::DensityOperator::new(
        vec![2, 2],
        eoplab_core::ComplexMatrix::diag(&[0.0, 0.0, 0.0, 1.0]),
    )
    .unwrap();
    let up = serde_json::to_value(StateFile::from_density(&up)).unwrap();
    let down = serde_json::to_value(StateFile::from_density(&down)).unwrap();
    let doc = serde_json::json!({ "components": [
        { "weight": 0.5, "state": up, "u": 0.0, "provenance": "exact" },
        { "weight": 0.5, "state": down, "u": 0.0, "provenance": "exact" },
    ]});
    let path = dir.path().join("products.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = eoplab(&["bound", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let fields = stdout_fields(&out);
    let bound: f64 = fields["bound"].parse().unwrap();
    let chi: f64 = fields["chi"].parse().unwrap();
    assert!((bound - chi).abs() < 1e-12);
    assert!((chi - 1.0).abs() < 1e-11);
}

#[test]
fn delta_probe_flags() {
    let dir = tempfile::tempdir().unwrap();

    // Linear delta data: inconclusive.
    let path = dir.path().join("linear.csv");
    std::fs::write(
        &path,
        "f,eop_upper,entropy,delta,n_restarts,n_distinct_minima,seed\n\
         0,1,0,1,4,1,0\n\
         0.005,0.99,0,0.99,4,1,0\n\
         0.01,0.98,0,0.98,4,1,0\n",
    )
    .unwrap();
    let out = eoplab(&["delta-probe", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(stdout_fields(&out)["flag"], "INCONCLUSIVE");

    // Convex samples: inconclusive.
    let path = dir.path().join("convex.csv");
    std::fs::write(
        &path,
        "f,eop_upper,entropy,delta,n_restarts,n_distinct_minima,seed\n\
         0,1,0,1,4,1,0\n\
         0.005,0.9,0,0.9,4,1,0\n\
         0.01,0.9,0,0.9,4,1,0\n",
    )
    .unwrap();
    let out = eoplab(&["delta-probe", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_fields(&out)["flag"], "INCONCLUSIVE");

    // Too few rows: input error.
    let path = dir.path().join("short.csv");
    std::fs::write(
        &path,
        "f,eop_upper,entropy,delta,n_restarts,n_distinct_minima,seed\n0,1,0,1,4,1,0\n",
    )
    .unwrap();
    let out = eoplab(&["delta-probe", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Wrong header: input error.
    let path = dir.path().join("badheader.csv");
    std::fs::write(&path, "a,b\n1,2\n").unwrap();
    let out = eoplab(&["delta-probe", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_csv_round_trips_through_the_probe() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = eoplab(&[
        "werner-sweep",
        "0.2",
        "0.4",
        "5",
        "--restarts",
        "6",
        "--seed",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    // Parse back and re-serialize: identical bytes at printed precision.
    let rows = eoplab_cli::commands::read_sweep_csv(&path).unwrap();
    assert_eq!(rows.len(), 5);
    let path2 = dir.path().join("rewrite.csv");
    eoplab_cli::commands::write_sweep_csv(&path2, &rows).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&path2).unwrap());

    let out = eoplab(&["delta-probe", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn eoplab_threads_env_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_eoplab"))
        .args(["eop", "--werner", "0.5", "--restarts", "2"])
        .env("EOPLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_eoplab"))
        .args(["eop", "--werner", "1", "--restarts", "2"])
        .env("EOPLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}
