//! End-to-end tests of the command-line interface: exit codes, report
//! shapes, schema rejection, frozen values, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

use covmur::io::{load_boundary, save_observable, save_triple, BoundaryFormat};
use covmur::pauli::{covariant_joint, product_triple, BlochVector, PauliFrame};
use covmur::sample;

fn covmur(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covmur"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write_sharp_z(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("sharp_z.json");
    std::fs::write(
        &path,
        r#"{"schema":1,"dim":2,"outcomes":[1,-1],
            "effects":[[[[1,0],[0,0]],[[0,0],[0,0]]],
                       [[[0,0],[0,0]],[[0,0],[1,0]]]]}"#,
    )
    .unwrap();
    path
}

fn write_unsharp_z(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("unsharp_z.json");
    std::fs::write(
        &path,
        r#"{"schema":1,"dim":2,"outcomes":[1,-1],
            "effects":[[[[0.9,0],[0,0]],[[0,0],[0.1,0]]],
                       [[[0.1,0],[0,0]],[[0,0],[0.9,0]]]]}"#,
    )
    .unwrap();
    path
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = covmur(&["no-such-command"], dir.path());
    assert_eq!(exit_code(&out), 2);
    let out = covmur(
        &["region", "pauli", "--p", "0.5", "--samples", "4"],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 2, "p < 1 is a usage error");
    let out = covmur(&["distance", "--p", "inf"], dir.path());
    assert_eq!(exit_code(&out), 2, "missing positional arguments");
    let out = covmur(&["dilate", "--joint", "x.json", "--axis", "0", "--target", "NaN",
                       "-o", "y.json"], dir.path());
    assert_eq!(exit_code(&out), 2, "non-finite target is a usage error");
}

#[test]
fn validate_reports_defects_and_schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_sharp_z(dir.path());
    let out = covmur(&["validate", good.to_str().unwrap()], dir.path());
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["dim"], 2);

    // Effects that do not sum to identity: exit 1 with a defect report.
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"schema":1,"dim":2,"outcomes":[1,-1],
            "effects":[[[[1,0],[0,0]],[[0,0],[0,0]]],
                       [[[1,0],[0,0]],[[0,0],[1,0]]]]}"#,
    )
    .unwrap();
    let out = covmur(&["validate", bad.to_str().unwrap()], dir.path());
    assert_eq!(exit_code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["passed"], false);
    assert!(doc["normalisation_defect"].as_f64().unwrap() > 0.5);

    // Unknown schema version: rejected, not guessed.
    let wrong = dir.path().join("wrong_schema.json");
    std::fs::write(
        &wrong,
        r#"{"schema":2,"dim":1,"outcomes":[0],"effects":[[[[1,0]]]]}"#,
    )
    .unwrap();
    let out = covmur(&["validate", wrong.to_str().unwrap()], dir.path());
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema"));

    // Unreadable file: exit 1.
    let out = covmur(&["validate", "missing.json"], dir.path());
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn covariantise_and_check_covariance_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let frame = PauliFrame::standard();
    let triple = product_triple(&frame);
    let triple_path = dir.path().join("triple.json");
    save_triple(&triple, &triple_path).unwrap();

    let mut rng = sample::rng(7);
    let raw = sample::random_observable(&mut rng, 2, triple.action().outcomes().to_vec());
    let raw_path = dir.path().join("raw.json");
    save_observable(&raw, &raw_path).unwrap();

    // The raw random observable is almost surely not covariant: exit 1.
    let out = covmur(
        &[
            "check-covariance",
            "--triple",
            triple_path.to_str().unwrap(),
            raw_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_json(&out)["covariant"], false);

    // Covariantise it; the output must then pass check-covariance.
    let avg_path = dir.path().join("avg.json");
    let out = covmur(
        &[
            "covariantise",
            "--triple",
            triple_path.to_str().unwrap(),
            raw_path.to_str().unwrap(),
            "-o",
            avg_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let out = covmur(
        &[
            "check-covariance",
            "--triple",
            triple_path.to_str().unwrap(),
            avg_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["covariant"], true);
    assert!(doc["defect"].as_f64().unwrap() < 1e-10);
}

#[test]
fn distance_frozen_values_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_sharp_z(dir.path());
    let b = write_unsharp_z(dir.path());
    let out = covmur(
        &["distance", "--p", "inf", a.to_str().unwrap(), b.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert!((doc["value"].as_f64().unwrap() - 0.1).abs() < 1e-12);
    assert_eq!(doc["exact"], true);
    assert!(doc["witness"].is_array());

    // p = 2 on a two-outcome pair: closed form 2^{1/2}·0.1.
    let out = covmur(
        &["distance", "--p", "2", a.to_str().unwrap(), b.to_str().unwrap()],
        dir.path(),
    );
    let doc = stdout_json(&out);
    assert!((doc["value"].as_f64().unwrap() - 0.1 * 2.0_f64.sqrt()).abs() < 1e-12);

    // Identical invocations produce identical bytes.
    let run = |path: &str| {
        covmur(
            &[
                "distance", "--p", "inf",
                a.to_str().unwrap(), b.to_str().unwrap(),
                "-o", path,
            ],
            dir.path(),
        )
    };
    assert_eq!(exit_code(&run("d1.json")), 0);
    assert_eq!(exit_code(&run("d2.json")), 0);
    let d1 = std::fs::read(dir.path().join("d1.json")).unwrap();
    let d2 = std::fs::read(dir.path().join("d2.json")).unwrap();
    assert_eq!(d1, d2);
}

#[test]
fn region_pauli_emits_verified_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = covmur(
        &["region", "pauli", "--p", "inf", "--samples", "16", "-o", "b.csv"],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert!(csv.starts_with("# family=pauli p=inf dim=2 seed=0 tool=covmur"));
    assert_eq!(csv.lines().nth(1).unwrap(), "d_a,d_b,d_c,sphere_residual");

    let boundary = load_boundary(dir.path().join("b.csv"), BoundaryFormat::Csv).unwrap();
    assert!(boundary.flagged_rows().is_empty());
    // Corner landmark (0, 1/2, 1/2): the sphere touches the cube face.
    assert!(boundary.points.iter().any(|row| {
        row[0].abs() < 1e-15 && (row[1] - 0.5).abs() < 1e-15 && (row[2] - 0.5).abs() < 1e-15
    }));

    // Byte-identical rerun.
    let out = covmur(
        &["region", "pauli", "--p", "inf", "--samples", "16", "-o", "b2.csv"],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        std::fs::read(dir.path().join("b.csv")).unwrap(),
        std::fs::read(dir.path().join("b2.csv")).unwrap()
    );
}

#[test]
fn region_fourier_csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = covmur(
        &["region", "fourier", "--dim", "2", "--grid", "3", "-o", "f.csv"],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let boundary = load_boundary(dir.path().join("f.csv"), BoundaryFormat::Csv).unwrap();
    assert_eq!(boundary.points.len(), 3);
    // Frozen midpoint: d_a = 1/4 → d_b = (2−√3)/4.
    assert!((boundary.points[1][0] - 0.25).abs() < 1e-15);
    assert!((boundary.points[1][1] - 0.0669872981077807).abs() < 1e-14);
    assert!(boundary.flagged_rows().is_empty());

    let out = covmur(
        &[
            "region", "fourier", "--dim", "2", "--grid", "3",
            "--format", "json", "-o", "f.json",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let from_json = load_boundary(dir.path().join("f.json"), BoundaryFormat::Json).unwrap();
    assert_eq!(from_json, boundary);
}

#[test]
fn region_fourier_primal_verification_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "region", "fourier", "--dim", "2", "--grid", "3",
        "--verify-primal", "--seeds", "100", "--seed", "1",
    ];
    let out1 = covmur(&args, dir.path());
    assert_eq!(exit_code(&out1), 0);
    let doc = stdout_json(&out1);
    assert_eq!(doc["all_ok"], true);
    assert_eq!(doc["points"].as_array().unwrap().len(), 3);
    assert_eq!(doc["config"]["seed"], 1);
    let out2 = covmur(&args, dir.path());
    assert_eq!(out1.stdout, out2.stdout, "same seed must reproduce bytes");
}

#[test]
fn dilate_reaches_requested_error_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let frame = PauliFrame::standard();
    let joint = covariant_joint(&BlochVector::new(1.0, 0.0, 0.0), &frame).unwrap();
    let joint_path = dir.path().join("joint.json");
    save_observable(&joint, &joint_path).unwrap();

    let out = covmur(
        &[
            "dilate",
            "--joint", joint_path.to_str().unwrap(),
            "--axis", "0",
            "--target", "0.7",
            "--p", "inf",
            "-o", "dilated.json",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert!((doc["achieved"].as_f64().unwrap() - 0.7).abs() < 1e-7);
    let out = covmur(&["validate", "dilated.json"], dir.path());
    assert_eq!(exit_code(&out), 0);

    // Beyond the p=∞ cap: a range error, exit 1.
    let out = covmur(
        &[
            "dilate",
            "--joint", joint_path.to_str().unwrap(),
            "--axis", "0",
            "--target", "1.5",
            "-o", "x.json",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn verify_passes_clean_and_fails_under_injected_offset() {
    let dir = tempfile::tempdir().unwrap();
    let out = covmur(&["verify", "--scope", "dilation"], dir.path());
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_json(&out)["passed"], true);

    let out = covmur(
        &["verify", "--scope", "fourier", "--inject-dual-offset", "1e-3"],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 1, "corrupted dual must fail the suite");
    let doc = stdout_json(&out);
    assert_eq!(doc["passed"], false);
    let checks = doc["checks"].as_array().unwrap();
    let duality = checks
        .iter()
        .find(|c| c["name"] == "fourier/strong-duality")
        .unwrap();
    assert_eq!(duality["passed"], false);

    // Unknown scope: domain error.
    let out = covmur(&["verify", "--scope", "astrology"], dir.path());
    assert_eq!(exit_code(&out), 1);
}
