//! End-to-end tests of the compiled binary: argument handling, exit codes,
//! and byte-level determinism of the CSV output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn wyur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wyur"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wyur_cli_{}_{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn parse_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let body = std::fs::read_to_string(path).unwrap();
    let mut lines = body.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn bounds_text_reports_every_requested_id() {
    let out = wyur(&[
        "bounds",
        "--state",
        "ring:0.785398163",
        "--chan-a",
        "phase_damping(0.5)",
        "--chan-b",
        "bit_flip(0.5)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    for id in [
        "zhou",
        "thm1_proof",
        "thm1_stmt",
        "thm2",
        "fu_perterm",
        "fu_global",
        "thm3_id",
        "thm3_desc",
    ] {
        assert!(text.contains(id), "missing {id} in:\n{text}");
    }
    assert!(text.contains("phase_damping(0.5) (complete)"));
}

#[test]
fn bounds_csv_subset_and_output_file() {
    let dir = scratch_dir("bounds_csv");
    let path = dir.join("report.csv");
    let out = wyur(&[
        "bounds",
        "--state",
        "bloch:0,0,0",
        "--chan-a",
        "phase_damping(0.25)",
        "--chan-b",
        "bit_flip(0.75)",
        "--bounds",
        "zhou,thm2",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "quantity,value");
    // Header, two uncertainties, and the two selected bounds.
    assert_eq!(lines.len(), 5);
    // The maximally mixed state has zero skew information everywhere.
    for line in &lines[1..] {
        let value: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(value, 0.0, "line {line}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn figure_default_resolution_writes_201_lines_deterministically() {
    let dir = scratch_dir("figure_det");
    let first = dir.join("a1.csv");
    let second = dir.join("a2.csv");
    for path in [&first, &second] {
        let out = wyur(&["figure", "a", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let bytes_first = std::fs::read(&first).unwrap();
    let bytes_second = std::fs::read(&second).unwrap();
    assert_eq!(bytes_first, bytes_second);
    let body = String::from_utf8(bytes_first).unwrap();
    assert_eq!(body.lines().count(), 201);
    assert!(body.starts_with("param,uncertainty,thm1_proof,thm2,zhou\n"));
    assert!(!body.contains('\r'));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn figure_panel_d_keeps_the_identity_saturation() {
    let dir = scratch_dir("figure_d");
    let path = dir.join("d.csv");
    let out = wyur(&[
        "figure",
        "d",
        "--resolution",
        "16",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = parse_csv(&path);
    assert_eq!(
        header,
        [
            "param",
            "uncertainty",
            "thm3_desc",
            "thm3_id",
            "fu_perterm",
            "fu_global"
        ]
    );
    assert_eq!(rows.len(), 16);
    for row in &rows {
        let uncertainty = row[1];
        let thm3_id = row[3];
        assert!((thm3_id - uncertainty).abs() <= 1e-9);
        for v in &row[2..] {
            assert!(*v <= uncertainty + 1e-9);
        }
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_prints_csv_to_stdout() {
    let out = wyur(&[
        "sweep",
        "--param",
        "q",
        "--from",
        "0",
        "--to",
        "0.8",
        "--points",
        "5",
        "--chan-a",
        "phase_damping(q)",
        "--chan-b",
        "bit_flip(q)",
        "--bounds",
        "thm2,zhou",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("param,uncertainty,thm2,zhou\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn usage_and_help_exit_codes() {
    assert_eq!(wyur(&[]).status.code(), Some(2));
    assert_eq!(wyur(&["--help"]).status.code(), Some(0));
    assert_eq!(wyur(&["--version"]).status.code(), Some(0));
    assert_eq!(
        wyur(&["bounds", "--state", "ring:0"]).status.code(),
        Some(2)
    );
}

#[test]
fn config_errors_exit_2() {
    // Unknown panel letter.
    assert_eq!(wyur(&["figure", "x"]).status.code(), Some(2));
    // Zero trials.
    assert_eq!(wyur(&["verify", "--trials", "0"]).status.code(), Some(2));
    // Malformed state spec.
    let out = wyur(&[
        "bounds",
        "--state",
        "orbit:1",
        "--chan-a",
        "rot_y_pi8",
        "--chan-b",
        "rot_z_pi8",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Mixed product and sum bounds in one sweep.
    let out = wyur(&[
        "sweep",
        "--param",
        "theta",
        "--from",
        "0",
        "--to",
        "1",
        "--points",
        "3",
        "--chan-a",
        "rot_y_pi8",
        "--chan-b",
        "rot_z_pi8",
        "--bounds",
        "zhou,thm3_id",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dimension_mismatch_exits_3() {
    let out = wyur(&[
        "bounds",
        "--state",
        "random:3",
        "--chan-a",
        "phase_damping(0.5)",
        "--chan-b",
        "bit_flip(0.5)",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn io_failures_exit_4() {
    let out = wyur(&[
        "figure",
        "a",
        "--resolution",
        "2",
        "--out",
        "/nonexistent_dir_for_wyur/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let out = wyur(&[
        "bounds",
        "--state",
        "file:/nonexistent_dir_for_wyur/state.txt",
        "--chan-a",
        "rot_y_pi8",
        "--chan-b",
        "rot_z_pi8",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_reports_clean_run() {
    let out = wyur(&[
        "verify", "--dim", "2", "--n", "2", "--trials", "25", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("total violations: 0"));
    assert!(text.contains("thm3_id saturates the sum uncertainty"));
}

#[test]
fn state_and_channel_files_round_trip_through_the_cli() {
    let dir = scratch_dir("files");
    let state_path = dir.join("state.txt");
    // A diagonal qubit state written in the plain text matrix format.
    std::fs::write(&state_path, "2 2\n0.75+0i 0+0i\n0+0i 0.25+0i\n").unwrap();
    let chan_path = dir.join("chan.txt");
    let chan_text = "2 2\n2 2\n1+0i 0+0i\n0+0i 0.7071067811865476+0i\n2 2\n0+0i 0+0i\n0+0i 0.7071067811865476+0i\n";
    std::fs::write(&chan_path, chan_text).unwrap();

    let out = wyur(&[
        "bounds",
        "--state",
        &format!("file:{}", state_path.display()),
        "--chan-a",
        &format!("file:{}", chan_path.display()),
        "--chan-b",
        "bit_flip(0.5)",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).starts_with("quantity,value\n"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn env_thread_cap_does_not_change_results() {
    let dir = scratch_dir("threads");
    let free = dir.join("free.csv");
    let capped = dir.join("capped.csv");
    let out = wyur(&[
        "figure",
        "b",
        "--resolution",
        "40",
        "--out",
        free.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_wyur"))
        .args([
            "figure",
            "b",
            "--resolution",
            "40",
            "--out",
            capped.to_str().unwrap(),
        ])
        .env("WYUR_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read(&free).unwrap(),
        std::fs::read(&capped).unwrap()
    );
    std::fs::remove_dir_all(&dir).ok();
}
