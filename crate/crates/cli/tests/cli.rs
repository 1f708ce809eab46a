use std::path::Path;
use std::process::{Command, Output};

fn revanneal(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revanneal"))
        .args(args)
        .env("REVANNEAL_OUT_DIR", out)
        .output()
        .unwrap()
}

fn listing(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

const PHASE: &[&str] = &["phase-diagram", "--model", "ara", "--p", "3", "--alpha", "0.5", "--x", "0.2", "--resolution", "21"];

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        PHASE,
        &["landscape", "--model", "sra", "--p", "3", "--alpha", "0.5", "--x", "0.2", "--s", "0.4", "--lambda", "0.5", "--grid-n", "21"],
        &["evolve", "--model", "ara", "--p", "3", "--alpha", "0.5", "--x", "0.2", "--path", "linear-sqrt", "--tau", "2", "--sampling-stride", "100"],
    ];
    for args in runs {
        assert!(revanneal(args, dir.path()).status.success());
    }
    let first = listing(dir.path());
    assert!(first.len() >= 6, "{:?}", first.iter().map(|f| &f.0).collect::<Vec<_>>());
    for args in runs {
        assert!(revanneal(args, dir.path()).status.success());
    }
    assert_eq!(first, listing(dir.path()));
}

#[test]
fn invalid_parameters_exit_two_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = revanneal(&["landscape", "--p", "3", "--alpha", "0.5", "--x", "0", "--s", "0.5", "--lambda", "0.5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "usage");
    assert!(listing(dir.path()).is_empty());

    let out = revanneal(&["evolve", "--p", "3", "--alpha", "0.5", "--x", "0.2", "--bogus", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(listing(dir.path()).is_empty());
}

#[test]
fn flags_override_config_file_and_out_dir_flag_beats_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"model": "sra", "p": 3, "alpha": 0.5, "x": 0.2, "resolution": 11, "out_dir": "ignored"}"#).unwrap();
    let chosen = dir.path().join("chosen");
    let env_dir = dir.path().join("from_env");
    let out = revanneal(
        &["phase-diagram", "--config", config.to_str().unwrap(), "--model", "ara", "--out-dir", chosen.to_str().unwrap()],
        &env_dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let names: Vec<String> = listing(&chosen).into_iter().map(|f| f.0).collect();
    assert!(names.contains(&"phase_ara.csv".to_string()), "{names:?}");
    assert!(!env_dir.exists());
    let rows = std::fs::read_to_string(chosen.join("phase_ara.csv")).unwrap().lines().count();
    assert_eq!(rows, 1 + 11 * 11);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(&config, r#"{"p": 3, "alhpa": 0.5}"#).unwrap();
    let out = revanneal(&["landscape", "--config", config.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alhpa"));
}

#[test]
fn config_path_document_supplies_the_runtime() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"model": "ara", "p": 3, "alpha": 0.5, "x": 0.2, "sampling_stride": 500,
            "path": {"kind": "piecewise-linear", "waypoints": [[0, 0], [0.5, 0.5], [1, 0]], "tau": 2}}"#,
    )
    .unwrap();
    let out = revanneal(&["evolve", "--config", config.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("trajectory_ara.csv")).unwrap();
    let last: Vec<f64> = csv.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!((last[0], last[1], last[2]), (2.0, 1.0, 0.0));

    let out = revanneal(&["evolve", "--config", config.to_str().unwrap(), "--tau", "3"], dir.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("trajectory_ara.csv")).unwrap();
    assert!(csv.lines().last().unwrap().starts_with("3.0000000000000000e0,"));
}
