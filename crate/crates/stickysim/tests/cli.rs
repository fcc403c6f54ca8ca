//! End-to-end runs of the `stickysim` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn stickysim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stickysim"))
        .args(args)
        .env_remove("STICKYSIM_RESULTS_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn only_json(dir: &Path) -> PathBuf {
    let files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    assert_eq!(files.len(), 1, "{files:?}");
    files.into_iter().next().unwrap()
}

#[test]
fn crossing_pair_generate_run_replay() {
    let dir = TempDir::new().unwrap();
    let scenario = path(&dir, "pair.json");
    let out = stickysim(&["gen", "example2", "--out", s(&scenario)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read(&scenario)["particles"].as_array().unwrap().len(), 2);

    let run_dir = path(&dir, "run");
    let out = stickysim(&["run", s(&scenario), "--out", s(&run_dir)]);
    assert_eq!(code(&out), 0);
    let events = read(&run_dir.join("events.json"));
    assert_eq!(events["events"][0]["time"], "1/1");
    assert_eq!(
        events["events"][0]["clusters"][0]["post_velocity"],
        serde_json::json!(["1/2", "1/2"])
    );
    let csv = fs::read_to_string(run_dir.join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,index,x_1,x_2");
    assert!(run_dir.join("trajectory.json").exists());

    let out = stickysim(&["verify", "replay", s(&scenario), s(&run_dir.join("events.json"))]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("PASS"));
    for kind in ["sticky", "weak", "energy"] {
        let out = stickysim(&["verify", kind, s(&run_dir.join("trajectory.json"))]);
        assert_eq!(code(&out), 0, "{kind}: {}", stdout(&out));
    }
}

#[test]
fn resplit_candidate_fails_stickiness() {
    let dir = TempDir::new().unwrap();
    let traj = path(&dir, "resplit.json");
    assert_eq!(
        code(&stickysim(&["gen", "resplit", "--split", "2", "--out", s(&traj)])),
        0
    );
    let out = stickysim(&["verify", "sticky", s(&traj)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("FAIL"));
}

#[test]
fn free_flight_keeps_energy_but_not_stickiness() {
    let dir = TempDir::new().unwrap();
    let scenario = path(&dir, "pair.json");
    assert_eq!(code(&stickysim(&["gen", "example2", "--out", s(&scenario)])), 0);
    let energy = stickysim(&["verify", "energy", s(&scenario), "--candidate", "free"]);
    assert_eq!(code(&energy), 0);
    let sticky = stickysim(&["verify", "sticky", s(&scenario), "--candidate", "free"]);
    assert_eq!(code(&sticky), 1);
}

#[test]
fn cascade_generation_satisfies_nip() {
    let dir = TempDir::new().unwrap();
    let scenario = path(&dir, "cascade.json");
    let out = stickysim(&["gen", "example3", "--levels", "4", "--seed", "7", "--out", s(&scenario)]);
    assert_eq!(code(&out), 0);
    assert_eq!(read(&scenario)["particles"].as_array().unwrap().len(), 5);
    let spec = path(&dir, "cascade.spec.json");
    assert_eq!(read(&spec)["kind"], "example3");
    assert_eq!(code(&stickysim(&["verify", "nip", s(&spec)])), 0);
}

#[test]
fn bullets_generate_with_sidecar_and_svg() {
    let dir = TempDir::new().unwrap();
    let scenario = path(&dir, "bullets.json");
    assert_eq!(
        code(&stickysim(&["gen", "example4", "--levels", "3", "--out", s(&scenario)])),
        0
    );
    assert_eq!(read(&scenario)["particles"].as_array().unwrap().len(), 6);
    assert!(path(&dir, "bullets.spec.json").exists());

    let big = path(&dir, "big.json");
    assert_eq!(
        code(&stickysim(&["gen", "example4", "--levels", "4", "--out", s(&big)])),
        0
    );
    let run_dir = path(&dir, "run");
    assert_eq!(code(&stickysim(&["run", s(&big), "--svg", "--out", s(&run_dir)])), 0);
    let svg = fs::read_to_string(run_dir.join("trajectory.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("<polyline"));
}

#[test]
fn single_particle_moves_in_a_straight_line() {
    let dir = TempDir::new().unwrap();
    let scenario = path(&dir, "one.json");
    fs::write(
        &scenario,
        r#"{"dimension": 1, "backend": "rational", "tolerance": "0", "horizon": "2",
            "particles": [{"mass": "1", "position": ["0"], "velocity": ["3/2"]}]}"#,
    )
    .unwrap();
    let run_dir = path(&dir, "run");
    assert_eq!(
        code(&stickysim(&[
            "run",
            s(&scenario),
            "--sample-step",
            "1",
            "--out",
            s(&run_dir)
        ])),
        0
    );
    assert_eq!(read(&run_dir.join("events.json"))["events"], serde_json::json!([]));
    let csv = fs::read_to_string(run_dir.join("trajectory.csv")).unwrap();
    assert_eq!(csv, "t,index,x_1\n0,0,0\n1,0,1.5\n2,0,3\n");
}

#[test]
fn tail_lemmas_from_the_command_line() {
    let out = stickysim(&["verify", "lemma2", "--k", "2", "--tail", "10"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("1023"));
    assert_eq!(code(&stickysim(&["verify", "lemma1"])), 0);
    let bad = stickysim(&["verify", "lemma1", "--alpha", "3/5"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    let scenario = path(&dir, "cascade.json");
    assert_eq!(
        code(&stickysim(&["gen", "example3", "--levels", "5", "--out", s(&scenario)])),
        0
    );
    let capped = stickysim(&["run", s(&scenario), "--event-cap", "0", "--out", s(&path(&dir, "r"))]);
    assert_eq!(code(&capped), 3);
    let bad_tol = stickysim(&["run", s(&scenario), "--tolerance", "1e-3", "--out", s(&path(&dir, "r"))]);
    assert_eq!(code(&bad_tol), 2);
    assert_eq!(code(&stickysim(&["run", s(&path(&dir, "missing.json"))])), 2);
    let bad_alpha = stickysim(&[
        "gen",
        "example4",
        "--alpha",
        "3/5",
        "--levels",
        "3",
        "--out",
        s(&path(&dir, "b.json")),
    ]);
    assert_eq!(code(&bad_alpha), 2);
    assert!(String::from_utf8_lossy(&bad_alpha.stderr).contains("4/9"));
    assert!(!path(&dir, "b.json").exists());
}

#[test]
fn float_backend_override() {
    let dir = TempDir::new().unwrap();
    let scenario = path(&dir, "pair.json");
    assert_eq!(
        code(&stickysim(&[
            "gen",
            "example2",
            "--backend",
            "float",
            "--out",
            s(&scenario)
        ])),
        0
    );
    let file = read(&scenario);
    assert_eq!(file["backend"], "float");
    assert!(file["horizon"].is_number());
    let run_dir = path(&dir, "run");
    assert_eq!(code(&stickysim(&["run", s(&scenario), "--out", s(&run_dir)])), 0);
    assert_eq!(read(&run_dir.join("events.json"))["events"][0]["time"], 1.0);
}

#[test]
fn experiments_persist_identical_reports() {
    let dir = TempDir::new().unwrap();
    let mut bytes = Vec::new();
    for run in ["a", "b"] {
        let out_dir = path(&dir, run);
        let out = stickysim(&["experiment", "nonuniqueness", "--levels", "3..5", "--out", s(&out_dir)]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
        let report = only_json(&out_dir);
        assert!(report
            .file_name()
            .unwrap()
            .to_str()
            .unwrap()
            .starts_with("nonuniqueness-"));
        bytes.push(fs::read(report).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    let report: Value = serde_json::from_slice(&bytes[0]).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["cases"].as_array().unwrap().len(), 3);
}

#[test]
fn results_dir_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_stickysim"))
        .args(["experiment", "jeps", "--levels", "2", "--eps", "1,0.1"])
        .env("STICKYSIM_RESULTS_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(read(&only_json(dir.path()))["experiment"], "jeps");
}

#[test]
fn property_suite_small_run() {
    let dir = TempDir::new().unwrap();
    let out = stickysim(&[
        "experiment",
        "properties",
        "--count",
        "100",
        "--seed",
        "1",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let report = read(&only_json(dir.path()));
    assert_eq!(report["cases"].as_array().unwrap().len(), 100);
}
