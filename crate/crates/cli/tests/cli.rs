mod support;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use aqslie::io::{from_text, to_text, AlgebraDoc, FormDoc, MatrixDoc};
use serde_json::Value;
use support::{data_dir, shipped};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_aqslie"));
    cmd.current_dir(data_dir()).env_remove("AQSLIE_TOLERANCE");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend(args);
    let out = run(&full);
    let value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), value)
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(data_dir().join("schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, report: &Value, context: &str) {
    let errors: Vec<String> = v.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{context}: {errors:?}\n{report:#}");
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("aqslie-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn shipped_files_round_trip_byte_identical() {
    let mut count = 0;
    for path in shipped("algebras") {
        let text = std::fs::read_to_string(&path).unwrap();
        // the Jacobi violator still parses as a document; only building the algebra fails
        let doc: AlgebraDoc = from_text(&text).unwrap();
        assert_eq!(to_text(&doc), text, "{}", path.display());
        count += 1;
    }
    for path in shipped("forms") {
        let text = std::fs::read_to_string(&path).unwrap();
        let doc: FormDoc = from_text(&text).unwrap();
        assert_eq!(to_text(&doc), text, "{}", path.display());
        count += 1;
    }
    for path in shipped("matrices") {
        let text = std::fs::read_to_string(&path).unwrap();
        let doc: MatrixDoc = from_text(&text).unwrap();
        assert_eq!(to_text(&doc), text, "{}", path.display());
        count += 1;
    }
    assert!(count >= 18);
}

#[test]
fn construct_reproduces_shipped_files() {
    for (family, weights, mode, file) in [
        ("4n1", "1", "exact", "heisenberg_4n1_1.json"),
        ("4n1", "1,2,3", "exact", "heisenberg_4n1_1_2_3.json"),
        ("4n1", "1", "float", "heisenberg_4n1_1_float.json"),
        ("2n1", "1,3", "exact", "heisenberg_2n1_1_3.json"),
    ] {
        let out = run(&["construct", "heisenberg", "--dim-family", family, "--weights", weights, "--mode", mode]);
        assert!(out.status.success());
        let expected = std::fs::read(data_dir().join("algebras").join(file)).unwrap();
        assert_eq!(out.stdout, expected, "{file}");
    }
}

#[test]
fn construct_then_classify_example() {
    let built = run(&["construct", "heisenberg", "--dim-family", "4n1", "--weights", "1"]);
    let out = run_stdin(&["--json", "classify"], &built.stdout);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = &report["result"];
    let has = |key: &str, tag: &str| r["tags"][key].as_array().unwrap().iter().any(|t| t == tag);
    assert!(has("phi", "AntiQuasiSasakian"));
    assert!(has("phi2", "AntiQuasiSasakian"));
    assert!(has("phi3", "QuasiSasakian"));
    assert!(has("phi3", "Sasakian"));
    assert_eq!(r["triple"], serde_json::json!(["DoubleAqsSasakian"]));
    assert_eq!(r["normal_form"]["weights"], serde_json::json!(["1"]));
    assert_eq!(r["normal_form"]["verified"], true);
}

#[test]
fn curvature_of_h5() {
    let (code, report) = json(&["curvature", "algebras/heisenberg_4n1_1.json"]);
    assert_eq!(code, 0);
    let r = &report["result"];
    assert_eq!(r["scalar"], "-4");
    let sectional = r["sectional_xi"].as_array().unwrap();
    assert_eq!(sectional.len(), 4);
    assert!(sectional.iter().all(|k| k["value"] == "1"), "{sectional:?}");
}

#[test]
fn exit_codes_follow_error_families() {
    let cases: [(&[&str], i32, &str); 7] = [
        (&["check", "algebras/jacobi_violator.json"], 2, "JacobiViolation"),
        (&["check", "missing.json"], 2, "Io"),
        (&["check", "forms/omega_kahler.json"], 2, "Format"),
        (&["classify", "algebras/su2_r2.json"], 3, "NotNilpotent"),
        (&["classify", "algebras/heisenberg_4n1_1_0.json"], 3, "NotMaximalRank"),
        (&["classify", "algebras/su2.json"], 2, "Format"),
        (&["invariant-forms", "--algebra", "algebras/heisenberg_4n1_1.json", "--torus", "2"], 3, "NotCompactSemisimple"),
    ];
    for (args, code, name) in cases {
        let (status, report) = json(args);
        assert_eq!(status, code, "{args:?}: {report:#}");
        assert_eq!(report["error"]["code"], name, "{args:?}");
        assert_eq!(report["error"]["exit_code"], code);
    }

    let bad_scalar = br#"{"mode": "exact", "dim": 3, "basis_names": ["a", "b", "c"],
        "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "two"}}]}"#;
    let out = run_stdin(&["check"], bad_scalar);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ScalarParse"));

    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run_stdin(&["check"], b"{ not json");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn jacobi_violation_lists_the_triple() {
    let out = run(&["check", "algebras/jacobi_violator.json"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("(1, 2, 3)"), "{stderr}");
}

#[test]
fn json_reports_match_schema_and_are_deterministic() {
    let v = validator();
    let commands: Vec<Vec<&str>> = vec![
        vec!["check", "algebras/heisenberg_4n1_1_2.json", "--random-forms", "20", "--seed", "7"],
        vec!["check", "algebras/su3.json"],
        vec!["check", "algebras/heisenberg_4n1_1_float.json"],
        vec!["classify", "algebras/heisenberg_4n1_1_2.json", "--conjugations", "3"],
        vec!["classify", "algebras/heisenberg_2n1_1_3.json"],
        vec!["cohomology", "algebras/heisenberg_2n1_1.json"],
        vec!["curvature", "algebras/heisenberg_4n1_1.json"],
        vec!["construct", "heisenberg", "--dim-family", "2n1", "--weights", "2"],
        vec!["extend", "--kahler", "algebras/kahler_r4.json", "--cocycle", "forms/omega_zero.json"],
        vec!["invariant-forms", "--algebra", "algebras/su2.json", "--torus", "3"],
        vec!["invariant-forms", "--algebra", "algebras/su3.json", "--torus", "1,2", "--J", "matrices/su3_flag_j.json"],
        vec!["classify", "algebras/su2_r2.json"],
        vec!["check", "algebras/jacobi_violator.json"],
        vec!["check", "nowhere.json"],
    ];
    for args in commands {
        let (_, first) = json(&args);
        assert_valid(&v, &first, &args.join(" "));
        let (_, second) = json(&args);
        assert_eq!(first, second, "{args:?} is not deterministic");
    }

    let mut timed = vec!["--timing"];
    timed.extend(["cohomology", "algebras/su2.json"]);
    let (_, report) = json(&timed);
    assert_valid(&v, &report, "timed");
    assert!(report["wall_time_ms"].as_f64().is_some());
}

#[test]
fn schema_rejects_malformed_reports() {
    let v = validator();
    let bad = [
        serde_json::json!({"command": [], "input_digest": null, "result": null, "error": null}),
        serde_json::json!({"command": [], "input_digest": "md5:00", "result": {}, "error": null}),
        serde_json::json!({"command": [], "input_digest": null, "result": null,
            "error": {"code": "X", "family": "parse", "exit_code": 3, "message": ""}}),
    ];
    for report in bad {
        assert!(!v.is_valid(&report), "{report}");
    }
}

#[test]
fn batch_writes_one_report_per_input() {
    let v = validator();
    let out_dir = scratch_dir("batch");
    let out = run(&["check", "--batch", "algebras", "--out", out_dir.to_str().unwrap()]);
    // the Jacobi violator makes the batch exit with the parse code
    assert_eq!(out.status.code(), Some(2));
    let inputs = shipped("algebras");
    for input in &inputs {
        let stem = input.file_stem().unwrap().to_string_lossy();
        let path = out_dir.join(format!("{stem}.report.json"));
        let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_valid(&v, &report, &stem);
        let expect_error = stem == "jacobi_violator";
        assert_eq!(report["error"].is_object(), expect_error, "{stem}");
    }
    std::fs::remove_dir_all(&out_dir).unwrap();
}

#[test]
fn tolerance_flag_and_environment() {
    let path = Path::new("algebras/heisenberg_4n1_1_float.json");
    let out = run(&["--tolerance", "1e-12", "classify", path.to_str().unwrap()]);
    assert!(out.status.success());
    let out = bin()
        .env("AQSLIE_TOLERANCE", "1e-12")
        .args(["classify", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin().env("AQSLIE_TOLERANCE", "tight").args(["check", "algebras/su2.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extension_trichotomy_from_files() {
    for (form, tag) in [
        ("omega_anti_invariant", "AntiQuasiSasakian"),
        ("omega_zero", "Cokahler"),
        ("omega_twice_kahler", "Sasakian"),
        ("omega_kahler", "QuasiSasakian"),
    ] {
        let cocycle = format!("forms/{form}.json");
        let (code, report) = json(&["extend", "--kahler", "algebras/kahler_r4.json", "--cocycle", &cocycle]);
        assert_eq!(code, 0, "{report:#}");
        let tags = report["result"]["tags"].as_array().unwrap();
        assert!(tags.iter().any(|t| t == tag), "{form}: {tags:?}");
    }
}
