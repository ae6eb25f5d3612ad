use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn oam(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oam"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn error_line(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("an error line");
    serde_json::from_str(line).expect("error line is JSON")
}

fn write_config(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const SPECTRUM: &str = r#"{"schemaVersion":1,"setup":{"gamma":2.4,"eta":0.31},
    "pump":{"kind":"truncated-exponential","a":0.1},"outputPath":"spectrum.csv"}"#;

#[test]
fn spectrum_writes_amplitudes_and_k() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(tmp.path(), "c.json", SPECTRUM);
    let out = oam(tmp.path(), &["spectrum", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(tmp.path().join("spectrum.csv")).unwrap();
    assert!(!text.contains('\r'));
    let k: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# K="))
        .expect("K metadata")
        .parse()
        .unwrap();
    assert!((k - 20.789).abs() < 1e-3, "{k}");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 25);
}

#[test]
fn json_format_override() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(tmp.path(), "c.json", SPECTRUM);
    let out = oam(tmp.path(), &["spectrum", "--config", "c.json", "--format", "json", "--out", "s.json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&std::fs::read(tmp.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 25);
    assert!(doc["schmidtNumber"].as_f64().unwrap() > 20.0);
}

#[test]
fn config_errors_exit_2_and_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"schemaVersion":1,"setup":{"gamma":"wide","eta":0.31},"pump":{"kind":"gaussian"},"outputPath":"o"}"#, "setup.gamma"),
        (r#"{"schemaVersion":1,"setup":{"gamma":2.4,"eta":0.31},"pump":{"kind":"gaussian","b":1},"outputPath":"o"}"#, "pump"),
        (r#"{"schemaVersion":2,"setup":{"gamma":2.4,"eta":0.31},"pump":{"kind":"gaussian"},"outputPath":"o"}"#, "schemaVersion"),
        (r#"{"schemaVersion":1,"#, ""),
    ];
    for (text, field) in cases {
        write_config(tmp.path(), "bad.json", text);
        let out = oam(tmp.path(), &["spectrum", "--config", "bad.json"]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        let err = error_line(&out);
        assert_eq!(err["error"], "config");
        assert!(err["field"].as_str().unwrap().starts_with(field), "{text}: {err}");
    }
}

#[test]
fn bad_arguments_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = oam(tmp.path(), &["spectrum", "--nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["field"], "arguments");
    assert_eq!(oam(tmp.path(), &["spectrum"]).status.code(), Some(2));
}

#[test]
fn runtime_failures_exit_1() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "c.json",
        r#"{"schemaVersion":1,"setup":{"gamma":2.4,"eta":0.31},"pump":{"kind":"truncated-exponential","a":20},"outputPath":"o.csv"}"#,
    );
    let out = oam(tmp.path(), &["spectrum", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_line(&out)["error"], "runtime");
}

#[test]
fn scan_flags_divergent_cells_and_succeeds() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "c.json",
        r#"{"schemaVersion":1,"a":[0.19,2.1922],"gamma":[1],"eta":0.31,"outputPath":"scan.csv"}"#,
    );
    let out = oam(tmp.path(), &["scan", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(tmp.path().join("scan.csv")).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].ends_with(','), "{}", rows[0]);
    assert!(!rows[1].ends_with(','), "{}", rows[1]);
}

#[test]
fn composite_dimension_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "c.json",
        r#"{"schemaVersion":1,"d":4,"state":{"kind":"mes"},"N":1000,"outputPath":"t.json"}"#,
    );
    let out = oam(tmp.path(), &["tomography", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["field"], "d");
}

#[test]
fn tomography_of_the_theoretical_state() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "c.json",
        r#"{"schemaVersion":1,"d":3,"N":100000,"noise":"none","outputPath":"t.json","outputFormat":"json",
            "state":{"kind":"spectrum","setup":{"gamma":2.4,"eta":0.31},"pump":{"kind":"truncated-exponential","a":0.1}}}"#,
    );
    let out = oam(tmp.path(), &["tomography", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wall time"));
    let doc: Value = serde_json::from_slice(&std::fs::read(tmp.path().join("t.json")).unwrap()).unwrap();
    let m = &doc["metrics"];
    assert!((m["fidelityToMes"].as_f64().unwrap() - 0.999985464775525).abs() < 1e-5);
    assert_eq!(m["witness"], true);
    assert!(m["cglmp"].as_f64().unwrap() > 2.0);
}

#[test]
fn poisson_runs_are_byte_identical_for_a_seed() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "c.json",
        r#"{"schemaVersion":1,"d":3,"state":{"kind":"mes"},"N":10000,"noise":"poisson","repeats":4,"outputPath":"t.csv"}"#,
    );
    let mut files = Vec::new();
    for out in ["a.csv", "b.csv"] {
        let status = oam(tmp.path(), &["tomography", "--config", "c.json", "--seed", "42", "--out", out]);
        assert_eq!(status.status.code(), Some(0));
        files.push(std::fs::read(tmp.path().join(out)).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let missing_seed = oam(tmp.path(), &["tomography", "--config", "c.json"]);
    assert_eq!(missing_seed.status.code(), Some(2));
}

#[test]
fn shaping_exponential_target_recovers_its_parameter() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "c.json",
        r#"{"schemaVersion":1,"system":{"focalLength":0.075,"wavelength":7.8e-7,"inputWaist":0.003,"beta":64.4},
            "target":{"kind":"exponential","a":0.19},"pgm":{"pixels":32,"pitch":0.0002},"outputPath":"shape"}"#,
    );
    let out = oam(tmp.path(), &["shape", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("shape");
    for file in ["phase.csv", "mask.pgm", "fourier.csv", "meta.json"] {
        assert!(dir.join(file).is_file(), "{file}");
    }
    assert!(std::fs::read(dir.join("mask.pgm")).unwrap().starts_with(b"P5"));
    let meta: Value = serde_json::from_slice(&std::fs::read(dir.join("meta.json")).unwrap()).unwrap();
    assert!(meta["mappingResidual"].as_f64().unwrap() <= 1e-8);
    assert!(meta["energyError"].as_f64().unwrap() <= 1e-6);
    assert!((meta["fittedAInterior"].as_f64().unwrap() - 0.19).abs() <= 0.02, "{meta}");
    assert!(meta["fittedA"].is_number());
}
