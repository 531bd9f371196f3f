use std::fs;
use std::path::PathBuf;

use reedy_cli::{main_with, parse};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("reedy").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn fixtures_round_trip_byte_for_byte() {
    for name in ["cospan.json", "equalizer.json", "tower.json", "non_kan.json"] {
        let text = fs::read_to_string(fixture(name)).unwrap();
        let w = parse(&text).unwrap();
        assert_eq!(w.document.to_text(), text, "{name}");
    }
}

#[test]
fn certify_cospan_passes() {
    let f = fixture("cospan.json");
    let (code, out, _) = run(&["certify", "--diagram", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains(", 0 failed"));
}

#[test]
fn non_kan_level_fails_with_the_horn() {
    let f = fixture("non_kan.json");
    let (code, out, _) = run(&["check-fibrant", "--diagram", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("horn(2,"), "{out}");
    let (code, out, _) = run(&["replace", "--diagram", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("not Kan"), "{out}");
}

#[test]
fn tower_holim_writes_the_stage_object() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture("tower.json");
    let (code, out, err) =
        run(&["holim", "--shape", "tower", "--diagram", f.to_str().unwrap(), "--stage", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("stage 2:"));
    let stage = fs::read_to_string(dir.path().join("stage-2.json")).unwrap();
    let doc: reedy_core::sset::document::SSetDocument = serde_json::from_str(&stage).unwrap();
    assert!(doc.to_sset().is_ok());
    assert!(dir.path().join("certificates.json").exists());
}

#[test]
fn equalizer_and_cospan_holim_pass() {
    let (code, out, _) = run(&["holim", "--shape", "equalizer", "--diagram", fixture("equalizer.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("triples 4"));
    let (code, out, _) = run(&["holim", "--shape", "cospan", "--diagram", fixture("cospan.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    // wrong shape is an input error
    let (code, _, err) = run(&["holim", "--shape", "equalizer", "--diagram", fixture("cospan.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("parallel-pair"));
}

#[test]
fn replacement_document_is_a_workspace() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture("cospan.json");
    let (code, _, _) = run(&["replace", "--diagram", f.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(dir.path().join("replacement.json")).unwrap();
    let w = parse(&text).unwrap();
    assert_eq!(w.document.to_text(), text);
    assert_eq!(w.diagrams["R"].values()[0].level_size(0), 2);
}

#[test]
fn reports_are_deterministic() {
    let f = fixture("equalizer.json");
    let a = run(&["certify", "--diagram", f.to_str().unwrap()]);
    let b = run(&["certify", "--diagram", f.to_str().unwrap()]);
    assert_eq!(a, b);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture("cospan.json")).unwrap().replace("\"g\": \"v1\"", "\"g\": \"missing\"");
    let path = dir.path().join("dangling.json");
    fs::write(&path, text).unwrap();
    let (code, _, err) = run(&["validate", "--diagram", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("missing"), "{err}");
    let (code, _, err) = run(&["certify", "--diagram", "/nonexistent/file.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("nonexistent"));
    let (code, _, _) = run(&["replace", "--diagram", fixture("cospan.json").to_str().unwrap(), "--truncation", "3"]);
    assert_eq!(code, 2);
}
