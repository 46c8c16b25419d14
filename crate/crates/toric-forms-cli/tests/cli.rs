//! End-to-end behavior of the binary: exit codes, file loading, and the
//! text renderings of each subcommand.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-forms"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn analyze_accepts_files_and_bundled_names() {
    let by_name = run(&["analyze", "dp6"]);
    assert!(by_name.status.success());
    assert!(stdout(&by_name).contains("|W|=12"));

    let emitted = run(&["examples", "emit", "dp6"]);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(&emitted.stdout).unwrap();
    let by_file = run(&["analyze", file.path().to_str().unwrap()]);
    assert!(by_file.status.success());
    assert_eq!(stdout(&by_file), stdout(&by_name));
}

#[test]
fn exit_codes_separate_io_from_preconditions() {
    let missing = run(&["analyze", "no_such_fan"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(stderr(&missing).contains("no such file or bundled fan"));

    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"{ not json").unwrap();
    let malformed = run(&["analyze", file.path().to_str().unwrap()]);
    assert_eq!(malformed.status.code(), Some(1));

    // two maximal cones sharing a non-face intersection: rejected as a fan
    let mut bad_fan = tempfile::NamedTempFile::new().unwrap();
    bad_fan
        .write_all(
            serde_json::json!({
                "rank": 2,
                "rays": [[1, 0], [0, 1], [1, 1]],
                "max_cones": [[0, 1], [0, 2]]
            })
            .to_string()
            .as_bytes(),
        )
        .unwrap();
    let invalid = run(&["analyze", bad_fan.path().to_str().unwrap()]);
    assert_eq!(invalid.status.code(), Some(2));
    assert!(stderr(&invalid).contains("not a fan"));

    let forms_on_bad = run(&["forms", "cube_twist", "--field", "real"]);
    assert_eq!(forms_on_bad.status.code(), Some(2));

    let degree = run(&["lattice", "cohomology", "sign_lattice", "--degree", "3"]);
    assert_eq!(degree.status.code(), Some(2));
}

#[test]
fn partial_reports_keep_exit_zero() {
    let partial = run(&["analyze", "cube_twist"]);
    assert!(partial.status.success());
    let text = stdout(&partial);
    assert!(text.contains("omega: unavailable"));
    assert!(text.contains("projective=false"));
}

#[test]
fn lattice_commands_round_trip_through_files() {
    let emitted = run(&["examples", "emit", "nonsplit_rank3_lattice"]);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(&emitted.stdout).unwrap();
    let path = file.path().to_str().unwrap();

    let coh = run(&["lattice", "cohomology", path, "--degree", "-1"]);
    assert!(coh.status.success());
    assert!(stdout(&coh).contains("Z/2"));

    // elements sort lexicographically, so the identity sits at index 1 here
    let sub = run(&[
        "lattice",
        "cohomology",
        path,
        "--degree",
        "-1",
        "--subgroup",
        "1",
    ]);
    assert!(sub.status.success());
    assert!(stdout(&sub).contains("H^-1(1 elements) = 0"));

    let inv = run(&["lattice", "invertible", path]);
    assert!(inv.status.success());
    assert!(stdout(&inv).contains("disproven"));

    let res = run(&["lattice", "resolve", path]);
    assert!(res.status.success());
    assert!(stdout(&res).contains("rank P = 7"));
}

#[test]
fn omega_validation_flags_a_bad_set() {
    // {H} alone on dp6 is J-stable and nef but cannot generate Pic
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(
        serde_json::json!({"classes": [[2, 1, 1, -1]]})
            .to_string()
            .as_bytes(),
    )
    .unwrap();
    let out = run(&["omega", "dp6", "--set", file.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("generates_class_group: false"));
    assert!(text.contains("validation failed"));

    let canonical = run(&["omega", "dp6"]);
    assert!(canonical.status.success());
    assert!(stdout(&canonical).contains("omega: 9 classes"));
}

#[test]
fn h0_parses_and_checks_divisors() {
    let ok = run(&["h0", "p2", "--divisor", "1,0,0"]);
    assert!(ok.status.success());
    assert_eq!(stdout(&ok), "h0 = 3\n");

    let wrong_len = run(&["h0", "p2", "--divisor", "1,0"]);
    assert_eq!(wrong_len.status.code(), Some(2));

    let not_int = run(&["h0", "p2", "--divisor", "1,x,0"]);
    assert_eq!(not_int.status.code(), Some(1));
}

#[test]
fn nef_lists_rays_and_facets() {
    let out = run(&["nef", "hirzebruch_2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("2 extreme rays"));
    assert!(text.contains("2 facets"));
}

#[test]
fn examples_cover_every_kind() {
    let listing = run(&["examples", "list", "--json"]);
    let entries: Vec<serde_json::Value> = serde_json::from_slice(&listing.stdout).unwrap();
    let kinds: std::collections::BTreeSet<&str> = entries
        .iter()
        .map(|e| e["kind"].as_str().unwrap())
        .collect();
    assert_eq!(
        kinds,
        ["fan", "lattice", "model", "omega"].into_iter().collect()
    );
    for entry in &entries {
        let emitted = run(&["examples", "emit", entry["name"].as_str().unwrap()]);
        assert!(emitted.status.success());
        let parsed: serde_json::Value = serde_json::from_slice(&emitted.stdout).unwrap();
        assert!(parsed.is_object());
    }

    let unknown = run(&["examples", "emit", "no_such_example"]);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn forms_field_parsing() {
    let default_real = run(&["forms", "p1xp1"]);
    let explicit = run(&["forms", "p1xp1", "--field", "real"]);
    assert_eq!(default_real.stdout, explicit.stdout);

    let finite = run(&["forms", "p1xp1", "--field", "finite:5"]);
    assert!(finite.status.success());
    assert!(stdout(&finite).contains("finite(C5)"));

    let bad_order = run(&["forms", "p1xp1", "--field", "finite:x"]);
    assert_eq!(bad_order.status.code(), Some(1));

    let missing_model = run(&["forms", "p1xp1", "--field", "/nonexistent/model.json"]);
    assert_eq!(missing_model.status.code(), Some(1));
}
