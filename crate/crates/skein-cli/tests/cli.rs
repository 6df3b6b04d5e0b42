//! End-to-end CLI behavior: deterministic output, the JSON envelope, and
//! exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn skein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skein"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn diagram_path(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.pop();
    p.pop();
    p.push("diagrams");
    p.push(name);
    p.to_string_lossy().into_owned()
}

#[test]
fn eval_trefoil_bracket() {
    let out = skein(&["eval", "--theory", "kauffman", &diagram_path("trefoil.tangle")]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("A^7 + A^3 + A^-1 + -A^-9"), "{}", stdout);
}

#[test]
fn eval_json_envelope_is_stable() {
    let run = || {
        let out = skein(&[
            "eval",
            "--theory",
            "kauffman",
            "--json",
            &diagram_path("trefoil.tangle"),
        ]);
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a, b, "output must be byte-identical across runs");
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["version"], 1);
    assert_eq!(
        doc["result"]["basis"][0]["coeff"],
        "A^7 + A^3 + A^-1 + -A^-9"
    );
    assert!(doc["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn eval_su3_circle_normalizations() {
    let path = diagram_path("circle-oriented.tangle");
    let out = skein(&["eval", "--theory", "su3", "--normalization", "kuperberg", &path]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("q^1 + 1 + q^-1"), "{}", stdout);
    let out = skein(&["eval", "--theory", "su3", "--normalization", "oy", &path]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("q^6 + 1 + q^-6"), "{}", stdout);
}

#[test]
fn eval_su3_with_numeric_parameters() {
    let out = skein(&[
        "eval",
        "--theory",
        "su3",
        "--a",
        "1",
        "--y",
        "y",
        &diagram_path("theta.tangle"),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("-y^9 + -2*y^3 + -2*y^-3 + -y^-9"), "{}", stdout);
}

#[test]
fn basis_counts_six_points() {
    let out = skein(&["basis", "--points", "6", "--mode", "kauffman"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("count: 5"), "{}", stdout);
}

#[test]
fn basis_webs_json() {
    let out = skein(&["basis", "--signs", "++++-", "--mode", "su3", "--json"]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc["result"]["count"], 3);
}

#[test]
fn identities_pass_for_both_theories() {
    for theory in ["su3", "kauffman"] {
        let out = skein(&["identities", "--theory", theory]);
        assert!(out.status.success(), "{} identities must pass", theory);
    }
    let out = skein(&["identities", "--theory", "su3", "--json"]);
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc["result"]["identities"].as_array().unwrap().len(), 6);
    assert_eq!(doc["result"]["all_pass"], true);
}

#[test]
fn check_passes_on_bundled_diagrams() {
    let out = skein(&[
        "check",
        "--theory",
        "kauffman",
        "--moves",
        "RII",
        &diagram_path("rii.tangle"),
    ]);
    assert!(out.status.success());
    let out = skein(&[
        "check",
        "--theory",
        "su3",
        "--moves",
        "all",
        &diagram_path("kink-positive-oriented.tangle"),
    ]);
    assert!(out.status.success());
}

#[test]
fn oracle_compare_exits_zero() {
    let out = skein(&[
        "oracle-compare",
        "--count",
        "10",
        "--seed",
        "3",
        &diagram_path("trefoil.tangle"),
        &diagram_path("hopf.tangle"),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("12 diagrams compared, 0 mismatches"), "{}", stdout);
}

#[test]
fn normal_form_prints_basis_diagrams() {
    let out = skein(&[
        "normal-form",
        "--theory",
        "su3",
        &diagram_path("crossing-positive-oriented.tangle"),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("vertex"), "H-web term should appear: {}", stdout);
}

#[test]
fn unknown_flags_and_bad_files_exit_nonzero() {
    let out = skein(&["eval", "--theory", "kauffman", "--bogus"]);
    assert!(!out.status.success());
    let out = skein(&["eval", "--theory", "kauffman", "/nonexistent.tangle"]);
    assert!(!out.status.success());
    // validation failures carry the module diagnostic through the envelope
    let dir = std::env::temp_dir().join("skein-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.tangle");
    std::fs::write(&bad, "boundary: + -\nedge e0: b0 -> b0\n").unwrap();
    let out = skein(&[
        "eval",
        "--theory",
        "kauffman",
        "--json",
        bad.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(!doc["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn khovanov_requires_vertex_free() {
    let out = skein(&[
        "eval",
        "--theory",
        "su3",
        "--normalization",
        "khovanov",
        &diagram_path("theta.tangle"),
    ]);
    assert!(!out.status.success());
}
