//! Every CLI golden file must regenerate byte for byte.
//!
//! The directory defaults to tests/golden and can be moved with
//! DKO_GOLDEN_DIR. DKO_UPDATE_GOLDEN=1 rewrites the files instead of comparing.

use std::path::PathBuf;

use dko::cli::run_args;

const CASES: &[(&str, i32, &[&str])] = &[
    ("ph_12.txt", 0, &["ph", "--max-degree", "12"]),
    ("ph_24.csv", 0, &["ph", "--max-degree", "24", "--format", "csv"]),
    ("genus_a_hat_16.txt", 0, &["genus", "--max-degree", "16"]),
    ("genus_a_hat_inverse_12.json", 0, &["genus", "--kind", "a-hat-inverse", "--max-degree", "12", "--format", "json"]),
    ("genus_hp2.txt", 0, &["genus", "--total", "1 + 2*x1 + 7*x1^2", "--pairing", "x1^2=1"]),
    ("coeff_ko.txt", 0, &["coeff", "--range", "-16..16"]),
    ("coeff_flat.csv", 0, &["coeff", "--kind", "flat", "--range", "-16..16", "--format", "csv"]),
    ("coeff_bott.txt", 0, &["coeff", "--kind", "bott"]),
    ("denominator_1_12.txt", 0, &["denominator", "--k-range", "1..12"]),
    ("denominator_1_12.csv", 0, &["denominator", "--k-range", "1..12", "--format", "csv"]),
    ("denominator_rp4_degree8.json", 0, &["denominator", "--degree8", "--space", "RP4", "--format", "json"]),
    ("sphere_9_differential.txt", 0, &["sphere", "--n", "9", "--variant", "differential"]),
    ("sphere_4_differential.json", 0, &["sphere", "--n", "4", "--variant", "differential", "--format", "json"]),
    ("sphere_12.txt", 0, &["sphere", "--n", "12"]),
    ("ahss_rp2.txt", 0, &["ahss", "--space", "RP2"]),
    ("ahss_rp4.txt", 3, &["ahss", "--space", "RP4"]),
    ("ahss_rp4_log.csv", 3, &["ahss", "--space", "RP4", "--format", "csv"]),
    ("ahss_s8_differential.txt", 0, &["ahss", "--space", "S8", "--variant", "differential"]),
    ("ahss_rp2_degree0.json", 3, &["ahss", "--space", "RP2", "--degree", "0", "--format", "json"]),
    ("ahss_s8_reduced_degree0.txt", 0, &["ahss", "--space", "S8", "--reduced", "--degree", "0"]),
    ("adams_divergence.csv", 0, &["adams", "--table", "4", "--r", "6", "--format", "csv"]),
    ("adams_roots.txt", 0, &["adams", "--roots", "x, y, x+y", "--r", "3"]),
    ("adams_paper.txt", 0, &["adams", "--roots", "x, y", "--r", "2", "--model", "paper"]),
    ("adams_element.txt", 0, &["adams", "--element", "alpha*beta^-1 + eta", "--r", "3"]),
    ("wu_rp6.txt", 0, &["wu", "--space", "RP6"]),
    ("wu_cp3.json", 0, &["wu", "--space", "CP3", "--format", "json"]),
    ("verify.txt", 0, &["verify"]),
];

fn golden_dir() -> PathBuf {
    match std::env::var_os("DKO_GOLDEN_DIR") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden"),
    }
}

fn invoke(args: &[&str]) -> dko::cli::Outcome {
    run_args(std::iter::once("dko").chain(args.iter().copied()))
}

#[test]
fn golden_files_regenerate() {
    let dir = golden_dir();
    let update = std::env::var("DKO_UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    let mut mismatches = Vec::new();
    for (file, code, args) in CASES {
        let out = invoke(args);
        assert_eq!(out.code, *code, "{file}: exit {} ({})", out.code, out.stderr);
        let path = dir.join(file);
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if want != out.stdout {
            mismatches.push(file.to_string());
        }
    }
    assert!(mismatches.is_empty(), "golden mismatches: {mismatches:?}");
}

#[test]
fn output_is_deterministic() {
    for (file, _, args) in CASES {
        assert_eq!(invoke(args), invoke(args), "{file}");
    }
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["ph", "--max-degree", "10"], 2),
        (&["ph", "--bogus"], 2),
        (&["denominator", "--k-range", "3..1"], 2),
        (&["denominator", "--k-range", "0..4"], 2),
        (&["sphere", "--n", "0"], 2),
        (&["ahss", "--space", "nowhere"], 2),
        (&["ahss"], 2),
        (&["adams", "--r", "0", "--element", "beta"], 2),
        (&["adams", "--element", "gamma"], 2),
        (&["adams", "--roots", "x,,y"], 2),
        (&["genus", "--total", "1 + x1 + x2", "--pairing", "x1=1"], 2),
        (&["genus", "--total", "1 + x1", "--pairing", "x1=1"], 0),
        (&["wu", "--space", "S3", "--format", "csv"], 0),
        (&["sphere", "--n", "9", "--variant", "differential", "--format", "csv"], 0),
        (&["denominator", "--degree8", "--space", "S8", "--format", "csv"], 2),
        (&["ahss", "--space", "RP6", "--variant", "differential"], 3),
        (&["ahss", "--space", "RP4", "--degree", "-4"], 3),
        (&["denominator", "--ell", "16", "--prime", "2", "--space", "S8"], 2),
        (&["verify", "--suite", "thom"], 0),
        (&["--help"], 0),
    ];
    for (args, code) in cases {
        let out = invoke(args);
        assert_eq!(out.code, *code, "{args:?}: {}{}", out.stdout, out.stderr);
        if *code != 0 {
            assert!(!out.stderr.is_empty(), "{args:?} has no diagnostic");
        }
    }
}

#[test]
fn json_diagnostics_are_structured() {
    let out = invoke(&["ph", "--max-degree", "10", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out.stderr).unwrap();
    assert_eq!(v["error"], "validation");
}

#[test]
fn presentation_files_load_from_disk() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let file = dir.join("data/presentations/RP4.json");
    let a = invoke(&["wu", "--file", file.to_str().unwrap()]);
    let b = invoke(&["wu", "--space", "RP4"]);
    assert_eq!(a, b);
    let fixture = dir.join("tests/fixtures/synthetic_odd.json");
    let out = invoke(&["denominator", "--ell", "12", "--prime", "3", "--file", fixture.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("s = 1"), "{}", out.stdout);
}
