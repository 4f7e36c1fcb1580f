//! End-to-end runs of the `nlwe` binary.

use std::path::Path;
use std::process::{Command, Output};

use nlwe::io;

fn nlwe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlwe"))
        .args(args)
        .env_remove("NLWE_TOLERANCE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_is_byte_identical_across_runs_and_thread_counts() {
    let a = nlwe(&["generate", "--preset", "canonical:n=4,d=3"]);
    let b = nlwe(&["generate", "--preset", "canonical:n=4,d=3", "--threads", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("basis.json");
    let c = nlwe(&["generate", "--preset", "canonical:n=4,d=3", "--out", path_str(&file)]);
    assert!(c.status.success());
    assert_eq!(std::fs::read(&file).unwrap(), a.stdout);
    assert!(stdout(&c).contains("81 states"));
}

#[test]
fn shift_json_lists_the_eight_states() {
    let o = nlwe(&["generate", "--preset", "shift"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 8);
    assert_eq!(v["states"][1]["factors"], serde_json::json!([{"dft": 0}, {"cb": 0}, {"cb": 1}]));
}

#[test]
fn verify_passes_on_generated_basis_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let basis = dir.path().join("basis.json");
    let report = dir.path().join("report.json");
    assert!(nlwe(&["generate", "--preset", "fig4", "--out", path_str(&basis)]).status.success());
    let o = nlwe(&["verify", "--in", path_str(&basis), "--json", path_str(&report)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["orth", "product", "census", "exclusivity", "commutation"]);
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["pass"], true);
        assert!(c["detail"].is_string());
        assert!(c["residual"].is_number() || c["residual"].is_null());
    }
}

#[test]
fn verify_fails_on_duplicated_state() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("basis.json");
    let o = nlwe(&["generate", "--preset", "shift"]);
    let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    v["states"][1] = v["states"][0].clone();
    std::fs::write(&file, serde_json::to_string(&v).unwrap()).unwrap();
    let o = nlwe(&["verify", "--in", path_str(&file), "--checks", "orth,product"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let orth = text.lines().find(|l| l.starts_with("orth")).unwrap();
    assert!(orth.contains("FAIL"), "{text}");
}

#[test]
fn upb_extract_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("upb.json");
    let o = nlwe(&["upb", "--preset", "shift", "--excluded-index", "all=0", "--out", path_str(&file)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("|0⟩|1⟩|0-1⟩"));
    let o = nlwe(&["upb", "check", "--in", path_str(&file)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).starts_with("unextendible, 48 assignments examined (pre-pruning bound 81)"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn extendible_upb_check_exits_nonzero() {
    let o = nlwe(&["upb", "--preset", "fig3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("extendible"));
}

#[test]
fn bestate_reports_ppt_and_separability() {
    let dir = tempfile::tempdir().unwrap();
    let upb = dir.path().join("upb.json");
    let rho = dir.path().join("rho.json");
    assert!(nlwe(&["upb", "--preset", "shift", "--out", path_str(&upb)]).status.success());
    let o = nlwe(&["bestate", "--in", path_str(&upb), "--ppt", "--separability", "--out", path_str(&rho)]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("rank 4"));
    for cut in ["A|BC", "AB|C", "AC|B"] {
        assert!(text.contains(cut), "{text}");
    }
    let state = io::density_from_str(&std::fs::read_to_string(&rho).unwrap()).unwrap();
    assert!((state.trace().re - 1.0).abs() < 1e-12);
}

#[test]
fn bestate_rejects_extendible_set() {
    let dir = tempfile::tempdir().unwrap();
    let upb = dir.path().join("upb.json");
    nlwe(&["upb", "--preset", "fig3", "--out", path_str(&upb)]);
    let o = nlwe(&["bestate", "--in", path_str(&upb)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[contract-violation]:"));
}

#[test]
fn errors_are_one_line_with_a_code() {
    let cases: [(&[&str], &str); 3] = [
        (&["generate", "--preset", "domino"], "error[unknown-preset]:"),
        (&["generate"], "error[usage]:"),
        (&["verify", "--in", "/nonexistent/basis.json"], "error[io]:"),
    ];
    for (args, prefix) in cases {
        let o = nlwe(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with(prefix), "{err}");
    }

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dims\": [2, 2], \"states\": [").unwrap();
    let o = nlwe(&["verify", "--in", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[malformed-json]:"));
}

#[test]
fn lemma_survey_is_reproducible() {
    let a = nlwe(&["lemma", "--dim", "3", "--seed", "7", "--samples", "200"]);
    let b = nlwe(&["lemma", "--dim", "3", "--seed", "7", "--samples", "200", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn lemma_kraus_file_and_tolerance_override() {
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("k.json");
    std::fs::write(&k, "[[[1,0],[0,0]],[[0,0],[0.5,0]]]").unwrap();
    let o = nlwe(&["lemma", "--kraus", path_str(&k)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("constraints hold: false"));

    // Relative Fourier overlap of diag(1, 1/2) is 0.375 / 0.625 = 0.6, so a
    // tolerance of 0.7 accepts the constraints while K^H K stays anisotropic.
    let o = Command::new(env!("CARGO_BIN_EXE_nlwe"))
        .args(["lemma", "--kraus", path_str(&k)])
        .env("NLWE_TOLERANCE", "0.7")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("constraints hold: true"));
}
