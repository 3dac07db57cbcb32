use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xormagic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_catalog_entries() {
    let ok = run(&["--json", "verify", "--cert", "catalog:fig4-d5"]);
    assert_eq!(code(&ok), 0);
    let v = json(&ok);
    assert_eq!(v["verdict"], "magic");
    assert_eq!(v["degree"], 5);
    assert_eq!(v["connected"], true);

    // the wrong mode is refuted
    assert_eq!(
        code(&run(&[
            "verify",
            "--cert",
            "catalog:fig4-d5",
            "--mode",
            "closed"
        ])),
        10
    );
}

#[test]
fn search_writes_a_certificate_that_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = run(&[
        "--json",
        "search",
        "--n",
        "4",
        "--d",
        "7",
        "--mode",
        "open",
        "--connected",
        "--out",
        s(&cert),
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["status"], "feasible");
    assert_eq!(v["certified"], true);
    let check = run(&["--json", "verify", "--cert", s(&cert)]);
    assert_eq!(code(&check), 0);
    assert_eq!(json(&check)["degree"], 7);
}

#[test]
fn search_exit_codes() {
    assert_eq!(
        code(&run(&["search", "--n", "3", "--d", "5", "--mode", "open"])),
        10
    );
    let out = run(&[
        "--json",
        "search",
        "--n",
        "7",
        "--d",
        "9",
        "--mode",
        "open",
        "--node-limit",
        "50",
        "--no-restarts",
    ]);
    assert_eq!(code(&out), 20);
    assert_eq!(json(&out)["status"], "budget_exhausted");
}

#[test]
fn usage_and_input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&run(&["verify", "--cert", s(&bad)])), 2);
    assert_eq!(code(&run(&["search", "--n", "4"])), 2);
    assert_eq!(code(&run(&["degrees", "--n", "8", "--parity", "bogus"])), 2);
    assert_eq!(
        code(&run(&[
            "catalog",
            "export",
            "--id",
            "no-such-entry",
            "--out",
            s(dir.path())
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "export-milp",
            "--n",
            "4",
            "--d",
            "5",
            "--mode",
            "open",
            "--variant",
            "model2"
        ])),
        2
    );
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn export_milp_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("m.lp");
    let out = run(&[
        "--json",
        "export-milp",
        "--n",
        "4",
        "--d",
        "5",
        "--mode",
        "open",
        "--variant",
        "model2",
        "--t",
        "2",
        "--out",
        s(&lp),
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["rows"], 48);
    let text = std::fs::read_to_string(&lp).unwrap();
    let parsed = xormagic::milp::parse_lp(&text).unwrap();
    assert_eq!(parsed.rows.len(), 48);

    // stdout export matches the file
    let stdout = run(&[
        "export-milp",
        "--n",
        "4",
        "--d",
        "5",
        "--mode",
        "open",
        "--variant",
        "model2",
        "--t",
        "2",
    ]);
    assert_eq!(String::from_utf8(stdout.stdout).unwrap(), text);
}

#[test]
fn degrees_lists_the_cartesian_closure() {
    let out = run(&[
        "degrees",
        "--n",
        "8",
        "--parity",
        "open-odd",
        "--rules",
        "cartesian",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "9 11 13 15 17 19 21"
    );

    let traced = run(&[
        "--json",
        "degrees",
        "--n",
        "8",
        "--parity",
        "closed-even",
        "--trace",
    ]);
    let v = json(&traced);
    assert!(v["derivations"]["24"].is_object());
}

#[test]
fn algebra_reports_and_refutes() {
    let out = run(&["--json", "algebra", "--family", "hypercube:3"]);
    assert_eq!(code(&out), 10);
    let v = json(&out);
    assert_eq!(v["order"], 8);
    let pass = run(&["--json", "algebra", "--catalog", "fig4-d5"]);
    assert_eq!(code(&pass), 0);
}

#[test]
fn constructions_verify() {
    let dir = tempfile::tempdir().unwrap();
    let power = run(&[
        "--json",
        "construct",
        "power",
        "--n",
        "8",
        "--parity",
        "open-odd",
    ]);
    assert_eq!(code(&power), 0);
    assert_eq!(json(&power)["order"], 256);

    let export = run(&[
        "catalog",
        "export",
        "--id",
        "fig5-d4",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code(&export), 0);
    let base = dir.path().join("fig5-d4.json");
    let comp = dir.path().join("comp.json");
    let out = run(&[
        "--json",
        "construct",
        "complement",
        "--cert",
        s(&base),
        "--out",
        s(&comp),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["degree"], 11);
    assert_eq!(code(&run(&["verify", "--cert", s(&comp)])), 0);

    let prod = run(&[
        "--json",
        "construct",
        "product",
        "--kind",
        "strong",
        "--left",
        s(&base),
        "--right",
        s(&base),
    ]);
    assert_eq!(code(&prod), 0);
    let v = json(&prod);
    assert_eq!(
        (v["degree"].as_u64(), v["mode"].as_str()),
        (Some(24), Some("closed"))
    );
}
