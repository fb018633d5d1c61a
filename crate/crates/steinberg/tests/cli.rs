use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steinberg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn present_gap_form() {
    let out = run(&["present", "--diagram", "A2", "--ring", "gf2", "--out", "gap"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("F := FreeGroup(6);"));
    assert!(text.contains("rels := ["));
    assert!(text.contains("#   F.1 = S1"));
}

#[test]
fn present_json_schema() {
    let out = run(&["present", "--diagram", "B2", "--ring", "z/2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json output");
    assert_eq!(doc["diagram"]["labels"], serde_json::json!(["1", "2"]));
    assert_eq!(doc["ring"], serde_json::json!("z/2"));
    assert!(doc["generators"].as_array().unwrap().len() > 0);
    assert!(doc["relators"].as_array().unwrap().len() > 0);
}

#[test]
fn present_rejects_mixed_emission_flags() {
    let out = run(&[
        "present", "--diagram", "A2", "--ring", "gf2", "--table1", "--prune",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_symbolically() {
    for rep in ["adjoint", "defining"] {
        let out = run(&[
            "verify",
            "--diagram",
            "B2",
            "--ring",
            "laurent(r;t,u)",
            "--rep",
            rep,
        ]);
        assert_eq!(out.status.code(), Some(0), "rep {rep}");
        assert!(stdout(&out).ends_with("PASS\n"));
    }
}

#[test]
fn verify_rejects_bad_diagram() {
    let out = run(&["verify", "--diagram", "X9", "--ring", "gf2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn autos_checks_and_rejections() {
    let out = run(&["autos", "--type", "b2", "--field", "gf2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("root substitution inverts the square: yes"));
    let out = run(&["autos", "--type", "b2", "--field", "gf3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wstar_check_lists_seven_checks() {
    let out = run(&["--json", "wstar-check", "--diagram", "A2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json envelope");
    assert_eq!(doc["outcome"]["checks"].as_array().unwrap().len(), 7);
    assert_eq!(doc["outcome"]["pass"], serde_json::json!(true));
}

#[test]
fn stabilizer_verifies_node() {
    let out = run(&["stabilizer", "--diagram", "G2", "--node", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("PASS\n"));
    let out = run(&["stabilizer", "--diagram", "G2", "--node", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn roots_counts_match() {
    let out = run(&["--json", "roots", "--diagram", "A2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json envelope");
    assert_eq!(doc["outcome"]["total_count"], serde_json::json!(6));
    assert_eq!(doc["outcome"]["stabilized"], serde_json::json!(true));
}

#[test]
fn enumerate_reports_order() {
    let out = run(&["enumerate", "--diagram", "A1", "--ring", "gf3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("order: 24"));
}

#[test]
fn enumerate_respects_cap() {
    let out = run(&[
        "--max-cosets",
        "10",
        "enumerate",
        "--diagram",
        "A1",
        "--ring",
        "gf3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("capped at 10 cosets"));
}

#[test]
fn unipotent_gen_documented_example() {
    let out = run(&[
        "unipotent-gen",
        "--diagram",
        "B2",
        "--field",
        "gf2",
        "--gens",
        "s,l",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("index in the unipotent group: 2"));
}

#[test]
fn unipotent_gen_rejects_bad_token() {
    let out = run(&[
        "unipotent-gen",
        "--diagram",
        "B2",
        "--field",
        "gf2",
        "--gens",
        "q",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "unipotent-gen",
        "--diagram",
        "B2",
        "--field",
        "z/4",
        "--gens",
        "s,l",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_output_is_reproducible() {
    let a = run(&["--json", "present", "--diagram", "A2", "--ring", "gf4"]);
    let b = run(&["--json", "present", "--diagram", "A2", "--ring", "gf4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_subcommand_is_usage_error() {
    let out = run(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}
