use std::process::{Command, Stdio};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn pdmn(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pdmn")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn query_flag_replaces_workbook_queries() {
    let (code, stdout, _) =
        pdmn(&["run", &data("earthquake.pdmn"), "--query", "alarm"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "alarm: 0.57395\n");
}

#[test]
fn bad_query_flag_is_a_parse_error() {
    let (code, _, stderr) = pdmn(&["run", &data("coins.pdmn"), "--query", "two heads("]);
    assert_eq!(code, 2);
    assert!(stderr.contains("not a valid query atom"));
}

#[test]
fn choice_point_cap_flag() {
    let (code, _, stderr) =
        pdmn(&["run", &data("earthquake.pdmn"), "--max-choice-points", "2"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("exceed the enumeration cap"), "stderr: {stderr}");
}

#[test]
fn choice_point_cap_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_pdmn"))
        .args(["run", &data("earthquake.pdmn")])
        .env("PDMN_MAX_CHOICE_POINTS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn digits_flag_rounds_inexact_probabilities() {
    // 1/3 has no finite decimal expansion.
    let workbook = "predicate\n| p |\n\ndecision \"P\" U\n|| p |\n|| Yes |\n|| 1/3 |\n\nquery\n| p |\n";
    let mut child = Command::new(env!("CARGO_BIN_EXE_pdmn"))
        .args(["run", "-", "--digits", "3"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(workbook.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "p: 0.333\n");
}

#[test]
fn model_flag_picks_a_section() {
    let two = "model \"A\"\npredicate\n| p |\n\ndecision \"P\" U\n|| p |\n|| Yes |\n|| 0.25 |\n\nquery\n| p |\n\
               \n\nmodel \"B\"\npredicate\n| r |\n\ndecision \"R\" U\n|| r |\n|| Yes |\n|| 0.75 |\n\nquery\n| r |\n";
    let path = std::env::temp_dir().join("pdmn_two_models.pdmn");
    std::fs::write(&path, two).unwrap();
    let p = path.to_str().unwrap();

    let (code, _, stderr) = pdmn(&["run", p]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--model"));

    let (code, stdout, _) = pdmn(&["run", p, "--model", "B"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "r: 0.75\n");
}

#[test]
fn run_json_shape() {
    let (code, stdout, _) = pdmn(&["run", &data("coins.pdmn"), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["model"], "Coins");
    assert_eq!(v["results"][0]["query"], "twoheads");
    assert_eq!(v["results"][0]["probability"]["decimal"], "0.3");
    assert_eq!(v["results"][0]["probability"]["fraction"], "3/10");
    assert!(v["diagnostics"].as_array().unwrap().is_empty());
}
