use std::path::Path;
use std::process::{Command, Output};

fn altan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_altan"))
        .args(args)
        .env_remove("ALTAN_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, contents: &[u8]) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn survey_csv() {
    let text = stdout(&altan(&["survey", "--family", "benzenoid", "--eps", "5"]));
    assert_eq!(text, "hexagons,0->1,0->2,1->1 odd h,total\n5,14,1,7,22\n");
}

#[test]
fn convex_summary_rows() {
    let text = stdout(&altan(&["survey", "--family", "convex", "--eps", "20"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "10,6,1,17,1,0,0");
    assert_eq!(lines[2], "20,23,8,43,2,0,0");
}

#[test]
fn extremal_finds_benzo_a_tetracene() {
    let text = stdout(&altan(&["extremal", "--family", "benzenoid", "--eps", "1-6", "--excess", "2"]));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows, ["53225221,6:5,14,0,2,2,1"]);
}

#[test]
fn nullity_and_altan_of_json_graph() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write(dir.path(), "p3.json", br#"{"n":3,"edges":[[0,1],[1,2]],"attachment":[0,1,2,1]}"#);
    let text = stdout(&altan(&["nullity", &p3, "--kmax", "2"]));
    assert_eq!(text.lines().nth(1), Some("0,3,4,1,2 2,1"));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&altan(&["altan", &p3]))).unwrap();
    assert_eq!(doc["n"], 11);
    assert_eq!(doc["level"], 1);
    assert_eq!(doc["attachment"], serde_json::json!([7, 8, 9, 10]));
    let dot = stdout(&altan(&["altan", &p3, "--format", "dot", "--kmax", "2"]));
    assert!(dot.starts_with("graph G {"));
}

#[test]
fn verify_boundary_codes() {
    let dir = tempfile::tempdir().unwrap();
    let codes = write(dir.path(), "codes.txt", b"# benzenoids\n53225221\n444\n6\n");
    let text = stdout(&altan(&["verify", &codes, "--kmax", "3"]));
    assert!(text.contains("3 instances verified"));
    assert!(text.contains("444: ok"));
}

#[test]
fn emitted_planar_code_ingests_back() {
    let out = altan(&["survey", "--family", "benzenoid", "--eps", "1-5", "--emit", "planar-code"]);
    assert!(out.status.success());
    assert!(out.stdout.starts_with(b">>planar_code<<"));
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "all.pc", &out.stdout);
    let table = stdout(&altan(&["ingest", &file]));
    assert_eq!(
        table,
        "hexagons,0->1,0->2,1->1 odd h,total\n1,1,0,0,1\n2,1,0,0,1\n3,2,0,1,3\n4,6,0,1,7\n5,14,1,7,22\n"
    );
}

#[test]
fn emitted_codes_match_generator_order() {
    let text = stdout(&altan(&["survey", "--family", "catafused", "--eps", "1-4", "--emit", "bec"]));
    assert_eq!(text.lines().count(), 1 + 2 + 5);
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_altan"))
            .args(["survey", "--family", "catafused", "--eps", "2-5"])
            .env("ALTAN_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = stdout(&run());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 4);
    assert_eq!(stdout(&run()), first);
}

#[test]
fn errors_exit_nonzero() {
    let out = altan(&["survey", "--family", "ingested", "--eps", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = altan(&["survey", "--family", "benzenoid", "--eps", "11"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    let out = altan(&["survey", "--family", "benzenoid", "--eps", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", b"5555\n");
    assert_eq!(altan(&["nullity", &bad]).status.code(), Some(1));
}
