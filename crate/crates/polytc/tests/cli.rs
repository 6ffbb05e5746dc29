use std::path::Path;
use std::process::{Command, Output};

fn polytc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polytc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_reports_code_and_bounds() {
    let o = polytc(&["analyze", "1", "1", "1", "1", "1", "--k", "2..3", "--certify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("<{4,5}>"), "{text}");
    assert!(text.contains("betti (mod 2) 1 5 1"), "{text}");
    assert!(text.contains("TC_2 in [4, 5]"), "{text}");
}

#[test]
fn analyze_json_is_parseable() {
    let o = polytc(&["--format", "json", "analyze", "1", "2", "2", "3", "7", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.to_string().contains("\"lower\""));
}

#[test]
fn non_generic_lengths_exit_2() {
    let o = polytc(&["analyze", "1", "1", "1", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not generic"));
}

#[test]
fn unknown_range_exits_nonzero() {
    let o = polytc(&["enumerate", "--n", "x"]);
    assert!(!o.status.success());
}

#[test]
fn small_table_columns_match() {
    let o = polytc(&["table1", "--n", "5..6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn bounds_files_certify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_string_lossy().into_owned();
    let o = polytc(&["bounds", "--code", "<{2,7}>", "--k", "2..3", "--certify", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let files: Vec<String> =
        std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path().to_string_lossy().into_owned()).collect();
    assert_eq!(files.len(), 2);
    let mut args = vec!["certify"];
    args.extend(files.iter().map(String::as_str));
    let o = polytc(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("nonzero").count(), 2);

    let mut args = vec!["certify", "--code", "<{3,7}>"];
    args.extend(files.iter().map(String::as_str));
    assert_eq!(polytc(&args).status.code(), Some(2));
}

#[test]
fn vanishing_product_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    // On the truncated ring of <{5}> (m = 2) the fourth power of bar R vanishes.
    let body =
        r#"{"code":{"n":5,"genes":[[5]]},"k":2,"factors":[{"kind":"bar","pos":2,"gen":"R","exp":4}],"length":4}"#;
    let f = write(dir.path(), "zero.json", body);
    let o = polytc(&["certify", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("zero"));

    let body =
        r#"{"code":{"n":5,"genes":[[5]]},"k":2,"factors":[{"kind":"bar","pos":2,"gen":"R","exp":2}],"length":2}"#;
    let f = write(dir.path(), "two.json", body);
    assert_eq!(polytc(&["certify", &f]).status.code(), Some(0));
}

#[test]
fn malformed_certificate_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", "{\"code\": 3}");
    assert_eq!(polytc(&["certify", &f]).status.code(), Some(2));
    let body =
        r#"{"code":{"n":5,"genes":[[5]]},"k":2,"factors":[{"kind":"bar","pos":2,"gen":"R","exp":2}],"length":9}"#;
    let f = write(dir.path(), "len.json", body);
    assert_eq!(polytc(&["certify", &f]).status.code(), Some(2));
}
