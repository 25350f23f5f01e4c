use std::process::{Command, Output};

fn mkw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mkw")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

#[test]
fn graft_prints_the_sum() {
    let o = mkw(&["graft", "[a[b]]", "[c[d][e[f]]]"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "[c[a[b]][d][e[f]]] + [c[d[a[b]]][e[f]]] + [c[d][e[a[b]][f]]] + [c[d][e[f[a[b]]]]]");
}

#[test]
fn pi_and_json_output() {
    let o = mkw(&["pi", "[o][o]"]);
    assert_eq!(stdout(&o), "-[o[o]] + [o][o]");
    let o = mkw(&["--format", "json", "gl-product", "[o]", "[o]"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"].as_array().unwrap().len(), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["natural-growth", "1/2 [a][b]", "[c[a]] - [b]"];
    assert_eq!(stdout(&mkw(&args)), stdout(&mkw(&args)));
}

#[test]
fn chen_on_a_straight_segment() {
    let o = mkw(&["chen", "a=1,b=2", "a=2,b=4", "--N", "3"]);
    assert!(stdout(&o).ends_with("equals lift of total increment: true"));
}

#[test]
fn verify_passes_and_reports() {
    let o = mkw(&["verify", "--suite", "hopf-axioms", "--max-degree", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("PASS hopf-axioms"));
    let o = mkw(&["--format", "json", "verify", "--suite", "paper-examples"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn failing_fixture_exits_one() {
    let dir = std::env::temp_dir().join(format!("mkw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.txt");
    std::fs::write(&path, "wrong | graft | [o] ; [o] | [o][o]\n").unwrap();
    let o = mkw(&["verify", "--suite", "paper-examples", "--fixture", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness"));
}

#[test]
fn errors_are_explicit() {
    let o = mkw(&["verify", "--suite", "hopf-axioms", "--max-degree", "99"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cap"));
    let o = mkw(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("known suites"));
    let o = mkw(&["--alphabet", "o", "graft", "[o]", "[o[x]]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 3"));
}
