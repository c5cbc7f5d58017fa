use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittenz")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

#[test]
fn so7_latex() {
    let o = run(&["compute", "--algebra", "so7", "--m", "1", "--format", "latex"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "\\frac{2^3\\cdot 19}{3^3\\cdot 7\\cdot 17!}\\pi^{18}");
}

#[test]
fn sl3_json() {
    let o = run(&["compute", "--algebra", "sl3", "--m", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["value"]["coefficient"], serde_json::json!({"num": "4", "den": "2835"}));
    assert_eq!(j["value"]["pi_power"], 6);
}

#[test]
fn both_methods_single_record() {
    let o = run(&["compute", "--algebra", "so5", "--m", "2", "--method", "both", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(j.is_object());
    assert_eq!(j["method"], "both");
}

#[test]
fn sp6_methods_disagree_beyond_s2() {
    assert_eq!(code(&run(&["compute", "--algebra", "sp6", "--m", "1", "--method", "both"])), 0);
    assert_eq!(code(&run(&["compute", "--algebra", "sp6", "--m", "2", "--method", "both"])), 3);
}

#[test]
fn verify_reaches_digits() {
    let o = run(&["verify", "--algebra", "so7", "--m", "1", "--bound", "100", "--precision", "50", "--format", "json", "--min-digits", "15"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(j["matching_digits"].as_u64().unwrap() >= 15);
    assert_eq!(j["inconclusive"], false);
    let o = run(&["verify", "--algebra", "g2", "--m", "1", "--bound", "300", "--precision", "50", "--min-digits", "10"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn verify_low_precision_and_threshold() {
    let o = run(&["verify", "--algebra", "so5", "--m", "1", "--bound", "300", "--precision", "5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["inconclusive"], true);
    let o = run(&["verify", "--algebra", "so5", "--m", "1", "--bound", "20", "--precision", "30", "--min-digits", "25"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn tree_check() {
    let o = run(&["tree", "--algebra", "g2", "--check"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("internal nodes: 15"), "{out}");
    assert!(out.trim_end().ends_with("pass"));
}

#[test]
fn alternative_tree_file() {
    let dir = std::env::temp_dir().join(format!("wittenz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("so7_root1.json");
    std::fs::write(&path, wittenz::catalog::so7_tree(1).to_json()).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(code(&run(&["tree", "--algebra", "so7", "--check", "--tree", p])), 0);
    let a = run(&["compute", "--algebra", "so7", "--m", "1", "--format", "latex", "--tree", p]);
    let b = run(&["compute", "--algebra", "so7", "--m", "1", "--format", "latex"]);
    assert_eq!(stdout(&a), stdout(&b));
    let bad = dir.join("garbage.json");
    std::fs::write(&bad, "{\"removed_left\": [}").unwrap();
    assert_eq!(code(&run(&["tree", "--algebra", "so7", "--tree", bad.to_str().unwrap()])), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&["compute", "--algebra", "e8", "--m", "1"])), 2);
    assert_eq!(code(&run(&["compute", "--algebra", "sl3", "--m", "0"])), 2);
    assert_ne!(code(&run(&["compute"])), 0);
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(!out.contains("FAIL"));
    assert!(out.lines().all(|l| l.starts_with("PASS")));
}
