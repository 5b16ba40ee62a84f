use std::process::Command;

fn qatic(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qatic"))
        .args(args)
        .env_remove("QATIC_CACHE")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn check_reports_collision() {
    let (code, out) = qatic(&["check", "t+2", "--q", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("not a profile"), "{out}");
    assert_eq!(qatic(&["check", "1+t", "--q", "2"]).0, 0);
    assert_eq!(qatic(&["check", "1+", "--q", "2"]).0, 2);
}

#[test]
fn interval_chain_text() {
    let (code, out) = qatic(&["interval", "[4]"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(4) - (2, 1) - (1) - ∅\n");
}

#[test]
fn bounds_json_without_cache() {
    let (code, out) = qatic(&["bounds", "[5]", "--no-cache"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["n0"], "22");
    assert!(v.get("cache").is_none());
}
