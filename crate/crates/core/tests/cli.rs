use std::process::Command;

use serde_json::Value;

fn ufp(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ufp")).args(args).output().expect("spawn ufp");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(stdout: &str) -> Value {
    serde_json::from_str(stdout).expect("stdout is JSON")
}

#[test]
fn info_reports_order_and_sylow() {
    let (code, out, _) = ufp(&["info", "-d", "4", "-g", "(1234),(12)", "-p", "2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["schema"], "ufp/1");
    assert_eq!(v["order"], "24");
    assert_eq!(v["sylow"]["order"], "8");
    assert_eq!(v["transitive"], true);
}

#[test]
fn check_exit_code_follows_the_verdict() {
    let (code, out, _) = ufp(&["check", "prop31", "-d", "4", "-g", "(1234),(12)", "-p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["holds"], true);

    let (code, out, _) = ufp(&["check", "prop31", "-d", "6", "-g", "(123456),(12)", "-p", "2"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["holds"], false);
}

#[test]
fn symalt_uses_the_kind_flag() {
    let (code, _, _) = ufp(&["check", "prop-symalt", "-d", "6", "-p", "3", "--kind", "sym"]);
    assert_eq!(code, 0);
    let (code, _, _) = ufp(&["check", "prop-symalt", "-d", "6", "-p", "2", "--kind", "alt"]);
    assert_eq!(code, 1);
}

#[test]
fn order_table_flags_the_first_mismatch() {
    let (code, out, _) = ufp(&["order-table", "-d", "3", "-g", "(123),(12)", "-p", "2", "--depth", "3"]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["first_mismatch"], 2);
    assert_eq!(v["rows"][2]["order_U_F"], "3072");

    let (code, out, _) = ufp(&["order-table", "-d", "3", "-g", "(123),(12)", "-p", "3", "--format", "table"]);
    assert_eq!(code, 0);
    assert!(out.lines().next().unwrap().contains("depth"));
}

#[test]
fn table_format_is_plain_text() {
    let (code, out, _) = ufp(&["check", "remark44", "-d", "6", "-g", "(123456),(12)", "-p", "3", "--format", "table"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("remark44: holds"));
}

#[test]
fn parse_errors_exit_two() {
    for args in [
        vec!["check", "prop31", "-d", "3", "-g", "(12"],
        vec!["check", "prop31", "-d", "4", "-g", "(1234)", "-p", "4"],
        vec!["info", "-d", "3", "-g", "(1234)"],
    ] {
        let (code, _, err) = ufp(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(err.starts_with("error:"));
    }
}

#[test]
fn cap_exceeded_exits_three() {
    let (code, _, err) = ufp(&["info", "-d", "8", "-g", "(12345678),(12)", "--cap-group", "100"]);
    assert_eq!(code, 3);
    assert!(err.contains("cap"));
}

#[test]
fn failed_preconditions_exit_four() {
    let (code, _, err) = ufp(&["check", "thm45", "-d", "4", "-g", "(1234),(12)", "--gens-fprime", "(123)"]);
    assert_eq!(code, 4);
    assert!(err.contains("tower"));
}
