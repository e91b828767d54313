//! End-to-end runs of the `jchain` binary: output shape and exit codes.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn jchain(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_jchain"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn params_report_and_json() {
    let o = jchain(&["params", "2", "3", "4", "8", "--delta", "1", "--i", "15", "--report"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "u=1, d=12, e=18, L=x+y, u_E=2, v_E=6, u_F=4, v_F=7");

    let o = jchain(&["params", "2", "3", "4", "8", "--i", "16"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["L"], "x+1");
    assert_eq!(v["d"], 8);
}

#[test]
fn precondition_errors_exit_one() {
    let o = jchain(&["params", "2", "3", "4", "8", "--i", "5"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));

    let o = jchain(&["params", "2", "3"], None);
    assert_eq!(o.status.code(), Some(1));

    let o = jchain(&["valqui", "--a", "2", "--b", "4", "--f", "x^3", "--g", "x^2"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn magnus_residual_exits_two() {
    let o = jchain(&["magnus", "--f", "x^2 + x*y + 1", "--g", "(x^2 + x*y + 1)^2 + x"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generated_pair_feeds_the_pipeline() {
    let gen = jchain(&["gen", "--kind", "bracket_zero_pair", "--seed", "3", "--params", "2", "3", "2", "4", "--density", "1"], None);
    assert_eq!(gen.status.code(), Some(0));
    let pair = stdout(&gen);
    let run = jchain(&["pipeline", "--params", "2", "3", "2", "4"], Some(&pair));
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let again = jchain(&["pipeline", "--params", "2", "3", "2", "4"], Some(&pair));
    assert_eq!(stdout(&run), stdout(&again));
    let v: serde_json::Value = serde_json::from_str(&stdout(&run)).unwrap();
    assert!(v.is_object());
}

#[test]
fn valqui_reads_expressions_from_stdin() {
    let o = jchain(&["valqui", "--a", "2", "--b", "3", "--report"], Some(r#"{"F": "x^3 + y", "G": "x^2 + 2*y"}"#));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("C = x + (y)*x^(-1)"));
}
