use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrpc-sim")).args(args).output().expect("binary runs")
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 6);
}

#[test]
fn bound_table() {
    let out = run(&["bound", "--ring", "Z4", "--ext", "m=20", "--n", "20", "--k", "8", "--lambda", "2", "--t", "0..2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "t,bound_success\n0,1.000000\n1,0.999260\n2,0.996220\n");
}

#[test]
fn simulate_to_stdout() {
    let out = run(&[
        "simulate", "--ring", "Z6 ext m=6", "--n", "6", "--k", "2", "--lambda", "2", "--t", "1", "--trials", "20",
        "--precision", "3", "--with-external-bound",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].ends_with("wall_ms,external_bound"));
    assert_eq!(lines[1].split(',').nth(3).unwrap().len(), 5);
}

#[test]
fn parse_errors_are_reported() {
    let out = run(&["simulate", "--ring", "Q4", "--ext", "m=4", "--n", "4", "--k", "2", "--lambda", "2", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 0: expected"));
}
