use std::io::Write;
use std::process::{Command, Output, Stdio};

fn gfgpda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfgpda")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--json"];
    full.extend(args);
    serde_json::from_slice(&gfgpda(&full).stdout).expect("valid JSON")
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("gfgpda-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn member_accepts_example_word() {
    let o = gfgpda(&["member", "zoo:example23", "acd;#"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("accepted"));
}

#[test]
fn member_rejects_outside_word() {
    let o = gfgpda(&["member", "zoo:example23", "a;b"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn all_odd_is_empty() {
    let o = gfgpda(&["empty", "zoo:allodd"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("empty"));
}

// figure1 accepts every word but is not good-for-games: the game is lost by player 2,
// so the only sound answer without a good-for-games claim is "inconclusive".
#[test]
fn figure1_universality_is_inconclusive() {
    let o = gfgpda(&["universal", "zoo:figure1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("inconclusive"));
}

#[test]
fn example23_is_not_universal() {
    let o = gfgpda(&["universal", "zoo:example23"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not universal"));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(gfgpda(&["bogus"]).status.code(), Some(2));
    assert_eq!(gfgpda(&["member", "zoo:example23"]).status.code(), Some(2));
    assert_eq!(gfgpda(&["member", "/nonexistent/file", "a;a"]).status.code(), Some(4));
    assert_eq!(gfgpda(&["member", "zoo:nosuch", "a;a"]).status.code(), Some(4));
    assert_eq!(gfgpda(&["member", "zoo:example23", "zz;q"]).status.code(), Some(4));
}

#[test]
fn tiny_budget_is_a_resource_error() {
    assert_eq!(gfgpda(&["--budget", "10", "solve", "zoo:counter"]).status.code(), Some(3));
}

#[test]
fn json_report_shape() {
    let v = json(&["member", "zoo:example23", "acd;#"]);
    assert_eq!(v["command"], "member");
    assert_eq!(v["verdict"], "accepted");
    assert_eq!(v["inputs"]["word"], "acd;#");
    assert!(v["witness"]["stem"].is_array());
    assert!(v["stats"]["time_ms"].is_number());
}

#[test]
fn json_is_stable_apart_from_timing() {
    let strip = |mut v: serde_json::Value| {
        v["stats"]["time_ms"] = serde_json::Value::Null;
        v
    };
    for args in [
        &["solve", "zoo:echo"][..],
        &["empty", "zoo:example23"],
        &["universal", "zoo:parity3"],
    ] {
        assert_eq!(strip(json(args)), strip(json(args)), "{args:?}");
    }
}

#[test]
fn zoo_dump_round_trips_through_member() {
    let out = tmp("example23.pda");
    let dump = gfgpda(&["zoo", "dump", "example23"]);
    assert_eq!(dump.status.code(), Some(0));
    std::fs::write(&out, &dump.stdout).unwrap();
    for (w, code) in [("acd;#", 0), ("a;b", 1)] {
        assert_eq!(gfgpda(&["member", &out, w]).status.code(), gfgpda(&["member", "zoo:example23", w]).status.code());
        assert_eq!(gfgpda(&["member", &out, w]).status.code(), Some(code));
    }
}

#[test]
fn zoo_list_names_fixtures_and_games() {
    let s = stdout(&gfgpda(&["zoo", "list"]));
    for name in ["figure1", "example23", "lss", "allodd", "echo", "counter"] {
        assert!(s.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn synth_then_play_wins() {
    let strat = tmp("counter.str");
    let o = gfgpda(&["synth", "zoo:counter", "-o", &strat]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = gfgpda(&["play", "zoo:counter", &strat, "--adam", "a;ab"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("player 2 wins"));
    let a = json(&["--seed", "3", "play", "zoo:counter", &strat, "--random", "20"]);
    let b = json(&["--seed", "3", "play", "zoo:counter", &strat, "--random", "20"]);
    assert_eq!(a["witness"], b["witness"]);
    assert_eq!(a["verdict"], b["verdict"]);
}

#[test]
fn figure1_has_no_strategy() {
    let o = gfgpda(&["synth", "zoo:figure1", "-o", &tmp("fig1.str")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn play_repl_reads_letters_until_quit() {
    let strat = tmp("echo.str");
    assert_eq!(gfgpda(&["synth", "zoo:echo", "-o", &strat]).status.code(), Some(0));
    let mut child = Command::new(env!("CARGO_BIN_EXE_gfgpda"))
        .args(["play", "zoo:echo", &strat])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"a\nb\na\n:quit\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(!o.stdout.is_empty());
}

#[test]
fn product_and_determinize_write_automata() {
    let dpa = tmp("ones.dpa");
    std::fs::write(&dpa, "state d\ninitial d\nletter 1\nletter 2\nletter 3\ntrans d 1 d 2\ntrans d 2 d 1\ntrans d 3 d 1\n").unwrap();
    let o = gfgpda(&["product", "zoo:parity3", &dpa, "--mode", "intersect"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = tmp("det.pda");
    assert_eq!(gfgpda(&["determinize", "zoo:example23", "zoo:example23", "-o", &out]).status.code(), Some(0));
    let v = json(&["validate", &out]);
    assert_eq!(v["witness"]["deterministic"], true, "{v}");
}
