mod support;

use std::path::PathBuf;
use std::process::{Command, Output};

fn hybridls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hybridls")).args(args).env("HYBRIDLS_LOG", "error").output().unwrap()
}

fn corpus(name: &str) -> String {
    support::corpus_path(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hybridls-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_clean_file_is_silent() {
    let o = hybridls(&["check", &corpus("ping_pong.rt")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn check_reports_one_line_per_diagnostic() {
    let path = scratch("e102.rt");
    std::fs::write(&path, "model M {\ncapsule C {\n  port p : Nowhere;\n}\n}\n").unwrap();
    let o = hybridls(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), format!("{}:3:3: E102 unresolved reference 'Nowhere'\n", path.display()));
}

#[test]
fn check_missing_file_is_an_environment_error() {
    assert_eq!(hybridls(&["check", "/nonexistent/x.rt"]).status.code(), Some(2));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let o = hybridls(&["check", "--bogus", &corpus("toggle.rt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn fmt_prints_canonical_text() {
    let canonical = std::fs::read_to_string(support::corpus_path("ping_pong.rt")).unwrap();
    let o = hybridls(&["fmt", &corpus("ping_pong.rt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), canonical);

    let o = hybridls(&["fmt", &corpus("messy.rt")]);
    assert_eq!(o.status.code(), Some(0));
    let messy = std::fs::read_to_string(support::corpus_path("messy.rt")).unwrap();
    assert_ne!(stdout(&o), messy);
    assert_eq!(hybridls_core::parse(&stdout(&o)).model, hybridls_core::parse(&messy).model);
}

#[test]
fn fmt_check_and_write() {
    assert_eq!(hybridls(&["fmt", "--check", &corpus("toggle.rt")]).status.code(), Some(0));
    let path = scratch("messy.rt");
    std::fs::copy(support::corpus_path("messy.rt"), &path).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(hybridls(&["fmt", "--check", p]).status.code(), Some(3));
    assert_eq!(hybridls(&["fmt", "--write", p]).status.code(), Some(0));
    assert_eq!(hybridls(&["fmt", "--check", p]).status.code(), Some(0));
    assert_eq!(hybridls(&["fmt", &corpus("invalid/syntax_error.rt")]).status.code(), Some(1));
}

#[test]
fn views_lists_in_order() {
    let o = hybridls(&["views", &corpus("ping_pong.rt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
    assert_eq!(stdout(&hybridls(&["views", &corpus("empty.rt")])), "root\n");
    assert_eq!(hybridls(&["views", &corpus("invalid/syntax_error.rt")]).status.code(), Some(1));
}

fn render(file: &str, view: &str, extra: &[&str]) -> (Option<i32>, String) {
    let out = scratch(&format!("{}.svg", view.replace([':', '/', '.'], "_")));
    let mut args = vec!["render", file, "--view", view, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = hybridls(&args);
    (o.status.code(), std::fs::read_to_string(&out).unwrap_or_default())
}

#[test]
fn render_behavior_view() {
    let (code, svg) = render(&corpus("toggle.rt"), "behavior:Toggle.Switch", &[]);
    assert_eq!(code, Some(0));
    assert_eq!(svg.matches("<rect").count(), 3);
    assert_eq!(svg.matches("<path").count(), 2);
    let (_, again) = render(&corpus("toggle.rt"), "behavior:Toggle.Switch", &[]);
    assert_eq!(svg, again);
}

#[test]
fn render_reach_tree_with_depth() {
    let (code, svg) = render(&corpus("ping_pong.rt"), "analysis:reachtree:PingPong.Controller", &["--depth", "3"]);
    assert_eq!(code, Some(0));
    assert_eq!(svg.matches("<rect").count(), 4);
    assert_eq!(svg.matches(">Idle</text>").count(), 2);
}

#[test]
fn render_unknown_view_fails() {
    let out = scratch("bad.svg");
    let o = hybridls(&["render", &corpus("ping_pong.rt"), "--view", "structure:PingPong.Nope", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("structure:PingPong.Controller"));
}
