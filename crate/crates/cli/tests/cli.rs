use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sixteenons"))
}

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_reports_each_law() {
    let o = run(&["verify", "algebra", "--trials", "5", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("PASS algebra/left_cancellation: passed 5"));
    assert!(out.contains("all laws hold"));
}

#[test]
fn eval_golden_set() {
    let o = run(&["eval", path_str(&data("sets/powers_of_two.toml"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("ratio = 9/7  (approx 1.28571)"));
    assert!(out.contains("chain_holds = true"));
}

#[test]
fn eval_writes_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let o = run(&["eval", path_str(&data("sets/halves.toml")), "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert!(std::fs::read_to_string(out).unwrap().contains("[chain]"));
}

#[test]
fn mixed_signs_are_uncertified_unless_overridden() {
    let set = data("sets/mixed_sign.toml");
    let o = run(&["eval", path_str(&set)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("certification = uncertified: element"));
    assert!(out.contains("ratio = not computed"));

    let o = run(&["eval", path_str(&set), "--allow-uncertified"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("certification = uncertified"));
    assert!(out.contains("ball not applicable"));
    assert!(out.contains("\nratio = "));
}

#[test]
fn strict_counts_and_side_flags() {
    let set = data("sets/powers_of_two.toml");
    let out = stdout(&run(&["eval", path_str(&set), "--strict-counts", "--side", "left"]));
    assert!(out.contains("count_basis = strict"));
    assert!(out.contains("side = left"));
}

#[test]
fn degenerate_r_has_its_own_exit_code() {
    let o = run(&["eval", path_str(&data("sets/degenerate.toml"))]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("degenerate R"));
}

#[test]
fn validation_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(data("sets/powers_of_two.toml"))
        .unwrap()
        .replace("inverse_closed = false", "inverse_closed = true");
    std::fs::write(&bad, text).unwrap();
    let o = run(&["eval", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("inverse_closed"));

    let o = run(&["eval", path_str(&data("sets/powers_of_two.toml")), "--mode", "octonion"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["eval"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "x.toml", "--mode", "quaternion"]).status.code(), Some(2));
}

#[test]
fn missing_file_is_an_error() {
    let o = run(&["eval", "/nonexistent/set.toml"]);
    assert_eq!(o.status.code(), Some(3));
}

fn search(config: &Path, dir: &Path, tag: &str) -> (String, PathBuf) {
    let best = dir.join(format!("{tag}.best.toml"));
    let o = run(&["search", path_str(config), "--out", path_str(&best)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    (stdout(&o), best)
}

#[test]
fn search_is_reproducible_and_saves_a_reloadable_set() {
    let dir = tempfile::tempdir().unwrap();
    let config = data("search/small.toml");
    let (first, best) = search(&config, dir.path(), "a");
    let (second, _) = search(&config, dir.path(), "b");
    assert_eq!(first, second);
    assert!(first.contains("(approx "));

    let ratio_line = first.lines().find(|l| l.starts_with("ratio = ")).unwrap().to_string();
    let eval = stdout(&run(&["eval", path_str(&best)]));
    assert!(eval.contains(&ratio_line), "{ratio_line}");
}

#[test]
fn seed_override_changes_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = data("search/small.toml");
    let runs: Vec<String> = ["1", "2"]
        .iter()
        .map(|s| {
            let best = dir.path().join(format!("{s}.toml"));
            stdout(&run(&["search", path_str(&config), "--seed", s, "--out", path_str(&best)]))
        })
        .collect();
    assert!(runs[0].contains("seed = 1"));
    assert_ne!(runs[0], runs[1]);
}

#[test]
fn zero_iterations_and_history_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("zero.toml");
    std::fs::write(&config, "seed = 5\niterations = 0\nset_size = [3, 5]\nactive_coords = 1\n").unwrap();
    let history = dir.path().join("history.tsv");
    let o = run(&["search", path_str(&config), "--history", path_str(&history)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("zero.best.toml").exists());
    let table = std::fs::read_to_string(history).unwrap();
    assert_eq!(table.lines().count(), 2);
    assert!(table.lines().nth(1).unwrap().starts_with("0\tinitial\t"));
}

#[test]
fn malformed_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "seed = 5\niterations = 3\nset_size = [2, 5]\n").unwrap();
    let o = run(&["search", path_str(&config)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("set_size"));
}
