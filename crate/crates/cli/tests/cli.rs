use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-bier"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn write_ideal(file: &Path, ids: impl IntoIterator<Item = usize>) {
    let body: String = ids.into_iter().map(|i| format!("{i}\n")).collect();
    fs::write(file, format!("# lower ranks\n{body}")).unwrap();
}

#[test]
fn census_of_m45() {
    let o = run(&["census", "--d", "4", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("f = 6 13 13 6"));
    assert!(text.contains("quads = 1"));
    assert!(text.contains("selfdual = ok"));
}

#[test]
fn mseq_exit_codes() {
    let bad = run(&["mseq", "--vector", "1,2,4"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("bound 3"));
    assert_eq!(run(&["mseq", "--vector", "1,7,2"]).status.code(), Some(0));
    assert_eq!(run(&["mseq", "--vector", "1,x"]).status.code(), Some(2));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = run(&["toric-g", "--poset", "/nonexistent/poset.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn bad_usage_exits_2() {
    assert_eq!(run(&["census", "--d", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["census", "--d", "1", "--n", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn caps_exit_3() {
    let o = run(&["census", "--d", "4", "--n", "5", "--max-elements", "10"]);
    assert_eq!(o.status.code(), Some(3));
    let dir = TempDir::new().unwrap();
    let m = path(&dir, "m.txt");
    run(&["multiplex", "--d", "4", "--n", "6", "--out", &m]);
    let o = run(&[
        "ideals",
        "--poset",
        &m,
        "--force-rank",
        "3",
        "--count",
        "--max-ideals",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn toric_g_of_written_multiplex() {
    let dir = TempDir::new().unwrap();
    let m = path(&dir, "m.txt");
    assert_eq!(
        run(&["multiplex", "--d", "4", "--n", "5", "--top", "--out", &m])
            .status
            .code(),
        Some(0)
    );
    let o = run(&["toric-g", "--poset", &m, "--strip-top"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("g = [1, 1]"));
    let o = run(&["verify", "selfdual", "--poset", &m]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bier_and_ideals_round_trip() {
    let dir = TempDir::new().unwrap();
    let m = path(&dir, "m.txt");
    run(&["multiplex", "--d", "4", "--n", "5", "--out", &m]);
    let o = run(&["ideals", "--poset", &m, "--force-rank", "3", "--count"]);
    assert_eq!(stdout(&o).trim(), "64");
    let o = run(&[
        "ideals",
        "--poset",
        &m,
        "--force-rank",
        "3",
        "--sample",
        "4",
        "--seed",
        "9",
    ]);
    assert_eq!(
        stdout(&o),
        stdout(&run(&[
            "ideals",
            "--poset",
            &m,
            "--force-rank",
            "3",
            "--sample",
            "4",
            "--seed",
            "9"
        ]))
    );

    let ideal = dir.path().join("i.txt");
    write_ideal(&ideal, 0..=32);
    let b = path(&dir, "b.txt");
    let o = run(&[
        "bier",
        "--poset",
        &m,
        "--ideal",
        ideal.to_str().unwrap(),
        "--out",
        &b,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        run(&["verify", "eulerian", "--poset", &b]).status.code(),
        Some(0)
    );
    let o = run(&["toric-g", "--poset", &b]);
    assert!(stdout(&o).contains("g = [1, 7, 2]"));
}

#[test]
fn ideal_that_is_not_closed_is_rejected() {
    let dir = TempDir::new().unwrap();
    let ideal = dir.path().join("i.txt");
    write_ideal(&ideal, [0, 7]);
    let o = run(&[
        "gbier",
        "--d",
        "4",
        "--n",
        "5",
        "--ideal",
        ideal.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gbier_minimum_ideal() {
    let dir = TempDir::new().unwrap();
    let ideal = dir.path().join("i.txt");
    write_ideal(&ideal, 0..=32);
    let o = run(&[
        "gbier",
        "--d",
        "4",
        "--n",
        "5",
        "--ideal",
        ideal.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("closed = [1, 7, 2]"));
    assert!(text.contains("closedform = ok"));
}

#[test]
fn el_build_and_verify() {
    let dir = TempDir::new().unwrap();
    let (p, l) = (path(&dir, "p.txt"), path(&dir, "l.txt"));
    assert_eq!(
        run(&[
            "el-build",
            "--d",
            "3",
            "--n",
            "5",
            "--out-poset",
            &p,
            "--out-labels",
            &l
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        run(&["verify", "el", "--poset", &p, "--labels", &l])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(run(&["verify", "el", "--poset", &p]).status.code(), Some(2));
}

#[test]
fn sweep_report() {
    let dir = TempDir::new().unwrap();
    let r = path(&dir, "r.txt");
    let o = run(&["sweep", "--d", "4", "--n", "5", "--report", &r]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&r).unwrap();
    assert_eq!(text.lines().count(), 65);
    assert!(text
        .lines()
        .last()
        .unwrap()
        .starts_with("# d=4 n=5 ideals=64 nonneg=64 mseq=64"));
}
