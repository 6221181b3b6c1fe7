use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tight-design"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn build(dir: &Path, anchors: &str) -> String {
    let o = run(dir, &["build", "--anchors", anchors]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    fs::read_to_string(dir.join("design.txt")).unwrap()
}

/// Drops the last point of the outer layer and fixes up the counts in the headers.
fn delete_one_point(design: &str) -> String {
    let mut lines: Vec<String> = design.lines().map(str::to_string).collect();
    lines.pop();
    lines[0] = lines[0].replace("count=2300", "count=2299");
    let last_header = lines.iter().rposition(|l| l.starts_with("# layer")).unwrap();
    lines[last_header] = lines[last_header].replace("count=2025", "count=2024");
    lines.join("\n") + "\n"
}

#[test]
fn deleted_point_fails_on_cardinality_first() {
    let dir = tempfile::tempdir().unwrap();
    let design = build(dir.path(), "canonical");
    let file = dir.path().join("short.txt");
    fs::write(&file, delete_one_point(&design)).unwrap();
    let o = run(dir.path(), &["verify-design", "--input", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("first failed claim: design/cardinality"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report-design.json")).unwrap()).unwrap();
    let first_fail = report["claims"].as_array().unwrap().iter().find(|c| c["pass"] == false).unwrap();
    assert_eq!(first_fail["claim"], "design/cardinality");
    assert_eq!(first_fail["computed"], "2299");
}

#[test]
fn alternate_anchors_give_the_same_tensor() {
    let canon = tempfile::tempdir().unwrap();
    let alt = tempfile::tempdir().unwrap();
    for (dir, anchors) in [(&canon, "canonical"), (&alt, "alt")] {
        let design = build(dir.path(), anchors);
        let input = dir.path().join("design.txt");
        let o = run(dir.path(), &["verify-coherent", "--input", input.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert_eq!(fs::read_to_string(&input).unwrap(), design, "reports must not overwrite the design file");
    }
    let a = fs::read_to_string(canon.path().join("tensor.txt")).unwrap();
    let b = fs::read_to_string(alt.path().join("tensor.txt")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn both_enumerators_build_the_same_design() {
    let fp = tempfile::tempdir().unwrap();
    let sf = tempfile::tempdir().unwrap();
    build(fp.path(), "canonical");
    let o = run(sf.path(), &["build", "--enumerator", "shape-filter"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for file in ["design.txt", "inner-shell.txt", "outer-shell.txt"] {
        assert_eq!(fs::read(fp.path().join(file)).unwrap(), fs::read(sf.path().join(file)).unwrap(), "{file}");
    }
    assert_eq!(run(sf.path(), &["build", "--enumerator", "nope"]).status.code(), Some(2));
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let one = tempfile::tempdir().unwrap();
    let many = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&one, "1"), (&many, "4")] {
        let o = run(dir.path(), &["verify-design", "--threads", threads, "--float-oracle", "--seed", "3"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("report-design.json")).unwrap();
    assert_eq!(read(&one), read(&many));
    assert!(one.path().join("timings.json").exists());
}

#[test]
fn usage_and_io_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["verify-design", "--anchors", "1,2;3"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["verify-design", "--input", "/nonexistent/design.txt"]).status.code(), Some(2));
    let garbled = dir.path().join("garbled.txt");
    fs::write(&garbled, "# leech-scaled8 design layers=2 count=2300 dim=22\nnot a point\n").unwrap();
    assert_eq!(run(dir.path(), &["verify-design", "--input", garbled.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["no-such-command"]).status.code(), Some(2));
}
