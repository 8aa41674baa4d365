use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("permspec-cli-tests-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn permspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permspec"))
        .args(args)
        .env_remove("PERMSPEC_CAP")
        .env_remove("PERMSPEC_N")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn worked_basis() -> PathBuf {
    scratch("worked.txt", "# worked class\n1243\n2413\n531642\n41352\n")
}

#[test]
fn spec_header_of_the_worked_class() {
    let b = worked_basis();
    let o = permspec(&["spec", "-b", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# permspec v1");
    assert_eq!(lines[1], "mode: disjoint");
    assert!(lines.contains(&"simples: 3 1 4 2"));
    assert!(lines.contains(&"root: C<1 2 4 3>()"));
}

#[test]
fn separable_counts() {
    let b = scratch("separable.txt", "2413\n3142\n");
    let o = permspec(&["count", "-N", "7", "-b", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.ends_with("7\t1806\n"));
}

#[test]
fn truncated_simples_refuse_a_spec() {
    let b = scratch("av123.txt", "123\n");
    let o = permspec(&["spec", "-b", b.to_str().unwrap(), "--cap", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    let o = permspec(&["simples", "-b", b.to_str().unwrap(), "--cap", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("status: truncated at 6\n"));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn cap_from_the_environment() {
    let b = scratch("av123-env.txt", "123\n");
    let o = Command::new(env!("CARGO_BIN_EXE_permspec"))
        .args(["simples", "-b", b.to_str().unwrap()])
        .env("PERMSPEC_CAP", "6")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("status: truncated at 6\n"));
}

#[test]
fn simples_of_the_worked_class() {
    let b = worked_basis();
    let o = permspec(&["simples", "-b", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "status: complete\nsearched: 6\ncount: 1\n3 1 4 2\n");
}

#[test]
fn invalid_inputs() {
    let bad = scratch("bad.txt", "1 2 2\n");
    assert_eq!(permspec(&["spec", "-b", bad.to_str().unwrap()]).status.code(), Some(3));
    let missing = "/nonexistent/basis.txt";
    assert_eq!(permspec(&["count", "-b", missing]).status.code(), Some(3));
    assert_eq!(permspec(&["frobnicate"]).status.code(), Some(3));
    let b = scratch("av132.txt", "132\n");
    let not_simple = scratch("notsimple.txt", "1 2 3 4\n");
    let o = permspec(&["spec", "-b", b.to_str().unwrap(), "-s", not_simple.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn simples_file_wins_with_a_warning() {
    let b = worked_basis();
    let s = scratch("simples.txt", "3142\n");
    let o = permspec(&["count", "-N", "6", "-b", b.to_str().unwrap(), "-s", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    assert!(stdout(&o).ends_with("6\t353\n"));
}

#[test]
fn non_antichain_basis_is_minimized() {
    let b = scratch("redundant.txt", "132\n1243\n");
    let o = permspec(&["count", "-N", "5", "-b", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("not an antichain"));
    assert!(stdout(&o).ends_with("5\t42\n"));
}

#[test]
fn spec_file_pipeline_is_reproducible() {
    let b = worked_basis();
    let spec = std::env::temp_dir().join(format!("permspec-cli-{}-worked.spec", std::process::id()));
    let o = permspec(&["spec", "-b", b.to_str().unwrap(), "-o", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let draw = |seed: &str| {
        let o = permspec(&[
            "sample",
            "--spec",
            spec.to_str().unwrap(),
            "-n",
            "9",
            "--count",
            "5",
            "--seed",
            seed,
        ]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    let first = draw("11");
    assert_eq!(first, draw("11"));
    assert_eq!(first.lines().count(), 5);
    for line in first.lines() {
        let values: Vec<usize> = line.split(' ').map(|v| v.parse().unwrap()).collect();
        assert_eq!(values.len(), 9);
    }
    let o = permspec(&["count", "--spec", spec.to_str().unwrap(), "-N", "8"]);
    assert!(stdout(&o).ends_with("8\t5971\n"));
}

#[test]
fn gf_and_json_outputs() {
    let b = scratch("sep-gf.txt", "2413\n3142\n");
    let o = permspec(&["gf", "-b", b.to_str().unwrap()]);
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "F{C<>()}(z) = z + F{C+<>()}(z)*F{C<>()}(z) + F{C-<>()}(z)*F{C<>()}(z)"
    );
    let o = permspec(&["count", "-N", "3", "--json", "-b", b.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "permspec/1");
    assert_eq!(v["counts"][2]["count"], "6");
    let o = permspec(&["spec", "--json", "-b", b.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["root"], "C<>()");
    assert_eq!(v["equations"].as_array().unwrap().len(), 3);
}

#[test]
fn boltzmann_sampling() {
    let b = scratch("av132-b.txt", "132\n");
    let o = permspec(&[
        "sample",
        "-b",
        b.to_str().unwrap(),
        "--boltzmann",
        "0.2",
        "--min",
        "3",
        "--max",
        "8",
        "--count",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines() {
        let n = line.split(' ').count();
        assert!((3..=8).contains(&n), "{line}");
    }
    let o = permspec(&["sample", "-b", b.to_str().unwrap(), "--boltzmann", "0.3", "-n", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn check_passes() {
    let b = scratch("av132-check.txt", "132\n");
    let o = permspec(&["check", "-b", b.to_str().unwrap(), "--max-size", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("all checks passed\n"));
    assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));
}
