use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn permclosure(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permclosure"))
        .args(args)
        .env_remove("PERMCLOSURE_SEED")
        .output()
        .expect("binary runs")
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
fn check_reports_orders_and_bound() {
    let o = permclosure(&["check", path_str(&fixture("perm_aut.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("L_1=3 L_2=2 bound=54"), "{}", stdout(&o));
    assert!(stdout(&o).contains("(s0 s1)(s2)"));
}

#[test]
fn check_flags_non_permutation_letters() {
    let o = permclosure(&["check", path_str(&fixture("grid_aut.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("letter a1: not a permutation"));
}

#[test]
fn malformed_input_is_a_parse_error() {
    let o = permclosure(&["check", path_str(&fixture("malformed.json"))]);
    assert_eq!(o.status.code(), Some(1));
    let o = permclosure(&["check", "/nonexistent/automaton.json"]);
    assert_eq!(o.status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let extra = dir.path().join("extra.json");
    std::fs::write(
        &extra,
        r#"{"alphabet":["a"],"states":1,"start":0,"finals":[],"delta":[[0]],"initial":0}"#,
    )
    .unwrap();
    let o = permclosure(&["check", path_str(&extra)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("initial"));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"alphabet":["a"],"states":2,"start":0,"finals":[],"delta":[[0,2]]}"#)
        .unwrap();
    let o = permclosure(&["check", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("delta[0][1]"), "{}", stderr(&o));
}

#[test]
fn label_dumps() {
    let o = permclosure(&["labels", path_str(&fixture("perm_aut.json")), "--extent", "5,5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 25);
    assert!(out.lines().any(|l| l == "2\t1\ts0,s1,s2"));
    let o = permclosure(&["labels", path_str(&fixture("grid_aut.json")), "--extent", "5"]);
    assert!(stdout(&o).lines().any(|l| l == "1\t1\ts0,s2"));
    let o = permclosure(&["labels", path_str(&fixture("grid_aut.json")), "--extent", "1,1"]);
    assert_eq!(stdout(&o), "0\t0\ts0\n");
    let o = permclosure(&["labels", path_str(&fixture("grid_aut.json")), "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph"));
    let o = permclosure(&["labels", path_str(&fixture("grid_aut.json")), "--extent", "100000,100000"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn closure_writes_raw_automaton_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("closure.json");
    let o = permclosure(&[
        "closure",
        path_str(&fixture("perm_aut.json")),
        "--raw",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["profile", "raw_size", "minimized_size", "group_bound", "bound_respected", "stabilized"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert_eq!(report["raw_size"], 15);
    assert_eq!(report["group_bound"], 54);
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file["states"], 15);

    let o = permclosure(&["oracle-check", path_str(&out), path_str(&fixture("perm_aut.json")), "--max-len", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn closure_of_grid_example_does_not_stabilize() {
    let o = permclosure(&["closure", path_str(&fixture("grid_aut.json")), "--budget", "12"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line along"), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["stabilized"], false);
    assert!(report["group_bound"].is_null());
}

#[test]
fn closure_of_empty_language_accepts_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty.json");
    let o = permclosure(&["closure", path_str(&fixture("empty_lang.json")), "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file["finals"], serde_json::json!([]));
}

#[test]
fn outputs_are_deterministic() {
    let src = fixture("perm_aut.json");
    let a = permclosure(&["closure", path_str(&src)]);
    let b = permclosure(&["closure", path_str(&src)]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}

#[test]
fn decompose_summaries_and_dot_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = permclosure(&[
        "decompose",
        path_str(&fixture("grid_aut.json")),
        "--axis",
        "2",
        "--region",
        "4",
        "--out-dir",
        path_str(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = stdout(&o);
    assert!(table.contains("(3,0)\t4\t1\t5"), "{table}");
    let dot = std::fs::read_to_string(dir.path().join("chain_3_0.dot")).unwrap();
    for label in ["({s2}, 0)", "({s2}, 1)", "({s1,s2}, 2)", "({s0,s2}, 3)", "({s2}, 3)"] {
        assert!(dot.contains(label), "{label} missing from {dot}");
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 4);

    let o = permclosure(&["decompose", path_str(&fixture("perm_aut.json")), "--axis", "a1"]);
    assert_eq!(o.status.code(), Some(0));
    for row in stdout(&o).lines().skip(1).filter(|l| l.starts_with('(')) {
        let cols: Vec<&str> = row.split('\t').collect();
        assert!(cols[1].parse::<usize>().unwrap() <= 2);
        assert!(["1", "3"].contains(&cols[2]));
        assert_eq!(cols[4], "ok");
    }

    let o = permclosure(&["decompose", path_str(&fixture("perm_aut.json")), "--axis", "1", "--region", "1"]);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with('(')).count(), 1);
    let o = permclosure(&["decompose", path_str(&fixture("perm_aut.json")), "--axis", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn equivalence_and_minimization() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.json");
    let min = dir.path().join("min.json");
    let src = fixture("perm_aut.json");
    permclosure(&["closure", path_str(&src), "--raw", "--out", path_str(&raw)]);
    let o = permclosure(&["minimize", path_str(&raw), "--out", path_str(&min)]);
    assert_eq!(o.status.code(), Some(0));
    let o = permclosure(&["equiv", path_str(&raw), path_str(&min)]);
    assert_eq!(o.status.code(), Some(0));
    let o = permclosure(&["equiv", path_str(&src), path_str(&min)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("inequivalent"));
    let o = permclosure(&["equiv", path_str(&src), path_str(&fixture("grid_aut.json"))]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn jfa_conversion_passes_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("jfa.json");
    let src = fixture("perm_aut.json");
    let o = permclosure(&["jfa2dfa", path_str(&src), "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let o = permclosure(&["oracle-check", path_str(&out), path_str(&src)]);
    assert_eq!(o.status.code(), Some(0));
    let o = permclosure(&["jfa2dfa", path_str(&fixture("grid_aut.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_rejects_the_source_as_its_own_closure() {
    let src = fixture("perm_aut.json");
    let o = permclosure(&["oracle-check", path_str(&src), path_str(&src), "--max-len", "4"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).starts_with("counterexample: "));
    let o = permclosure(&["oracle-check", path_str(&src), "--max-len", "6"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn seed_flag_wins_over_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("jfa.json");
    let src = fixture("perm_aut.json");
    permclosure(&["jfa2dfa", path_str(&src), "--out", path_str(&out)]);
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_permclosure"));
        c.args(["oracle-check", path_str(&out), path_str(&src), "--max-len", "5"]);
        match env {
            Some(v) => c.env("PERMCLOSURE_SEED", v),
            None => c.env_remove("PERMCLOSURE_SEED"),
        };
        if let Some(f) = flag {
            c.args(["--seed", f]);
        }
        c.output().unwrap()
    };
    assert_eq!(run(Some("not-a-number"), None).status.code(), Some(1));
    assert_eq!(run(Some("not-a-number"), Some("7")).status.code(), Some(0));
    assert_eq!(run(Some("0xC0FFEE"), None).status.code(), Some(0));
}
