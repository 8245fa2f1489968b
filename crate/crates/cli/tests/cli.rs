use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn pda(args: &[&str]) -> Output {
    pda_with(args, None, &[])
}

fn pda_with(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pda"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .env_remove("PDA_SEARCH_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn pda");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().expect("pda output")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{l}: {e}")))
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn construct_pipes_into_verify() {
    let made = pda(&["construct", "mn", "--f", "4", "--z", "2"]);
    assert_eq!(made.status.code(), Some(0));
    let checked = pda_with(&["verify", "-", "--z", "2"], Some(&stdout(&made)), &[]);
    assert_eq!(checked.status.code(), Some(0));
    let line = &json_lines(&checked)[0];
    assert_eq!(line["valid"], true);
    assert_eq!((line["params"]["k"].as_u64(), line["params"]["s"].as_u64()), (Some(6), Some(4)));
}

#[test]
fn corner_violation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "broken.pda", "#PDA v1\nK=2 F=2 Z=0 S=2\n0 1\n1 0\n");
    let o = pda(&["verify", &path]);
    assert_eq!(o.status.code(), Some(1));
    let line = &json_lines(&o)[0];
    let kinds: Vec<&str> = line["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"CornerViolation"));
}

#[test]
fn malformed_input_is_invalid_not_a_crash() {
    let o = pda_with(&["verify", "-"], Some("#PDA v1\nK=2 F=2 Z=1 S=1\n* 0\n"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_lines(&o)[0]["valid"], false);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["construct", "mn", "--f", "4"],
        vec!["construct", "mn", "--f", "4", "--z", "4"],
        vec!["search", "maxk", "--f", "3", "--z", "1", "--s", "4", "--budget", "soon"],
        vec!["bound", "--f", "4", "--z", "2"],
        vec!["catalog", "--z", "1", "--f", "3", "--s-max", "4"],
        vec!["verify", "/nonexistent/file.pda"],
    ] {
        let o = pda(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(pda(&["--help"]).status.code(), Some(0));
}

#[test]
fn recipe_goes_to_stdout_and_grid_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.pda");
    let o = pda(&["construct", "opt2", "--f", "5", "--s", "13", "--recipe", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let recipe = &json_lines(&o)[0];
    assert_eq!(recipe["name"], "optimal_fz2");
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("#PDA v1\nK=24 F=5 Z=3 S=13\n"));
}

#[test]
fn transforms_compose_through_pipes() {
    let base = stdout(&pda(&["construct", "opt2", "--f", "4", "--s", "6"]));
    let t = stdout(&pda_with(&["transform", "transpose", "-"], Some(&base), &[]));
    let back = stdout(&pda_with(&["transform", "transpose", "-"], Some(&t), &[]));
    assert_eq!(back, base);
    let d = stdout(&pda_with(&["transform", "dual", "-"], Some(&base), &[]));
    assert!(d.contains("K=8 F=6 Z=4 S=4"));
    let dd = stdout(&pda_with(&["transform", "dual", "-"], Some(&d), &[]));
    assert_eq!(dd, base);
    for perm in ["r,c,s", "c,r,s", "s,c,r", "r,s,c", "c,s,r", "s,r,c"] {
        let o = pda_with(&["transform", "role", "-", "--perm", perm], Some(&base), &[]);
        assert_eq!(o.status.code(), Some(0), "{perm}");
        let v = pda_with(&["verify", "-"], Some(&stdout(&o)), &[]);
        assert_eq!(v.status.code(), Some(0), "{perm}");
    }
    let rep = stdout(&pda_with(&["transform", "replicate", "-", "--m", "2"], Some(&base), &[]));
    assert!(rep.contains("K=16 F=4 Z=2 S=12"));
    let sub = stdout(&pda_with(
        &["transform", "subgrid", "-", "--rows", "0,1,2", "--cols", "0,1", "--compact"],
        Some(&base),
        &[],
    ));
    assert_eq!(pda_with(&["verify", "-"], Some(&sub), &[]).status.code(), Some(0));
    let perm = stdout(&pda_with(
        &["transform", "permute", "-", "--rows", "3,2,1,0"],
        Some(&base),
        &[],
    ));
    assert_eq!(pda_with(&["verify", "-", "--z", "2"], Some(&perm), &[]).status.code(), Some(0));
}

#[test]
fn concat_reads_two_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.pda", &stdout(&pda(&["construct", "mn", "--f", "3", "--z", "1"])));
    let b = write(dir.path(), "b.pda", &stdout(&pda(&["construct", "opt2", "--f", "3", "--s", "5"])));
    let o = pda(&["transform", "concat", &a, &b]);
    assert!(stdout(&o).contains("K=7 F=3 Z=1 S=8"));
}

#[test]
fn bounds_and_refutation() {
    let o = pda(&["bound", "--k", "4", "--f", "2", "--z", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines[0]["kind"], "lower_s_sum_f");
    assert_eq!(lines[0]["value"], 8);

    let refuted = pda(&["bound", "--f", "4", "--s", "5", "--z", "F-2", "--refute", "8"]);
    assert_eq!(refuted.status.code(), Some(1));
    assert_eq!(json_lines(&refuted)[0]["refuted"], true);
    let kept = pda(&["bound", "--f", "4", "--s", "5", "--z", "f-2", "--refute", "6"]);
    assert_eq!(kept.status.code(), Some(0));

    let k = pda(&["bound", "--f", "7", "--s", "10", "--z", "5"]);
    let lines = json_lines(&k);
    let conj = lines.iter().find(|l| l["kind"] == "conjectured_k").unwrap();
    assert_eq!((conj["value"].as_u64(), conj["certified"].as_bool()), (Some(27), Some(false)));
}

#[test]
fn search_reports_and_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.pda");
    let o = pda(&["search", "maxk", "--f", "4", "--z", "2", "--s", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let line = &json_lines(&o)[0];
    assert_eq!((line["optimum"].as_u64(), line["exhausted"].as_bool()), (Some(9), Some(true)));
    for key in ["nodes", "elapsed"] {
        assert!(line.get(key).is_some());
    }
    let w = pda(&["verify", out.to_str().unwrap(), "--z", "2"]);
    assert_eq!(w.status.code(), Some(0));

    let m = pda(&["search", "mins", "--k", "6", "--f", "4", "--z", "2", "--threads", "2"]);
    assert_eq!(json_lines(&m)[0]["optimum"], 4);
}

#[test]
fn budget_from_environment() {
    let bad = pda_with(&["search", "maxk", "--f", "3", "--z", "1", "--s", "4"], None, &[("PDA_SEARCH_BUDGET", "never")]);
    assert_eq!(bad.status.code(), Some(2));
    let ok = pda_with(&["search", "maxk", "--f", "3", "--z", "1", "--s", "4"], None, &[("PDA_SEARCH_BUDGET", "5s")]);
    assert_eq!(json_lines(&ok)[0]["optimum"], 3);
    // the flag wins over the environment
    let flag = pda_with(
        &["search", "maxk", "--f", "3", "--z", "1", "--s", "4", "--budget", "5s"],
        None,
        &[("PDA_SEARCH_BUDGET", "never")],
    );
    assert_eq!(flag.status.code(), Some(0));
}

#[test]
fn simulate_single_and_exhaustive() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "m.pda", &stdout(&pda(&["construct", "mn", "--f", "4", "--z", "2"])));
    let o = pda(&["simulate", "--pda", &path, "--files", "3", "--demands", "0,1,2,0,1,2", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let line = &json_lines(&o)[0];
    assert_eq!((line["rate"].as_str(), line["broadcasts"].as_u64()), (Some("1"), Some(4)));
    assert_eq!(line["decoded_all"], true);

    let all = pda(&["simulate", "--pda", &path, "--files", "2", "--all-demands"]);
    assert_eq!(json_lines(&all)[0]["assignments"], 64);

    let broken = write(dir.path(), "b.pda", "#PDA v1\nK=2 F=2 Z=0 S=2\n0 1\n1 0\n");
    let o = pda(&["simulate", "--pda", &broken, "--files", "2", "--all-demands"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_lines(&o)[0]["decoded_all"], false);

    let wrong = pda(&["simulate", "--pda", &path, "--files", "2", "--demands", "0,1"]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn decompose_writes_both_parts() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "o.pda", &stdout(&pda(&["construct", "opt2", "--f", "7", "--s", "31"])));
    let block = dir.path().join("block.pda");
    let rest = dir.path().join("rest.pda");
    let o = pda(&[
        "decompose",
        &path,
        "--block-out",
        block.to_str().unwrap(),
        "--rest-out",
        rest.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let line = &json_lines(&o)[0];
    assert_eq!(line["block"]["k"], 21);
    assert_eq!(line["remainder"]["k"], 69);
    assert_eq!(line["remainder"]["s"], 24);
    assert_eq!(pda(&["verify", rest.to_str().unwrap(), "--z", "5"]).status.code(), Some(0));

    let small = write(dir.path(), "s.pda", &stdout(&pda(&["construct", "opt2", "--f", "7", "--s", "10"])));
    let o = pda(&["decompose", &small]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m >"));
}

#[test]
fn catalog_rows() {
    let o = pda(&["catalog", "--z", "f-2", "--f", "2..4", "--s-max", "7", "--budget", "20s"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json_lines(&o);
    assert_eq!(rows.len(), 21);
    for r in &rows {
        if r["k_search"].is_u64() {
            assert_eq!(r["agree"], true, "{r}");
        }
        if r["f"] == 2 {
            assert_eq!(r["k_formula"].as_u64(), Some(r["s"].as_u64().unwrap() / 2));
        }
    }
    let open = pda(&["catalog", "--f", "7", "--s-min", "10", "--s-max", "10", "--no-search"]);
    let r = &json_lines(&open)[0];
    assert_eq!((r["k_formula"].as_u64(), r["certified"].as_bool()), (Some(27), Some(false)));
    assert!(r["k_search"].is_null());
}

#[test]
fn json_mirror_is_accepted() {
    let o = pda_with(&["verify", "-"], Some(r#"{"k":2,"f":2,"z":1,"s":1,"rows":[["*",0],[0,"*"]]}"#), &[]);
    assert_eq!(o.status.code(), Some(0));
}
