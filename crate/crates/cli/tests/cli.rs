use std::io::Write;
use std::process::{Command, Output, Stdio};

fn vc(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_vc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(spec: &str) -> String {
    let o = vc(&["gen", spec], None);
    assert!(o.status.success());
    stdout(&o)
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn triangle_from_stdin() {
    let o = vc(&["solve", "-", "--json", "-"], Some(&gen("complete:3")));
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["cover"], serde_json::json!([1, 2]));
    assert_eq!(r["f1"], "2");
    assert_eq!(r["certificate"]["xi"], "0");
}

#[test]
fn edge_list_input_is_detected() {
    let o = vc(&["solve", "-", "--json", "-"], Some("1 2\n2 3\n3 4\n"));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["cover_size"], 2);
}

#[test]
fn odd_cycle_cover() {
    let o = vc(&["solve", "-", "--json", "-"], Some(&gen("cycle:7")));
    let r = json(&o);
    assert_eq!(r["cover_size"], 4);
    assert_eq!(r["f1"], "4");
}

#[test]
fn petersen_exact() {
    let o = vc(&["exact", "-"], Some(&gen("petersen")));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("optimum 6"), "{}", stdout(&o));
}

#[test]
fn exact_all_lists_every_optimum() {
    let o = vc(&["exact", "-", "--all"], Some(&gen("cycle:5")));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("optimum 3"));
}

#[test]
fn compare_small_graphs() {
    let k2 = vc(&["compare", "-", "--json", "-"], Some("1 2\n"));
    assert_eq!(k2.status.code(), Some(0));
    let r = json(&k2);
    assert_eq!(r["elp"], 1);
    assert_eq!(r["matching"], 2);
    assert_eq!(r["nt_rounding"], 1);
    assert_eq!(r["opt"], 1);

    let k3 = vc(&["compare", "-", "--json", "-"], Some(&gen("complete:3")));
    let r = json(&k3);
    assert_eq!(r["elp"], 2);
    assert_eq!(r["matching"], 2);
    assert_eq!(r["nt_rounding"], 3);
    assert_eq!(r["opt"], 2);
}

#[test]
fn unreadable_input_exits_2() {
    let o = vc(&["solve", "-"], Some("1 x\n"));
    assert_eq!(o.status.code(), Some(2));
    let o = vc(&["solve", "/nonexistent/graph.col"], None);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn base_mode_failure_exits_3() {
    let g = gen("random-tf:18:0.31:468");
    let o = vc(&["solve", "-", "--mode", "base"], Some(&g));
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--mode enhanced"));
    let o = vc(&["solve", "-"], Some(&g));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn cap_exceeded_exits_4() {
    let o = vc(&["exact", "-", "--cap", "5"], Some(&gen("petersen")));
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn json_report_is_deterministic() {
    let g = gen("torus:5x5");
    let a = vc(&["solve", "-", "--json", "-"], Some(&g));
    let b = vc(&["solve", "-", "--json", "-"], Some(&g));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["cover_size"], 15);
}

#[test]
fn hunt_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = vc(&["hunt", "--n-range", "6..9", "--trials", "12", "--seed", "4", "--jobs", "2", "--out", out], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("hunt.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("hunt.json")).unwrap()).unwrap();
    assert_eq!(summary["schema"], 1);
}
