use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gmapper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmapper")).args(args).output().unwrap()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn summary(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_two_circles_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tc.csv");
    let o = gmapper(&["generate", "--dataset", "two_circles", "--seed", "7", "--out", path_str(&out)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x0,x1,label"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5000);
    assert!(rows.iter().all(|r| r.split(',').count() == 3));
}

#[test]
fn generate_rejects_empty_circle() {
    let dir = tempfile::tempdir().unwrap();
    let o = gmapper(&["generate", "--dataset", "circle", "--n", "0", "--out", path_str(&dir.path().join("c.csv"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid dataset"));
}

#[test]
fn generate_unwritable_path() {
    let o = gmapper(&["generate", "--dataset", "circle", "--n", "10", "--out", "/nonexistent/dir/c.csv"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(gmapper(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(gmapper(&["run", "--eps", "abc"]).status.code(), Some(1));
    assert_eq!(gmapper(&["run", "--cover", "gmapper", "--tau", "0.2"]).status.code(), Some(1));
    assert_eq!(gmapper(&["run", "--search", "sideways"]).status.code(), Some(1));
    assert_eq!(gmapper(&["--help"]).status.code(), Some(0));
}

#[test]
fn circle_uniform_cover() {
    let cfg = configs().join("circle_uniform.toml");
    let s = summary(&gmapper(&["run", "--config", path_str(&cfg), "--seed", "4"]));
    assert_eq!(s["n_nodes"], 4);
    assert_eq!(s["n_edges"], 4);
    assert_eq!(s["cycle_rank"], 1);
    assert_eq!(s["strategy"], "uniform");
}

#[test]
fn flags_alone_reproduce_circle_config() {
    let s = summary(&gmapper(&[
        "run", "--dataset", "circle", "--lens", "x0", "--normalize", "none", "--cover", "uniform", "--intervals", "3",
        "--gain", "0.2", "--eps", "0.1", "--min-pts", "5",
    ]));
    assert_eq!((s["n_nodes"].as_u64(), s["n_edges"].as_u64()), (Some(4), Some(4)));
}

#[test]
fn two_circles_config() {
    let cfg = configs().join("two_circles.toml");
    let s = summary(&gmapper(&["run", "--config", path_str(&cfg), "--seed", "1"]));
    let k = s["n_intervals"].as_u64().unwrap();
    assert!((7..=9).contains(&k), "{s}");
    assert_eq!(s["n_components"], 2);
    assert_eq!(s["cycle_rank"], 2);
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("two_circles.toml");
    let mut outputs = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        summary(&gmapper(&["run", "--config", path_str(&cfg), "--n", "1500", "--out", path_str(&out)]));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let graph: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
    assert!(graph["nodes"][0]["members"].is_array());
    assert_eq!(graph["provenance"]["cover"]["strategy"], "gmapper");
}

#[test]
fn no_members_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    summary(&gmapper(&["run", "--dataset", "circle", "--n", "800", "--out", path_str(&out), "--no-members"]));
    let graph: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    let node = &graph["nodes"][0];
    assert!(node.get("members").is_none());
    assert!(node["size"].as_u64().unwrap() > 0);
}

#[test]
fn export_dot_and_graphml() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("g.json");
    let cfg = configs().join("circle_uniform.toml");
    summary(&gmapper(&["run", "--config", path_str(&cfg), "--out", path_str(&json)]));

    let o = gmapper(&["export", path_str(&json), "--format", "dot"]);
    assert!(o.status.success());
    let dot = String::from_utf8(o.stdout).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 4);
    assert_eq!(dot.lines().filter(|l| l.contains(" -- ")).count(), 4);

    let xml = dir.path().join("g.graphml");
    assert!(gmapper(&["export", path_str(&json), "--format", "graphml", "--out", path_str(&xml)]).status.success());
    let text = std::fs::read_to_string(&xml).unwrap();
    assert_eq!(text.matches("<node ").count(), 4);
    assert_eq!(text.matches("<edge ").count(), 4);
}

#[test]
fn export_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"nodes\": [1,}").unwrap();
    let o = gmapper(&["export", path_str(&bad), "--format", "dot"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at byte"));
    let o = gmapper(&["export", path_str(&bad), "--format", "svg"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_rows() {
    let o = gmapper(&["bench", "--dataset", "two_circles", "--n", "2000", "--lens", "coord_sum", "--trials", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "dataset,n,dim,strategy,trials,mean_seconds,std_seconds,n_intervals");
    assert_eq!(lines.len(), 4);
    let strategies: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(strategies, ["gmapper", "fcm", "balanced"]);
    let counts: Vec<&str> = lines[1..].iter().map(|l| l.rsplit(',').next().unwrap()).collect();
    assert!(counts.iter().all(|c| *c == counts[0]), "{counts:?}");
    assert!(lines[1].starts_with("two_circles,2000,2,"));
}

#[test]
fn csv_dataset_with_labels() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pts.csv");
    let mut text = String::from("a,b,kind\n");
    for i in 0..200 {
        let t = i as f64 / 200.0 * std::f64::consts::TAU;
        text.push_str(&format!("{},{},{}\n", t.cos(), t.sin(), if i < 100 { "top" } else { "bottom" }));
    }
    std::fs::write(&csv, text).unwrap();
    let out = dir.path().join("g.json");
    summary(&gmapper(&[
        "run", "--dataset", path_str(&csv), "--label-column", "kind", "--lens", "column:a", "--cover", "uniform",
        "--intervals", "4", "--eps", "0.2", "--min-pts", "2", "--out", path_str(&out),
    ]));
    let graph: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert!(graph["nodes"][0]["labels"].as_object().unwrap().len() >= 1);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "a,b\n1,2\n3,x\n").unwrap();
    let o = gmapper(&["run", "--dataset", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 2, column `b`"));
}
