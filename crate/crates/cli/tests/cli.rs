use std::process::{Command, Output};

fn symdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symdyn")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = symdyn(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p_column(csv: &str) -> Vec<usize> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('n') && !l.is_empty())
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn fixed_point_prefixes() {
    assert_eq!(stdout(&["fixed-point", "--kbonacci", "2", "--length", "8"]), "12112121\n");
    assert_eq!(stdout(&["fixed-point", "--kbonacci", "3", "--length", "7"]), "1213121\n");
    assert_eq!(stdout(&["fixed-point", "--kbonacci", "3", "--length", "0"]), "");
}

#[test]
fn fixed_point_of_a_json_morphism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"{"labels": ["a", "b"], "images": ["ab", "a"]}"#).unwrap();
    assert_eq!(stdout(&["fixed-point", "--morphism", path.to_str().unwrap(), "--length", "8"]), "abaababa\n");
    std::fs::write(&path, r#"{"images": ["12", ""]}"#).unwrap();
    assert_eq!(symdyn(&["fixed-point", "--morphism", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn complexity_tables() {
    let csv = stdout(&["complexity", "--kbonacci", "4", "--nmax", "20"]);
    assert!(csv.starts_with("n,p_n,prefix_len,stabilized,kn_plus_1\n"));
    assert_eq!(p_column(&csv), (1..=20).map(|n| 3 * n + 1).collect::<Vec<_>>());

    let csv = stdout(&["complexity", "--example", "circle", "--alpha", "0.6180339887498949", "--nmax", "30"]);
    assert_eq!(p_column(&csv), (1..=30).map(|n| n + 1).collect::<Vec<_>>());
}

#[test]
fn hexagon_complexity_agrees_across_seeds() {
    let csv = stdout(&["complexity", "--example", "hexagon", "--nmax", "10", "--seed", "1", "--seed", "2"]);
    let blocks: Vec<&str> = csv.split("\n\n").collect();
    assert_eq!(blocks.len(), 2);
    let expected: Vec<usize> = (1..=10).map(|n| n * n + n + 1).collect();
    for b in blocks {
        assert_eq!(p_column(b), expected);
        assert!(!b.contains("false"));
    }
}

#[test]
fn fractal_clouds() {
    let csv = stdout(&["fractal", "--kbonacci", "3", "--points", "1000"]);
    assert!(csv.starts_with("x1,x2,label\n"));
    let labels: std::collections::BTreeSet<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(labels.len(), 3);

    let csv = stdout(&["fractal", "--kbonacci", "2", "--points", "1000"]);
    assert!(csv.starts_with("x1,label\n"));
    assert_eq!(stdout(&["fractal", "--kbonacci", "3", "--points", "1"]), "x1,x2,label\n0,0,1\n");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cloud.bin");
    stdout(&["fractal", "--kbonacci", "3", "--points", "100", "--format", "bin", "--out", path.to_str().unwrap()]);
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..4], b"RZYC");
    let records = symdyn::substitution::read_binary_cloud(bytes.as_slice()).unwrap();
    assert_eq!(records.points.len(), 100);
}

#[test]
fn graphs() {
    let stats = |args: &[&str]| {
        let csv = stdout(args);
        csv.lines().nth(1).unwrap().split(',').map(|x| x.parse::<i64>().unwrap()).collect::<Vec<_>>()
    };
    // n, vertices, edges, components, dim_z, chi
    assert_eq!(stats(&["graph", "--kbonacci", "2", "--order", "1", "--format", "csv"]), vec![1, 2, 3, 1, 2, 2]);
    assert_eq!(stats(&["graph", "--kbonacci", "3", "--order", "4", "--format", "csv"]), vec![4, 9, 11, 1, 3, 3]);

    let text = stdout(&["graph", "--example", "four-vertex", "--format", "text"]);
    assert!(text.contains("dim Z = |E| - |V| + components = 6 - 4 + 1 = 3"));
    assert!(text.contains("e6 - e2 - e1"));
    assert!(text.contains("balance at vertex 1: 2 = 1 + 1"));

    let dot = stdout(&["graph", "--kbonacci", "2", "--order", "2"]);
    assert!(dot.starts_with("digraph"));
}

#[test]
fn code_orbit() {
    let csv = stdout(&["code-orbit", "--example", "circle", "--length", "3"]);
    assert_eq!(csv.lines().next(), Some("step,x1,cell"));
    assert_eq!(csv.lines().count(), 5);
    let text = stdout(&["code-orbit", "--example", "hexagon", "--length", "200", "--format", "text"]);
    assert_eq!(text.trim().len(), 201);
    assert!(text.trim().chars().all(|c| "123".contains(c)));
}

#[test]
fn verify_single_check_and_exit_codes() {
    let out = symdyn(&["verify", "--only", "graph-example"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS graph-example"));

    let json = stdout(&["verify", "--only", "graph-example", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["checks"][0]["computed"]["dimension"], 3);
    assert_eq!(v["checks"][0]["computed"]["vertex_1_balance"], "2 = 1 + 1");
    assert_eq!(json, stdout(&["verify", "--only", "graph-example", "--format", "json"]));

    assert_eq!(symdyn(&["verify", "--only", "nope"]).status.code(), Some(2));
    assert_eq!(symdyn(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(symdyn(&["fixed-point", "--kbonacci", "2", "--format", "dot"]).status.code(), Some(2));
}
