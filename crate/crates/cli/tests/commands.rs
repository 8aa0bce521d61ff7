use std::fs;
use std::path::{Path, PathBuf};

use edgecolor_cli::run_command;

fn put(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&Path]) -> edgecolor_cli::Output {
    let mut argv = vec!["edgecolor".to_string()];
    argv.extend(args.iter().map(|a| a.to_string_lossy().into_owned()));
    run_command(argv)
}

fn s(x: &str) -> &Path {
    Path::new(x)
}

const FAT: &str = "mgraph 3\ne 0 1 2\ne 1 2 2\ne 2 0 2\n";

#[test]
fn gamma_of_a_single_edge_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(dir.path(), "g.txt", "mgraph 2\ne 0 1\n");
    let out = run(&[s("gamma"), &g]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "0\n");
}

#[test]
fn gamma_and_chi_of_small_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let fat = put(dir.path(), "fat.txt", FAT);
    assert_eq!(run(&[s("gamma"), &fat]).stdout, "6\n");
    assert_eq!(run(&[s("chi"), &fat]).stdout, "6\n");
    // C5 with one doubled edge: Γ = 2·6/4 = 3
    let c5 = put(dir.path(), "c5.txt", "mgraph 5\ne 0 1 2\ne 1 2\ne 2 3\ne 3 4\ne 4 0\n");
    assert_eq!(run(&[s("gamma"), &c5]).stdout, "3\n");
    let p5 = put(dir.path(), "p.txt", "mgraph 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 4 0\n");
    assert_eq!(run(&[s("gamma"), &p5]).stdout, "5/2\n");
    assert_eq!(run(&[s("chi"), &p5]).stdout, "3\n");
}

#[test]
fn extend_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(dir.path(), "g.txt", FAT);
    let p = put(dir.path(), "p.txt", "p 0 1\n");
    let out = run(&[s("extend"), &g, &p]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().count(), 6);
    assert!(out.stdout.starts_with("c 0 1\n"));
    let c = put(dir.path(), "c.txt", &out.stdout);
    let v = run(&[s("verify"), &g, &p, &c]);
    assert_eq!(v.code, 0);
    assert_eq!(v.stdout, "ok\n");

    let tampered = out.stdout.replacen("c 0 1", "c 0 2", 1);
    let t = put(dir.path(), "t.txt", &tampered);
    let v = run(&[s("verify"), &g, &p, &t]);
    assert_eq!(v.code, 1);
    assert!(v.stdout.contains("disagreement: edge 0"), "{}", v.stdout);
}

#[test]
fn extend_writes_output_and_trace_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(dir.path(), "g.txt", "mgraph 5\ne 0 1 2\ne 0 2 2\ne 0 3 2\ne 0 4 2\ne 1 2 2\ne 1 3 2\ne 1 4 2\ne 2 3 2\ne 2 4 2\ne 3 4 2\n");
    let p = put(dir.path(), "p.txt", "p 0 9\n");
    let c = dir.path().join("c.txt");
    let tr = dir.path().join("trace.json");
    let out = run(&[s("extend"), &g, &p, s("--output"), &c, s("--trace"), &tr]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("fallback: none"));
    let coloring = fs::read_to_string(&c).unwrap();
    let replayed = run(&[s("trace"), &g, &tr]);
    assert_eq!(replayed.code, 0, "{}", replayed.stderr);
    assert_eq!(replayed.stdout, coloring);

    let again = dir.path().join("trace2.json");
    run(&[s("extend"), &g, &p, s("--output"), &dir.path().join("c2.txt"), s("--trace"), &again]);
    assert_eq!(fs::read(&tr).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn oracle_only_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(dir.path(), "g.txt", FAT);
    let p = put(dir.path(), "p.txt", "p 0 6\n");
    let out = run(&[s("extend"), &g, &p, s("--strategy"), s("oracle-only")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let c = put(dir.path(), "c.txt", &out.stdout);
    assert_eq!(run(&[s("verify"), &g, &p, &c]).code, 0);
}

#[test]
fn color_reports_palette_use() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(dir.path(), "g.txt", FAT);
    let out = run(&[s("color"), &g]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("# colors used: 6 of Δ+μ = 6\n"));
    assert_eq!(out.stdout.lines().filter(|l| l.starts_with("c ")).count(), 6);
}

#[test]
fn dense_lists_vertex_sets() {
    let dir = tempfile::tempdir().unwrap();
    // two fat triangles, each missing one edge: χ' = 5 = Δ + 1
    let g = put(
        dir.path(),
        "g.txt",
        "mgraph 6\ne 0 1\ne 1 2 2\ne 2 0 2\ne 3 4\ne 4 5 2\ne 5 3 2\n",
    );
    let out = run(&[s("dense"), &g, s("--k"), s("5")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "0 1 2\n3 4 5\n");
    let bad = run(&[s("dense"), &g, s("--k"), s("4")]);
    assert_eq!(bad.code, 2);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let looped = put(dir.path(), "l.txt", "mgraph 2\ne 0 0\n");
    let out = run(&[s("gamma"), &looped]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 2"), "{}", out.stderr);

    let g = put(dir.path(), "g.txt", FAT);
    // two adjacent edges are not a distance-3 matching
    let p = put(dir.path(), "p.txt", "p 0 1\np 2 2\n");
    assert_eq!(run(&[s("extend"), &g, &p]).code, 2);
    let p = put(dir.path(), "p2.txt", "p 0 7\n");
    assert_eq!(run(&[s("extend"), &g, &p]).code, 2);
    assert_eq!(run(&[s("gamma"), &dir.path().join("missing.txt")]).code, 2);
    assert_eq!(run(&[s("nonsense")]).code, 2);
}

#[test]
fn gen_is_seeded() {
    let a = run(&[s("gen"), s("--seed"), s("5")]);
    let b = run(&[s("gen"), s("--seed"), s("5")]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let g = edgecolor_cli::io::parse_graph_file(&a.stdout).unwrap();
    assert_eq!(g.vertex_count(), 6);
    assert!(g.max_multiplicity() <= 3);
}
