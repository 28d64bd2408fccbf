use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mgrq::generate::{grid, random_graph, RandomGraphSpec};
use mgrq::{load_graph, save_graph, CoordMode};
use serde_json::Value;
use tempfile::TempDir;

fn mgrq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgrq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = mgrq(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn triangle() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/triangle.cgn")
        .to_string_lossy()
        .into_owned()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn query_fixture_with_bidi_prints_two_entries() {
    let out = mgrq(&[
        "query",
        "--graph",
        &triangle(),
        "--start",
        "a",
        "--tau",
        "3",
        "--algo",
        "bidi",
    ]);
    assert!(out.status.success());
    let front: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    let labels: Vec<(f64, f64)> = front
        .iter()
        .map(|e| (e["cost"].as_f64().unwrap(), e["gain"].as_f64().unwrap()))
        .collect();
    assert_eq!(labels, vec![(2.0, 4.0), (3.0, 6.0)]);
    assert_eq!(front[0]["nodes"], serde_json::json!(["a", "b", "a"]));
    let stderr = String::from_utf8(out.stderr).unwrap();
    for key in ["nodes_visited=", "ways_expanded=", "wall_time_ms="] {
        assert!(stderr.contains(key), "{stderr}");
    }
}

#[test]
fn query_csv_output() {
    let csv = ok(&[
        "query",
        "--graph",
        &triangle(),
        "--start",
        "a",
        "--tau",
        "3",
        "--mode",
        "rc",
        "--k",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(csv, "cost,gain,node_path\n3,6,a>b>c>a\n");
}

#[test]
fn invalid_budget_is_a_usage_error() {
    for tau in ["0", "-1", "NaN"] {
        let out = mgrq(&[
            "query",
            "--graph",
            &triangle(),
            "--start",
            "a",
            "--tau",
            tau,
        ]);
        assert_eq!(out.status.code(), Some(2), "tau {tau}");
    }
    let out = mgrq(&["query", "--graph", &triangle(), "--start", "a"]);
    assert_eq!(out.status.code(), Some(2));
    let out = mgrq(&[
        "query",
        "--graph",
        &triangle(),
        "--start",
        "zz",
        "--tau",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = mgrq(&[
        "query",
        "--graph",
        &triangle(),
        "--start",
        "a",
        "--tau",
        "3",
        "--mode",
        "rc",
        "--k",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn load_failures_exit_with_3() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.cgn");
    let out = mgrq(&[
        "query",
        "--graph",
        path_str(&missing),
        "--start",
        "a",
        "--tau",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let bad = dir.path().join("bad.cgn");
    std::fs::write(&bad, "N a\nE a b 1 1\n").unwrap();
    let out = mgrq(&[
        "query",
        "--graph",
        path_str(&bad),
        "--start",
        "a",
        "--tau",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn rc_on_contracted_graph_is_refused() {
    let dir = TempDir::new().unwrap();
    let contracted = dir.path().join("c.cgn");
    ok(&[
        "convert",
        "--in",
        &data("chain.cgn"),
        "--out",
        path_str(&contracted),
    ]);
    let out = mgrq(&[
        "query",
        "--graph",
        path_str(&contracted),
        "--start",
        "a",
        "--tau",
        "6",
        "--mode",
        "rc",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("contracted"));
    let plain = ok(&[
        "query",
        "--graph",
        path_str(&contracted),
        "--start",
        "a",
        "--tau",
        "6",
        "--format",
        "csv",
    ]);
    assert_eq!(plain, "cost,gain,node_path\n6,2,a>b>a\n");
}

#[test]
fn uni_bidi_and_oracle_write_identical_files() {
    let dir = TempDir::new().unwrap();
    let spec = RandomGraphSpec::default();
    for seed in 0..12 {
        let graph = dir.path().join(format!("g{seed}.cgn"));
        save_graph(&random_graph(&spec, seed), &graph).unwrap();
        for mode in [
            ["--mode", "plain", "--k", "1"],
            ["--mode", "rc", "--k", "2"],
        ] {
            for format in ["json", "csv"] {
                let files: Vec<Vec<u8>> = ["uni", "bidi", "oracle"]
                    .iter()
                    .map(|algo| {
                        let out = dir.path().join(format!("{seed}-{algo}.{format}"));
                        let mut args = vec![
                            "query",
                            "--graph",
                            path_str(&graph),
                            "--start",
                            "n0",
                            "--tau",
                            "10",
                            "--algo",
                            algo,
                            "--format",
                            format,
                            "--out",
                            path_str(&out),
                        ];
                        args.extend_from_slice(&mode);
                        ok(&args);
                        std::fs::read(&out).unwrap()
                    })
                    .collect();
                assert_eq!(files[0], files[1], "seed {seed} {mode:?} {format}");
                assert_eq!(files[0], files[2], "seed {seed} {mode:?} {format}");
            }
        }
    }
}

#[test]
fn convert_contracts_chain_with_summed_attributes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c.cgn");
    ok(&[
        "convert",
        "--in",
        &data("chain.cgn"),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        "@mode none\n@contracted\nN a\nN b\nE a b 3 1\nE b a 3 1\n"
    );
}

#[test]
fn convert_keeping_every_node_preserves_topology() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("k.cgn");
    ok(&[
        "convert",
        "--in",
        &data("chain.cgn"),
        "--out",
        path_str(&out),
        "--keep",
        "a,m,b",
    ]);
    let before = load_graph(data("chain.cgn"), CoordMode::None).unwrap();
    let after = load_graph(&out, CoordMode::None).unwrap();
    assert!(!after.is_contracted());
    assert_eq!(after.num_nodes(), before.num_nodes());
    let pairs = |g: &mgrq::CostGainGraph| -> Vec<(String, String, f64)> {
        g.edges()
            .iter()
            .map(|e| {
                (
                    g.node(e.src).name.clone(),
                    g.node(e.dst).name.clone(),
                    e.cost,
                )
            })
            .collect()
    };
    assert_eq!(pairs(&after), pairs(&before));
    let gains: Vec<f64> = after.edges().iter().map(|e| e.gain).collect();
    assert_eq!(gains, vec![1.0, 0.0, 0.0, 1.0]);

    let out = mgrq(&[
        "convert",
        "--in",
        &data("chain.cgn"),
        "--out",
        path_str(&out),
        "--keep",
        "nope",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn convert_with_zero_threshold_clears_all_gains() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("z.cgn");
    ok(&[
        "convert",
        "--in",
        &triangle(),
        "--out",
        path_str(&out),
        "--gain-threshold-kmh",
        "0",
        "--keep",
        "a,b,c",
    ]);
    let g = load_graph(&out, CoordMode::None).unwrap();
    assert_eq!(g.num_edges(), 6);
    assert!(g.edges().iter().all(|e| e.gain == 0.0));
}

struct Row {
    algo: String,
    k: String,
    tau: f64,
    nodes_visited: usize,
    ways_expanded: usize,
    timed_out: bool,
}

fn parse_bench(csv: &str) -> Vec<Row> {
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "algo,mode,k,tau,time_ms,nodes_visited,ways_expanded,front_size,timed_out"
    );
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f.len(), 9, "{line}");
            Row {
                algo: f[0].into(),
                k: f[2].into(),
                tau: f[3].parse().unwrap(),
                nodes_visited: f[5].parse().unwrap(),
                ways_expanded: f[6].parse().unwrap(),
                timed_out: f[8].parse().unwrap(),
            }
        })
        .collect()
}

fn grid_file(dir: &TempDir, side: usize) -> PathBuf {
    let path = dir.path().join(format!("grid{side}.cgn"));
    save_graph(&grid(side, 4, 0.5), &path).unwrap();
    path
}

#[test]
fn bench_grid_sweep_orders_visited_nodes() {
    let dir = TempDir::new().unwrap();
    let graph = grid_file(&dir, 20);
    let csv = ok(&[
        "bench",
        "--graph",
        path_str(&graph),
        "--start",
        "r10c10",
        "--tau-min",
        "2",
        "--tau-max",
        "16",
        "--tau-step",
        "2",
        "--algos",
        "uni,bidi",
        "--mode",
        "plain",
        "--repeat",
        "1",
    ]);
    let rows = parse_bench(&csv);
    assert_eq!(rows.len(), 16);
    let (uni, bidi): (Vec<&Row>, Vec<&Row>) = rows.iter().partition(|r| r.algo == "uni");
    for series in [&uni, &bidi] {
        assert!(series
            .windows(2)
            .all(|w| w[0].nodes_visited <= w[1].nodes_visited));
        assert!(series.windows(2).all(|w| w[0].tau < w[1].tau));
    }
    for (u, b) in uni.iter().zip(&bidi) {
        assert_eq!(u.tau, b.tau);
        assert!(b.nodes_visited <= u.nodes_visited, "tau {}", u.tau);
        assert_eq!(u.k, "-");
        assert!(!u.timed_out && !b.timed_out);
    }
}

#[test]
fn k_sweep_counts_follow_pruning() {
    let dir = TempDir::new().unwrap();
    let graph = grid_file(&dir, 6);
    let sweep = |pruning: &str| {
        parse_bench(&ok(&[
            "bench",
            "--graph",
            path_str(&graph),
            "--start",
            "r3c3",
            "--tau-min",
            "8",
            "--tau-max",
            "8",
            "--tau-step",
            "1",
            "--algos",
            "uni,bidi",
            "--mode",
            "rc",
            "--k-list",
            "1,2,3,4,5,6",
            "--dominance-pruning",
            pruning,
            "--repeat",
            "1",
        ]))
    };
    let (on, off) = (sweep("true"), sweep("false"));
    for algo in ["uni", "bidi"] {
        let counts = |rows: &[Row]| -> Vec<usize> {
            rows.iter()
                .filter(|r| r.algo == algo)
                .map(|r| r.ways_expanded)
                .collect()
        };
        let (on, off) = (counts(&on), counts(&off));
        assert_eq!(on.len(), 6);
        assert!(off.windows(2).all(|w| w[0] <= w[1]), "{algo} {off:?}");
        assert!(off[5] > off[1], "{algo} {off:?}");
        assert!(on[1..].iter().all(|&c| c <= 2 * on[1]), "{algo} {on:?}");
        assert!(
            on.iter().zip(&off).all(|(a, b)| a <= b),
            "{algo} {on:?} {off:?}"
        );
    }
}

#[test]
fn empty_sweep_is_a_usage_error() {
    let base = ["bench", "--graph", &triangle(), "--start", "a"];
    for (min, max, step) in [("5", "4", "1"), ("1", "4", "0"), ("0", "4", "1")] {
        let mut args = base.to_vec();
        args.extend(["--tau-min", min, "--tau-max", max, "--tau-step", step]);
        assert_eq!(mgrq(&args).status.code(), Some(2), "{min} {max} {step}");
    }
    let mut args = base.to_vec();
    args.extend([
        "--tau-min",
        "1",
        "--tau-max",
        "4",
        "--tau-step",
        "1",
        "--mode",
        "rc",
        "--k-list",
        "",
    ]);
    assert_eq!(mgrq(&args).status.code(), Some(2));
}

fn without_time(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f.remove(4);
            f.join(",")
        })
        .collect()
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let graph = grid_file(&dir, 8);
    let bench = || {
        ok(&[
            "bench",
            "--graph",
            path_str(&graph),
            "--start",
            "r4c4",
            "--tau-min",
            "2",
            "--tau-max",
            "6",
            "--tau-step",
            "2",
            "--algos",
            "bidi,uni,oracle",
            "--mode",
            "rc",
            "--k-list",
            "2,1",
            "--repeat",
            "2",
        ])
    };
    let first = bench();
    assert_eq!(without_time(&first), without_time(&bench()));
    let order: Vec<(String, String)> = parse_bench(&first)
        .into_iter()
        .map(|r| (r.algo, r.k))
        .collect();
    assert_eq!(order[0], ("bidi".into(), "2".into()));
    assert_eq!(order[3], ("bidi".into(), "1".into()));
    assert_eq!(order[6], ("uni".into(), "2".into()));

    let query = || {
        ok(&[
            "query",
            "--graph",
            path_str(&graph),
            "--start",
            "r4c4",
            "--tau",
            "8",
        ])
    };
    assert_eq!(query(), query());
}

#[test]
fn gen_grid_writes_a_loadable_graph() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.cgn");
    ok(&[
        "gen-grid",
        "--side",
        "5",
        "--seed",
        "3",
        "--out",
        path_str(&out),
    ]);
    let g = load_graph(&out, CoordMode::None).unwrap();
    assert_eq!(g.num_nodes(), 25);
    assert_eq!(g.coord_mode(), CoordMode::Plane);
}
