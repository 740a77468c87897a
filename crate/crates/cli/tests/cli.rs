use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn matgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn rank_of_all_ones() {
    let o = matgraph(&[
        "mat",
        "rank",
        "--field",
        "p=2",
        "k=1",
        "poly=0,1",
        "--shape",
        "2,2",
        "--entries",
        "1,1,1,1",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn metric_suite_passes() {
    let o = matgraph(&["verify", "--suite", "metric"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("metric-identity pass 256 0\n"));
}

#[test]
fn missing_table_is_io_error() {
    assert_eq!(code(&matgraph(&["classify", "missing.mt"])), 74);
}

#[test]
fn malformed_table_is_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.mt");
    fs::write(&p, "maptable v1\nsrc field p=2 k=1 poly=0,1\n").unwrap();
    assert_eq!(code(&matgraph(&["classify", p.to_str().unwrap()])), 2);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&matgraph(&["bogus"])), 64);
    assert_eq!(
        code(&matgraph(&[
            "mat",
            "rank",
            "--field",
            "2",
            "--shape",
            "2",
            "--entries",
            "1"
        ])),
        64
    );
    assert_eq!(code(&matgraph(&["verify", "--suite", "nope"])), 64);
    assert_eq!(code(&matgraph(&["--help"])), 0);
    assert_eq!(code(&matgraph(&["search", "--help"])), 0);
}

#[test]
fn field_commands() {
    let o = matgraph(&["field", "arith", "--field", "4", "--op", "mul", "--a", "2", "--b", "2"]);
    assert_eq!(stdout(&o), "3\n");
    let o = matgraph(&[
        "field", "arith", "--field", "4", "--op", "pow", "--a", "2", "--exp", "-1",
    ]);
    assert_eq!(stdout(&o), "3\n");
    let o = matgraph(&["field", "frobenius", "--field", "4", "--a", "2"]);
    assert_eq!(stdout(&o), "3\n");
    let o = matgraph(&["field", "homs", "--src", "4", "--dst", "8"]);
    assert_eq!(stdout(&o), "count 0\n");
    let o = matgraph(&["field", "arith", "--field", "4", "--op", "inv", "--a", "0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn matrix_commands() {
    let m = |op: &str, extra: &[&str]| {
        let mut a = vec!["mat", op, "--field", "3", "--shape", "2,2"];
        a.extend_from_slice(extra);
        stdout(&matgraph(&a))
    };
    assert_eq!(m("distance", &["--entries", "1,0,0,1", "--other", "0,0,0,0"]), "2\n");
    assert_eq!(m("adjacent", &["--entries", "1,0,0,1", "--other", "1,0,0,0"]), "true\n");
    assert_eq!(m("minus-le", &["--entries", "1,0,0,0", "--other", "1,0,0,1"]), "true\n");
    assert_eq!(
        m("minus-le", &["--entries", "1,1,0,0", "--other", "1,0,0,0"]),
        "false\n"
    );
    assert_eq!(m("encode", &["--entries", "0,1,0,0"]), "3\n");
    assert_eq!(m("decode", &["--index", "9"]), "0,0,1,0\n");
    assert_eq!(m("inverse", &["--entries", "2,0,0,2"]), "2,0,0,2\n");
    assert!(m("g-inverses", &["--entries", "1,0,0,0"]).starts_with("count 27\n"));
}

#[test]
fn graph_edge_list_counts_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    let o = matgraph(&[
        "graph",
        "--field",
        "2",
        "--shape",
        "2,2",
        "--format",
        "edges",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 72);
    let o = matgraph(&["graph", "--field", "2", "--shape", "2,2"]);
    assert!(stdout(&o).starts_with("graph"));
}

#[test]
fn cliques_through_zero() {
    let o = matgraph(&["cliques", "--field", "2", "--shape", "2,2"]);
    assert!(stdout(&o).starts_with("count 6\n"));
    let o = matgraph(&["cliques", "--field", "3", "--shape", "2,2", "--with", "1,0,0,0"]);
    let line = stdout(&o).lines().last().unwrap().to_string();
    assert_eq!(line.split_whitespace().count(), 1 + 3);
}

fn construct_and_classify(dir: &Path, args: &[&str]) -> String {
    let out = dir.join("t.mt");
    let mut a = vec!["construct"];
    a.extend_from_slice(args);
    a.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let o = matgraph(&a);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = matgraph(&["classify", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    stdout(&o).lines().next().unwrap().to_string()
}

#[test]
fn construct_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let base = ["--src-field", "3", "--src-shape", "2,2"];
    let with = |extra: &[&str]| -> Vec<String> { base.iter().chain(extra).map(|s| s.to_string()).collect() };
    let run = |v: Vec<String>| construct_and_classify(d, &v.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(
        run(with(&["--form", "standard", "--P", "1,1,0,1"])),
        "verdict additive-standard"
    );
    assert_eq!(run(with(&["--form", "transpose"])), "verdict additive-transpose");
    assert_eq!(
        run(with(&["--form", "colouring", "--clique", "2"])),
        "verdict colouring"
    );
    let semrl = [
        "--form",
        "semrl-t",
        "--src-field",
        "2",
        "--src-shape",
        "2,2",
        "--dst-field",
        "4",
        "--L",
        "2,0,0,0",
    ];
    assert_eq!(construct_and_classify(d, &semrl), "verdict semrl-transpose");
    let bad = matgraph(&[
        "construct",
        "--form",
        "semrl",
        "--src-field",
        "2",
        "--src-shape",
        "2,2",
        "--dst-field",
        "4",
        "--L",
        "1,0,0,0",
    ]);
    assert_eq!(code(&bad), 2);
    let bad = matgraph(&[
        "construct",
        "--form",
        "standard",
        "--src-field",
        "4",
        "--src-shape",
        "2,2",
        "--dst-field",
        "8",
    ]);
    assert_eq!(code(&bad), 2);
}

fn problem(dir: &Path, body: &str) -> String {
    let p = dir.join("p.txt");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const GF3_TO_GF2: &str = "problem v1
src field p=3 k=1 poly=0,1
src shape 2 2
dst field p=2 k=1 poly=0,1
dst shape 2 2
constraint fix_zero_to_zero
constraint require_distance2_image_pair
constraint symmetry_reduction
budget 100000000
";

#[test]
fn search_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = problem(dir.path(), GF3_TO_GF2);
    assert_eq!(code(&matgraph(&["search", "--problem", &p])), 1);
    let reversed = GF3_TO_GF2
        .replace("p=3", "p=X")
        .replace("p=2", "p=3")
        .replace("p=X", "p=2");
    let p = problem(dir.path(), &reversed);
    let o = matgraph(&["search", "--problem", &p]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("maptable v1"));
    let p = problem(dir.path(), &GF3_TO_GF2.replace("constraint symmetry_reduction\n", ""));
    assert_eq!(code(&matgraph(&["search", "--problem", &p, "--budget", "1"])), 2);
}

#[test]
fn search_enumerate_and_sample() {
    let dir = tempfile::tempdir().unwrap();
    let body = "problem v1
src field p=2 k=1 poly=0,1
src shape 2 2
dst field p=2 k=1 poly=0,1
dst shape 2 2
constraint fix_zero_to_zero
";
    let p = problem(dir.path(), body);
    let o = matgraph(&["search", "--problem", &p, "--mode", "enumerate", "--limit", "1000"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("# enumerated count=144 end=exhausted"));
    let out = dir.path().join("homs");
    let o = matgraph(&[
        "search",
        "--problem",
        &p,
        "--mode",
        "sample",
        "--limit",
        "5",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_dir(&out).unwrap().count(), 5);
    let a = stdout(&matgraph(&[
        "search",
        "--problem",
        &p,
        "--mode",
        "sample",
        "--limit",
        "5",
        "--seed",
        "3",
    ]));
    let b = stdout(&matgraph(&[
        "search",
        "--problem",
        &p,
        "--mode",
        "sample",
        "--limit",
        "5",
        "--seed",
        "3",
        "--jobs",
        "1",
    ]));
    assert_eq!(a, b);
}

#[test]
fn verify_is_identical_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for jobs in ["1", "3"] {
        let out = dir.path().join(format!("r{jobs}.txt"));
        let o = matgraph(&[
            "verify",
            "--suite",
            "degenerate-range",
            "--seed",
            "5",
            "--jobs",
            jobs,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        reports.push(fs::read_to_string(out).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    assert!(reports[0].contains("sampled seed=5 size=500"));
}

#[test]
fn config_sets_seed_output_dir_and_fields() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("fields.txt"), "field p=2 k=2 poly=1,1,1\n").unwrap();
    let cfg = dir.path().join("c.toml");
    let outdir = dir.path().join("out");
    fs::write(
        &cfg,
        format!(
            "field_table = \"fields.txt\"\nseed = 4\noutput_dir = \"{}\"\n",
            outdir.display()
        ),
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let o = matgraph(&["--config", c, "verify", "--suite", "nondegenerate", "--out", "r.txt"]);
    assert_eq!(code(&o), 0);
    assert!(outdir.join("r.txt").exists());
    let o = matgraph(&["--config", c, "field", "info", "--field", "4"]);
    assert!(stdout(&o).starts_with("field p=2 k=2 poly=1,1,1\n"));
    fs::write(&cfg, "state_cap = 0\n").unwrap();
    assert_eq!(code(&matgraph(&["--config", c, "field", "info", "--field", "2"])), 64);
    assert_eq!(
        code(&matgraph(&[
            "--config",
            "/nonexistent.toml",
            "field",
            "info",
            "--field",
            "2"
        ])),
        74
    );
}
